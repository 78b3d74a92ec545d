"""Exception hierarchy shared by the library and the CLI exit-code mapping."""


class ASWError(Exception):
    """Base class for every library error."""


class FieldError(ASWError):
    """Arithmetic outside what the coefficient field supports."""


class DescriptorMismatch(FieldError):
    pass


class UnsupportedOperation(FieldError):
    pass


class UnsplitPoleError(ASWError):
    """A denominator does not split into linear factors over the field."""

    def __init__(self, factor, extension_degree=None):
        self.factor = factor
        self.extension_degree = extension_degree
        msg = f"unsplit pole: irreducible factor {factor}"
        if extension_degree:
            msg += f" (needs extension of degree {extension_degree})"
        super().__init__(msg)


class SpecializationPoleError(ASWError):
    """A coefficient has a pole at the specialization value."""


class WittSizeError(ASWError):
    """Requested Witt vector length exceeds the configured level cap."""


class ShapeMismatch(ASWError):
    pass


class OrderDropError(ASWError):
    """The reduced first entry is constant, so the vector does not define a Z/p^n-cover."""


class InvalidDatumError(ASWError):
    pass


class InadmissibleError(ASWError):
    """Conductor tuple violates d_1 >= 1, d_i >= p*d_{i-1} - p."""


class ConstructionFailed(ASWError):
    def __init__(self, message, datum=None):
        super().__init__(message)
        self.datum = datum


class ParseError(ASWError):
    pass
