"""Exact arithmetic for Artin-Schreier-Witt covers of P^1 in characteristic p."""

__version__ = "0.1.0"

from .errors import (ASWError, ConstructionFailed, DescriptorMismatch, FieldError, InadmissibleError,
                     InvalidDatumError, OrderDropError, ParseError, ShapeMismatch, SpecializationPoleError,
                     UnsplitPoleError, UnsupportedOperation, WittSizeError)
from .fields import GF, FieldValue, extension_containing, frobenius_inverse, pth_root, rational_function_field
from .ratfunc import INF, RatFunc, format_ratfunc, partial_fractions, pole_order, recombine, specialize
from .parse import parse_field_element, parse_field_name, parse_point, parse_ratfunc
from .witt import (WittVector, asw_isogeny, build_sum_polynomials, frobenius, same_cover, verschiebung,
                   witt_add, witt_int_mul, witt_neg, witt_sub)
from .datum import BranchingDatum, canonical_rows, format_type
from .ramify import (branching_datum, construct_cover, deuring_shafarevich, genus_vector, p_rank_vector,
                     reduce, swan, truncate)
from .moduli import (build_graph, components, dim_cov, dim_curve, enumerate_partitions, irreducible,
                     refines, strata, validate_datum)
from .deform import (exactness, exactness_search, pop_family, pop_split, split_family, type_n_family,
                     verify_deformation)
