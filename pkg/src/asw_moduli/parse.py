"""Text input: field names, field elements and rational functions in x.

Expressions use ``+ - * / ^`` (``**`` also accepted), parentheses, integers,
the variable ``x``, the field parameter (``t`` or ``a``) and the extension
generator ``g``. Juxtaposition multiplies, so ``x^2(x-t^4)`` is accepted.
"""

import re

from . import poly as P
from .errors import FieldError, ParseError
from .fields import GF, FieldValue, rational_function_field
from .ratfunc import RatFunc

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\*\*|[-+*/^()]))")


def _tokenize(text):
    text = text.replace("−", "-").replace("·", "*")
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r} at {pos} in {text!r}")
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text, K, allow_x=True):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.K = K
        self.allow_x = allow_x
        self.hints = []

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r} in {self.text!r}")

    def parse(self):
        if not self.toks:
            raise ParseError("empty expression")
        v = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input in {self.text!r}")
        return v

    def _note(self, v):
        # remember roots of linear factors; they are the likely poles
        if not v.poles and len(v.num) == 2:
            K = self.K
            self.hints.append(K.neg(K.div(v.num[0], v.num[1])))
        return v

    def expr(self):
        v = self.term()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                w = self.term()
                v = v + w if val == "+" else v - w
                self._note(v)
            else:
                return v

    def term(self):
        v = self.unary()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                w = self.unary()
                if val == "*":
                    v = v * w
                else:
                    if w.is_zero():
                        raise ParseError(f"division by zero in {self.text!r}")
                    v = v * w.inverse(hints=self.hints)
            elif kind in ("num", "name") or (kind == "op" and val == "("):
                v = v * self.power()
            else:
                return v

    def unary(self):
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            v = self.unary()
            return -v if val == "-" else v
        return self.power()

    def power(self):
        v = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            neg = False
            kind, val = self.peek()
            if kind == "op" and val == "-":
                self.take()
                neg = True
            kind, val = self.take()
            if kind != "num":
                raise ParseError(f"exponent must be an integer in {self.text!r}")
            e = -val if neg else val
            if e < 0:
                if v.is_zero():
                    raise ParseError(f"division by zero in {self.text!r}")
                v = v.inverse(hints=self.hints) ** (-e)
            else:
                v = v ** e
        return v

    def atom(self):
        K = self.K
        kind, val = self.take()
        if kind == "num":
            return RatFunc.const(K, K.from_int(val))
        if kind == "name":
            if val == "x":
                if not self.allow_x:
                    raise ParseError(f"x not allowed in a field element: {self.text!r}")
                return self._note(RatFunc.x(K))
            if K.parametric and val == K.name:
                return RatFunc.const(K, K.gen.raw)
            if val == "g":
                base = K.base
                if base.m == 1:
                    raise ParseError(f"generator g undefined over {K}")
                c = base.gen.raw
                return RatFunc.const(K, K.from_base(c) if K.parametric else c)
            raise ParseError(f"unknown name {val!r} in {self.text!r}")
        if kind == "op" and val == "(":
            v = self.expr()
            self.expect(")")
            return self._note(v)
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")


def parse_ratfunc(text, K):
    """Parse a rational function in x over the field K."""
    if isinstance(text, RatFunc):
        return text
    try:
        return _Parser(str(text), K).parse()
    except ZeroDivisionError as exc:
        raise ParseError(f"division by zero in {text!r}") from exc


def parse_field_element(text, K):
    if isinstance(text, FieldValue):
        return text
    if isinstance(text, int):
        return K(text)
    try:
        v = _Parser(str(text), K, allow_x=False).parse()
    except ZeroDivisionError as exc:
        raise ParseError(f"division by zero in {text!r}") from exc
    if not v.is_constant():
        raise ParseError(f"{text!r} is not a field element")
    return FieldValue(K, v.constant_value())


def parse_point(text, K):
    """A branch point: a field element or ``inf``."""
    from .ratfunc import INF
    if text is INF or str(text).strip().lower() in ("inf", "oo", "infinity", "∞"):
        return INF
    return parse_field_element(text, K).raw


_FIELD = re.compile(r"^\s*(?:F|GF)\(?(\d+)\)?\s*(?:\[([^\]]+)\])?\s*(?:\(\s*([ta])\s*\))?\s*$")


def _prime_power(q):
    for p in range(2, q + 1):
        if q % p == 0:
            m = 0
            while q % p == 0:
                q //= p
                m += 1
            if q != 1:
                return None
            return p, m
    return None


def parse_field_name(text):
    """``F5``, ``F4``, ``F2(t)``, ``F5(a)``, ``F9[g^2+1]``, ``GF(4)``."""
    from .fields import Field
    if isinstance(text, Field):
        return text
    m = _FIELD.match(str(text))
    if not m:
        raise ParseError(f"bad field descriptor {text!r}")
    q, mod, param = m.groups()
    pm = _prime_power(int(q))
    if pm is None:
        raise ParseError(f"{q} is not a prime power")
    p, deg = pm
    try:
        if mod:
            Fp = GF(p)
            mpoly = _Parser(mod.replace("g", "x"), Fp).parse()
            if not mpoly.is_polynomial():
                raise ParseError(f"modulus {mod!r} is not a polynomial")
            coeffs = P.monic(Fp, mpoly.num)
            base = GF(p, deg, coeffs)
        else:
            base = GF(p, deg)
    except FieldError as exc:
        raise ParseError(str(exc)) from exc
    if param:
        return rational_function_field(base, param)
    return base


def format_field_element(a):
    return str(a)
