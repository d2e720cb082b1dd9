"""Scalar fields and parameter points.

Exact values are Gaussian rationals (a pair of arbitrary-precision rationals),
so every identity in this package can be checked by literal equality: the
circuit and intersection formulas are rational functions of the parameters
``alpha``, ``beta``, ``gamma_1 .. gamma_m``, and checking them at random
rational-complex points is ordinary polynomial identity testing.  Approximate
values are multiprecision complex floats that carry their working precision in
bits.  The two kinds never mix inside one expression.
"""

from __future__ import annotations

import random
import re as _re
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from gmpy2 import mpq
from mpmath import workprec

DEFAULT_PRECISION = 256

_EXACT_INPUTS = (int, mpq, Fraction)


class GenericityError(ValueError):
    """A formula denominator vanishes because a genericity predicate fails.

    ``predicate`` is one of "G1".."G5"; ``witness`` identifies the offending
    index k (G1) or subset (G2/G3), when there is one.
    """

    def __init__(self, predicate: str, witness=None):
        self.predicate = predicate
        self.witness = witness
        detail = predicate if witness is None else f"{predicate} (witness {witness})"
        super().__init__(f"non-generic parameters: {detail}")


class SamplingError(RuntimeError):
    """Generic-point sampling exhausted its retry budget."""


def _to_mpf(value, prec: int):
    if isinstance(value, mpq):
        with workprec(prec):
            return mpmath.mpf(int(value.numerator)) / mpmath.mpf(int(value.denominator))
    if isinstance(value, Fraction):
        with workprec(prec):
            return mpmath.mpf(value.numerator) / mpmath.mpf(value.denominator)
    with workprec(prec):
        return mpmath.mpf(value)


class FieldScalar:
    """A complex scalar: exact Gaussian rational, or a multiprecision float pair.

    ``prec is None`` marks the exact kind (components are ``gmpy2.mpq``);
    otherwise components are ``mpmath.mpf`` computed at ``prec`` bits.
    Values are immutable by convention.  Arithmetic between the two kinds is
    rejected, so a chain of operations can never silently lose exactness.
    """

    __slots__ = ("re", "im", "prec")

    def __init__(self, re=0, im=0, prec: int | None = None):
        if prec is None:
            self.re = mpq(re)
            self.im = mpq(im)
            self.prec = None
        else:
            if prec < 53:
                raise ValueError("precision below 53 bits is not supported")
            self.re = _to_mpf(re, prec)
            self.im = _to_mpf(im, prec)
            self.prec = prec

    @classmethod
    def _raw(cls, re, im, prec) -> "FieldScalar":
        s = object.__new__(cls)
        s.re = re
        s.im = im
        s.prec = prec
        return s

    @classmethod
    def exact(cls, re=0, im=0) -> "FieldScalar":
        return cls(re, im, None)

    @classmethod
    def approx(cls, re, im=0, prec: int = DEFAULT_PRECISION) -> "FieldScalar":
        return cls(re, im, prec)

    @classmethod
    def zero_like(cls, template: "FieldScalar") -> "FieldScalar":
        if template.prec is None:
            return _EXACT_ZERO
        return cls(0, 0, template.prec)

    @classmethod
    def one_like(cls, template: "FieldScalar") -> "FieldScalar":
        if template.prec is None:
            return _EXACT_ONE
        return cls(1, 0, template.prec)

    @property
    def is_exact(self) -> bool:
        return self.prec is None

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_one(self) -> bool:
        return self.re == 1 and not self.im

    def _coerce(self, other):
        if isinstance(other, FieldScalar):
            if (self.prec is None) != (other.prec is None):
                raise TypeError("mixed exact/float scalar arithmetic is rejected")
            return other
        if isinstance(other, _EXACT_INPUTS):
            if self.prec is None:
                return FieldScalar._raw(mpq(other), mpq(0), None)
            return FieldScalar(other, 0, self.prec)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.prec is None:
            return FieldScalar._raw(self.re + other.re, self.im + other.im, None)
        prec = min(self.prec, other.prec)
        with workprec(prec):
            return FieldScalar._raw(self.re + other.re, self.im + other.im, prec)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.prec is None:
            return FieldScalar._raw(self.re - other.re, self.im - other.im, None)
        prec = min(self.prec, other.prec)
        with workprec(prec):
            return FieldScalar._raw(self.re - other.re, self.im - other.im, prec)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if self.prec is None:
            return FieldScalar._raw(a * c - b * d, a * d + b * c, None)
        prec = min(self.prec, other.prec)
        with workprec(prec):
            return FieldScalar._raw(a * c - b * d, a * d + b * c, prec)

    __rmul__ = __mul__

    def inverse(self) -> "FieldScalar":
        a, b = self.re, self.im
        if self.prec is None:
            norm = a * a + b * b
            if not norm:
                raise ZeroDivisionError("inverse of zero scalar")
            return FieldScalar._raw(a / norm, -b / norm, None)
        with workprec(self.prec):
            norm = a * a + b * b
            if norm == 0:
                raise ZeroDivisionError("inverse of zero scalar")
            return FieldScalar._raw(a / norm, -b / norm, self.prec)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __neg__(self):
        return FieldScalar._raw(-self.re, -self.im, self.prec)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = FieldScalar.one_like(self)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def conjugate(self) -> "FieldScalar":
        return FieldScalar._raw(self.re, -self.im, self.prec)

    def __eq__(self, other):
        if isinstance(other, FieldScalar):
            if (self.prec is None) != (other.prec is None):
                return False
            return self.re == other.re and self.im == other.im
        if isinstance(other, _EXACT_INPUTS):
            return self.re == other and not self.im
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return not self.is_zero()

    def to_string(self) -> str:
        """Serialize as "p/q+r/s*i" (parts with zero value omitted)."""
        if self.prec is not None:
            raise TypeError("float scalars serialize as objects, not strings")
        if not self.im:
            return str(self.re)
        imag = f"{self.im}*i" if self.im > 0 else f"-{-self.im}*i"
        if not self.re:
            return imag
        if self.im > 0:
            return f"{self.re}+{imag}"
        return f"{self.re}{imag}"

    _STRING_RE = _re.compile(
        r"^(?P<re>[+-]?\d+(?:/\d+)?)?"
        r"(?P<im>(?:(?<=\d)[+-]|^[+-]?)\d+(?:/\d+)?\*i)?$"
    )

    @classmethod
    def from_string(cls, text: str) -> "FieldScalar":
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty scalar string")
        match = cls._STRING_RE.match(s)
        if not match or (match.group("re") is None and match.group("im") is None):
            raise ValueError(f"cannot parse scalar {text!r}")
        re_part = match.group("re") or "0"
        im_part = match.group("im")
        im_val = mpq(im_part[:-2].lstrip("+")) if im_part else mpq(0)
        return cls._raw(mpq(re_part), im_val, None)

    def to_json(self):
        if self.prec is None:
            return self.to_string()
        digits = int(self.prec * 0.30103) + 3
        return {
            "re": mpmath.nstr(self.re, digits),
            "im": mpmath.nstr(self.im, digits),
            "precision": self.prec,
        }

    @classmethod
    def from_json(cls, obj) -> "FieldScalar":
        if isinstance(obj, str):
            return cls.from_string(obj)
        return cls(obj["re"], obj["im"], int(obj["precision"]))

    def __repr__(self):
        if self.prec is None:
            return f"FieldScalar({self.to_string()!r})"
        return f"FieldScalar({self.re!r}, {self.im!r}, prec={self.prec})"


_EXACT_ZERO = FieldScalar._raw(mpq(0), mpq(0), None)
_EXACT_ONE = FieldScalar._raw(mpq(1), mpq(0), None)


@dataclass(frozen=True)
class Violation:
    """One failed genericity predicate: the name and, if any, its witness."""

    predicate: str
    witness: tuple[int, ...] | int | None = None

    def __str__(self):
        if self.witness is None:
            return self.predicate
        if isinstance(self.witness, int):
            return f"{self.predicate}[k={self.witness}]"
        return f"{self.predicate}[I={{{','.join(map(str, self.witness))}}}]"

    def to_json(self):
        return {"predicate": self.predicate, "witness": self.witness}


@dataclass(frozen=True)
class ParamPoint:
    """The multiplicative parameters alpha, beta, gamma_1..gamma_m.

    These are the circuit multipliers exp(2*pi*i*a), exp(2*pi*i*b),
    exp(2*pi*i*c_k) of the underlying parameters, but every formula below is
    rational in them, so arbitrary nonzero values are accepted.
    """

    m: int
    alpha: FieldScalar
    beta: FieldScalar
    gamma: tuple[FieldScalar, ...]

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if len(self.gamma) != self.m:
            raise ValueError("gamma must have exactly m entries")
        object.__setattr__(self, "gamma", tuple(self.gamma))
        kinds = {v.prec for v in (self.alpha, self.beta, *self.gamma)}
        if len({k is None for k in kinds}) != 1:
            raise ValueError("alpha, beta, gamma must all be exact or all float")
        for v in (self.alpha, self.beta, *self.gamma):
            if v.is_zero():
                raise ValueError("parameter entries must be nonzero")

    @property
    def is_exact(self) -> bool:
        return self.alpha.prec is None

    def gamma_products(self) -> list[FieldScalar]:
        """prod_{i in I} gamma_i for every bitmask I (bit k-1 <-> index k)."""
        table = [FieldScalar.one_like(self.alpha)] * (1 << self.m)
        for bits in range(1, 1 << self.m):
            low = bits & -bits
            table[bits] = table[bits ^ low] * self.gamma[low.bit_length() - 1]
        return table

    def to_json(self):
        return {
            "m": self.m,
            "alpha": self.alpha.to_json(),
            "beta": self.beta.to_json(),
            "gamma": [g.to_json() for g in self.gamma],
        }

    @classmethod
    def from_json(cls, obj) -> "ParamPoint":
        gamma = tuple(FieldScalar.from_json(g) for g in obj["gamma"])
        return cls(
            m=int(obj.get("m", len(gamma))),
            alpha=FieldScalar.from_json(obj["alpha"]),
            beta=FieldScalar.from_json(obj["beta"]),
            gamma=gamma,
        )


@dataclass(frozen=True)
class SeriesParams:
    """Additive series parameters a, b, c_1..c_m (exact rational or float)."""

    m: int
    a: FieldScalar
    b: FieldScalar
    c: tuple[FieldScalar, ...]

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if len(self.c) != self.m:
            raise ValueError("c must have exactly m entries")
        object.__setattr__(self, "c", tuple(self.c))
        kinds = {v.prec is None for v in (self.a, self.b, *self.c)}
        if len(kinds) != 1:
            raise ValueError("a, b, c must all be exact or all float")

    @property
    def is_exact(self) -> bool:
        return self.a.prec is None


def check_genericity(p: ParamPoint) -> list[Violation]:
    """List every violated genericity predicate (empty list = generic).

    G1: gamma_k != 1 for all k.
    G2: alpha != prod_{i in I} gamma_i for every subset I (I = {} gives alpha != 1).
    G3: beta  != prod_{i in I} gamma_i for every subset I.
    G4: alpha != -prod_k gamma_k.
    G5: alpha*beta != (-1)^(m+1) * prod_k gamma_k.
    """
    out: list[Violation] = []
    for k, g in enumerate(p.gamma, start=1):
        if g == 1:
            out.append(Violation("G1", k))
    table = p.gamma_products()
    for bits, prod in enumerate(table):
        subset = _bits_to_elements(bits)
        if p.alpha == prod:
            out.append(Violation("G2", subset))
        if p.beta == prod:
            out.append(Violation("G3", subset))
    full = table[-1]
    if p.alpha == -full:
        out.append(Violation("G4"))
    sign_full = full if (p.m + 1) % 2 == 0 else -full
    if p.alpha * p.beta == sign_full:
        out.append(Violation("G5"))
    return out


def require_generic(p: ParamPoint) -> None:
    """Raise GenericityError naming the first violated predicate, if any."""
    violations = check_genericity(p)
    if violations:
        raise GenericityError(violations[0].predicate, violations[0].witness)


def _bits_to_elements(bits: int) -> tuple[int, ...]:
    return tuple(k + 1 for k in range(bits.bit_length()) if bits >> k & 1)


def dualize(p: ParamPoint) -> ParamPoint:
    """Invert every parameter entry; an involution on parameter points."""
    return ParamPoint(
        m=p.m,
        alpha=p.alpha.inverse(),
        beta=p.beta.inverse(),
        gamma=tuple(g.inverse() for g in p.gamma),
    )


def sample_generic(
    seed: int,
    m: int,
    max_numerator: int,
    retry_budget: int = 500,
) -> ParamPoint:
    """Deterministically sample an exact generic parameter point.

    Real parts use numerators in [-max_numerator, max_numerator], imaginary
    parts in [-(max_numerator-1), max_numerator-1] (so max_numerator=1 draws
    real +-1 only), denominators in [1, max_numerator].  Resamples until
    check_genericity passes; raises SamplingError once the budget is spent,
    which signals an impossible configuration such as max_numerator too small.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if max_numerator < 1:
        raise ValueError("max_numerator must be >= 1")
    rng = random.Random(seed)
    im_bound = max_numerator - 1

    def draw() -> FieldScalar:
        for _ in range(100):
            re = mpq(rng.randint(-max_numerator, max_numerator), rng.randint(1, max_numerator))
            im = mpq(0)
            if im_bound:
                im = mpq(rng.randint(-im_bound, im_bound), rng.randint(1, max_numerator))
            if re or im:
                return FieldScalar._raw(re, im, None)
        raise SamplingError("could not draw a nonzero entry")

    for _ in range(retry_budget):
        point = ParamPoint(
            m=m,
            alpha=draw(),
            beta=draw(),
            gamma=tuple(draw() for _ in range(m)),
        )
        if not check_genericity(point):
            return point
    raise SamplingError(
        f"no generic point after {retry_budget} attempts "
        f"(m={m}, max_numerator={max_numerator})"
    )


def param_exponentials(sp: SeriesParams, precision: int = DEFAULT_PRECISION) -> ParamPoint:
    """Map (a, b, c) to (alpha, beta, gamma) = exp(2*pi*i*(a, b, c)).

    Returns a float-kind point at the requested precision (>= 53 bits).
    """
    if precision < 53:
        raise ValueError("precision must be >= 53 bits")

    def circle(v: FieldScalar) -> FieldScalar:
        with workprec(precision):
            z = mpmath.mpc(_to_mpf(v.re, precision), _to_mpf(v.im, precision))
            w = mpmath.exp(2j * mpmath.pi * z)
            return FieldScalar._raw(w.real, w.imag, precision)

    return ParamPoint(
        m=sp.m,
        alpha=circle(sp.a),
        beta=circle(sp.b),
        gamma=tuple(circle(ck) for ck in sp.c),
    )
