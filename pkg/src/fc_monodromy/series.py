"""Truncated hypergeometric series, local solutions, and operator residuals.

The m-variable series has coefficients

    (a)_{n_1+..+n_m} (b)_{n_1+..+n_m} / ( (c_1)_{n_1} .. (c_m)_{n_m} n_1! .. n_m! )

computed by the one-step recurrence, exactly when the parameters are rational.
``f_I_eval`` evaluates the 2^m local solutions (a power-function prefactor
times the series with shifted parameters); ``ec_residual`` applies the
defining operators

    theta_k (theta_k + c_k - 1) - x_k (theta + a)(theta + b)

term-wise to a truncated local solution and returns the residual coefficients,
which must vanish identically through the cutoff.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import mpmath
from mpmath import workprec

from .combinatorics import SubsetIndex
from .scalars import DEFAULT_PRECISION, FieldScalar, SeriesParams, _to_mpf


class SeriesParameterError(ValueError):
    """A lower-parameter Pochhammer factor vanishes inside the cutoff."""

    def __init__(self, k: int, c_value, n_k: int):
        self.k = k
        self.c_value = c_value
        self.n_k = n_k
        super().__init__(
            f"(c_{k})_{{n_{k}}} hits zero: c_{k} = {c_value} with n_{k} = {n_k}"
        )


class GammaPoleError(ValueError):
    """A gamma factor in the solution-normalizing constant sits at a pole."""

    def __init__(self, expression: str, value):
        self.expression = expression
        self.value = value
        super().__init__(f"gamma factor {expression} = {value} is at a pole")


class DomainError(ValueError):
    """Evaluation point lies outside the convergence domain."""


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients on multi-indices with n_1 + .. + n_m <= order."""

    m: int
    order: int
    coefficients: dict[tuple[int, ...], FieldScalar]

    def coefficient(self, index: Sequence[int]) -> FieldScalar:
        key = tuple(index)
        if len(key) != self.m or sum(key) > self.order:
            raise KeyError(f"multi-index {key} outside the truncation")
        return self.coefficients[key]

    def to_json(self):
        return [
            {"multi_index": list(idx), "coefficient": coeff.to_json()}
            for idx, coeff in sorted(self.coefficients.items())
        ]


def multi_indices(m: int, order: int) -> Iterator[tuple[int, ...]]:
    """All multi-indices with total degree <= order, graded order."""

    def shells(prefix: tuple[int, ...], remaining: int, slots: int):
        if slots == 1:
            yield prefix + (remaining,)
            return
        for v in range(remaining + 1):
            yield from shells(prefix + (v,), remaining - v, slots - 1)

    for total in range(order + 1):
        yield from sorted(shells((), total, m))


def _is_nonpositive_integer(v: FieldScalar) -> bool:
    if v.prec is None:
        return not v.im and v.re.denominator == 1 and v.re <= 0
    with workprec(v.prec):
        return v.im == 0 and v.re == mpmath.floor(v.re) and v.re <= 0


def fc_coefficients(sp: SeriesParams, order: int) -> TruncatedSeries:
    """Taylor coefficients of the series through total degree ``order``.

    Uses the ratio recurrence

        A(n + e_k) / A(n) = (a + |n|)(b + |n|) / ((c_k + n_k)(n_k + 1)),

    so a c_k that is a non-positive integer > -order makes a denominator
    vanish; that is reported as SeriesParameterError naming c_k and n_k.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    for k, ck in enumerate(sp.c, start=1):
        if _is_nonpositive_integer(ck):
            n_hit = 1 - int(ck.re) if ck.prec is None else 1 - int(mpmath.nint(ck.re))
            if n_hit <= order:
                raise SeriesParameterError(k, ck.to_json(), n_hit)
    one = FieldScalar.one_like(sp.a)
    coeffs: dict[tuple[int, ...], FieldScalar] = {}
    for idx in multi_indices(sp.m, order):
        total = sum(idx)
        if total == 0:
            coeffs[idx] = one
            continue
        k = next(i for i, v in enumerate(idx) if v > 0)
        prev = list(idx)
        prev[k] -= 1
        s = total - 1
        num = (sp.a + s) * (sp.b + s)
        den = (sp.c[k] + prev[k]) * (prev[k] + 1)
        coeffs[idx] = coeffs[tuple(prev)] * num / den
    return TruncatedSeries(sp.m, order, coeffs)


def in_convergence_domain(x: Sequence, precision: int = DEFAULT_PRECISION) -> bool:
    """Numeric membership test: sum_k sqrt(|x_k|) < 1."""
    with workprec(precision):
        total = mpmath.mpf(0)
        for xk in x:
            total += mpmath.sqrt(abs(mpmath.mpc(xk)))
        return total < 1


@dataclass(frozen=True)
class SeriesValue:
    value: "mpmath.mpc"
    tail_bound: "mpmath.mpf"
    order: int


def _to_mpc(value, precision: int):
    if isinstance(value, FieldScalar):
        return mpmath.mpc(_to_mpf(value.re, precision), _to_mpf(value.im, precision))
    return mpmath.mpc(value)


def fc_eval(
    sp: SeriesParams,
    x: Sequence,
    order: int,
    precision: int = DEFAULT_PRECISION,
) -> SeriesValue:
    """Partial sum through total degree ``order`` at a point of the domain.

    The reported tail bound is heuristic: the absolute last shell times
    r/(1-r) for r the ratio of the last two shell sums (infinite when the
    shells do not yet decay).
    """
    if not in_convergence_domain(x, precision):
        raise DomainError("point lies outside the convergence domain")
    series = fc_coefficients(sp, order)
    with workprec(precision):
        xs = [_to_mpc(xk, precision) for xk in x]
        total = mpmath.mpc(0)
        shell_abs = [mpmath.mpf(0)] * (order + 1)
        for idx, coeff in series.coefficients.items():
            term = _to_mpc(coeff, precision)
            for xk, nk in zip(xs, idx):
                term *= xk**nk
            total += term
            shell_abs[sum(idx)] += abs(term)
        if order == 0 or shell_abs[order] == 0:
            bound = mpmath.mpf(0)
        elif shell_abs[order - 1] == 0 or shell_abs[order] >= shell_abs[order - 1]:
            bound = mpmath.inf
        else:
            r = shell_abs[order] / shell_abs[order - 1]
            bound = shell_abs[order] * r / (1 - r)
        return SeriesValue(total, bound, order)


def shifted_params(sp: SeriesParams, I: SubsetIndex) -> SeriesParams:
    """Parameters of the local solution labelled by I:
    a and b gain |I| - sum_{i in I} c_i, and c_i maps to 2 - c_i on I."""
    if I.m != sp.m:
        raise ValueError("subset has wrong ambient size")
    shift = FieldScalar.one_like(sp.a) * I.card
    for i in I.elements():
        shift = shift - sp.c[i - 1]
    c_new = tuple(
        (2 - ck) if I.contains(k) else ck for k, ck in enumerate(sp.c, start=1)
    )
    return SeriesParams(sp.m, sp.a + shift, sp.b + shift, c_new)


def f_I_eval(
    sp: SeriesParams,
    I: SubsetIndex,
    x: Sequence,
    order: int,
    precision: int = DEFAULT_PRECISION,
) -> "mpmath.mpc":
    """The local solution labelled by I:

        prod_{i in I} x_i^(1 - c_i) * (series with shifted parameters)(x)

    using principal-branch powers (arg in (-pi, pi]); x_i must be nonzero for
    i in I.
    """
    shifted = shifted_params(sp, I)
    tail = fc_eval(shifted, x, order, precision)
    with workprec(precision):
        xs = [_to_mpc(xk, precision) for xk in x]
        prefactor = mpmath.mpc(1)
        for i in I.elements():
            if xs[i - 1] == 0:
                raise DomainError(f"x_{i} = 0 but {i} lies in I")
            exponent = _to_mpc(FieldScalar.one_like(sp.a) - sp.c[i - 1], precision)
            prefactor *= mpmath.power(xs[i - 1], exponent)
        return prefactor * tail.value


def ec_residual(sp: SeriesParams, I: SubsetIndex, order: int) -> list[dict]:
    """Apply each defining operator term-wise to the truncated local solution.

    On the monomial of multi-index n (carrying the prefactor exponents
    mu_k = (1 - c_k) for k in I), the k-th Euler operator multiplies by
    n_k + mu_k, so the residual coefficient at n is

        (n_k + mu_k)(n_k + mu_k + c_k - 1) A(n)
        - (|n| - 1 + |mu| + a)(|n| - 1 + |mu| + b) A(n - e_k).

    Exact rational parameters only; returns one {multi-index: coefficient}
    map per operator, complete through total degree order - 1.  All entries
    vanish exactly iff the truncation solves the system that far.
    """
    if not sp.is_exact:
        raise TypeError("residuals are exact assertions; parameters must be exact")
    shifted = shifted_params(sp, I)
    return residual_coefficients(sp, I, fc_coefficients(shifted, order))


def residual_coefficients(
    sp: SeriesParams, I: SubsetIndex, series: TruncatedSeries
) -> list[dict]:
    """Residuals of the defining operators against an explicit coefficient
    table (any table: a perturbed one yields nonzero residuals)."""
    order = series.order
    zero = FieldScalar.zero_like(sp.a)
    mu = [
        (FieldScalar.one_like(sp.a) - sp.c[k - 1]) if I.contains(k) else zero
        for k in range(1, sp.m + 1)
    ]
    mu_total = zero
    for v in mu:
        mu_total = mu_total + v
    residuals: list[dict[tuple[int, ...], FieldScalar]] = []
    for k in range(sp.m):
        res: dict[tuple[int, ...], FieldScalar] = {}
        for idx in multi_indices(sp.m, order - 1):
            a_n = series.coefficients[idx]
            euler = FieldScalar.exact(idx[k]) + mu[k]
            term = euler * (euler + sp.c[k] - 1) * a_n
            if idx[k] >= 1:
                prev = list(idx)
                prev[k] -= 1
                s = FieldScalar.exact(sum(idx) - 1) + mu_total
                term = term - (s + sp.a) * (s + sp.b) * series.coefficients[tuple(prev)]
            res[idx] = term
        residuals.append(res)
    return residuals


def phi_gamma_constant(
    sp: SeriesParams, I: SubsetIndex, precision: int = DEFAULT_PRECISION
) -> "mpmath.mpc":
    """The gamma-factor constant normalizing the solution labelled by I:

        prod_{i in I} G(c_i - 1) * prod_{j not in I} G(1 - c_j)
        * G(sum_k c_k - a - m + 1) * G(1 - b)
        / ( G(sum_{i in I} c_i - a - |I| + 1) * G(sum_{i in I} c_i - b - |I| + 1) )

    evaluated through log-gamma at the requested precision.  A numerator or
    denominator argument at a non-positive integer raises GammaPoleError
    naming the offending argument.
    """
    one = FieldScalar.one_like(sp.a)
    c_total = FieldScalar.zero_like(sp.a)
    for ck in sp.c:
        c_total = c_total + ck
    c_I = FieldScalar.zero_like(sp.a)
    for i in I.elements():
        c_I = c_I + sp.c[i - 1]
    numerator: list[tuple[str, FieldScalar]] = []
    for i in I.elements():
        numerator.append((f"c_{i} - 1", sp.c[i - 1] - 1))
    for j in range(1, sp.m + 1):
        if not I.contains(j):
            numerator.append((f"1 - c_{j}", one - sp.c[j - 1]))
    numerator.append(("sum(c) - a - m + 1", c_total - sp.a - (sp.m - 1)))
    numerator.append(("1 - b", one - sp.b))
    denominator = [
        ("sum_I(c) - a - |I| + 1", c_I - sp.a - (I.card - 1)),
        ("sum_I(c) - b - |I| + 1", c_I - sp.b - (I.card - 1)),
    ]
    for expr, value in numerator + denominator:
        if _is_nonpositive_integer(value):
            raise GammaPoleError(expr, value.to_json())
    with workprec(precision + 16):
        log_total = mpmath.mpc(0)
        for _, value in numerator:
            log_total += mpmath.loggamma(_to_mpc(value, precision + 16))
        for _, value in denominator:
            log_total -= mpmath.loggamma(_to_mpc(value, precision + 16))
        result = mpmath.exp(log_total)
    with workprec(precision):
        return mpmath.mpc(result)
