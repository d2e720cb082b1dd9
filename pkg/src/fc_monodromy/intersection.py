"""Closed-form twisted-homology intersection numbers.

Two cycle families enter: the solution-basis cycles (one per subset I of
{1..m}) and the chamber cycles indexed the same way; the bounded chamber for
the full subset is the vanishing cycle whose span is the nontrivial eigenspace
of the circuit map around the second singular divisor.  The pairings used by
the rest of the package are:

* ``h_entry`` / ``h_matrix``  - the diagonal Gram matrix H of the basis cycles,
* ``ih_delta_D``              - basis cycle against a dual chamber cycle, in
                                simplified product form,
* ``ih_delta_D_raw``          - the same pairing as an unsimplified double sum
                                over nested subsets (independent oracle),
* ``lambda0_matrix``          - the full pairing matrix Lambda0,
* ``d_self_intersection``     - self-pairing of the vanishing cycle,
* ``pairing_with_D``          - a homology class against the vanishing cycle.
"""

from __future__ import annotations

from .combinatorics import SubsetIndex, basis_order, proper_submasks, submasks
from .matrices import CycleVector, RepMatrix
from .scalars import FieldScalar, GenericityError, ParamPoint


def _gate(p: ParamPoint, table, *, g1=False, g2_full=False, g3_empty=False):
    """Raise GenericityError for exactly the denominators an operation needs."""
    if g1:
        for k, g in enumerate(p.gamma, start=1):
            if g == 1:
                raise GenericityError("G1", k)
    if g2_full and p.alpha == table[-1]:
        raise GenericityError("G2", tuple(range(1, p.m + 1)))
    if g3_empty and p.beta == 1:
        raise GenericityError("G3", ())


def _as_bits(I: SubsetIndex | int, m: int) -> int:
    if isinstance(I, SubsetIndex):
        if I.m != m:
            raise ValueError("subset has wrong ambient size")
        return I.bits
    return int(I)


def h_entry(p: ParamPoint, I: SubsetIndex | int) -> FieldScalar:
    """Diagonal entry H[I,I] of the basis-cycle intersection matrix:

        (-1)^|I| * prod_{j not in I} gamma_j * (alpha - g_I)(beta - g_I)
        / ( prod_k (gamma_k - 1) * (alpha - g_full) * (beta - 1) )

    with g_I = prod_{i in I} gamma_i.
    """
    table = p.gamma_products()
    _gate(p, table, g1=True, g2_full=True, g3_empty=True)
    bits = _as_bits(I, p.m)
    full = (1 << p.m) - 1
    g_i = table[bits]
    num = table[full ^ bits] * (p.alpha - g_i) * (p.beta - g_i)
    den = (p.alpha - table[full]) * (p.beta - 1)
    for g in p.gamma:
        den = den * (g - 1)
    value = num / den
    return value if bits.bit_count() % 2 == 0 else -value


def h_diagonal(p: ParamPoint) -> list[FieldScalar]:
    """All diagonal entries of H in basis order (one pass, shared denominator)."""
    table = p.gamma_products()
    _gate(p, table, g1=True, g2_full=True, g3_empty=True)
    full = (1 << p.m) - 1
    den = (p.alpha - table[full]) * (p.beta - 1)
    for g in p.gamma:
        den = den * (g - 1)
    inv_den = den.inverse()
    out = []
    for s in basis_order(p.m):
        g_i = table[s.bits]
        val = table[full ^ s.bits] * (p.alpha - g_i) * (p.beta - g_i) * inv_den
        out.append(val if s.card % 2 == 0 else -val)
    return out


def h_matrix(p: ParamPoint) -> RepMatrix:
    """The intersection matrix H: diagonal, off-diagonal entries exactly zero."""
    diag = h_diagonal(p)
    zero = FieldScalar.zero_like(p.alpha)
    n = 1 << p.m
    return RepMatrix(
        [[diag[i] if i == j else zero for j in range(n)] for i in range(n)],
        basis="delta",
    )


def d_self_intersection(p: ParamPoint) -> FieldScalar:
    """Self-pairing of the vanishing cycle:

        (alpha*beta + (-1)^m prod gamma) / ((beta - 1)(alpha - prod gamma)).

    Equals trace(H); vanishes exactly on the G5 locus.
    """
    table = p.gamma_products()
    _gate(p, table, g2_full=True, g3_empty=True)
    full_prod = table[-1]
    signed = full_prod if p.m % 2 == 0 else -full_prod
    return (p.alpha * p.beta + signed) / ((p.beta - 1) * (p.alpha - full_prod))


def ih_delta_D(p: ParamPoint, I: SubsetIndex | int, Iprime: SubsetIndex | int) -> FieldScalar:
    """Pairing of basis cycle I with the dual chamber cycle I', simplified form.

    I' = {1..m}: equals H[I,I].  I' = {}: (-1)^|I| prod_k 1/(1-gamma_k).
    Otherwise:

        (-1)^(|I|+|I'|-1) * prod_k 1/(1-gamma_k)
        * (prod_{i in I cap I'} gamma_i - 1) / (1 - beta)
        * (prod_k gamma_k - alpha * prod_{j in I^c cap I'} gamma_j)
          / (prod_k gamma_k - alpha)

    which vanishes exactly when I cap I' is empty.
    """
    m = p.m
    bits_i = _as_bits(I, m)
    bits_ip = _as_bits(Iprime, m)
    full = (1 << m) - 1
    if bits_ip == full:
        return h_entry(p, bits_i)
    table = p.gamma_products()
    if bits_ip == 0:
        _gate(p, table, g1=True)
        base = FieldScalar.one_like(p.alpha)
        for g in p.gamma:
            base = base * (1 - g).inverse()
        return base if bits_i.bit_count() % 2 == 0 else -base
    _gate(p, table, g1=True, g2_full=True, g3_empty=True)
    base = FieldScalar.one_like(p.alpha)
    for g in p.gamma:
        base = base * (1 - g).inverse()
    i0 = bits_i & bits_ip
    j0 = bits_ip & ~bits_i
    full_prod = table[full]
    value = (
        base
        * ((table[i0] - 1) / (1 - p.beta))
        * ((full_prod - p.alpha * table[j0]) / (full_prod - p.alpha))
    )
    sign = (bits_i.bit_count() + bits_ip.bit_count() - 1) % 2
    return -value if sign else value


def ih_delta_D_raw(
    p: ParamPoint, I: SubsetIndex | int, Iprime: SubsetIndex | int
) -> FieldScalar:
    """The same chamber pairing as an unsimplified double subset sum.

    For I' nonempty the value is

        (-1)^(m-|J1|-1) * prod_{k in J'} 1/(1-gamma_k) * 1/(1-beta)
        * [  sum_{K_I strict-subset I0, K_J subset J0} w(K_I, K_J)
           + alpha/(prod gamma - alpha)
             * sum_{K_I strict-subset I0, K_J strict-subset J0} w(K_I, K_J) ]

    with I0 = I cap I', J0 = I^c cap I', J1 = I^c cap I'^c, J' = I'^c and
    w(K_I, K_J) = prod_{i in K_I} 1/(gamma_i - 1) * prod_{j in K_J}
    gamma_j/(1-gamma_j); both sums include the empty pair.  I' = {1..m} is
    outside this formula's scope.  Kept deliberately literal as an oracle for
    :func:`ih_delta_D`.
    """
    m = p.m
    bits_i = _as_bits(I, m)
    bits_ip = _as_bits(Iprime, m)
    full = (1 << m) - 1
    if bits_ip == full:
        raise ValueError("raw double-sum form does not cover I' = {1..m}")
    table = p.gamma_products()
    one = FieldScalar.one_like(p.alpha)
    if bits_ip == 0:
        _gate(p, table, g1=True)
        base = one
        for g in p.gamma:
            base = base * (1 - g).inverse()
        return base if bits_i.bit_count() % 2 == 0 else -base
    _gate(p, table, g1=True, g2_full=True, g3_empty=True)
    i0 = bits_i & bits_ip
    j0 = bits_ip & ~bits_i
    j1 = ~bits_i & ~bits_ip & full
    jprime = ~bits_ip & full

    inv_shift = [(g - one).inverse() for g in p.gamma]      # 1/(gamma_i - 1)
    ratio = [g / (one - g) for g in p.gamma]                # gamma_j/(1 - gamma_j)

    def weight(mask: int, factors) -> FieldScalar:
        out = one
        k = 0
        while mask >> k:
            if mask >> k & 1:
                out = out * factors[k]
            k += 1
        return out

    zero = FieldScalar.zero_like(p.alpha)
    s1 = zero
    s2 = zero
    for ki in proper_submasks(i0):
        wi = weight(ki, inv_shift)
        for kj in submasks(j0):
            term = wi * weight(kj, ratio)
            s1 = s1 + term
            if kj != j0:
                s2 = s2 + term

    pref = (1 - p.beta).inverse()
    k = 0
    while jprime >> k:
        if jprime >> k & 1:
            pref = pref * (1 - p.gamma[k]).inverse()
        k += 1
    full_prod = table[full]
    bracket = s1 + (p.alpha / (full_prod - p.alpha)) * s2
    value = pref * bracket
    sign = (m - j1.bit_count() - 1) % 2
    return -value if sign else value


def lambda0_matrix(p: ParamPoint) -> RepMatrix:
    """The pairing matrix Lambda0 = (pairing of cycle I with dual chamber I').

    Rows I and columns I' both run through the basis order; the last column
    equals the diagonal of H, and every other column sums to zero.
    """
    order = basis_order(p.m)
    return RepMatrix(
        [[ih_delta_D(p, I.bits, Ip.bits) for Ip in order] for I in order],
        basis="delta",
    )


def pairing_with_D(p: ParamPoint, x: CycleVector) -> FieldScalar:
    """Pairing of sum_I x_I * (basis cycle I) with the dual vanishing cycle:
    sum_I x_I H[I,I]."""
    if x.m != p.m:
        raise ValueError("vector has wrong ambient size")
    diag = h_diagonal(p)
    out = FieldScalar.zero_like(p.alpha)
    for xi, hi in zip(x.coords, diag):
        out = out + xi * hi
    return out
