"""The reduced pairing matrix, its column-elimination scheme, and determinants.

``lambda_matrix`` is the (2^m - 1) x (2^m - 1) polynomial matrix obtained from
the pairing matrix by stripping a common prefactor from each column (rows and
columns run over all subsets except {1..m}).  ``elimination_step`` applies one
round of the determinant-preserving column updates that triangularize it, and
``det_lambda0_closed`` is the resulting closed-form determinant of the full
pairing matrix, checked against ``det_bruteforce``.
"""

from __future__ import annotations

from .combinatorics import basis_order, submasks
from .intersection import d_self_intersection, lambda0_matrix
from .matrices import RepMatrix, fraction_free_det
from .scalars import FieldScalar, GenericityError, ParamPoint


def _reduced_order(m: int):
    """Basis order without the full subset: index set for the reduced matrix."""
    return basis_order(m)[:-1]


def lambda_matrix(p: ParamPoint) -> RepMatrix:
    """Entries (rows I, columns I', both over subsets != {1..m}):

        column {}:  (-1)^|I|
        otherwise:  (-1)^(|I|+|I'|-1) * (prod_{i in I cap I'} gamma_i - 1)
                    * (prod_k gamma_k - alpha * prod_{j in I^c cap I'} gamma_j)

    Polynomial in the parameters, so assembly needs no genericity.
    """
    if p.m < 2:
        raise ValueError("the reduced pairing matrix is defined for m >= 2")
    table = p.gamma_products()
    order = _reduced_order(p.m)
    one = FieldScalar.one_like(p.alpha)
    full_prod = table[-1]
    rows = []
    for I in order:
        row = []
        for Ip in order:
            if Ip.bits == 0:
                val = one if I.card % 2 == 0 else -one
            else:
                i0 = I.bits & Ip.bits
                j0 = Ip.bits & ~I.bits
                val = (table[i0] - 1) * (full_prod - p.alpha * table[j0])
                if (I.card + Ip.card - 1) % 2 == 1:
                    val = -val
            row.append(val)
        rows.append(row)
    return RepMatrix(rows)


def elimination_step(prev: RepMatrix, n: int, p: ParamPoint) -> RepMatrix:
    """One column-update round: for every column I' with |I'| >= n+1 add

        sum_{K' subset I', |K'| = n} (-1)^(|I'|+n+1)
        * (prod gamma + (-1)^n alpha prod_{j in I'-K'} gamma_j)
          / (prod gamma + (-1)^n alpha) * (column K')

    Preserves the determinant; after round n every block with row size <= n is
    zero right of the diagonal.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    order = _reduced_order(p.m)
    if prev.n != len(order):
        raise ValueError("matrix size does not match m")
    table = p.gamma_products()
    full_prod = table[-1]
    signed_alpha = p.alpha if n % 2 == 0 else -p.alpha
    den = full_prod + signed_alpha
    if den.is_zero():
        # n even hits G4 (alpha = -prod gamma), n odd hits G2 at the full subset
        if n % 2 == 0:
            raise GenericityError("G4")
        raise GenericityError("G2", tuple(range(1, p.m + 1)))
    inv_den = den.inverse()
    size = len(order)
    cols = [[prev.rows[r][c] for r in range(size)] for c in range(size)]
    new_cols = [list(col) for col in cols]
    pos_of = {s.bits: idx for idx, s in enumerate(order)}
    for idx, Ip in enumerate(order):
        if Ip.card < n + 1:
            continue
        sign = 1 if (Ip.card + n + 1) % 2 == 0 else -1
        target = new_cols[idx]
        for kbits in submasks(Ip.bits):
            if kbits.bit_count() != n:
                continue
            coeff = (full_prod + signed_alpha * table[Ip.bits & ~kbits]) * inv_den
            if sign < 0:
                coeff = -coeff
            source = cols[pos_of[kbits]]
            for r in range(size):
                target[r] = target[r] + coeff * source[r]
    return RepMatrix([[new_cols[c][r] for c in range(size)] for r in range(size)])


def elimination_sequence(p: ParamPoint) -> list[RepMatrix]:
    """[L^(0) .. L^(m-2)]: the full update sequence ending lower triangular."""
    current = lambda_matrix(p)
    out = [current]
    for n in range(1, p.m - 1):
        current = elimination_step(current, n, p)
        out.append(current)
    return out


def det_bruteforce(M: RepMatrix) -> FieldScalar:
    """Exact determinant by fraction-free elimination (the oracle route)."""
    return fraction_free_det(M.rows)


def det_lambda0_closed(p: ParamPoint) -> FieldScalar:
    """Closed form for det of the pairing matrix, m >= 2.

    odd m:
        -(alpha*beta - g) * (g + alpha)^(2^(m-1)-1)
        / ( (1-beta)^(2^m-1) * (g - alpha)^(2^(m-1)) )
        * prod_k 1/(1-gamma_k)^(2^(m-1))
    even m:
        (alpha*beta + g) * (g + alpha)^(2^(m-1)-2)
        / ( (1-beta)^(2^m-1) * (g - alpha)^(2^(m-1)-1) )
        * prod_k 1/(1-gamma_k)^(2^(m-1))

    with g = prod_k gamma_k.  Nonzero at every generic point; the numerator
    factor alpha*beta -+ g vanishing is exactly predicate G5.
    """
    if p.m < 2:
        raise ValueError("closed form is asserted for m >= 2 only")
    table = p.gamma_products()
    for k, gam in enumerate(p.gamma, start=1):
        if gam == 1:
            raise GenericityError("G1", k)
    g = table[-1]
    if p.alpha == g:
        raise GenericityError("G2", tuple(range(1, p.m + 1)))
    if p.beta == 1:
        raise GenericityError("G3", ())
    half = 1 << (p.m - 1)
    gamma_pow = FieldScalar.one_like(p.alpha)
    for gam in p.gamma:
        gamma_pow = gamma_pow * ((1 - gam) ** half)
    if p.m % 2 == 1:
        num = -(p.alpha * p.beta - g) * (g + p.alpha) ** (half - 1)
        den = ((1 - p.beta) ** ((1 << p.m) - 1)) * ((g - p.alpha) ** half) * gamma_pow
    else:
        num = (p.alpha * p.beta + g) * (g + p.alpha) ** (half - 2)
        den = ((1 - p.beta) ** ((1 << p.m) - 1)) * ((g - p.alpha) ** (half - 1)) * gamma_pow
    return num / den


def lambda0_prefactor(p: ParamPoint) -> FieldScalar:
    """The common factor stripped per column of the pairing matrix:

        (alpha*beta + (-1)^m g) / ( (1-beta)^(2^m-1) (g-alpha)^(2^m-1) )
        * prod_k 1/(1-gamma_k)^(2^m-1),     g = prod_k gamma_k.
    """
    table = p.gamma_products()
    for k, gam in enumerate(p.gamma, start=1):
        if gam == 1:
            raise GenericityError("G1", k)
    g = table[-1]
    if p.alpha == g:
        raise GenericityError("G2", tuple(range(1, p.m + 1)))
    if p.beta == 1:
        raise GenericityError("G3", ())
    e = (1 << p.m) - 1
    signed = g if p.m % 2 == 0 else -g
    num = p.alpha * p.beta + signed
    den = ((1 - p.beta) ** e) * ((g - p.alpha) ** e)
    for gam in p.gamma:
        den = den * ((1 - gam) ** e)
    return num / den


def det_decomposition_check(p: ParamPoint) -> dict:
    """Verify every printed determinant factorization exactly at one point.

    Checks, in order: replacing the last row of the pairing matrix by its
    column sums leaves (0,..,0, self-pairing of the vanishing cycle); the
    determinant splits off that self-pairing times the leading principal
    minor; it equals the column prefactor times det of the reduced matrix;
    the column-update rounds preserve the determinant, create the promised
    zero blocks and diagonal entries, and end lower triangular with the
    determinant equal to the diagonal product.
    """
    if p.m < 2:
        raise ValueError("decomposition checks need m >= 2")
    checks: list[dict] = []

    def add(name, ok, **extra):
        checks.append({"name": name, "status": "pass" if ok else "fail", **extra})

    L0 = lambda0_matrix(p)
    n = L0.n
    d_self = d_self_intersection(p)
    zero = FieldScalar.zero_like(p.alpha)
    col_sums = []
    for j in range(n):
        s = zero
        for i in range(n):
            s = s + L0.rows[i][j]
        col_sums.append(s)
    add(
        "row_sum_form",
        all(col_sums[j].is_zero() for j in range(n - 1)) and col_sums[-1] == d_self,
    )

    det_L0 = det_bruteforce(L0)
    minor = RepMatrix([row[: n - 1] for row in L0.rows[: n - 1]])
    add("principal_minor_split", det_L0 == d_self * det_bruteforce(minor))

    lam = lambda_matrix(p)
    det_lam = det_bruteforce(lam)
    add("prefactor_split", det_L0 == lambda0_prefactor(p) * det_lam)

    seq = elimination_sequence(p)
    order = _reduced_order(p.m)
    dets_ok = all(det_bruteforce(mat) == det_lam for mat in seq[1:])
    add("elimination_det_invariance", dets_ok, steps=len(seq) - 1)

    pattern_ok = True
    diag_ok = True
    table = p.gamma_products()
    for step, mat in enumerate(seq):
        for ri, I in enumerate(order):
            for ci, Ip in enumerate(order):
                if I.card <= step and Ip.card > I.card and not mat.rows[ri][ci].is_zero():
                    pattern_ok = False
                if (
                    I.card == Ip.card
                    and 1 <= I.card <= step + 1
                    and ri != ci
                    and not mat.rows[ri][ci].is_zero()
                ):
                    pattern_ok = False
        for ri, I in enumerate(order):
            if 1 <= I.card <= step + 1:
                expected = FieldScalar.one_like(p.alpha)
                for i in I.elements():
                    expected = expected * (p.gamma[i - 1] - 1)
                signed_alpha = p.alpha if I.card % 2 == 0 else -p.alpha
                expected = -(expected * (table[-1] + signed_alpha))
                if mat.rows[ri][ri] != expected:
                    diag_ok = False
    add("elimination_block_zero", pattern_ok)
    add("elimination_diagonal", diag_ok)

    final = seq[-1]
    diag_prod = FieldScalar.one_like(p.alpha)
    for d in final.diagonal():
        diag_prod = diag_prod * d
    add(
        "end_state_triangular",
        final.is_lower_triangular() and det_lam == diag_prod,
    )

    add("closed_form", det_lambda0_closed(p) == det_L0)

    return {
        "m": p.m,
        "checks": checks,
        "all_passed": all(c["status"] == "pass" for c in checks),
    }
