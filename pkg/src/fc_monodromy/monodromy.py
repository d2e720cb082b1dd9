"""Circuit matrices, the triangularizing basis change, and the relation verifier.

``m_k_matrix`` and ``m_0_matrix`` are the circuit maps along loops around the
coordinate divisors and around the quadric-like divisor, written in the
solution-cycle basis.  ``basis_change_matrix`` conjugates them into the basis
where every generator is triangular (``m_prime_matrix``); the conjugation
itself is recomputed independently by ``m_prime_oracle``.  Words in the
generators evaluate through ``word_matrix`` with the loop-composition
convention (first loop acts first), which makes evaluation an
anti-homomorphism: word(w . w') maps to matrix(w') @ matrix(w).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .combinatorics import SubsetIndex, basis_order
from .intersection import h_diagonal, pairing_with_D
from .matrices import CycleVector, RepMatrix, solve_upper_triangular
from .scalars import FieldScalar, GenericityError, ParamPoint, check_genericity


@dataclass(frozen=True)
class GeneratorWord:
    """A word in the loop generators 0..m; tokens are (generator, +-1)."""

    tokens: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        for gen, exp in self.tokens:
            if gen < 0:
                raise ValueError("generator index must be >= 0")
            if exp not in (1, -1):
                raise ValueError("token exponents must be +1 or -1")

    @classmethod
    def identity(cls) -> "GeneratorWord":
        return cls(())

    @classmethod
    def generator(cls, i: int, exp: int = 1) -> "GeneratorWord":
        return cls(((i, exp),))

    def __mul__(self, other: "GeneratorWord") -> "GeneratorWord":
        """Concatenation: self is traversed first, then other."""
        return GeneratorWord(self.tokens + other.tokens)

    def inverse(self) -> "GeneratorWord":
        return GeneratorWord(tuple((g, -e) for g, e in reversed(self.tokens)))

    def max_generator(self) -> int:
        return max((g for g, _ in self.tokens), default=0)


def m_k_matrix(p: ParamPoint, k: int) -> RepMatrix:
    """Circuit matrix around the k-th coordinate divisor: diagonal with entry
    1/gamma_k on subsets containing k and 1 elsewhere."""
    if not 1 <= k <= p.m:
        raise ValueError(f"k must be in 1..{p.m}")
    inv_gk = p.gamma[k - 1].inverse()
    one = FieldScalar.one_like(p.alpha)
    zero = FieldScalar.zero_like(p.alpha)
    n = 1 << p.m
    order = basis_order(p.m)
    rows = [[zero] * n for _ in range(n)]
    for pos, s in enumerate(order):
        rows[pos][pos] = inv_gk if s.contains(k) else one
    return RepMatrix(rows, basis="delta")


def _m0_scale(p: ParamPoint, table) -> FieldScalar:
    return (p.beta - 1) * (p.alpha - table[-1]) / (p.alpha * p.beta)


def m_0_matrix(p: ParamPoint) -> RepMatrix:
    """Circuit matrix around the remaining singular divisor:

        E - (beta-1)(alpha - prod gamma)/(alpha beta) * N H

    where N is the all-ones matrix and H the basis intersection matrix, i.e. a
    rank-one perturbation of the identity supported on the vanishing cycle.
    """
    diag = h_diagonal(p)
    c = _m0_scale(p, p.gamma_products())
    n = 1 << p.m
    scaled = [-(c * d) for d in diag]
    one = FieldScalar.one_like(p.alpha)
    rows = [[scaled[j] + one if i == j else scaled[j] for j in range(n)] for i in range(n)]
    return RepMatrix(rows, basis="delta")


def apply_m0(p: ParamPoint, x: CycleVector) -> CycleVector:
    """Operator form of the same circuit map:
    x  ->  x - c * <x, dual vanishing cycle> * (all-ones)."""
    c = _m0_scale(p, p.gamma_products())
    factor = c * pairing_with_D(p, x)
    return CycleVector(x.m, [xi - factor for xi in x.coords])


def special_m0_eigenvalue(p: ParamPoint) -> FieldScalar:
    """(-1)^(m-1) * prod gamma / (alpha*beta): the non-unit eigenvalue."""
    value = p.gamma_products()[-1] / (p.alpha * p.beta)
    return value if (p.m - 1) % 2 == 0 else -value


def basis_change_matrix(p: ParamPoint) -> RepMatrix:
    """The upper-triangular basis change P with (N, I)-entry

        alpha*beta * prod_{j not in I} (gamma_j - 1)/gamma_j
        * g_N / ((alpha - g_N)(beta - g_N))        for N subset of I, else 0,

    where g_N = prod_{n in N} gamma_n.  Needs alpha, beta distinct from every
    subset product of the gammas (G2, G3)."""
    table = p.gamma_products()
    order = basis_order(p.m)
    for s in order:
        if p.alpha == table[s.bits]:
            raise GenericityError("G2", s.elements())
        if p.beta == table[s.bits]:
            raise GenericityError("G3", s.elements())
    ab = p.alpha * p.beta
    full = (1 << p.m) - 1
    # column factor: alpha*beta * prod_{j not in I} (gamma_j - 1)/gamma_j
    col_factor = {}
    for s in order:
        f = ab
        for j in range(p.m):
            if not s.bits >> j & 1:
                g = p.gamma[j]
                f = f * (g - 1) / g
        col_factor[s.bits] = f
    row_factor = {
        s.bits: table[s.bits] / ((p.alpha - table[s.bits]) * (p.beta - table[s.bits]))
        for s in order
    }
    zero = FieldScalar.zero_like(p.alpha)
    rows = []
    for N in order:
        row = []
        for I in order:
            if N.bits & ~I.bits:
                row.append(zero)
            else:
                row.append(col_factor[I.bits] * row_factor[N.bits])
        rows.append(row)
    return RepMatrix(rows, basis="delta")


def n0_column_entry(p: ParamPoint, I: SubsetIndex) -> FieldScalar:
    """Entry (I, empty) of the rank-one correction used by the triangular form:

        (alpha - g)(beta - g)/(alpha beta g)                 for I = {1..m},
        1/prod_{i in I} gamma_i + (-1)^(m-|I|) g/(alpha beta) otherwise,

    with g = prod_k gamma_k.  These are also the coefficients expressing the
    vanishing cycle in the primed basis."""
    table = p.gamma_products()
    g = table[-1]
    ab = p.alpha * p.beta
    if I.is_full():
        return (p.alpha - g) * (p.beta - g) / (ab * g)
    value = table[I.bits].inverse()
    correction = g / ab
    if (p.m - I.card) % 2 == 1:
        return value - correction
    return value + correction


def m_prime_matrix(p: ParamPoint, i: int) -> RepMatrix:
    """Circuit matrices in the primed basis: lower triangular for i = 0
    (identity minus a first-column correction), upper triangular otherwise
    (the diagonal circuit matrix plus one 1 per column containing k)."""
    if not 0 <= i <= p.m:
        raise ValueError(f"i must be in 0..{p.m}")
    order = basis_order(p.m)
    n = len(order)
    zero = FieldScalar.zero_like(p.alpha)
    one = FieldScalar.one_like(p.alpha)
    if i == 0:
        table = p.gamma_products()
        if p.alpha == table[-1]:
            raise GenericityError("G2", tuple(range(1, p.m + 1)))
        if p.beta == table[-1]:
            raise GenericityError("G3", tuple(range(1, p.m + 1)))
        rows = [[one if r == c else zero for c in range(n)] for r in range(n)]
        for pos, I in enumerate(order):
            delta = one if pos == 0 else zero
            rows[pos][0] = delta - n0_column_entry(p, I)
        return RepMatrix(rows, basis="delta_prime")
    k = i
    inv_gk = p.gamma[k - 1].inverse()
    pos_of = {s.bits: idx for idx, s in enumerate(order)}
    rows = [[zero] * n for _ in range(n)]
    for pos, s in enumerate(order):
        rows[pos][pos] = inv_gk if s.contains(k) else one
        if s.contains(k):
            rows[pos_of[s.bits ^ (1 << (k - 1))]][pos] = one
    return RepMatrix(rows, basis="delta_prime")


def m_i_matrix(p: ParamPoint, i: int) -> RepMatrix:
    if not 0 <= i <= p.m:
        raise ValueError(f"i must be in 0..{p.m}")
    return m_0_matrix(p) if i == 0 else m_k_matrix(p, i)


def m_prime_oracle(p: ParamPoint, i: int) -> RepMatrix:
    """Independent conjugation P^{-1} M_i P by exact triangular solve."""
    P = basis_change_matrix(p)
    if any(d.is_zero() for d in P.diagonal()):
        raise ZeroDivisionError("basis change is singular; cannot happen at generic p")
    rhs = m_i_matrix(p, i) @ P
    return solve_upper_triangular(P, rhs).with_basis("delta_prime")


def word_matrix(p: ParamPoint, w: GeneratorWord) -> RepMatrix:
    """Evaluate a generator word; composition reverses order, inverses solve
    exactly.  The empty word gives the identity."""
    if w.max_generator() > p.m:
        raise ValueError("word uses a generator index above m")
    mats: dict[int, RepMatrix] = {}
    invs: dict[int, RepMatrix] = {}
    acc = RepMatrix.identity(1 << p.m, p.alpha, basis="delta")
    for gen, exp in w.tokens:
        if exp == 1:
            if gen not in mats:
                mats[gen] = m_i_matrix(p, gen)
            step = mats[gen]
        else:
            if gen not in invs:
                if gen not in mats:
                    mats[gen] = m_i_matrix(p, gen)
                invs[gen] = mats[gen].inverse()
            step = invs[gen]
        acc = step @ acc
    return acc


def infinity_loop_word(m: int, order: str = "descending") -> GeneratorWord:
    """The word whose circuit matrix is the loop around the hyperplane at
    infinity: the inverse of

        rho_1 ... rho_m * prod_a (rho_1^{b_1} ... rho_{m-1}^{b_{m-1}})
                          rho_0 (rho_1^{b_1} ... rho_{m-1}^{b_{m-1}})^{-1}

    where a runs over binary strings of length m-1 (descending from all-ones
    to all-zeros by default) and b = 1 - a, componentwise.
    """
    if m < 2:
        raise ValueError("the infinity word is defined for m >= 2")
    if order not in ("descending", "ascending"):
        raise ValueError("order must be 'descending' or 'ascending'")
    tokens: list[tuple[int, int]] = [(k, 1) for k in range(1, m + 1)]
    values = range(2 ** (m - 1) - 1, -1, -1) if order == "descending" else range(2 ** (m - 1))
    for a in values:
        # bit string a_1 .. a_{m-1}, most significant bit first
        prefix = [
            (l, 1)
            for l in range(1, m)
            if not (a >> (m - 1 - l)) & 1  # b_l = 1 - a_l
        ]
        tokens.extend(prefix)
        tokens.append((0, 1))
        tokens.extend((g, -1) for g, _ in reversed(prefix))
    return GeneratorWord(tuple(tokens)).inverse()


def m_infinity(p: ParamPoint, order: str = "descending") -> RepMatrix:
    """Circuit matrix of the loop at infinity; its eigenvalues are alpha and
    beta, each of multiplicity 2^(m-1)."""
    if p.m < 2:
        raise ValueError("m_infinity requires m >= 2")
    return word_matrix(p, infinity_loop_word(p.m, order))


def eigen_multiplicity(M: RepMatrix, eigenvalue: FieldScalar) -> int:
    """Exact geometric multiplicity: n - rank(M - eigenvalue * E)."""
    shifted = M - RepMatrix.identity(M.n, eigenvalue).scale(eigenvalue)
    return M.n - shifted.rank()


def _random_kernel_vector(p: ParamPoint, rng: random.Random) -> CycleVector:
    """A random vector with zero pairing against the dual vanishing cycle."""
    diag = h_diagonal(p)
    n = 1 << p.m
    coords = [
        FieldScalar.exact(rng.randint(-9, 9), rng.randint(-9, 9)) for _ in range(n - 1)
    ]
    if all(c.is_zero() for c in coords):
        coords[0] = FieldScalar.exact(1)
    acc = FieldScalar.zero_like(diag[0])
    for c, h in zip(coords, diag):
        acc = acc + c * h
    coords.append(-acc / diag[n - 1])
    return CycleVector(p.m, coords)


def verify_relations(p: ParamPoint, seed: int = 0, kernel_samples: int = 20) -> dict:
    """Exact pass/fail report for the whole relation suite at one point.

    Checks: pairwise commutation of the coordinate circuits, the braid-type
    relation with the 0-th circuit, the eigenstructure of that circuit (special
    eigenvalue of multiplicity one with the all-ones eigenvector, eigenvalue
    one of multiplicity 2^m - 1, pairing-kernel vectors fixed), eigenvalue
    multiplicities of the circuit at infinity, and agreement of the triangular
    matrices with the conjugation oracle.  Raises GenericityError on
    non-generic input; group relations are gated to m >= 2.
    """
    violations = check_genericity(p)
    if violations:
        raise GenericityError(violations[0].predicate, violations[0].witness)
    m = p.m
    checks: list[dict] = []

    def add(name: str, status: str, **extra):
        checks.append({"name": name, "status": status, **extra})

    order = basis_order(m)

    if m < 2:
        add("commutation", "not_applicable", reason="group relations need m >= 2")
        add("braid", "not_applicable", reason="group relations need m >= 2")
    else:
        mk = [m_k_matrix(p, k) for k in range(1, m + 1)]
        witness = None
        for i in range(m):
            for j in range(i + 1, m):
                diff = (mk[i] @ mk[j]).first_difference(mk[j] @ mk[i])
                if diff is not None:
                    witness = {"i": i + 1, "j": j + 1,
                               "row": order[diff[0]].to_json(),
                               "col": order[diff[1]].to_json()}
                    break
            if witness:
                break
        add("commutation", "pass" if witness is None else "fail",
            **({"witness": witness} if witness else {}))

        m0 = m_0_matrix(p)
        witness = None
        for k in range(1, m + 1):
            left = m0 @ mk[k - 1]
            right = mk[k - 1] @ m0
            diff = (left @ left).first_difference(right @ right)
            if diff is not None:
                witness = {"k": k,
                           "row": order[diff[0]].to_json(),
                           "col": order[diff[1]].to_json()}
                break
        add("braid", "pass" if witness is None else "fail",
            **({"witness": witness} if witness else {}))

    m0 = m_0_matrix(p)
    lam = special_m0_eigenvalue(p)
    mult_special = eigen_multiplicity(m0, lam)
    add("m0_special_eigenvalue", "pass" if mult_special == 1 else "fail",
        multiplicity=mult_special)
    mult_one = eigen_multiplicity(m0, FieldScalar.one_like(p.alpha))
    add("m0_unit_eigenvalue", "pass" if mult_one == (1 << m) - 1 else "fail",
        multiplicity=mult_one)

    ones = CycleVector.ones(m)
    add("m0_all_ones_eigenvector",
        "pass" if m0.apply(ones) == ones.scale(lam) else "fail")

    rng = random.Random(seed)
    kernel_ok = True
    for _ in range(kernel_samples):
        x = _random_kernel_vector(p, rng)
        if apply_m0(p, x) != x or m0.apply(x) != x:
            kernel_ok = False
            break
    add("m0_fixes_pairing_kernel", "pass" if kernel_ok else "fail",
        samples=kernel_samples)

    if m < 2:
        add("infinity_eigenvalues", "not_applicable",
            reason="the infinity word needs m >= 2")
    else:
        minf = m_infinity(p, "descending")
        half = 1 << (m - 1)
        ok = (
            eigen_multiplicity(minf, p.alpha) == half
            and eigen_multiplicity(minf, p.beta) == half
        )
        if ok:
            add("infinity_eigenvalues", "pass", word_order="descending")
        else:
            alt = m_infinity(p, "ascending")
            alt_ok = (
                eigen_multiplicity(alt, p.alpha) == half
                and eigen_multiplicity(alt, p.beta) == half
            )
            add("infinity_eigenvalues", "fail", word_order="descending",
                ascending_passes=alt_ok)

    witness = None
    for i in range(m + 1):
        diff = m_prime_matrix(p, i).first_difference(m_prime_oracle(p, i))
        if diff is not None:
            witness = {"i": i,
                       "row": order[diff[0]].to_json(),
                       "col": order[diff[1]].to_json()}
            break
    add("m_prime_oracle", "pass" if witness is None else "fail",
        **({"witness": witness} if witness else {}))

    return {
        "m": m,
        "checks": checks,
        "all_passed": all(c["status"] in ("pass", "not_applicable") for c in checks),
    }
