"""Dense matrices and vectors over FieldScalar, with exact linear algebra.

Everything here works for both scalar kinds, but the elimination routines are
meant for the exact kind: rank and determinant come from fraction-free
(division-controlled) Gaussian elimination with first-nonzero pivoting, so a
zero answer is a proof, not a tolerance call.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .scalars import FieldScalar


class CycleVector:
    """Coordinates of a twisted-homology class in the subset basis order."""

    __slots__ = ("m", "coords")

    def __init__(self, m: int, coords: Sequence[FieldScalar]):
        if len(coords) != 1 << m:
            raise ValueError(f"expected {1 << m} coordinates, got {len(coords)}")
        self.m = m
        self.coords = tuple(coords)

    @classmethod
    def zero(cls, m: int) -> "CycleVector":
        return cls(m, [FieldScalar.exact(0)] * (1 << m))

    @classmethod
    def ones(cls, m: int) -> "CycleVector":
        return cls(m, [FieldScalar.exact(1)] * (1 << m))

    @classmethod
    def unit(cls, m: int, position: int) -> "CycleVector":
        coords = [FieldScalar.exact(0)] * (1 << m)
        coords[position] = FieldScalar.exact(1)
        return cls(m, coords)

    def scale(self, s: FieldScalar) -> "CycleVector":
        return CycleVector(self.m, [s * x for x in self.coords])

    def __add__(self, other: "CycleVector") -> "CycleVector":
        return CycleVector(self.m, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other: "CycleVector") -> "CycleVector":
        return CycleVector(self.m, [a - b for a, b in zip(self.coords, other.coords)])

    def __eq__(self, other):
        return (
            isinstance(other, CycleVector)
            and self.m == other.m
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((self.m, self.coords))

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.coords)

    def __repr__(self):
        return f"CycleVector(m={self.m}, {[str(x) for x in self.coords]})"


class RepMatrix:
    """A square matrix of FieldScalars with an optional basis tag.

    Rows and columns follow :func:`fc_monodromy.combinatorics.basis_order`;
    ``basis`` is "delta" or "delta_prime" when that matters, else None.
    Instances are treated as immutable.
    """

    __slots__ = ("rows", "basis")

    def __init__(self, rows: Iterable[Iterable[FieldScalar]], basis: str | None = None):
        rows = [list(r) for r in rows]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        self.rows = rows
        self.basis = basis

    @property
    def n(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int) -> FieldScalar:
        return self.rows[i][j]

    def row(self, i: int) -> tuple[FieldScalar, ...]:
        return tuple(self.rows[i])

    def column(self, j: int) -> tuple[FieldScalar, ...]:
        return tuple(r[j] for r in self.rows)

    def diagonal(self) -> tuple[FieldScalar, ...]:
        return tuple(self.rows[i][i] for i in range(self.n))

    def trace(self) -> FieldScalar:
        out = FieldScalar.zero_like(self.rows[0][0])
        for i in range(self.n):
            out = out + self.rows[i][i]
        return out

    @classmethod
    def identity(cls, n: int, template: FieldScalar | None = None,
                 basis: str | None = None) -> "RepMatrix":
        template = template if template is not None else FieldScalar.exact(1)
        one = FieldScalar.one_like(template)
        zero = FieldScalar.zero_like(template)
        return cls(
            [[one if i == j else zero for j in range(n)] for i in range(n)],
            basis=basis,
        )

    @classmethod
    def zeros(cls, n: int, template: FieldScalar | None = None,
              basis: str | None = None) -> "RepMatrix":
        template = template if template is not None else FieldScalar.exact(0)
        zero = FieldScalar.zero_like(template)
        return cls([[zero] * n for _ in range(n)], basis=basis)

    def with_basis(self, basis: str | None) -> "RepMatrix":
        return RepMatrix(self.rows, basis=basis)

    def __eq__(self, other):
        if not isinstance(other, RepMatrix) or self.n != other.n:
            return NotImplemented if not isinstance(other, RepMatrix) else False
        return all(
            self.rows[i][j] == other.rows[i][j]
            for i in range(self.n)
            for j in range(self.n)
        )

    def __hash__(self):
        return hash(tuple(tuple(r) for r in self.rows))

    def first_difference(self, other: "RepMatrix") -> tuple[int, int] | None:
        """Indices of the first differing entry, or None if equal."""
        for i in range(self.n):
            for j in range(self.n):
                if self.rows[i][j] != other.rows[i][j]:
                    return (i, j)
        return None

    def __add__(self, other: "RepMatrix") -> "RepMatrix":
        return RepMatrix(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)],
            basis=self.basis,
        )

    def __sub__(self, other: "RepMatrix") -> "RepMatrix":
        return RepMatrix(
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)],
            basis=self.basis,
        )

    def __neg__(self) -> "RepMatrix":
        return RepMatrix([[-a for a in r] for r in self.rows], basis=self.basis)

    def scale(self, s: FieldScalar) -> "RepMatrix":
        return RepMatrix([[s * a for a in r] for r in self.rows], basis=self.basis)

    def __matmul__(self, other: "RepMatrix") -> "RepMatrix":
        if self.n != other.n:
            raise ValueError("size mismatch")
        n = self.n
        a0 = self.rows[0][0]
        if a0.prec is None:
            # exact fast path on raw rational components
            raw = FieldScalar._raw
            bcols = [[other.rows[t][j] for t in range(n)] for j in range(n)]
            out = []
            for arow in self.rows:
                orow = []
                for bcol in bcols:
                    first = arow[0]
                    b0 = bcol[0]
                    sre = first.re * b0.re - first.im * b0.im
                    sim = first.re * b0.im + first.im * b0.re
                    for t in range(1, n):
                        at = arow[t]
                        bt = bcol[t]
                        ar = at.re
                        ai = at.im
                        br = bt.re
                        bi = bt.im
                        sre += ar * br - ai * bi
                        sim += ar * bi + ai * br
                    orow.append(raw(sre, sim, None))
                out.append(orow)
            return RepMatrix(out)
        out = []
        for i in range(n):
            orow = []
            for j in range(n):
                s = self.rows[i][0] * other.rows[0][j]
                for t in range(1, n):
                    s = s + self.rows[i][t] * other.rows[t][j]
                orow.append(s)
            out.append(orow)
        return RepMatrix(out)

    def apply(self, vec: CycleVector) -> CycleVector:
        if 1 << vec.m != self.n:
            raise ValueError("size mismatch")
        coords = []
        for i in range(self.n):
            s = self.rows[i][0] * vec.coords[0]
            for t in range(1, self.n):
                s = s + self.rows[i][t] * vec.coords[t]
            coords.append(s)
        return CycleVector(vec.m, coords)

    def transpose(self) -> "RepMatrix":
        return RepMatrix(
            [[self.rows[j][i] for j in range(self.n)] for i in range(self.n)],
            basis=self.basis,
        )

    def is_upper_triangular(self) -> bool:
        return all(
            self.rows[i][j].is_zero() for i in range(self.n) for j in range(i)
        )

    def is_lower_triangular(self) -> bool:
        return all(
            self.rows[i][j].is_zero()
            for i in range(self.n)
            for j in range(i + 1, self.n)
        )

    def is_diagonal(self) -> bool:
        return self.is_upper_triangular() and self.is_lower_triangular()

    def det(self) -> FieldScalar:
        return fraction_free_det(self.rows)

    def rank(self) -> int:
        return fraction_free_rank(self.rows)

    def inverse(self) -> "RepMatrix":
        return RepMatrix(invert_rows(self.rows), basis=self.basis)

    def to_json(self, order=None):
        obj = {
            "size": self.n,
            "basis": self.basis,
            "entries": [[x.to_json() for x in row] for row in self.rows],
        }
        if order is not None:
            obj["order"] = [s.to_json() for s in order]
        return obj


def fraction_free_det(rows: Sequence[Sequence[FieldScalar]]) -> FieldScalar:
    """Exact determinant by one-step fraction-free elimination.

    Pivot is the first row with a nonzero entry in the current column; each
    update divides by the previous pivot, which is exact over the scalar field.
    """
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return FieldScalar.exact(1)
    one = FieldScalar.one_like(a[0][0])
    zero = FieldScalar.zero_like(a[0][0])
    sign = 1
    prev = one
    for k in range(n - 1):
        piv = next((i for i in range(k, n) if not a[i][k].is_zero()), None)
        if piv is None:
            return zero
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        pk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            arow = a[i]
            krow = a[k]
            for j in range(k + 1, n):
                arow[j] = (pk * arow[j] - aik * krow[j]) / prev
            arow[k] = zero
        prev = pk
    result = a[n - 1][n - 1]
    return result if sign == 1 else -result


def fraction_free_rank(rows: Sequence[Sequence[FieldScalar]]) -> int:
    """Exact rank; zero pivot columns are skipped, pivoting is first-nonzero."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 0
    ncols = len(a[0])
    one = FieldScalar.one_like(a[0][0])
    zero = FieldScalar.zero_like(a[0][0])
    prev = one
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, n) if not a[i][col].is_zero()), None)
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        pk = a[r][col]
        for i in range(r + 1, n):
            aik = a[i][col]
            arow = a[i]
            rrow = a[r]
            for j in range(col + 1, ncols):
                arow[j] = (pk * arow[j] - aik * rrow[j]) / prev
            arow[col] = zero
        prev = pk
        r += 1
        if r == n:
            break
    return r


def invert_rows(rows: Sequence[Sequence[FieldScalar]]) -> list[list[FieldScalar]]:
    """Exact inverse by Gauss-Jordan elimination; raises on singular input."""
    n = len(rows)
    one = FieldScalar.one_like(rows[0][0])
    zero = FieldScalar.zero_like(rows[0][0])
    a = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(rows)]
    for k in range(n):
        piv = next((i for i in range(k, n) if not a[i][k].is_zero()), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
        inv_p = a[k][k].inverse()
        a[k] = [x * inv_p for x in a[k]]
        for i in range(n):
            if i == k or a[i][k].is_zero():
                continue
            f = a[i][k]
            a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return [r[n:] for r in a]


def solve_upper_triangular(
    upper: RepMatrix, rhs: RepMatrix
) -> RepMatrix:
    """Solve U X = B for upper-triangular U by back substitution (exact)."""
    n = upper.n
    if rhs.n != n:
        raise ValueError("size mismatch")
    diag = upper.diagonal()
    if any(d.is_zero() for d in diag):
        raise ZeroDivisionError("upper-triangular matrix has a zero diagonal entry")
    cols = []
    for j in range(n):
        b = [rhs.rows[i][j] for i in range(n)]
        x: list[FieldScalar | None] = [None] * n
        for i in range(n - 1, -1, -1):
            s = b[i]
            urow = upper.rows[i]
            for t in range(i + 1, n):
                s = s - urow[t] * x[t]
            x[i] = s / diag[i]
        cols.append(x)
    return RepMatrix([[cols[j][i] for j in range(n)] for i in range(n)])
