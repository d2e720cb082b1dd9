"""Subset indexing, the canonical cycle-basis order, and subset-sum identities.

All 2^m basis cycles are labelled by subsets of {1..m}; matrices throughout
the package index rows and columns by the graded-lexicographic order returned
by :func:`basis_order`.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

from .scalars import FieldScalar

MAX_M = 16  # bitmask width cap; exact computations stay far below this


class SubsetIndex:
    """A subset of {1..m} stored as a bitmask (bit k-1 <-> element k)."""

    __slots__ = ("bits", "m")

    def __init__(self, bits: int, m: int):
        if not 0 <= bits < (1 << m):
            raise ValueError(f"bits {bits:#x} out of range for m={m}")
        self.bits = bits
        self.m = m

    @classmethod
    def from_elements(cls, elements: Iterable[int], m: int) -> "SubsetIndex":
        bits = 0
        for k in elements:
            if not 1 <= k <= m:
                raise ValueError(f"element {k} outside 1..{m}")
            bits |= 1 << (k - 1)
        return cls(bits, m)

    @classmethod
    def empty(cls, m: int) -> "SubsetIndex":
        return cls(0, m)

    @classmethod
    def full(cls, m: int) -> "SubsetIndex":
        return cls((1 << m) - 1, m)

    def elements(self) -> tuple[int, ...]:
        return tuple(k + 1 for k in range(self.m) if self.bits >> k & 1)

    @property
    def card(self) -> int:
        return self.bits.bit_count()

    def complement(self) -> "SubsetIndex":
        return SubsetIndex(self.bits ^ ((1 << self.m) - 1), self.m)

    def contains(self, k: int) -> bool:
        return bool(self.bits >> (k - 1) & 1)

    def is_subset_of(self, other: "SubsetIndex") -> bool:
        return self.bits & ~other.bits == 0

    def union(self, other: "SubsetIndex") -> "SubsetIndex":
        return SubsetIndex(self.bits | other.bits, self.m)

    def intersection(self, other: "SubsetIndex") -> "SubsetIndex":
        return SubsetIndex(self.bits & other.bits, self.m)

    def difference(self, other: "SubsetIndex") -> "SubsetIndex":
        return SubsetIndex(self.bits & ~other.bits, self.m)

    def is_empty(self) -> bool:
        return self.bits == 0

    def is_full(self) -> bool:
        return self.bits == (1 << self.m) - 1

    def __eq__(self, other):
        return (
            isinstance(other, SubsetIndex)
            and self.bits == other.bits
            and self.m == other.m
        )

    def __hash__(self):
        return hash((self.bits, self.m))

    def __repr__(self):
        return f"SubsetIndex({{{','.join(map(str, self.elements()))}}}, m={self.m})"

    def to_json(self) -> list[int]:
        return list(self.elements())


def basis_order(m: int) -> list[SubsetIndex]:
    """All subsets of {1..m}, by cardinality then lexicographic element lists.

    Position 0 is the empty set, position 2^m - 1 is {1..m}; the order refines
    inclusion, so any matrix supported on pairs N subset-of I is upper
    triangular in it.
    """
    if not 1 <= m <= MAX_M:
        raise ValueError(f"m must be in 1..{MAX_M}")
    subsets = [SubsetIndex(bits, m) for bits in range(1 << m)]
    subsets.sort(key=lambda s: (s.card, s.elements()))
    return subsets


def position_map(m: int) -> dict[int, int]:
    """bits -> position in basis_order(m)."""
    return {s.bits: pos for pos, s in enumerate(basis_order(m))}


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask``, including 0 and ``mask`` itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def proper_submasks(mask: int) -> Iterator[int]:
    """All strict submasks of ``mask`` (none when mask == 0)."""
    for sub in submasks(mask):
        if sub != mask:
            yield sub


def _mask_product(factors: Sequence[FieldScalar], mask: int, one: FieldScalar) -> FieldScalar:
    out = one
    k = 0
    while mask >> k:
        if mask >> k & 1:
            out = out * factors[k]
        k += 1
    return out


def subset_product_identities(
    n: int, lambdas: Sequence[FieldScalar]
) -> dict[str, dict]:
    """Check four closed forms for sums of products over all subsets of {1..n}.

    identities (sums run over every subset N of {1..n}):
      sum_ratio:            sum_N prod_{l in N} l/(1-l)        == prod 1/(1-l)
      sum_inverse_shift:    sum_N prod_{l in N} 1/(l-1)        == prod l/(l-1)
      complementary_split:  sum_N prod_N (1-l) prod_not(N) l   == 1
      shift_product:        sum_N prod_{l in N} (l-1)          == prod l

    The first two divide by 1 - lambda_l, so they are reported as skipped
    (not failed) when some lambda_l == 1.  Returns one record per identity
    with status "pass" | "fail" | "skipped".
    """
    if len(lambdas) != n:
        raise ValueError("lambdas must have exactly n entries")
    if n < 0:
        raise ValueError("n must be nonnegative")
    one = FieldScalar.one_like(lambdas[0]) if lambdas else FieldScalar.exact(1)
    has_unit = any(l == 1 for l in lambdas)
    report: dict[str, dict] = {}

    def record(name: str, ok: bool):
        report[name] = {"status": "pass" if ok else "fail"}

    if has_unit:
        report["sum_ratio"] = {"status": "skipped", "reason": "some lambda == 1"}
        report["sum_inverse_shift"] = {"status": "skipped", "reason": "some lambda == 1"}
    else:
        ratio = [l / (one - l) for l in lambdas]
        lhs = sum(
            (_mask_product(ratio, mask, one) for mask in range(1 << n)),
            FieldScalar.zero_like(one),
        )
        rhs = one
        for l in lambdas:
            rhs = rhs * (one - l).inverse()
        record("sum_ratio", lhs == rhs)

        inv_shift = [(l - one).inverse() for l in lambdas]
        lhs = sum(
            (_mask_product(inv_shift, mask, one) for mask in range(1 << n)),
            FieldScalar.zero_like(one),
        )
        rhs = one
        for l in lambdas:
            rhs = rhs * (l / (l - one))
        record("sum_inverse_shift", lhs == rhs)

    complement = [one - l for l in lambdas]
    lhs = FieldScalar.zero_like(one)
    full = (1 << n) - 1
    for mask in range(1 << n):
        lhs = lhs + _mask_product(complement, mask, one) * _mask_product(
            lambdas, full ^ mask, one
        )
    record("complementary_split", lhs == one)

    shifted = [l - one for l in lambdas]
    lhs = sum(
        (_mask_product(shifted, mask, one) for mask in range(1 << n)),
        FieldScalar.zero_like(one),
    )
    rhs = _mask_product(lambdas, full, one)
    record("shift_product", lhs == rhs)
    return report
