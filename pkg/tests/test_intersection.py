import pytest
from gmpy2 import mpq

from fc_monodromy import (
    CycleVector,
    FieldScalar,
    GenericityError,
    ParamPoint,
    basis_order,
    d_self_intersection,
    h_entry,
    h_matrix,
    ih_delta_D,
    ih_delta_D_raw,
    lambda0_matrix,
    pairing_with_D,
    sample_generic,
)

FS = FieldScalar


def rational_point(alpha, beta, gamma):
    gam = tuple(FS.exact(mpq(g)) for g in gamma)
    return ParamPoint(
        m=len(gam), alpha=FS.exact(mpq(alpha)), beta=FS.exact(mpq(beta)), gamma=gam
    )


M1_POINT = rational_point(3, 5, [2])  # hand-evaluated reference point


class TestHEntries:
    def test_m1_empty_set(self):
        # gamma*(alpha-1)(beta-1) / ((gamma-1)(alpha-gamma)(beta-1)) = 2*2*4/(1*1*4)
        assert h_entry(M1_POINT, 0) == FS.exact(4)

    def test_m1_full_set(self):
        # -(alpha-gamma)(beta-gamma) / ((gamma-1)(alpha-gamma)(beta-1)) = -3/4
        assert h_entry(M1_POINT, 1) == FS.exact(mpq(-3, 4))

    def test_alpha_beta_enter_symmetrically_at_empty_set(self):
        # with the fixed denominator (alpha - prod gamma)(beta - 1) pulled out,
        # the empty-set entry depends on alpha, beta only through (a-1)(b-1)
        p = rational_point(3, 5, [2, 7])
        q = rational_point(5, 3, [2, 7])

        def pulled(pt):
            prod = pt.gamma_products()[-1]
            return h_entry(pt, 0) * (pt.alpha - prod) * (pt.beta - 1)

        assert pulled(p) == pulled(q)

    def test_matrix_is_diagonal_with_h_entries(self):
        p = sample_generic(5, 2, 9)
        mat = h_matrix(p)
        assert mat.n == 4
        assert mat.is_diagonal()
        for pos, s in enumerate(basis_order(2)):
            assert mat.rows[pos][pos] == h_entry(p, s.bits)

    def test_m1_matrix(self):
        mat = h_matrix(M1_POINT)
        assert mat.diagonal() == (FS.exact(4), FS.exact(mpq(-3, 4)))

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_trace_equals_vanishing_cycle_self_pairing(self, m):
        for seed in range(5):
            p = sample_generic(seed, m, 9)
            assert h_matrix(p).trace() == d_self_intersection(p)

    def test_genericity_gates(self):
        with pytest.raises(GenericityError) as err:
            h_entry(rational_point(3, 5, [1]), 0)
        assert err.value.predicate == "G1"
        with pytest.raises(GenericityError) as err:
            h_entry(rational_point(2, 5, [2]), 0)  # alpha == gamma product
        assert err.value.predicate == "G2"
        with pytest.raises(GenericityError) as err:
            h_entry(rational_point(3, 1, [2]), 0)
        assert err.value.predicate == "G3"


class TestDSelfIntersection:
    def test_m1_hand_value(self):
        # (alpha*beta - gamma) / ((beta-1)(alpha-gamma)) = 13/4
        assert d_self_intersection(M1_POINT) == FS.exact(mpq(13, 4))
        assert FS.exact(4) + FS.exact(mpq(-3, 4)) == FS.exact(mpq(13, 4))

    def test_vanishes_exactly_on_g5_locus(self):
        # m=2: alpha*beta = -prod gamma makes the numerator vanish
        p = rational_point(2, -5, [2, 5])
        assert d_self_intersection(p).is_zero()


class TestChamberPairing:
    def test_empty_chamber_value(self):
        p = rational_point(2, 3, [5, 7])
        # (-1)^|I| / ((1-5)(1-7)) with |I| = 0
        assert ih_delta_D(p, 0, 0) == FS.exact(mpq(1, 24))
        assert ih_delta_D(p, 0b11, 0) == FS.exact(mpq(1, 24))
        assert ih_delta_D(p, 0b01, 0) == FS.exact(mpq(-1, 24))

    def test_full_chamber_column_is_h_diagonal(self):
        p = sample_generic(2, 3, 9)
        full = (1 << 3) - 1
        for s in basis_order(3):
            assert ih_delta_D(p, s.bits, full) == h_entry(p, s.bits)

    def test_hand_value_m2(self):
        # I = I' = {1} at (2, 3, (5, 7)); raw double sum gives the same 1/12
        p = rational_point(2, 3, [5, 7])
        assert ih_delta_D(p, 0b01, 0b01) == FS.exact(mpq(1, 12))
        assert ih_delta_D_raw(p, 0b01, 0b01) == FS.exact(mpq(1, 12))

    def test_vanishing_iff_disjoint(self):
        p = sample_generic(9, 3, 9)
        order = basis_order(3)
        full = (1 << 3) - 1
        for I in order:
            for Ip in order:
                if Ip.bits in (0, full):
                    continue
                value = ih_delta_D(p, I.bits, Ip.bits)
                assert value.is_zero() == (I.bits & Ip.bits == 0)

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_raw_equals_simplified_everywhere(self, m):
        full = (1 << m) - 1
        for seed in range(4):
            p = sample_generic(seed, m, 9)
            for I in basis_order(m):
                for Ip in basis_order(m):
                    if Ip.bits == full:
                        continue
                    assert ih_delta_D(p, I.bits, Ip.bits) == ih_delta_D_raw(
                        p, I.bits, Ip.bits
                    )

    def test_raw_rejects_full_column(self):
        p = sample_generic(0, 2, 9)
        with pytest.raises(ValueError):
            ih_delta_D_raw(p, 0, 0b11)


class TestLambda0Matrix:
    def test_m1_hand_matrix(self):
        # rows (empty, {1}) x columns (empty, {1})
        mat = lambda0_matrix(M1_POINT)
        inv = FS.exact(mpq(-1, 1))  # 1/(1-gamma) with gamma=2
        assert mat.rows[0][0] == inv
        assert mat.rows[1][0] == -inv
        assert mat.rows[0][1] == FS.exact(4)
        assert mat.rows[1][1] == FS.exact(mpq(-3, 4))

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_column_sums_vanish_except_full(self, m):
        p = sample_generic(21, m, 9)
        mat = lambda0_matrix(p)
        n = mat.n
        for j in range(n):
            total = FS.exact(0)
            for i in range(n):
                total = total + mat.rows[i][j]
            if j == n - 1:
                assert total == d_self_intersection(p)
            else:
                assert total.is_zero()


class TestPairingWithD:
    def test_all_ones_gives_self_pairing(self):
        p = sample_generic(4, 2, 9)
        assert pairing_with_D(p, CycleVector.ones(2)) == d_self_intersection(p)

    def test_unit_vectors_give_h_entries(self):
        p = sample_generic(4, 2, 9)
        for pos, s in enumerate(basis_order(2)):
            assert pairing_with_D(p, CycleVector.unit(2, pos)) == h_entry(p, s.bits)

    def test_zero_vector(self):
        p = sample_generic(4, 2, 9)
        assert pairing_with_D(p, CycleVector.zero(2)).is_zero()

    def test_linearity(self):
        p = sample_generic(6, 2, 9)
        x = CycleVector(2, [FS.exact(1), FS.exact(2), FS.exact(-1), FS.exact(0, 1)])
        y = CycleVector(2, [FS.exact(0), FS.exact(1, 1), FS.exact(3), FS.exact(-2)])
        lhs = pairing_with_D(p, x + y)
        assert lhs == pairing_with_D(p, x) + pairing_with_D(p, y)
