import mpmath
import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from fc_monodromy import (
    FieldScalar,
    ParamPoint,
    SamplingError,
    SeriesParams,
    check_genericity,
    dualize,
    param_exponentials,
    sample_generic,
)

FS = FieldScalar


def exact_scalars(max_num=8, allow_zero=True):
    nums = st.integers(min_value=-max_num, max_value=max_num)
    dens = st.integers(min_value=1, max_value=max_num)
    base = st.tuples(nums, dens, nums, dens).map(
        lambda t: FS.exact(mpq(t[0], t[1]), mpq(t[2], t[3]))
    )
    if allow_zero:
        return base
    return base.filter(lambda s: not s.is_zero())


class TestFieldAxioms:
    @given(a=exact_scalars(), b=exact_scalars(), c=exact_scalars())
    def test_ring_axioms(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert a + b == b + a
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c

    @given(a=exact_scalars(allow_zero=False))
    def test_multiplicative_inverse(self, a):
        assert a * a.inverse() == 1
        assert a / a == 1

    @given(a=exact_scalars())
    def test_additive_inverse(self, a):
        assert a + (-a) == 0

    @given(a=exact_scalars(allow_zero=False), n=st.integers(min_value=-6, max_value=6))
    def test_integer_powers(self, a, n):
        direct = FS.exact(1)
        base = a if n >= 0 else a.inverse()
        for _ in range(abs(n)):
            direct = direct * base
        assert a**n == direct


class TestScalarBasics:
    def test_exact_equality_is_decidable(self):
        assert FS.exact(mpq(1, 3)) + FS.exact(mpq(1, 6)) == FS.exact(mpq(1, 2))
        assert FS.exact(2, 3) != FS.exact(2, -3)

    def test_mixed_kind_arithmetic_rejected(self):
        with pytest.raises(TypeError):
            FS.exact(1) + FS.approx(1, 0, 64)
        with pytest.raises(TypeError):
            FS.approx(1, 0, 64) * FS.exact(2)

    def test_zero_inverse_raises(self):
        with pytest.raises(ZeroDivisionError):
            FS.exact(0).inverse()

    def test_float_kind_carries_precision(self):
        x = FS.approx("0.5", "0.25", 128)
        assert x.prec == 128
        assert (x + x).prec == 128

    @pytest.mark.parametrize(
        "text",
        ["3/2", "-7", "0", "3/2+1/5*i", "-3/2-1/5*i", "4*i", "-1/3*i", "2-3*i"],
    )
    def test_string_round_trip(self, text):
        s = FS.from_string(text)
        assert FS.from_string(s.to_string()) == s

    def test_bad_strings_rejected(self):
        for text in ["", "x", "1/2+*i", "1//2"]:
            with pytest.raises(ValueError):
                FS.from_string(text)


def point(alpha, beta, gamma):
    gam = tuple(FS.from_string(g) for g in gamma)
    return ParamPoint(
        m=len(gam), alpha=FS.from_string(alpha), beta=FS.from_string(beta), gamma=gam
    )


class TestGenericity:
    def test_generic_point_has_no_violations(self):
        assert check_genericity(point("2", "3", ["5"])) == []

    def test_alpha_equal_full_gamma_product_is_g2(self):
        violations = check_genericity(point("10", "3", ["2", "5"]))
        assert [(v.predicate, v.witness) for v in violations] == [("G2", (1, 2))]

    def test_gamma_one_is_g1(self):
        violations = check_genericity(point("2", "3", ["1", "5"]))
        assert ("G1", 1) in [(v.predicate, v.witness) for v in violations]

    def test_g4_and_g5(self):
        # alpha = -gamma_1*gamma_2 trips G4; alpha*beta = -prod trips G5 (m=2)
        assert "G4" in {v.predicate for v in check_genericity(point("-10", "3", ["2", "5"]))}
        assert "G5" in {v.predicate for v in check_genericity(point("2", "-5", ["2", "5"]))}


class TestDualize:
    def test_inverts_each_entry(self):
        p = point("2", "3", ["5"])
        q = dualize(p)
        assert q.alpha == FS.exact(mpq(1, 2))
        assert q.gamma[0] == FS.exact(mpq(1, 5))

    def test_gamma_order_preserved(self):
        p = point("2", "5", ["3", "1/3"])
        q = dualize(p)
        assert q.gamma[0] == FS.exact(mpq(1, 3))
        assert q.gamma[1] == FS.exact(3)

    def test_all_ones_point_is_fixed(self):
        p = point("1", "1", ["1", "1"])
        assert dualize(p) == p

    @pytest.mark.parametrize("seed", range(8))
    def test_involution(self, seed):
        p = sample_generic(seed, 3, 9)
        assert dualize(dualize(p)) == p


class TestSampleGeneric:
    def test_deterministic_in_seed(self):
        assert sample_generic(1, 2, 100) == sample_generic(1, 2, 100)
        assert sample_generic(1, 2, 100) != sample_generic(2, 2, 100)

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_output_is_generic(self, m):
        for seed in range(5):
            assert check_genericity(sample_generic(seed, m, 9)) == []

    def test_impossible_configuration_errors(self):
        # max_numerator=1 only yields +-1 entries, which always violate G2
        with pytest.raises(SamplingError):
            sample_generic(1, 3, 1)


class TestParamExponentials:
    def make(self, a):
        return SeriesParams(
            m=1, a=FS.from_string(a), b=FS.exact(mpq(1, 3)), c=(FS.exact(mpq(1, 7)),)
        )

    def test_zero_maps_to_one(self):
        p = param_exponentials(self.make("0"), 128)
        assert p.alpha.re == 1 and p.alpha.im == 0

    def test_half_maps_to_minus_one(self):
        p = param_exponentials(self.make("1/2"), 192)
        tol = mpmath.mpf(2) ** (1 - 192)
        assert abs(p.alpha.re + 1) <= tol and abs(p.alpha.im) <= tol

    def test_quarter_maps_to_i(self):
        p = param_exponentials(self.make("1/4"), 256)
        tol = mpmath.mpf(2) ** (1 - 256)
        assert abs(p.alpha.re) <= tol and abs(p.alpha.im - 1) <= tol

    def test_precision_floor(self):
        with pytest.raises(ValueError):
            param_exponentials(self.make("0"), 32)

    def test_unit_circle_inverse_pairing(self):
        # exp(2*pi*i*(1-c)) * exp(2*pi*i*c) == 1 to working precision
        prec = 192
        sp = self.make("1/3")
        p = param_exponentials(sp, prec)
        flipped = SeriesParams(m=1, a=sp.a, b=sp.b, c=(FS.exact(1) - sp.c[0],))
        q = param_exponentials(flipped, prec)
        prod = p.gamma[0] * q.gamma[0]
        tol = mpmath.mpf(2) ** (4 - prec)
        assert abs(prod.re - 1) <= tol and abs(prod.im) <= tol
