"""Isotropy decision, Witt decomposition, oracle consistency."""

import random

import pytest

from qchar2.errors import SingularInput
from qchar2.fields import tower, wp
from qchar2.forms import QuadraticForm, QuadraticPfister, orth_sum, scale
from qchar2.parsing import parse_element, parse_form
from qchar2.witt import (
    brute_search,
    is_hyperbolic,
    isotropy,
    verify_certificate,
    witt_decompose,
    witt_equivalent,
    witt_index,
)

F2 = tower(1)
F4 = tower(2)
F2T = tower(1, ("t",))
F2TT = tower(1, ("t1", "t2"))


def el(tw, s):
    return parse_element(tw, s)


class TestFiniteField:
    def test_binary_anisotropic(self):
        f = parse_form(F2, "[1,1]")
        v = isotropy(f)
        assert v.is_anisotropic
        assert verify_certificate(f, v)

    def test_hyperbolic_plane(self):
        f = parse_form(F2, "[1,0]")
        v = isotropy(f)
        assert v.is_isotropic
        assert v.witness is not None
        assert f.evaluate(v.witness).is_zero()

    def test_dim4_always_isotropic(self):
        for text in ["[1,1]+[1,1]", "[1,1]+z*[1,z]", "[1,z]+(z+1)*[1,z]"]:
            tw = F4 if "z" in text else F2
            f = parse_form(tw, text)
            v = isotropy(f)
            assert v.is_isotropic and v.witness is not None
            assert f.evaluate(v.witness).is_zero()

    def test_quasilinear_perfect_field(self):
        f = QuadraticForm(F4, (), (F4.one(), F4.base_element(2)))
        v = isotropy(f)
        assert v.is_isotropic and f.evaluate(v.witness).is_zero()

    def test_mixed_finite(self):
        f = QuadraticForm(F2, ((F2.one(), F2.one()),), (F2.one(),))
        v = isotropy(f)
        assert v.is_isotropic  # [1,1] represents 1 = the quasilinear entry


class TestLaurentDecider:
    def test_spec_pfister_anisotropic(self):
        f = QuadraticPfister((el(F2T, "t"),), F2T.one()).expand()
        v = isotropy(f)
        assert v.is_anisotropic
        assert verify_certificate(f, v)
        # independent oracle: large-budget brute search finds nothing
        assert brute_search(f, 10 ** 4).kind == "undecided"

    def test_wp_slot_isotropic(self):
        f = parse_form(F2T, "[1,t]")
        v = isotropy(f)
        assert v.is_isotropic
        assert verify_certificate(f, v)

    def test_wild_binary_anisotropic(self):
        f = parse_form(F2T, "[1,1/t]")
        v = isotropy(f)
        assert v.is_anisotropic
        assert v.certificate["rule"] == "wild-binary"
        assert verify_certificate(f, v)

    def test_quasilinear_one_plus_t(self):
        f = QuadraticForm(F2T, (), (F2T.one(), el(F2T, "1+t")))
        assert isotropy(f).is_anisotropic

    def test_quasilinear_dependent(self):
        f = QuadraticForm(F2T, (), (F2T.one(), el(F2T, "t^2")))
        v = isotropy(f)
        assert v.is_isotropic and f.evaluate(v.witness).is_zero()

    def test_two_level_pfister(self):
        f = QuadraticPfister((el(F2TT, "t1"), el(F2TT, "t2")), F2TT.one()).expand()
        v = isotropy(f)
        assert v.is_anisotropic
        assert verify_certificate(f, v)

    def test_scaled_does_not_change_verdict(self):
        f = QuadraticPfister((el(F2T, "t"),), F2T.one()).expand()
        g = scale(el(F2T, "t"), f)
        assert isotropy(g).is_anisotropic


class TestWittDecomposition:
    def test_char2_doubling(self):
        f = parse_form(F2T, "[1,t+1]+[1,t+1]")
        d = witt_decompose(f)
        assert d.index == 2 and d.kernel_dim == 0

    def test_anisotropic_kernel_is_input_class(self):
        f = QuadraticPfister((el(F2T, "t"),), F2T.one()).expand()
        d = witt_decompose(f)
        assert d.index == 0
        assert d.kernel_dim == 4

    def test_last_slot_zero_hyperbolic(self):
        f = QuadraticPfister((el(F2T, "t"),), F2T.zero()).expand()
        d = witt_decompose(f)
        assert d.index == 2 and d.kernel_dim == 0

    def test_hyperbolic_dim_2k(self):
        f = parse_form(F2T, "[1,0]+[1,0]+[1,0]")
        assert witt_index(f) == 3

    def test_wp_last_slot_pfister(self):
        s = el(F2T, "t/(1+t)")
        f = QuadraticPfister((el(F2T, "t"),), wp(s)).expand()
        assert is_hyperbolic(f)

    def test_witt_equivalent_reflexive(self):
        f = QuadraticPfister((el(F2T, "t"),), F2T.one()).expand()
        assert witt_equivalent(f, f)

    def test_witt_equivalent_rejects_quasilinear(self):
        f = QuadraticForm(F2T, (), (F2T.one(),))
        with pytest.raises(SingularInput):
            witt_equivalent(f, f)

    def test_index_monotone_under_plane(self):
        rng = random.Random(17)
        pool = ["[1,t]", "t*[1,1]+[1,1]", "<<t,1]]", "[1,1+t]+t*[1,t^2]"]
        for text in pool:
            f = parse_form(F2T, text)
            g = orth_sum(f, parse_form(F2T, "[1,0]"))
            assert witt_index(g) == witt_index(f) + 1

    def test_decomposition_consistency(self):
        # original ~ index x H + kernel, checked through the decider itself
        f = parse_form(F2TT, "[1,1]+t1*[1,1]+[1,1]+t2*[1,t1]")
        d = witt_decompose(f)
        assert 2 * d.index + d.kernel_dim == f.dim
        recombined = orth_sum(f, d.kernel)
        assert is_hyperbolic(recombined)

    def test_quasilinear_defect(self):
        f = QuadraticForm(
            F2T,
            ((F2T.one(), F2T.one()),),
            (F2T.one(), el(F2T, "t^2"), el(F2T, "t")),
        )
        d = witt_decompose(f)
        # t^2 = t^2 * 1 is F^2-dependent on the entry 1
        assert d.index == 1
        assert d.kernel.quasilinear == (F2T.one(), el(F2T, "t"))


class TestMixedCertificates:
    def test_hensel_level_ignores_unrelated_entries(self):
        # regression: the quasilinear entry lives at level 2 but the
        # nonsingular zero is certified entirely at level 1; the
        # certificate must verify at full dimension
        f = QuadraticForm(
            F2TT,
            ((el(F2TT, "t1^2+t1"), el(F2TT, "t1^3+t1")),),
            (el(F2TT, "t2+t1+1"),),
        )
        v = isotropy(f)
        assert v.is_isotropic
        assert verify_certificate(f, v)

    def test_subform_certificates_carry_dimension(self):
        rng = random.Random(71)
        from qchar2.sampling import Sampler

        sampler = Sampler(F2TT, 71)
        for _ in range(60):
            f = QuadraticForm(
                F2TT,
                tuple((sampler.tame_b(), sampler.tame_a())
                      for _ in range(1 + rng.randrange(3))),
                tuple(sampler.tame_b() for _ in range(rng.randrange(3))),
            )
            v = isotropy(f, 2000)
            if v.decided:
                assert verify_certificate(f, v), v.certificate


class TestBruteSearch:
    def test_plane_quick(self):
        f = parse_form(F2, "[1,0]")
        v = brute_search(f, 10)
        assert v.is_isotropic and f.evaluate(v.witness).is_zero()

    def test_anisotropic_stays_undecided(self):
        f = parse_form(F2, "[1,1]")
        assert brute_search(f, 10 ** 4).kind == "undecided"

    def test_hensel_certificate_for_wp_slot(self):
        f = parse_form(F2T, "[1,t]")
        v = brute_search(f, 10 ** 4)
        assert v.is_isotropic
        assert verify_certificate(f, v)

    def test_exact_witness_verifies(self):
        f = parse_form(F2T, "[1,1]+[1,1+t]")
        v = brute_search(f, 10 ** 4)
        if v.is_isotropic and v.witness is not None:
            assert f.evaluate(v.witness).is_zero()

    def test_never_anisotropic(self):
        for text in ["[1,1]", "<<t,1]]", "[1,1/t]"]:
            f = parse_form(F2T, text)
            assert brute_search(f, 500).kind in ("isotropic", "undecided")


class TestPfisterDichotomy:
    def test_sampled(self):
        rng = random.Random(23)
        # tame pool: slots may carry poles (they strip to t * unit) but
        # the last slot stays integral
        slot_pool = ["1", "t", "1+t", "t^2+t", "1/t", "1+t^2", "t^2+t^3"]
        last_pool = ["0", "1", "t", "1+t", "t^2+t", "1+t^2"]
        for _ in range(40):
            fold = rng.choice([1, 2])
            slots = tuple(el(F2T, rng.choice(slot_pool)) for _ in range(fold - 1))
            last = el(F2T, rng.choice(last_pool))
            f = QuadraticPfister(slots, last).expand()
            v = isotropy(f)
            assert v.decided
            assert v.is_isotropic == is_hyperbolic(f)

    def test_square_slot_hyperbolic_even_with_wild_last(self):
        f = QuadraticPfister((el(F2T, "t^2+1"),), el(F2T, "1/t")).expand()
        v = isotropy(f)
        assert v.is_isotropic and v.witness is not None
        assert f.evaluate(v.witness).is_zero()
        assert is_hyperbolic(f)
