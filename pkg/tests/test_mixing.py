import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from mhrev.core import stationary_distribution, validate_generator
from mhrev.errors import EpsilonOutOfRange, NegativeTime, NonPositiveAlpha, NotBirthDeath, NotIrreducible, NotReversible
from mhrev.kernels import build_m1, build_m2
from mhrev.mixing import (
    SstDistribution,
    bd_sst,
    pure_birth_generator,
    separation_distance,
    transition_semigroup,
    tv_mixing_time,
    worst_tv,
)
from mhrev.oracles import InstanceSpec, random_irreducible_generator

from conftest import instances

LN2 = math.log(2.0)


class TestSemigroup:
    def test_two_state(self, q_a, half):
        p = transition_semigroup(build_m1(q_a, half), LN2 / 2)
        np.testing.assert_allclose(p, [[0.75, 0.25], [0.25, 0.75]], atol=1e-13)

    def test_time_zero(self, q_c):
        np.testing.assert_array_equal(transition_semigroup(q_c, 0.0), np.eye(3))

    def test_negative_time(self, q_c):
        with pytest.raises(NegativeTime):
            transition_semigroup(q_c, -1.0)

    def test_zero_generator(self):
        np.testing.assert_array_equal(transition_semigroup([[0.0, 0.0], [0.0, 0.0]], 3.0), np.eye(2))

    @pytest.mark.parametrize("t", [0.01, 0.7, 5.0, 80.0])
    def test_matches_expm(self, q_c, t):
        np.testing.assert_allclose(transition_semigroup(q_c, t), expm(q_c.rates * t), atol=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(instances(), st.floats(0.0, 5.0), st.floats(0.0, 5.0))
    def test_stochastic_and_semigroup_property(self, inst, s, t):
        q, _ = inst
        ps, pt, pst = (transition_semigroup(q, x) for x in (s, t, s + t))
        assert np.all(pst >= 0)
        np.testing.assert_allclose(pst.sum(axis=1), 1.0, atol=1e-12)
        np.testing.assert_allclose(ps @ pt, pst, atol=1e-11)


class TestMixingTime:
    def test_two_state(self, q_a, half):
        assert tv_mixing_time(build_m1(q_a, half), half) == pytest.approx(LN2 / 2, abs=1e-8)
        assert tv_mixing_time(build_m2(q_a, half), half) == pytest.approx(LN2 / 4, abs=1e-8)

    def test_single_state(self):
        assert tv_mixing_time([[0.0]], [1.0]) == 0.0

    def test_epsilon_range(self, q_a, half):
        with pytest.raises(EpsilonOutOfRange):
            tv_mixing_time(q_a, half, 1.0)
        with pytest.raises(EpsilonOutOfRange):
            tv_mixing_time(q_a, half, 0.0)

    def test_reducible(self):
        with pytest.raises(NotIrreducible):
            tv_mixing_time([[-1, 1], [0, 0]], [0.5, 0.5])

    @settings(max_examples=20, deadline=None)
    @given(instances(max_n=6))
    def test_bracket(self, inst):
        q, _ = inst
        pi = stationary_distribution(q)
        t = tv_mixing_time(q, pi)
        assert worst_tv(q, pi, t) < 0.25 + 1e-12
        if t > 0:
            assert worst_tv(q, pi, max(0.0, t - 2e-8)) >= 0.25 - 1e-9


class TestSeparation:
    def test_two_state(self, q_a, half):
        assert separation_distance(build_m1(q_a, half), half, 0, LN2 / 2) == pytest.approx(0.5, abs=1e-13)

    def test_at_zero(self, q_c):
        assert separation_distance(q_c, stationary_distribution(q_c), 0, 0.0) == 1.0


class TestBirthDeathSst:
    def test_m1_example(self, q_c, uniform3):
        d = bd_sst(build_m1(q_c, uniform3), uniform3)
        np.testing.assert_allclose(d.rates, [1.0, 3.0], atol=1e-13)
        assert d.mean == pytest.approx(4 / 3, abs=1e-13)
        assert d.variance == pytest.approx(10 / 9, abs=1e-13)
        assert d.laplace(1.0) == pytest.approx(0.375, abs=1e-13)

    def test_m2_example(self, q_c, uniform3):
        d = bd_sst(build_m2(q_c, uniform3), uniform3)
        np.testing.assert_allclose(d.rates, [5 - math.sqrt(7), 5 + math.sqrt(7)], atol=1e-13)
        assert d.mean == pytest.approx(10 / 18, abs=1e-13)
        assert d.laplace(1.0) == pytest.approx(18 / 29, abs=1e-13)

    def test_rejects(self, q_a, half, q_c, uniform3):
        with pytest.raises(NotBirthDeath):
            bd_sst(random_irreducible_generator(InstanceSpec(4, 0)), np.full(4, 0.25))
        with pytest.raises(NotReversible):
            bd_sst(q_c, uniform3)
        with pytest.raises(NonPositiveAlpha):
            bd_sst(build_m1(q_c, uniform3), uniform3).laplace(0.0)

    def test_survival_of_single_exponential(self):
        d = SstDistribution((2.0,))
        for t in (0.0, 0.3, 1.0, 4.0):
            assert d.survival(t) == pytest.approx(math.exp(-2.0 * t), abs=1e-13)

    def test_survival_repeated_rates(self):
        # Erlang(2, 1): P(T > t) = (1 + t) e^{-t}
        d = SstDistribution((1.0, 1.0))
        for t in (0.5, 2.0, 7.0):
            assert d.survival(t) == pytest.approx((1 + t) * math.exp(-t), abs=1e-13)

    def test_pure_birth(self):
        g = pure_birth_generator([1.0, 2.0])
        np.testing.assert_array_equal(g.rates, [[-1, 1, 0], [0, -2, 2], [0, 0, 0]])

    @settings(max_examples=30, deadline=None)
    @given(st.integers(2, 10), st.integers(0, 2**31))
    def test_separation_identity(self, n, seed):
        q = random_irreducible_generator(InstanceSpec(n, seed, "birth-death"))
        pi = stationary_distribution(q)
        d = bd_sst(q, pi)
        for t in np.linspace(0.05, 3.0, 6) * d.mean:
            assert separation_distance(q, pi, 0, t) == pytest.approx(d.survival(t), abs=1e-8)

    def test_moments_by_quadrature(self, q_c, uniform3):
        d = bd_sst(build_m2(q_c, uniform3), uniform3)
        ts = np.linspace(0.0, 30.0, 6001)
        surv = np.array([d.survival(t) for t in ts])
        mean = np.trapezoid(surv, ts) if hasattr(np, "trapezoid") else np.trapz(surv, ts)
        assert mean == pytest.approx(d.mean, abs=1e-5)


def test_rejects_asymmetric_band():
    g = validate_generator([[-1, 1, 0], [0, -1, 1], [0, 1, -1]])
    with pytest.raises(NotBirthDeath):
        bd_sst(g, [1 / 3, 1 / 3, 1 / 3])
