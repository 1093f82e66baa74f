import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mhrev.errors import DimensionMismatch, ValidationFailure, ZeroMass
from mhrev.kernels import build_m1, build_m2
from mhrev.mis import build_mis, mis_cross_validate, mis_spectrum
from mhrev.oracles import random_target
from mhrev.spectral import reversible_spectrum


@pytest.fixture
def example_b():
    return build_mis([1 / 3, 1 / 3, 1 / 3], [1 / 2, 1 / 3, 1 / 6])


def test_example_values(example_b):
    spec = mis_spectrum(example_b)
    np.testing.assert_allclose(spec.gamma, [1 / 3, 1 / 6], atol=1e-15)
    np.testing.assert_allclose(spec.beta, [-1 / 6, -1.0], atol=1e-15)
    np.testing.assert_allclose(spec.m1_eigenvalues, [-2 / 3, -5 / 6], atol=1e-15)
    np.testing.assert_allclose(spec.m2_eigenvalues, [-7 / 6, -2.0], atol=1e-15)
    r1, r2 = spec.l2_rates()
    assert r1 == pytest.approx(2 / 3, abs=1e-15)
    assert r2 == pytest.approx(7 / 6, abs=1e-15)


def test_example_numeric(example_b):
    q = example_b.proposal_generator()
    mu = example_b.target
    lam1 = reversible_spectrum(build_m1(q, mu), mu).eigenvalues
    lam2 = reversible_spectrum(build_m2(q, mu), mu).eigenvalues
    np.testing.assert_allclose(lam1, [0, 2 / 3, 5 / 6], atol=1e-12)
    np.testing.assert_allclose(lam2, [0, 7 / 6, 2], atol=1e-12)


def test_unsorted_labels_round_trip():
    inst = build_mis([0.2, 0.5, 0.3], [0.1, 0.3, 0.6])
    assert not inst.is_sorted
    # weights 0.5, 0.6, 2.0 -> descending order 2, 1, 0
    np.testing.assert_array_equal(inst.order, [2, 1, 0])
    assert mis_cross_validate(inst).passed


def test_ties_are_stable():
    inst = build_mis([0.25] * 4, [0.25] * 4)
    np.testing.assert_array_equal(inst.order, np.arange(4))
    spec = mis_spectrum(inst)
    # target equals proposal: every non-zero eigenvalue is -1
    np.testing.assert_allclose(spec.m1_eigenvalues, -1.0, atol=1e-15)
    np.testing.assert_allclose(spec.m2_eigenvalues, -1.0, atol=1e-15)
    assert mis_cross_validate(inst).passed


def test_errors():
    with pytest.raises(ZeroMass):
        build_mis([0.5, 0.5], [1.0, 0.0])
    with pytest.raises(DimensionMismatch):
        build_mis([0.5, 0.5], [0.2, 0.3, 0.5])
    with pytest.raises(DimensionMismatch):
        build_mis([1.0], [1.0])


def test_cross_validation_reports_index(example_b):
    with pytest.raises(ValidationFailure) as info:
        mis_cross_validate(example_b, tol=-1.0)
    assert info.value.index is not None


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 50), st.integers(0, 2**31))
def test_closed_form_matches_eigensolver(m, seed):
    rng = np.random.default_rng(seed)
    inst = build_mis(random_target(m, rng), random_target(m, rng))
    res = mis_cross_validate(inst)
    assert res.passed
    assert max(res.m1_eigenvalue_error, res.m2_eigenvalue_error) <= 1e-10


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 20), st.integers(0, 2**31))
def test_spectral_structure(m, seed):
    rng = np.random.default_rng(seed)
    inst = build_mis(random_target(m, rng), random_target(m, rng))
    spec = mis_spectrum(inst)
    # gamma and beta are non-increasing; non-zero eigenvalues are negative
    assert np.all(np.diff(spec.gamma) <= 1e-12)
    assert np.all(np.diff(spec.beta) <= 1e-12)
    assert np.all(spec.m1_eigenvalues < 0) and np.all(spec.m2_eigenvalues < 0)
    # Peskun: sorted spectra of -M1 sit below those of -M2
    assert np.all(np.sort(-spec.m1_eigenvalues) <= np.sort(-spec.m2_eigenvalues) + 1e-12)
    mu = inst.target
    for vecs in (spec.m1_eigenvectors, spec.m2_eigenvectors):
        np.testing.assert_allclose(mu @ vecs, 0.0, atol=1e-13)
