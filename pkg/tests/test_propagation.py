import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hsf.frames import frame_bounds
from hsf.propagation import (
    Check,
    run_collapse_study,
    run_duality_study,
    run_pivot_adjoint_suite,
    run_propagation_suite,
    run_transfer_suite,
    run_unitarity_suite,
)
from hsf.scale import make_scale
from hsf.sequences import SequenceFamily, canonical_basis, random_bessel, riesz_from_operator, weighted_basis

NS = [8, 16, 32, 64]


def basis(sc):
    return canonical_basis(sc, 0)


def by_claim(report):
    return {c.claim: c for c in report.checks}


# ---------------------------------------------------------------- transfer


@pytest.mark.parametrize("r", [-3, -1, 0, 2, 4])
def test_transfer_of_orthonormal_basis(r):
    sc = make_scale("shifted_quadratic", 24)
    rep = run_transfer_suite(sc, weighted_basis(sc, 1, -0.5), 1, r, tolerance=1e-12)
    assert rep.passed
    assert by_claim(rep)["orthonormal_basis_transfer"].value <= 1e-12
    assert all(v <= 1e-12 for v in rep.identity_residuals.values())


def test_transfer_of_random_bessel_family():
    sc = make_scale("linear", 32)
    rep = run_transfer_suite(sc, random_bessel(sc, 1, 48, 7), 1, -1)
    assert rep.passed
    before, after = rep.bound_pairs
    assert after.upper == pytest.approx(before.upper, rel=1e-10)
    assert after.lower == pytest.approx(before.lower, rel=1e-10)


def test_transfer_with_equal_indices_is_exact():
    sc = make_scale("linear", 16)
    rep = run_transfer_suite(sc, random_bessel(sc, 2, 20, 1), 2, 2)
    for name in ("analysis_transfer", "synthesis_transfer", "frame_operator_transfer", "gram_transfer"):
        assert rep.identity_residuals[name] == 0.0


def test_transfer_of_riesz_family():
    sc = make_scale("linear", 12)
    fam = riesz_from_operator(sc, 0, np.diag(np.arange(1.0, 13)))
    rep = run_transfer_suite(sc, fam, 0, -2)
    assert rep.passed and "riesz_orthonormal_transfer" in by_claim(rep)


@given(st.integers(0, 10_000), st.integers(-3, 3), st.integers(-3, 3))
def test_transfer_passes_for_random_families(seed, p, r):
    sc = make_scale("shifted_quadratic", 10)
    rep = run_transfer_suite(sc, random_bessel(sc, p, 14, seed), p, r, n_random=10)
    assert rep.passed, [c.claim for c in rep.checks if not c.passed]


def test_transfer_report_is_json_ready():
    sc = make_scale("linear", 8)
    d = run_transfer_suite(sc, random_bessel(sc, 0, 10, 0), 0, 1, n_random=5).to_dict()
    json.dumps(d, allow_nan=False)
    assert d["pass"] and {"study", "claim", "value", "threshold", "passed"} <= set(d["checks"][0])


# ---------------------------------------------------------------- propagation


def test_propagation_on_canonical_basis():
    n = 20
    sc = make_scale("linear", n)
    rep = run_propagation_suite(sc, canonical_basis(sc, 1), -1, 0, 1)
    assert rep.passed
    assert rep.bounds[-1].upper == 1.0 and rep.bounds[0].upper == 1.0
    assert rep.bounds[-1].lower == pytest.approx(1 / n, rel=1e-14) and rep.bounds[0].lower == 1.0


def test_propagation_equal_indices_are_equalities():
    sc = make_scale("linear", 10)
    rep = run_propagation_suite(sc, random_bessel(sc, 1, 15, 2), 1, 1, 1)
    assert rep.passed
    for c in rep.monotonicity_checks:
        assert c.value == 0.0


def test_propagation_rank_deficient_family():
    sc = make_scale("linear", 10)
    rng = np.random.default_rng(0)
    psi = SequenceFamily(rng.standard_normal((10, 3)) @ rng.standard_normal((3, 12)), 2)
    rep = run_propagation_suite(sc, psi, -2, 0, 2)
    assert rep.passed
    assert not any(b.complete for b in rep.bounds.values())
    assert all(b.lower == 0.0 for b in rep.bounds.values())
    assert "upper_semi_frame_downward" not in by_claim(rep)


@given(st.integers(0, 10_000), st.lists(st.integers(-3, 3), min_size=3, max_size=3).map(sorted))
def test_propagation_inequalities_hold(seed, triple):
    r, p, m = triple
    sc = make_scale("shifted_quadratic", 12)
    rep = run_propagation_suite(sc, random_bessel(sc, m, 16, seed), r, p, m, n_random=10)
    assert rep.passed, [c.claim for c in rep.checks if not c.passed]


def test_propagation_precondition():
    sc = make_scale("linear", 4)
    with pytest.raises(ValueError):
        run_propagation_suite(sc, canonical_basis(sc, 0), 1, 0, 2)
    with pytest.raises(ValueError):
        run_propagation_suite(sc, canonical_basis(sc, 0), -1, 0, 1)


def test_a_violated_inequality_fails_the_check():
    # a lower bound that grows downward is impossible; feed the suite a family
    # declared at the wrong index and an absurd negative tolerance to see it fail
    sc = make_scale("linear", 6)
    rep = run_propagation_suite(sc, canonical_basis(sc, 1), 0, 0, 1, tolerance=-0.5)
    assert not rep.passed
    assert any(not c.passed for c in rep.monotonicity_checks)


# ---------------------------------------------------------------- collapse


def test_collapse_linear_closed_form():
    rep = run_collapse_study("linear", basis, 0, -1, NS)
    assert rep.passed
    np.testing.assert_allclose(rep.lower_bound_at_q, [1 / n for n in NS], rtol=1e-12)
    assert rep.lower_slope == pytest.approx(-1.0, abs=0.01)
    np.testing.assert_allclose(rep.iota_inverse_bound, NS, rtol=1e-12)
    np.testing.assert_allclose(np.square(rep.iota_inverse_norm), NS, rtol=1e-12)
    assert "consistent with" in rep.interpretation and not rep.trivial_scale


def test_collapse_trivial_scale():
    rep = run_collapse_study("constant", basis, 0, -1, NS)
    assert rep.passed and rep.trivial_scale
    assert rep.interpretation.startswith("scale is trivial")
    assert rep.lower_bound_at_q == [1.0] * 4


def test_collapse_exponential_scale():
    rep = run_collapse_study("exponential", basis, 0, -1, NS)
    assert rep.passed
    np.testing.assert_allclose(rep.lower_bound_at_q, [2.0**-n for n in NS], rtol=1e-12)
    assert rep.lower_slope < -5


def test_collapse_rejects_bad_indices():
    with pytest.raises(ValueError):
        run_collapse_study("linear", basis, 0, 0, NS)


def test_collapse_report_serializes():
    d = run_collapse_study("linear", basis, 0, -1, NS).to_dict()
    json.dumps(d, allow_nan=False)


# ---------------------------------------------------------------- duality


def test_duality_orthonormal_basis():
    sc = make_scale("linear", 16)
    rep = run_duality_study(sc, weighted_basis(sc, 0, 0.0), 0, 0, 0)
    assert rep.passed and rep.reconstruction_residuals[0] <= 1e-15


def test_duality_canonical_basis_corrected_reconstruction():
    sc = make_scale("linear", 16)
    rep = run_duality_study(sc, canonical_basis(sc, 0), -1, -1, 0)
    assert rep.passed
    assert rep.reconstruction_residuals[-1] <= 1e-15


@given(st.integers(0, 10_000))
def test_duality_random_complete_families(seed):
    sc = make_scale("linear", 32)
    rep = run_duality_study(sc, random_bessel(sc, 0, 48, seed), -2, -1, 0, n_random=20)
    assert rep.passed
    assert max(rep.reconstruction_residuals.values()) <= 1e-8


def test_duality_needs_complete_family():
    sc = make_scale("linear", 6)
    with pytest.raises(ValueError):
        run_duality_study(sc, SequenceFamily(np.eye(6)[:, :2], 0), -1, 0, 0)


# ---------------------------------------------------------------- scale-level suites


@pytest.mark.parametrize("formula", ["linear", "shifted_quadratic", "exponential"])
def test_unitarity_suite(formula):
    rep = run_unitarity_suite(make_scale(formula, 32), n_random=20)
    assert rep.passed and rep.worst <= 1e-12
    assert len(rep.checks) == 2 * 81


@pytest.mark.parametrize("formula", ["linear", "shifted_quadratic"])
def test_pivot_adjoint_suite(formula):
    rep = run_pivot_adjoint_suite(make_scale(formula, 12), n_ops=10)
    assert rep.passed
    assert {c.claim for c in rep.checks} == {
        "pairing", "double_adjoint", "norm_preserved", "product_rule", "hilbert_double_adjoint"}


def test_check_serialization_maps_non_finite_to_none():
    d = Check("x", "y", math.inf, math.nan, False).to_dict()
    assert d["value"] is None and d["threshold"] is None
