"""Real-valued labels encoded as superpositions, and the learning reduction."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.strategies import integers

import oracles
from phaseboost import (
    ConfigurationError,
    DegenerateResidualError,
    LabelFunction,
    ParameterError,
    Parity,
    agnostic_boost,
    build_psi_D,
    distributional_learn,
    make_distributional_source,
    parity_signs,
    parity_weak_learner,
    phase_state_of,
    postselect_last_qubit,
    recover_labels,
    verify_overlap_window,
)


def scaled_parity_labels(n=6, mask=0b1011, scale=0.6):
    return LabelFunction(n, scale * parity_signs(n, mask))


def random_labels(n, rng):
    return LabelFunction(n, rng.uniform(-1.0, 1.0, size=1 << n))


def parity_boost_learner(child, eps):
    return agnostic_boost(child, parity_weak_learner(), eps, 0.1).decomposition


def test_label_function_validation():
    with pytest.raises(ParameterError):
        LabelFunction(3, np.zeros(7))
    with pytest.raises(ParameterError):
        LabelFunction(3, np.full(8, 1.5))
    lf = LabelFunction(2, np.array([0.5, -0.5, 1.0, 0.0]))
    assert lf.gamma == pytest.approx((0.25 + 0.25 + 1.0) / 4.0)


def test_boolean_labels_round_trip_to_the_phase_state():
    concept = Parity(6, 0b10110)
    lf = LabelFunction.from_concept(concept)
    assert lf.gamma == pytest.approx(1.0)
    state, success = postselect_last_qubit(build_psi_D(lf))
    assert success == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(state.amps, phase_state_of(concept).amps, atol=1e-12)


@given(seed=integers(0, 10**6))
@settings(deadline=None, max_examples=40)
def test_encoding_recovers_the_labels(seed):
    rng = np.random.default_rng(seed)
    lf = random_labels(5, rng)
    back = recover_labels(build_psi_D(lf))
    np.testing.assert_allclose(back.values, lf.values, atol=1e-9)


@given(seed=integers(0, 10**6))
@settings(deadline=None, max_examples=40)
def test_success_mass_formula_and_floor(seed):
    rng = np.random.default_rng(seed)
    lf = random_labels(5, rng)
    _, success = postselect_last_qubit(build_psi_D(lf))
    assert success == pytest.approx(
        oracles.distributional_success_mass(lf.values), abs=1e-12
    )
    assert success >= lf.gamma / 2.0 - 1e-9


def test_degenerate_labels_refuse_post_selection():
    lf = LabelFunction(4, np.zeros(16))
    with pytest.raises(DegenerateResidualError):
        postselect_last_qubit(build_psi_D(lf))


@given(seed=integers(0, 10**6))
@settings(deadline=None, max_examples=40)
def test_overlap_window_contains_the_branch_overlap(seed):
    rng = np.random.default_rng(seed)
    lf = random_labels(5, rng)
    h = np.where(rng.uniform(size=32) < 0.5, 1.0, -1.0)
    report = verify_overlap_window(lf, h)
    assert report.ok
    ref_overlap, ref_lo, ref_hi = oracles.overlap_window(lf.values, h)
    assert report.overlap == pytest.approx(ref_overlap, abs=1e-12)
    assert report.lo == pytest.approx(ref_lo, abs=1e-12)
    assert report.hi == pytest.approx(ref_hi, abs=1e-12)


def test_overlap_window_accepts_concepts_and_checks_length():
    lf = scaled_parity_labels()
    report = verify_overlap_window(lf, Parity(6, 0b1011))
    assert report.ok
    assert report.expectation == pytest.approx(0.6)
    with pytest.raises(ParameterError):
        verify_overlap_window(lf, np.ones(8))


def test_square_root_window_inequality_pointwise():
    u = np.linspace(-1.0, 1.0, 100001)
    root = np.sqrt(1.0 + u)
    assert np.all(1.0 + u / 2.0 - u**2 / 2.0 <= root + 1e-12)
    assert np.all(root <= 1.0 + u / 2.0 + 1e-12)


def test_source_pair_shapes_and_success():
    lf = scaled_parity_labels()
    root, child, success = make_distributional_source(lf)
    assert root.n == 7
    assert child.n == 6
    assert success == pytest.approx(0.2, abs=1e-12)


def test_child_copies_charge_the_root_at_the_postselection_rate():
    lf = scaled_parity_labels()
    root, child, success = make_distributional_source(lf, mode="exact")
    child.consume(50, "swap_test")
    ledger = root.ledger.as_dict()
    assert ledger["swap_test"] == 50
    assert ledger["postselect_attempts"] == 200
    assert ledger["copies_consumed"] == 250


def test_sampled_child_cost_concentrates_at_the_rate():
    lf = scaled_parity_labels()
    totals = []
    for trial in range(100):
        root, child, _ = make_distributional_source(lf, mode="sampled", seed=trial)
        child.consume(50, "swap_test")
        totals.append(root.ledger.copies_consumed)
    # Mean attempts per batch is 250 with per-trial standard deviation ~32.
    assert abs(float(np.mean(totals)) - 250.0) < 12.0


def test_exact_reduction_learns_the_scaled_parity():
    lf = scaled_parity_labels()
    out = distributional_learn(lf, parity_boost_learner, eps=0.3)
    assert out.hypothesis.decomposition.labels == (0b1011,)
    assert not out.flipped
    assert out.margin == pytest.approx(0.6, abs=1e-9)
    assert out.success_prob == pytest.approx(0.2, abs=1e-12)
    assert out.ledger["basis_sample"] > 0


def test_sampled_reduction_learns_the_scaled_parity():
    lf = scaled_parity_labels()
    out = distributional_learn(lf, parity_boost_learner, eps=0.3, mode="sampled", seed=4)
    assert out.margin == pytest.approx(0.6, abs=1e-9)
    assert not out.flipped


def test_reduction_fixes_the_lost_global_sign():
    # Negative labels: the phase-state learner cannot see the global sign, so
    # the basis-sample stage must flip the rounded hypothesis.
    lf = LabelFunction(6, -parity_signs(6, 0b1011))
    out = distributional_learn(lf, parity_boost_learner, eps=0.3)
    assert out.flipped
    assert out.hypothesis.negate
    assert out.margin == pytest.approx(1.0, abs=1e-9)


def test_reduction_refuses_tiny_label_mass():
    lf = LabelFunction(6, 0.01 * parity_signs(6, 0b1011))
    with pytest.raises(ConfigurationError):
        distributional_learn(lf, parity_boost_learner, eps=0.3)
