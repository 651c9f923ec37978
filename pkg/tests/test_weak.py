"""Weak parity learners and the class-specific threshold reductions."""

import numpy as np
import pytest

import oracles
from phaseboost import (
    CopySource,
    ParameterError,
    ThresholdDegenerateError,
    agnostic_parity_learner,
    mansour_budget,
    parity_state,
    parity_weak_learner,
    wal_decision_tree,
    wal_dnf,
)
from phaseboost.statevec import StateVector


def planted_superposition(n=10, heavy=0.8, a=37, b=514):
    amps = (
        np.sqrt(heavy) * parity_state(n, a).amps
        + np.sqrt(1 - heavy) * parity_state(n, b).amps
    )
    return StateVector(n, amps)


def test_exact_learner_finds_the_heavy_parity():
    src = CopySource.root(planted_superposition(), mode="exact", seed=0)
    assert agnostic_parity_learner(src, 0.75, 0.05, 0.05) == 37


def test_sampled_learner_finds_the_heavy_parity():
    src = CopySource.root(planted_superposition(), mode="sampled", seed=11)
    assert agnostic_parity_learner(src, 0.75, 0.05, 0.05) == 37


def test_exact_ties_break_toward_the_smaller_label():
    amps = (parity_state(6, 12).amps + parity_state(6, 3).amps) / np.sqrt(2.0)
    src = CopySource.root(StateVector(6, amps), mode="exact", seed=0)
    assert agnostic_parity_learner(src, 0.4, 0.1, 0.1) == 3


def test_learner_validates_thresholds():
    src = CopySource.root(planted_superposition(), mode="exact", seed=0)
    with pytest.raises(ParameterError):
        agnostic_parity_learner(src, 0.5, 0.6, 0.05)  # eps above tau
    with pytest.raises(ParameterError):
        agnostic_parity_learner(src, 1.5, 0.1, 0.05)
    with pytest.raises(ParameterError):
        agnostic_parity_learner(src, 0.5, 0.1, 0.0)


def test_learner_charges_its_caller_bucket():
    src = CopySource.root(planted_superposition(), mode="exact", seed=0)
    learner = parity_weak_learner()
    label = learner.run(src, 0.5, 0.05)
    assert label == 37
    assert src.ledger["weak_learner_calls"] > 0
    assert src.ledger["swap_test"] == 0
    assert src.ledger["basis_sample"] == 0


def test_parity_promise_is_linear_with_half_constant():
    learner = parity_weak_learner()
    assert learner.eta(0.5) == pytest.approx(0.25)
    assert learner.eta(1.0) == pytest.approx(0.5)


def test_tree_promise_divides_by_size_squared():
    learner = wal_decision_tree(8)
    assert learner.eta1 == pytest.approx(0.5 / 64.0)
    assert learner.eta(0.1) == pytest.approx(0.1 * 0.5 / 64.0)
    with pytest.raises(ParameterError):
        wal_decision_tree(0)


def test_tree_learner_resolves_the_reduced_threshold():
    # Heavy weight 0.8 must be found even with the threshold shrunk by s^2.
    src = CopySource.root(planted_superposition(), mode="exact", seed=0)
    assert wal_decision_tree(8).run(src, 0.5, 0.05) == 37


def test_sparsity_budget_matches_frozen_formula():
    assert mansour_budget(8, 0.01) == pytest.approx(
        oracles.mansour_log2_budget(8, 0.01, 1.0, 8.0)
    )
    assert mansour_budget(8, 0.01) == pytest.approx(304.0867, abs=0.001)
    assert mansour_budget(1, 1.0) == pytest.approx(0.0)
    # The c knobs scale the exponent the way the formula says.
    assert mansour_budget(8, 0.01, c1=2.0) == pytest.approx(
        2.0 * mansour_budget(8, 0.01), rel=1e-12
    )


def test_dnf_promise_constant_freezes_at_bind_time():
    learner = wal_dnf(4)
    bound = learner.bind(0.01)
    expected = 2.0 ** (-(1.0 + oracles.mansour_log2_budget(4, 0.01, 1.0, 8.0)))
    assert bound.eta1 == pytest.approx(expected, rel=1e-9)
    # Binding at a different scale gives a different constant; the original
    # learner object is unchanged.
    assert learner.bind(0.5).eta1 != bound.eta1
    assert learner.eta1 != bound.eta1


def test_dnf_learner_degenerate_threshold_sampled_refuses():
    src = CopySource.root(planted_superposition(n=6, a=5, b=9), mode="sampled", seed=0)
    with pytest.raises(ThresholdDegenerateError):
        wal_dnf(8).run(src, 0.01, 0.05)


def test_dnf_learner_degenerate_threshold_exact_scans_everything():
    src = CopySource.root(planted_superposition(n=6, a=5, b=9), mode="exact", seed=0)
    assert wal_dnf(8).run(src, 0.01, 0.05) == 5


def test_dnf_learner_non_degenerate_path_finds_the_parity():
    # Large tau keeps the sparsity budget below 2^n so the reduction applies.
    src = CopySource.root(planted_superposition(n=10), mode="exact", seed=0)
    assert wal_dnf(2).run(src, 0.9, 0.05) == 37


def test_weak_learner_rejects_bad_promises():
    with pytest.raises(ParameterError):
        parity_weak_learner().__class__("bad", 0.0, 1.0, lambda s, t, d: 0)
    with pytest.raises(ParameterError):
        parity_weak_learner().__class__("bad", 0.5, 0.5, lambda s, t, d: 0)
