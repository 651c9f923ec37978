"""Entanglement profiles, the hard DNF family, and discriminator checks."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.strategies import integers

import oracles
import phaseboost.analysis as analysis
from phaseboost import (
    BipartitionCut,
    ContractViolationError,
    DegenerateResidualError,
    Dnf,
    ParameterError,
    ParityDecomposition,
    ResidualDistribution,
    ResourceLimitError,
    ThresholdOfDnfs,
    bond_profile,
    hard_dnf_decomposition_check,
    hard_dnf_instance,
    junta_bond_bound,
    phase_state_of,
    random_junta,
    random_product_distribution,
    random_state,
    residual_discriminator_check,
    schmidt_rank,
    uniform_state,
    verify_discriminator,
)


def test_cut_validation_and_sides():
    cut = BipartitionCut(6, 2)
    assert cut.sides == (4, 16)
    with pytest.raises(ParameterError):
        BipartitionCut(6, 0)
    with pytest.raises(ParameterError):
        BipartitionCut(6, 6)


def test_product_states_have_rank_one_everywhere():
    s = uniform_state(6)
    assert bond_profile(s) == [(c, 1) for c in range(1, 6)]


def test_parity_phase_states_have_rank_one_everywhere():
    from phaseboost import parity_state

    s = parity_state(6, 0b101101)
    assert all(rank == 1 for _, rank in bond_profile(s))


@given(seed=integers(0, 10**6), cut=integers(1, 5))
@settings(deadline=None, max_examples=30)
def test_rank_matches_the_dense_gram_oracle(seed, cut):
    rng = np.random.default_rng(seed)
    s = random_state(6, rng)
    got = schmidt_rank(s, BipartitionCut(6, cut))
    assert got == oracles.schmidt_rank_dense(s.amps, cut)


def test_rank_rejects_mismatched_cut():
    with pytest.raises(ParameterError):
        schmidt_rank(uniform_state(6), BipartitionCut(5, 2))


def test_rank_refuses_cuts_beyond_the_dense_limit(monkeypatch):
    monkeypatch.setattr(analysis, "MAX_SVD_SIDE", 2)
    with pytest.raises(ResourceLimitError):
        schmidt_rank(uniform_state(6), BipartitionCut(6, 3))


def test_hard_dnf_instance_shape():
    f = hard_dnf_instance(3)
    assert f.n == 6
    assert f.s == 3
    assert f.terms[1] == ((1, False), (4, False))
    with pytest.raises(ParameterError):
        hard_dnf_instance(0)


def test_hard_dnf_reaches_maximal_middle_rank():
    for s in (2, 3):
        state = phase_state_of(hard_dnf_instance(s))
        assert schmidt_rank(state, BipartitionCut(2 * s, s)) == 1 << s


def test_hard_dnf_profile_grows_toward_the_middle():
    state = phase_state_of(hard_dnf_instance(3))
    profile = dict(bond_profile(state))
    assert profile[1] == 2
    assert profile[2] == 4
    assert profile[3] == 8


def test_hard_dnf_closed_form_decomposition():
    for s in (1, 2, 3, 4):
        assert hard_dnf_decomposition_check(s) < 1e-9


@given(seed=integers(0, 10**6), k=integers(0, 5))
@settings(deadline=None, max_examples=30)
def test_junta_phase_states_respect_the_bond_bound(seed, k):
    rng = np.random.default_rng(seed)
    junta = random_junta(8, k, rng)
    state = phase_state_of(junta)
    assert max(rank for _, rank in bond_profile(state)) <= junta_bond_bound(k)


def test_junta_bond_bound_values():
    assert junta_bond_bound(0) == 1
    assert junta_bond_bound(1) == 1
    assert junta_bond_bound(4) == 4
    assert junta_bond_bound(5) == 4


def single_var_dnf(n, var):
    return Dnf(n, (((var, False),),))


def test_discriminator_on_a_conjunction_by_hand():
    # f = x0 and x1 under the uniform distribution: E[f C_1] = 1/2.
    f = ThresholdOfDnfs(2, 2, (single_var_dnf(2, 0), single_var_dnf(2, 1)))
    weights = np.full(4, 0.25)
    report = verify_discriminator(f, weights)
    assert report.bound == pytest.approx(0.25)
    assert report.correlation == pytest.approx(0.5)
    assert report.correlations == (pytest.approx(0.5), pytest.approx(0.5))


def test_discriminator_counterexample_distribution_raises():
    # f = x0 or x1 on the two points where exactly one variable is set: both
    # constituent correlations vanish, so the bound check must fail loudly.
    f = ThresholdOfDnfs(2, 1, (single_var_dnf(2, 0), single_var_dnf(2, 1)))
    weights = np.array([0.0, 0.5, 0.5, 0.0])
    with pytest.raises(ContractViolationError):
        verify_discriminator(f, weights)


def test_discriminator_validates_weights():
    f = ThresholdOfDnfs(2, 1, (single_var_dnf(2, 0),))
    with pytest.raises(ParameterError):
        verify_discriminator(f, np.full(8, 0.125))
    with pytest.raises(ParameterError):
        verify_discriminator(f, np.array([0.5, 0.5, 0.5, -0.5]))
    with pytest.raises(ParameterError):
        verify_discriminator(f, np.full(4, 0.5))


@given(seed=integers(0, 10**6))
@settings(deadline=None, max_examples=25)
def test_random_product_distribution_factorizes(seed):
    rng = np.random.default_rng(seed)
    w = random_product_distribution(4, rng)
    assert w.shape == (16,)
    assert np.all(w >= 0.0)
    assert float(w.sum()) == pytest.approx(1.0)
    x = np.arange(16)
    marginals = [float(w[(x >> i) & 1 == 1].sum()) for i in range(4)]
    assert all(0.1 <= p <= 0.9 for p in marginals)
    rebuilt = np.ones(16)
    for i, p in enumerate(marginals):
        bit = (x >> i) & 1
        rebuilt *= np.where(bit == 1, p, 1.0 - p)
    np.testing.assert_allclose(w, rebuilt, atol=1e-12)


def test_random_product_distribution_validates_range():
    rng = np.random.default_rng(0)
    with pytest.raises(ParameterError):
        random_product_distribution(4, rng, low=0.0, high=0.9)
    with pytest.raises(ParameterError):
        random_product_distribution(4, rng, low=0.6, high=0.4)


def conjunction_circuit(n=6):
    a = Dnf(n, (((0, False), (1, False)),))
    b = Dnf(n, (((2, False), (3, False)),))
    return ThresholdOfDnfs(n, 2, (a, b))


def test_residual_check_with_an_empty_hypothesis():
    f = conjunction_circuit()
    empty = ParityDecomposition((), np.zeros(0, dtype=np.complex128))
    report = residual_discriminator_check(f, empty)
    assert report.t == 1
    assert report.alpha == pytest.approx(1.0)
    assert report.delta == pytest.approx(1.0)
    assert report.delta_bound_ok
    assert float(report.distribution.weights.sum()) == pytest.approx(1.0)
    assert report.best_overlap == pytest.approx(max(
        abs(float(np.mean(f.signs() * d.signs()))) for d in f.dnfs
    ))
    if report.holds_at_m:
        assert report.holds_at_2m and report.holds_at_4m


def test_residual_check_after_capturing_the_constant_part():
    f = conjunction_circuit()
    # Capture the constant (empty) parity with the exact coefficient of f.
    c0 = float(np.mean(f.signs()))
    d = ParityDecomposition((0,), np.array([c0], dtype=np.complex128))
    report = residual_discriminator_check(f, d, t=2)
    assert report.t == 2
    assert report.alpha == pytest.approx(float(np.sqrt(1.0 - c0 * c0)), abs=1e-12)
    assert report.delta_bound_ok


def test_residual_check_degenerates_on_an_exact_hypothesis():
    f = ThresholdOfDnfs(3, 1, (single_var_dnf(3, 0),))
    d = ParityDecomposition((1,), np.ones(1, dtype=np.complex128))
    with pytest.raises(DegenerateResidualError):
        residual_discriminator_check(f, d)


def test_residual_distribution_must_normalize():
    with pytest.raises(ContractViolationError):
        ResidualDistribution(np.array([0.3, 0.3]), delta=1.0)
