"""Boolean concept classes, spectra, generators, and text serialization."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.strategies import integers

import oracles
from phaseboost import (
    DecisionTree,
    Dnf,
    Junta,
    ParameterError,
    Parity,
    ThresholdOfDnfs,
    concept_from_text,
    concept_to_text,
    dt_l1_norm,
    fourier_spectrum,
    load_concepts,
    random_concept,
    random_decision_tree,
    random_dnf,
    random_junta,
    random_tac,
    save_concepts,
    spectral_concentration,
)


@given(n=integers(1, 8), mask=integers(0, 255), x=integers(0, 255))
@settings(deadline=None, max_examples=100)
def test_parity_evaluation_matches_oracle(n, mask, x):
    mask &= (1 << n) - 1
    x &= (1 << n) - 1
    assert Parity(n, mask).evaluate(x) == oracles.eval_parity(mask, x)


@given(seed=integers(0, 10**6))
@settings(deadline=None, max_examples=60)
def test_junta_truth_table_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    j = random_junta(7, 3, rng)
    expected = [oracles.eval_junta(j.support, j.table, x) for x in range(1 << 7)]
    np.testing.assert_array_equal(j.truth_table(), expected)


@given(seed=integers(0, 10**6))
@settings(deadline=None, max_examples=60)
def test_decision_tree_truth_table_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    t = random_decision_tree(7, 9, rng)
    expected = [oracles.eval_dt(t.nodes, x) for x in range(1 << 7)]
    np.testing.assert_array_equal(t.truth_table(), expected)


@given(seed=integers(0, 10**6))
@settings(deadline=None, max_examples=60)
def test_dnf_truth_table_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    d = random_dnf(7, 4, 3, rng)
    expected = [oracles.eval_dnf(d.terms, x) for x in range(1 << 7)]
    np.testing.assert_array_equal(d.truth_table(), expected)


@given(seed=integers(0, 10**6))
@settings(deadline=None, max_examples=40)
def test_tac_truth_table_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    f = random_tac(7, 3, None, rng)
    term_lists = [d.terms for d in f.dnfs]
    expected = [oracles.eval_tac(f.thresh, term_lists, x) for x in range(1 << 7)]
    np.testing.assert_array_equal(f.truth_table(), expected)


def test_out_of_range_variables_are_rejected():
    with pytest.raises(Exception):
        Dnf(3, (((3, False),),))
    with pytest.raises(Exception):
        Junta(3, (0, 5), (0, 1, 1, 0))


@given(seed=integers(0, 10**6), s=integers(0, 127))
@settings(deadline=None, max_examples=50)
def test_fourier_coefficients_match_sum_oracle(seed, s):
    rng = np.random.default_rng(seed)
    tree = random_decision_tree(7, 5, rng)
    spec = fourier_spectrum(tree)
    assert spec.coeffs[s] == pytest.approx(
        oracles.fourier_coefficient(tree.truth_table(), s), abs=1e-9
    )


def test_spectrum_satisfies_parseval():
    rng = np.random.default_rng(9)
    for _ in range(5):
        f = random_tac(8, 3, None, rng)
        mass = float(np.sum(fourier_spectrum(f).coeffs ** 2))
        assert mass == pytest.approx(1.0, abs=1e-9)


def test_tree_l1_norm_is_bounded_by_size():
    rng = np.random.default_rng(17)
    for _ in range(25):
        size = int(rng.choice([1, 3, 5, 7, 9, 11]))
        t = random_decision_tree(8, size, rng)
        assert dt_l1_norm(t) <= size + 1e-9


def test_spectral_concentration_of_a_point_spectrum_is_total():
    spec = fourier_spectrum(Parity(4, 5))
    assert spectral_concentration(spec, 1) == pytest.approx(1.0)
    assert spectral_concentration(spec, 16) == pytest.approx(1.0)


def test_parity_spectrum_is_a_single_coefficient():
    spec = fourier_spectrum(Parity(6, 0b110))
    assert spec.coeffs[0b110] == pytest.approx(1.0)
    assert np.count_nonzero(np.abs(spec.coeffs) > 1e-12) == 1


@given(seed=integers(0, 10**6))
@settings(deadline=None, max_examples=40)
def test_text_round_trip_preserves_truth_tables(seed):
    rng = np.random.default_rng(seed)
    concepts = [
        Parity(6, int(rng.integers(0, 64))),
        random_junta(6, 2, rng),
        random_decision_tree(6, 5, rng),
        random_dnf(6, 3, 3, rng),
        random_tac(6, 2, None, rng),
    ]
    for c in concepts:
        back = concept_from_text(concept_to_text(c))
        assert type(back) is type(c)
        np.testing.assert_array_equal(back.truth_table(), c.truth_table())


def test_concept_file_round_trip(tmp_path):
    rng = np.random.default_rng(23)
    concepts = [random_dnf(5, 2, 3, rng), Parity(5, 7), random_junta(5, 3, rng)]
    path = str(tmp_path / "concepts.txt")
    save_concepts(path, concepts)
    back = load_concepts(path)
    assert len(back) == 3
    for a, b in zip(concepts, back):
        np.testing.assert_array_equal(a.truth_table(), b.truth_table())


def test_malformed_text_is_rejected():
    with pytest.raises(ParameterError):
        concept_from_text("parity 4")
    with pytest.raises(ParameterError):
        concept_from_text("frobnicate 4 1")


def test_random_concept_is_seed_deterministic():
    a = random_concept("dt", 8, 123, size=7)
    b = random_concept("dt", 8, 123, size=7)
    assert concept_to_text(a) == concept_to_text(b)
    c = random_concept("dt", 8, 124, size=7)
    assert concept_to_text(a) != concept_to_text(c)


def test_threshold_circuit_counts_satisfied_inputs():
    d1 = Dnf(4, (((0, False),),))  # x0
    d2 = Dnf(4, (((1, False),),))  # x1
    f = ThresholdOfDnfs(4, 2, (d1, d2))
    assert f.evaluate(0b0011) == 1
    assert f.evaluate(0b0001) == 0
    assert f.m == 2


def test_decision_tree_child_indices_must_move_forward():
    with pytest.raises(Exception):
        DecisionTree(3, (("node", 0, 0, 1), ("leaf", 1)))
