"""Strong learners assembled from the boosting stages.

The agnostic learners (decision trees, juntas, DNFs) run the full two-stage
boost with the matching weak learner and report the found parity decomposition.
The PAC learner for depth-3 circuits runs the no-fidelity-break structure
variant and rounds the real part of the hypothesis to signs. The boosting-free
junta learner replaces stage 1 with direct Fourier sampling and a sieve.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

import numpy as np

from .access import (
    CopySource,
    default_attempt_cap,
    parity_overlap_sq_estimates,
    sample_fourier_counts,
)
from .boosting import (
    DESK_ITERATION_CAP,
    BoostingConfig,
    BoostResult,
    agnostic_boost,
    estimate_projection_coefficients,
    parameter_learning,
    structure_learning,
)
from .errors import ParameterError
from .statevec import ParityDecomposition
from .weak import MAX_LOG2_BUDGET, mansour_budget, wal_decision_tree, wal_dnf

_TINY = 5e-324
NOBOOST_SAMPLE_CONSTANT = 2.0


@dataclass(frozen=True)
class LearningOutcome:
    """Uniform result record for every strong learner."""

    hypothesis: object
    achieved_fidelity: float
    opt_lower_bound: float | None
    ledger: dict
    seed: int | None
    boost: BoostResult | None = None
    extras: dict = field(default_factory=dict)


def _outcome(src: CopySource, result: BoostResult, opt_lb, seed) -> LearningOutcome:
    if result.kappa == 0:
        achieved = 0.0
    else:
        achieved = float(result.decomposition.fidelity_with(src.hidden))
    return LearningOutcome(
        hypothesis=result.decomposition,
        achieved_fidelity=achieved,
        opt_lower_bound=opt_lb,
        ledger=src.ledger.as_dict(),
        seed=seed,
        boost=result,
        extras={"kappa": result.kappa, "stop_reason": result.stop_reason},
    )


def agnostic_learn_dt(
    src: CopySource,
    s: int,
    eps: float,
    delta: float,
    opt_lb: float | None = None,
    seed: int | None = None,
    reorder_largest_first: bool = False,
) -> LearningOutcome:
    """Agnostic learning against decision trees with at most s nodes."""
    result = agnostic_boost(src, wal_decision_tree(s), eps, delta, reorder_largest_first)
    return _outcome(src, result, opt_lb, seed)


def agnostic_learn_junta(
    src: CopySource,
    k: int,
    eps: float,
    delta: float,
    opt_lb: float | None = None,
    seed: int | None = None,
    reorder_largest_first: bool = False,
) -> LearningOutcome:
    """Agnostic learning against k-juntas, via their depth-k tree evaluation.

    A k-junta evaluated as a complete binary tree over its support has
    2^(k+1) - 1 nodes, so the tree weak learner runs at that size bound.
    """
    if k < 0:
        raise ParameterError(f"junta arity must be >= 0, got {k}")
    s = (1 << (k + 1)) - 1
    result = agnostic_boost(src, wal_decision_tree(s), eps, delta, reorder_largest_first)
    return _outcome(src, result, opt_lb, seed)


def agnostic_learn_dnf(
    src: CopySource,
    s: int,
    eps: float,
    delta: float,
    opt_lb: float | None = None,
    seed: int | None = None,
    mansour_c1: float = 1.0,
    mansour_c2: float = 8.0,
    reorder_largest_first: bool = False,
) -> LearningOutcome:
    """Agnostic learning against size-s DNFs."""
    learner = wal_dnf(s, mansour_c1, mansour_c2)
    result = agnostic_boost(src, learner, eps, delta, reorder_largest_first)
    return _outcome(src, result, opt_lb, seed)


# ---------------------------------------------------------------------------
# PAC learning of depth-3 threshold-of-DNF circuits


@dataclass(frozen=True)
class SignHypothesis:
    """Boolean hypothesis g = sign(sum_j beta_j chi_j), with sign(0) = +1."""

    n: int
    decomposition: ParityDecomposition
    negate: bool = False

    def negated(self) -> "SignHypothesis":
        return SignHypothesis(self.n, self.decomposition, not self.negate)

    def signs(self) -> np.ndarray:
        if len(self.decomposition.labels) == 0:
            raw = np.ones(1 << self.n, dtype=np.float64)
        else:
            values = self.decomposition.to_vector(self.n).real
            raw = np.where(values >= 0.0, 1.0, -1.0)
        return -raw if self.negate else raw

    def truth_table(self) -> np.ndarray:
        return ((1.0 - self.signs()) / 2.0).astype(np.uint8)

    def evaluate(self, x: int) -> int:
        return int(self.truth_table()[x])


def _depth3_config(
    s: int, m: int, eps: float, delta: float, c1: float, c2: float
) -> BoostingConfig:
    """Round schedule for the depth-3 run: eps_s = eps/9, promise 1/(4 m^2 s*).

    The circuit structure only enters through the promise: correlation of a
    residual with the circuit leaves some inner DNF at a 1/(4m^2) fraction of
    it, and the DNF sparsity budget s* converts that to a single parity.
    """
    if s < 1 or m < 1:
        raise ParameterError(f"need s >= 1 and m >= 1, got s={s}, m={m}")
    if not 0.0 < eps < 1.0:
        raise ParameterError(f"accuracy must lie in (0,1), got {eps}")
    if not 0.0 < delta < 1.0:
        raise ParameterError(f"confidence parameter must lie in (0,1), got {delta}")
    eps_s = eps / 9.0
    log2_sstar = min(mansour_budget(s, eps_s, c1, c2), MAX_LOG2_BUDGET)
    eta1 = max(2.0 ** (-log2_sstar) / (4.0 * m * m), _TINY)
    learner = dataclasses.replace(wal_dnf(s, c1, c2), eta1=eta1)
    eta = max(eta1 * eps_s, _TINY)
    denom = max(eps_s * eta, _TINY)
    t_max_f = 4.0 / denom
    t_max = float(math.ceil(t_max_f)) if math.isfinite(t_max_f) else math.inf
    delta_prime = max(delta / (3.0 * t_max), 1e-300)
    return BoostingConfig(
        eps=eps,
        delta=delta,
        learner=learner,
        eps_s=eps_s,
        eps_p=eps / 2.0,
        eta=eta,
        t_max=t_max,
        delta_prime=delta_prime,
        attempt_cap=default_attempt_cap(eps_s, delta_prime),
        iteration_cap=int(min(t_max, DESK_ITERATION_CAP)),
    )


def pac_learn_depth3(
    src: CopySource,
    s: int,
    m: int,
    eps: float,
    delta: float,
    seed: int | None = None,
    mansour_c1: float = 1.0,
    mansour_c2: float = 8.0,
) -> LearningOutcome:
    """PAC-learn a threshold of m size-s DNFs from copies of its phase state.

    Structure learning appends every parity the weak learner returns (no
    overlap test; the circuit promise keeps rounds productive while the
    residual norm stays above eps_s), then parameter learning at eps/2 and
    sign rounding give a Boolean g with error at most eps under the uniform
    distribution, with probability 1 - delta.
    """
    config = _depth3_config(s, m, eps, delta, mansour_c1, mansour_c2)
    structure = structure_learning(src, config, fidelity_break=False)
    decomposition, raw = parameter_learning(src, list(structure.labels), config)
    hypothesis = SignHypothesis(src.n, decomposition)
    achieved = float(decomposition.fidelity_with(src.hidden))
    return LearningOutcome(
        hypothesis=hypothesis,
        achieved_fidelity=achieved,
        opt_lower_bound=None,
        ledger=src.ledger.as_dict(),
        seed=seed,
        boost=BoostResult(
            decomposition=decomposition,
            kappa=structure.kappa,
            stop_reason=structure.stop_reason,
            trace=structure.trace,
            ledger=src.ledger.as_dict(),
            config=config,
            raw_coefficients=raw,
        ),
        extras={"kappa": structure.kappa, "stop_reason": structure.stop_reason},
    )


# ---------------------------------------------------------------------------
# Boosting-free junta learner


@dataclass(frozen=True)
class AmplitudeSieve:
    """Sampling-then-sieving record: observed labels, estimates, survivors."""

    observed: tuple[int, ...]
    estimates: tuple[float, ...]
    survivors: tuple[int, ...]


def agnostic_learn_junta_noboost(
    src: CopySource,
    k: int,
    eps: float,
    delta: float,
    opt_lb: float | None = None,
    seed: int | None = None,
    sample_constant: float = NOBOOST_SAMPLE_CONSTANT,
) -> LearningOutcome:
    """Agnostic junta learning with a single sampling pass instead of boosting.

    Any state eps'-close to a k-junta phase state concentrates its Fourier mass
    on at most 2^k labels of individually large amplitude, so sampling
    M = O(2^(2k)/eps1 * (k + log 1/delta)) parity-basis outcomes sees all of
    them; a sieve at accuracy eps2/4 = eps1/(4 * 2^(2k)) keeps labels whose
    squared amplitude is credibly at least eps2/2, and parameter learning on
    the survivors at eps_p = 2*sqrt(eps1) recovers fidelity opt - eps with
    eps1 = eps^2/16.
    """
    if not 0 <= k <= src.n:
        raise ParameterError(f"junta arity {k} out of range for n={src.n}")
    if not 0.0 < eps < 1.0:
        raise ParameterError(f"accuracy must lie in (0,1), got {eps}")
    if not 0.0 < delta < 1.0:
        raise ParameterError(f"confidence parameter must lie in (0,1), got {delta}")
    eps1 = eps * eps / 16.0
    eps2 = eps1 / float(1 << (2 * k))
    m_samples = math.ceil(
        sample_constant * (1 << (2 * k)) / eps1 * (k + math.log(1.0 / delta))
    )
    counts = sample_fourier_counts(src, m_samples)
    observed = np.flatnonzero(counts)
    if observed.shape[0] == 0:
        raise ParameterError("no parity-basis outcomes observed; sample count is zero")
    ests = parity_overlap_sq_estimates(
        src, observed, eps2 / 4.0, delta / (3.0 * observed.shape[0])
    )
    keep = ests >= 3.0 * eps2 / 4.0
    survivors = [int(y) for y in observed[keep]]
    sieve = AmplitudeSieve(
        tuple(int(y) for y in observed),
        tuple(float(e) for e in ests),
        tuple(survivors),
    )
    warning = False
    if not survivors:
        # Nothing cleared the sieve; fall back to the single best-looking label
        # so the outcome still names a parity, and flag the degeneracy.
        warning = True
        best = int(observed[np.lexsort((observed, -ests))[0]])
        decomposition = ParityDecomposition((best,), np.ones(1, dtype=np.complex128))
    else:
        raw = estimate_projection_coefficients(
            src, survivors, eps=2.0 * math.sqrt(eps1), mu=eps2 / 2.0, delta=delta / 3.0
        )
        decomposition = ParityDecomposition(
            tuple(survivors), raw / float(np.linalg.norm(raw))
        )
    achieved = float(decomposition.fidelity_with(src.hidden))
    return LearningOutcome(
        hypothesis=decomposition,
        achieved_fidelity=achieved,
        opt_lower_bound=opt_lb,
        ledger=src.ledger.as_dict(),
        seed=seed,
        boost=None,
        extras={"sieve": sieve, "degenerate_sieve": warning, "samples": m_samples},
    )
