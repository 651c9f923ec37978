"""Weak agnostic learners that output a single parity label.

Each learner carries a promise (eta1, eta2): whenever the source state has
squared overlap at least tau with some phase state of the learner's concept
class, the returned parity chi satisfies |<chi|psi>|^2 >= eta1 * tau**eta2.
The boosting loop only ever uses learners through this interface.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .access import CopySource, parity_overlap_sq_estimates, sample_fourier_counts
from .errors import ParameterError, ThresholdDegenerateError

WAL_SAMPLE_CONSTANT = 2.0
# Exponent guard: 2**(-x) underflows float64 past ~1074, and promise values
# that small only matter as ledger-scale bookkeeping anyway.
MAX_LOG2_BUDGET = 1000.0


def agnostic_parity_learner(src: CopySource, tau: float, eps: float, delta: float) -> int:
    """Return the label of (approximately) the heaviest parity in the source.

    Draws parity-basis samples to localize candidates, then estimates each
    candidate's squared overlap to within eps/2 and takes the argmax, breaking
    ties toward the smaller label. If some parity holds squared overlap at
    least tau, the winner holds at least tau - eps with probability 1 - delta.
    In exact mode every label is a candidate and the argmax is exact.
    """
    if not 0.0 < eps <= tau <= 1.0:
        raise ParameterError(f"need 0 < eps <= tau <= 1, got eps={eps}, tau={tau}")
    if not 0.0 < delta < 1.0:
        raise ParameterError(f"confidence parameter must lie in (0,1), got {delta}")
    t = math.ceil((WAL_SAMPLE_CONSTANT / tau) * math.log(2.0 / delta))
    if src.sampled:
        counts = sample_fourier_counts(src, t)
        candidates = np.flatnonzero(counts)
        if candidates.shape[0] == 0:
            return 0
    else:
        src.consume(t, "basis_sample")
        candidates = np.arange(1 << src.n, dtype=np.int64)
    per_candidate_delta = delta / (2.0 * candidates.shape[0])
    ests = parity_overlap_sq_estimates(src, candidates, eps / 2.0, per_candidate_delta)
    best = np.lexsort((candidates, -ests))[0]
    return int(candidates[best])


@dataclass(frozen=True)
class WeakLearner:
    """Named weak learner with its promise exponentiation (eta1, eta2)."""

    name: str
    eta1: float
    eta2: float
    _run: Callable[[CopySource, float, float], int]

    def __post_init__(self) -> None:
        if not 0.0 < self.eta1 <= 1.0:
            raise ParameterError(f"eta1 must lie in (0,1], got {self.eta1}")
        if self.eta2 < 1.0:
            raise ParameterError(f"eta2 must be >= 1, got {self.eta2}")

    def eta(self, tau: float) -> float:
        return self.eta1 * tau**self.eta2

    def run(self, src: CopySource, tau: float, delta: float) -> int:
        """Invoke the learner; every copy it burns lands in weak_learner_calls."""
        with src.ledger.attributed("weak_learner_calls"):
            return self._run(src, tau, delta)

    def bind(self, eps_s: float) -> "WeakLearner":
        """Freeze any scale-dependent promise constants at the invocation scale."""
        return self


def parity_weak_learner() -> WeakLearner:
    def run(src: CopySource, tau: float, delta: float) -> int:
        return agnostic_parity_learner(src, tau, eps=tau / 2.0, delta=delta)

    return WeakLearner("parity", 0.5, 1.0, run)


def wal_decision_tree(s: int) -> WeakLearner:
    """Weak learner against decision trees with at most s nodes.

    The l1 spectral bound of such trees turns correlation tau with a tree into
    a single parity of squared overlap tau / s^2, so the parity learner runs
    at that reduced threshold.
    """
    if s < 1:
        raise ParameterError(f"tree size bound must be >= 1, got {s}")

    def run(src: CopySource, tau: float, delta: float) -> int:
        reduced = tau / (s * s)
        return agnostic_parity_learner(src, reduced, eps=reduced / 2.0, delta=delta)

    return WeakLearner(f"dt(s={s})", 0.5 / (s * s), 1.0, run)


def mansour_budget(s: int, eps: float, c1: float = 1.0, c2: float = 8.0) -> float:
    """log2 of the l1 sparsity budget s* for size-s DNFs at accuracy eps.

    s* = (s/eps) ** (c1 * log2(log2(max(s/eps, 4))) * log2(c2/eps)); the value
    is returned in log2 space because it overflows floats long before the
    surrounding algorithms stop being mathematically well defined.
    """
    if s < 1:
        raise ParameterError(f"DNF size bound must be >= 1, got {s}")
    if not 0.0 < eps <= 1.0:
        raise ParameterError(f"accuracy must lie in (0,1], got {eps}")
    ratio = s / eps
    loglog = math.log2(math.log2(max(ratio, 4.0)))
    return math.log2(max(ratio, 1.0)) * c1 * loglog * math.log2(c2 / eps)


class _DnfLearner(WeakLearner):
    __slots__ = ()

    def bind(self, eps_s: float) -> "WeakLearner":
        if not 0.0 < eps_s <= 1.0:
            raise ParameterError(f"binding scale must lie in (0,1], got {eps_s}")
        c1, c2, s = self._run.__wrapped_params__
        log2_sstar = min(mansour_budget(s, eps_s, c1, c2), MAX_LOG2_BUDGET)
        eta1 = 2.0 ** (-(1.0 + log2_sstar))
        return dataclasses.replace(self, eta1=max(eta1, 5e-324))


def wal_dnf(s: int, c1: float = 1.0, c2: float = 8.0) -> WeakLearner:
    """Weak learner against size-s DNFs via the l1 sparsity budget.

    Correlation tau with a size-s DNF leaves some parity with squared overlap
    tau / s*(tau); the parity learner runs at that threshold. When s* exceeds
    2^n the threshold is below anything a parity can distinguish, so sampled
    mode refuses; exact mode falls back to scanning every label through the
    standard estimate path, which charges the same nominal copy costs.

    The promise constant eta1 = 1 / (2 s*) depends on the invocation scale, so
    this learner must be bound (bind(eps_s)) before its eta() means anything;
    the unbound value is the tau = 1 placeholder.
    """
    if s < 1:
        raise ParameterError(f"DNF size bound must be >= 1, got {s}")

    def run(src: CopySource, tau: float, delta: float) -> int:
        log2_sstar = min(mansour_budget(s, tau, c1, c2), MAX_LOG2_BUDGET)
        if log2_sstar > src.n:
            if src.sampled:
                raise ThresholdDegenerateError(
                    f"DNF sparsity budget 2^{log2_sstar:.1f} exceeds the 2^{src.n} "
                    "labels available; the reduced threshold is unresolvable by sampling"
                )
            eps = max(tau * 2.0 ** (-log2_sstar - 1.0), 5e-324)
            candidates = np.arange(1 << src.n, dtype=np.int64)
            ests = parity_overlap_sq_estimates(
                src, candidates, eps, delta / (2.0 * candidates.shape[0])
            )
            return int(np.lexsort((candidates, -ests))[0])
        reduced = tau * 2.0 ** (-log2_sstar)
        return agnostic_parity_learner(src, reduced, eps=reduced / 2.0, delta=delta)

    run.__wrapped_params__ = (c1, c2, s)
    placeholder = 2.0 ** (-(1.0 + min(mansour_budget(s, 1.0, c1, c2), MAX_LOG2_BUDGET)))
    return _DnfLearner(f"dnf(s={s})", max(placeholder, 5e-324), 1.0, run)
