"""Reduction from learning real-valued labels to learning phase states.

A label function phi: {0,1}^n -> [-1, 1] is encoded into an (n+1)-qubit
superposition whose last qubit carries the label in amplitude; applying a
Hadamard to that qubit and post-selecting on outcome 1 leaves a state whose
overlap with any phase state |phi_h> tracks the correlation E_x[phi * h] up
to an additive window of gamma / 2, where gamma = E_x[phi^2]. A phase-state
learner run on the post-selected copies therefore yields a Boolean hypothesis
with a correlation guarantee.

The post-selected state only fixes phi up to a global sign, but the encoded
(n+1)-qubit state itself does not: computational-basis samples of it reveal
Pr[b = 0 | x] = (1 + phi(x)) / 2. The final hypothesis sign is fixed from
such samples, charged to the same copy ledger.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .access import CopyLedger, CopySource, sample_basis_counts, shots_for
from .errors import (
    ConfigurationError,
    ContractViolationError,
    DegenerateResidualError,
    ParameterError,
)
from .learners import LearningOutcome, SignHypothesis
from .statevec import NORM_ATOL, StateVector, check_qubit_count

GAMMA_FLOOR_DEFAULT = 1e-3
_DEGENERATE_SUCCESS = 1e-12
_SIGN_FIX_CONFIDENCE = 0.01


@dataclass(frozen=True)
class LabelFunction:
    """Real-valued labels phi(x) in [-1, 1], stored as a dense table."""

    n: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        check_qubit_count(self.n)
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        if values.shape != (1 << self.n,):
            raise ParameterError(
                f"label table must have length {1 << self.n}, got {values.shape}"
            )
        if float(np.max(np.abs(values))) > 1.0 + 1e-9:
            raise ParameterError("labels must lie in [-1, 1]")
        values = np.clip(values, -1.0, 1.0)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def gamma(self) -> float:
        """E_x[phi(x)^2], the mass that bounds both window width and cost."""
        return float(np.mean(self.values**2))

    @classmethod
    def from_concept(cls, concept) -> "LabelFunction":
        return cls(concept.n, concept.signs().astype(np.float64))


def build_psi_D(lf: LabelFunction) -> StateVector:
    """(n+1)-qubit encoding with amplitude 2^(-n/2) sqrt((1 + (-1)^b phi) / 2)
    at index x | (b << n)."""
    scale = 1.0 / np.sqrt(float(1 << lf.n))
    upper = np.sqrt(np.clip((1.0 + lf.values) / 2.0, 0.0, None))
    lower = np.sqrt(np.clip((1.0 - lf.values) / 2.0, 0.0, None))
    amps = np.concatenate([upper, lower]).astype(np.complex128) * scale
    return StateVector(lf.n + 1, amps)


def _split_halves(psi_d: StateVector) -> tuple[np.ndarray, np.ndarray]:
    half = 1 << (psi_d.n - 1)
    return psi_d.amps[:half], psi_d.amps[half:]


def recover_labels(psi_d: StateVector) -> LabelFunction:
    """Read phi back out of the encoding: phi(x) = 2^n (|a_x0|^2 - |a_x1|^2)."""
    a0, a1 = _split_halves(psi_d)
    values = (np.abs(a0) ** 2 - np.abs(a1) ** 2) * float(1 << (psi_d.n - 1))
    return LabelFunction(psi_d.n - 1, np.clip(values, -1.0, 1.0))


def postselect_last_qubit(psi_d: StateVector) -> tuple[StateVector, float]:
    """Hadamard the label qubit, keep outcome 1, and renormalize.

    Returns the normalized post-selected state together with the success
    mass E_x[1 - sqrt(1 - phi^2)], the squared norm of the unnormalized
    branch vector a_x0 - a_x1. (The physical per-shot acceptance probability
    is half of this; the reported mass is the convention used throughout for
    copy accounting.) The success mass is never below gamma / 2.
    """
    a0, a1 = _split_halves(psi_d)
    branch = a0 - a1
    success = float(np.vdot(branch, branch).real)
    if success < _DEGENERATE_SUCCESS:
        raise DegenerateResidualError(
            "post-selection success mass is numerically zero (phi vanishes)"
        )
    gamma = recover_labels(psi_d).gamma
    if success < gamma / 2.0 - NORM_ATOL:
        raise ContractViolationError(
            f"success mass {success:.6g} fell below gamma/2 = {gamma / 2.0:.6g}"
        )
    state = StateVector(psi_d.n - 1, branch / np.sqrt(success))
    return state, success


@dataclass(frozen=True)
class OverlapWindowReport:
    overlap: float
    expectation: float
    gamma: float
    lo: float
    hi: float
    ok: bool


def verify_overlap_window(lf: LabelFunction, h) -> OverlapWindowReport:
    """Check <psi_1|phi_h> against the window (E +- gamma/2) / sqrt(2).

    psi_1 is the unnormalized post-selected branch and E = E_x[h(x) * phi(x)]
    with h read in the +-1 view. The containment follows from
    1 + u/2 - u^2/2 <= sqrt(1 + u) <= 1 + u/2 on [-1, 1].
    """
    if hasattr(h, "signs"):
        h_signs = np.asarray(h.signs(), dtype=np.float64)
    else:
        h_signs = np.asarray(h, dtype=np.float64)
    if h_signs.shape != (1 << lf.n,):
        raise ParameterError(f"hypothesis table must have length {1 << lf.n}")
    upper = np.sqrt(np.clip((1.0 + lf.values) / 2.0, 0.0, None))
    lower = np.sqrt(np.clip((1.0 - lf.values) / 2.0, 0.0, None))
    overlap = float(np.mean((upper - lower) * h_signs))
    expectation = float(np.mean(lf.values * h_signs))
    gamma = lf.gamma
    lo = (expectation - gamma / 2.0) / np.sqrt(2.0)
    hi = (expectation + gamma / 2.0) / np.sqrt(2.0)
    ok = bool(lo - 1e-12 <= overlap <= hi + 1e-12)
    return OverlapWindowReport(overlap, expectation, gamma, lo, hi, ok)


def make_distributional_source(
    lf: LabelFunction,
    mode: str = "exact",
    seed: int | np.random.Generator | None = 0,
    swap_constant: float = 2.0,
) -> tuple[CopySource, CopySource, float]:
    """Root source over the encoded state plus a post-selected child source.

    Copies consumed from the child charge ~1/success_prob encoded copies to
    the root ledger, with failed attempts itemized under post-selection.
    """
    psi_d = build_psi_D(lf)
    root = CopySource.root(psi_d, mode=mode, seed=seed, swap_constant=swap_constant)
    post_state, success = postselect_last_qubit(psi_d)
    child = root.spawn(post_state, prep_p=success)
    return root, child, success


@dataclass(frozen=True)
class DistributionalOutcome:
    hypothesis: SignHypothesis
    margin: float
    success_prob: float
    flipped: bool
    inner: LearningOutcome | None
    ledger: CopyLedger


def distributional_learn(
    lf: LabelFunction,
    state_learner: Callable[[CopySource, float], LearningOutcome],
    eps: float,
    mode: str = "exact",
    seed: int | np.random.Generator | None = 0,
    gamma_floor: float = GAMMA_FLOOR_DEFAULT,
    swap_constant: float = 2.0,
) -> DistributionalOutcome:
    """Learn Boolean h approximating real labels via the phase-state reduction.

    Runs state_learner(child_source, eps) on post-selected copies, rounds the
    returned decomposition to signs, fixes the global sign from basis samples
    of the encoded state, and reports the exact margin E_x[phi * h].
    """
    gamma = lf.gamma
    if gamma < gamma_floor:
        raise ConfigurationError(
            f"label mass gamma = {gamma:.3g} below floor {gamma_floor:.3g}; "
            "post-selection cost would exceed the desk budget"
        )
    root, child, success = make_distributional_source(
        lf, mode=mode, seed=seed, swap_constant=swap_constant
    )
    inner = state_learner(child, eps)
    decomposition = inner.hypothesis if hasattr(inner, "hypothesis") else inner
    if isinstance(decomposition, SignHypothesis):
        hypothesis = decomposition
    else:
        hypothesis = SignHypothesis(lf.n, decomposition)

    # Fix the global sign: basis samples of the encoded state give
    # E[h(x) * (1 - 2b)] -> E[h * phi].
    shots = shots_for(gamma / 4.0, _SIGN_FIX_CONFIDENCE, c=swap_constant)
    h_signs = hypothesis.signs().astype(np.float64)
    if root.sampled:
        counts = sample_basis_counts(root, shots)
        half = 1 << lf.n
        est = float(np.dot(counts[:half] - counts[half:], h_signs)) / shots
    else:
        root.consume(shots, "basis_sample")
        est = float(np.mean(lf.values * h_signs))
    flipped = est < 0.0
    if flipped:
        hypothesis = hypothesis.negated()
        h_signs = -h_signs
    margin = float(np.mean(lf.values * h_signs))
    return DistributionalOutcome(
        hypothesis=hypothesis,
        margin=margin,
        success_prob=success,
        flipped=flipped,
        inner=inner if isinstance(inner, LearningOutcome) else None,
        ledger=root.ledger,
    )
