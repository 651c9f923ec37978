"""Two-stage agnostic boosting on copies of an unknown phase-like state.

Stage 1 (structure learning) repeatedly runs a weak parity learner against the
normalized residual of the state outside the parities found so far, recording
one label per round until the residual either loses correlation with the
concept class or loses norm. Stage 2 (parameter learning) estimates the
complex projection coefficient on each found parity, up to the global phase
that makes the first coefficient real positive, and normalizes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .access import (
    MIN_DELTA,
    CopySource,
    default_attempt_cap,
    magnitude_estimate,
    povm_norm_estimate,
    prepare_residual,
    swap_test_estimate,
)
from .errors import (
    ConfigurationError,
    ContractViolationError,
    ParameterError,
    PromiseViolationError,
)
from .statevec import (
    ParityDecomposition,
    ParitySpan,
    StateVector,
    parity_state,
    project_onto_span,
)
from .weak import WeakLearner

# Ceiling on actual loop iterations at desk scale. The theoretical round bound
# t_max can be astronomically larger; it is stored and asserted against, while
# this cap only trips (as a configuration error) if a run physically reaches it.
DESK_ITERATION_CAP = 10_000_000

_TINY = 5e-324


@dataclass(frozen=True)
class BoostingConfig:
    """All derived parameters of a boosting run; construct via derive()."""

    eps: float
    delta: float
    learner: WeakLearner
    eps_s: float
    eps_p: float
    eta: float
    t_max: float
    delta_prime: float
    attempt_cap: int
    iteration_cap: int

    @classmethod
    def derive(cls, learner: WeakLearner, eps: float, delta: float) -> "BoostingConfig":
        if not 0.0 < eps < 1.0:
            raise ParameterError(f"accuracy must lie in (0,1), got {eps}")
        if not 0.0 < delta < 1.0:
            raise ParameterError(f"confidence parameter must lie in (0,1), got {delta}")
        exponent = 1.0 / learner.eta2 + 1.0
        eps_s = (2.0 / 3.0) ** exponent * eps * eps / 16.0
        bound = learner.bind(eps_s)
        eta = max(bound.eta(eps_s), _TINY)
        denom = max(eps_s * eta, _TINY)
        t_max_f = 4.0 / denom
        t_max = float(math.ceil(t_max_f)) if math.isfinite(t_max_f) else math.inf
        delta_prime = max(delta / (3.0 * t_max), MIN_DELTA)
        return cls(
            eps=eps,
            delta=delta,
            learner=bound,
            eps_s=eps_s,
            eps_p=eps / 2.0,
            eta=eta,
            t_max=t_max,
            delta_prime=delta_prime,
            attempt_cap=default_attempt_cap(eps_s, delta_prime),
            iteration_cap=int(min(t_max, DESK_ITERATION_CAP)),
        )

    def stage2_accuracies(self, kappa: int) -> dict[str, float]:
        """The per-coefficient accuracy targets as displayed for a given kappa."""
        if kappa < 1:
            raise ParameterError(f"kappa must be >= 1, got {kappa}")
        return {
            "upsilon1": self.eps_p * self.eta / (63.0 * kappa),
            "upsilon2": self.eps_p * math.sqrt(self.eta) / (18.0 * kappa),
            "upsilon_prime": self.eps_p * math.sqrt(self.eta) / (36.0 * kappa),
        }


@dataclass(frozen=True)
class IterationRecord:
    """One structure-learning round: what was seen and what was decided."""

    t: int
    label: int
    alpha_exact: float
    nu_hat: float | None
    alpha_sq_hat: float | None
    appended: bool


@dataclass(frozen=True)
class StructureResult:
    labels: tuple[int, ...]
    trace: tuple[IterationRecord, ...]
    stop_reason: str
    kappa: int = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "kappa", len(self.labels))

    @property
    def span(self) -> ParitySpan:
        return ParitySpan(self.labels)


def structure_learning(
    src: CopySource, config: BoostingConfig, fidelity_break: bool = True
) -> StructureResult:
    """Stage 1: collect parity labels from residuals of the original state.

    Every residual is post-selected from fresh copies of the root source, never
    from a previous residual. With fidelity_break=False the per-round overlap
    test is skipped and labels are appended unconditionally (the variant the
    distribution-free PAC reduction uses); only the norm test can then stop the
    loop early.
    """
    labels: list[int] = []
    trace: list[IterationRecord] = []
    stop_reason: str | None = None
    current = src
    alpha_exact = 1.0
    for t in range(1, config.iteration_cap + 1):
        label = config.learner.run(current, config.eps_s, config.delta_prime)
        nu_hat: float | None = None
        if fidelity_break:
            chi = parity_state(src.n, label)
            nu_hat = swap_test_estimate(current, chi, config.eta / 2.0, config.delta_prime)
            if nu_hat < config.eta:
                trace.append(IterationRecord(t, label, alpha_exact, nu_hat, None, False))
                stop_reason = "fidelity-break"
                break
        if label in labels:
            raise ContractViolationError(
                f"weak learner returned parity {label} twice; residuals must be "
                "orthogonal to every captured parity"
            )
        labels.append(label)
        span = ParitySpan(tuple(labels))
        span_mass_hat = povm_norm_estimate(src, span, config.eps_s / 2.0, config.delta_prime)
        alpha_sq_hat = max(0.0, 1.0 - span_mass_hat)
        trace.append(IterationRecord(t, label, alpha_exact, nu_hat, alpha_sq_hat, True))
        if alpha_sq_hat < config.eps_s:
            stop_reason = "norm-break"
            break
        report = project_onto_span(src.hidden, span)
        if report.residual is None:
            # The state lies exactly in the captured span; nothing remains.
            stop_reason = "norm-break"
            break
        current = prepare_residual(src, span, attempt_cap=config.attempt_cap, report=report)
        alpha_exact = report.residual_norm
    if stop_reason is None:
        if config.t_max > config.iteration_cap:
            raise ConfigurationError(
                f"run reached the desk iteration cap ({config.iteration_cap}) while the "
                f"round bound is {config.t_max:.3g}; parameters are out of desk scale"
            )
        stop_reason = "t_max"
    result = StructureResult(tuple(labels), tuple(trace), stop_reason)
    if result.kappa > config.t_max:
        raise ContractViolationError(
            f"captured {result.kappa} parities, above the round bound {config.t_max}"
        )
    return result


def estimate_projection_coefficients(
    src: CopySource, labels, eps: float, mu: float, delta: float
) -> np.ndarray:
    """Estimate the coefficients <chi_j|psi>, rotated so the first is real >= 0.

    Requires every true squared coefficient to be at least mu. The returned
    vector beta satisfies, with probability 1 - delta, both
    |<psi| sum_j beta_j chi_j>|^2 >= ||P psi||^4 - eps and
    ||beta||^2 <= ||P psi||^2 + eps, with P the span projector.

    Magnitudes on each parity use the mu floor; the two interference magnitudes
    per coefficient (against (chi_1 + chi_j)/sqrt2 and (chi_1 + i chi_j)/sqrt2)
    have no floor and carry the tighter accuracy.
    """
    labels = list(labels)
    k = len(labels)
    if k == 0:
        raise ParameterError("cannot estimate coefficients on an empty label set")
    if len(set(labels)) != k:
        raise ParameterError("labels must be pairwise distinct")
    if not 0.0 < mu <= 1.0:
        raise ParameterError(f"coefficient floor must lie in (0,1], got {mu}")
    if not eps > 0.0:
        raise ParameterError(f"accuracy must be positive, got {eps}")
    if not 0.0 < delta < 1.0:
        raise ParameterError(f"confidence parameter must lie in (0,1), got {delta}")
    # Deep schedules drive these below the subnormal floor; the shot budget
    # saturates long before, so clamping changes no charge.
    ups1 = max(eps * mu / (63.0 * k), _TINY)
    ups2 = max(eps * math.sqrt(mu) / (18.0 * k), _TINY)
    ups_prime = max(eps * math.sqrt(mu) / (36.0 * k), _TINY)
    delta_each = delta / (3.0 * k)
    root_mu = math.sqrt(mu)

    chi1 = parity_state(src.n, labels[0])
    xi1 = magnitude_estimate(src, chi1, ups1, delta_each, floor_sq=mu)
    if xi1 < root_mu - ups1:
        raise PromiseViolationError(
            f"first coefficient magnitude estimate {xi1:.6g} is below the promised "
            f"floor sqrt(mu) - ups1 = {root_mu - ups1:.6g}"
        )
    beta = np.zeros(k, dtype=np.complex128)
    beta[0] = xi1
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    for j in range(1, k):
        chij = parity_state(src.n, labels[j])
        xij = magnitude_estimate(src, chij, ups2, delta_each, floor_sq=mu)
        real_probe = StateVector(src.n, (chi1.amps + chij.amps) * inv_sqrt2)
        imag_probe = StateVector(src.n, (chi1.amps + 1j * chij.amps) * inv_sqrt2)
        g_real = magnitude_estimate(src, real_probe, ups_prime, delta_each)
        g_imag = magnitude_estimate(src, imag_probe, ups_prime, delta_each)
        a_j = (2.0 * g_real**2 - xi1**2 - xij**2) / (2.0 * xi1)
        b_j = (2.0 * g_imag**2 - xi1**2 - xij**2) / (2.0 * xi1)
        beta[j] = a_j + 1j * b_j
    return beta


def parameter_learning(
    src: CopySource, labels, config: BoostingConfig
) -> tuple[ParityDecomposition, np.ndarray]:
    """Stage 2: coefficient estimation at the accuracies the run's promise buys.

    The structure stage's non-exit conditions guarantee every captured parity
    holds squared overlap at least mu = eps_s * eta / 4 with the original
    state; the estimator error budget gamma is set so the normalized loss stays
    within eps_p. Returns the unit-norm decomposition and the raw estimates.
    """
    labels = list(labels)
    kappa = len(labels)
    if kappa == 0:
        raise ParameterError("parameter learning needs at least one label")
    mu = max(config.eps_s * config.eta / 4.0, _TINY)
    gamma = max(config.eps_p * kappa * mu * mu / 2.0, _TINY)
    delta = min(3.0 * kappa * config.delta_prime, config.delta)
    raw = estimate_projection_coefficients(src, labels, gamma, mu, delta)
    norm = float(np.linalg.norm(raw))
    decomposition = ParityDecomposition(tuple(labels), raw / norm)
    return decomposition, raw


@dataclass(frozen=True)
class BoostResult:
    decomposition: ParityDecomposition
    kappa: int
    stop_reason: str
    trace: tuple[IterationRecord, ...]
    ledger: dict
    config: BoostingConfig | None
    raw_coefficients: np.ndarray | None = None


def _reorder_largest_first(structure: StructureResult) -> list[int]:
    """Order captured labels by their estimated share of the original state.

    Uses only quantities already recorded in the trace: the overlap estimate of
    round t against the residual, scaled by the previous round's residual-norm
    estimate. No extra copies are consumed.
    """
    scores = []
    prev_alpha_sq = 1.0
    for rec in structure.trace:
        if not rec.appended:
            continue
        if rec.nu_hat is None:
            raise ParameterError("cannot reorder a run that skipped overlap estimates")
        scores.append(prev_alpha_sq * rec.nu_hat)
        prev_alpha_sq = rec.alpha_sq_hat if rec.alpha_sq_hat is not None else prev_alpha_sq
    order = np.argsort(-np.asarray(scores), kind="stable")
    return [structure.labels[i] for i in order]


def agnostic_boost(
    src: CopySource,
    learner: WeakLearner,
    eps: float,
    delta: float,
    reorder_largest_first: bool = False,
) -> BoostResult:
    """Full pipeline: structure learning, then parameter learning.

    The returned decomposition h = sum_j beta_j chi_j has unit norm and, when
    the learner's promise holds against the target class, satisfies
    |<psi|h>|^2 >= opt - eps with probability 1 - delta. Accuracies at or above
    1 are vacuous and return an empty result without consuming copies.
    """
    if eps <= 0.0:
        raise ParameterError(f"accuracy must be positive, got {eps}")
    if eps >= 1.0:
        return BoostResult(
            decomposition=ParityDecomposition((), np.zeros(0, dtype=np.complex128)),
            kappa=0,
            stop_reason="vacuous",
            trace=(),
            ledger=src.ledger.as_dict(),
            config=None,
        )
    config = BoostingConfig.derive(learner, eps, delta)
    structure = structure_learning(src, config)
    if structure.kappa == 0:
        return BoostResult(
            decomposition=ParityDecomposition((), np.zeros(0, dtype=np.complex128)),
            kappa=0,
            stop_reason=structure.stop_reason,
            trace=structure.trace,
            ledger=src.ledger.as_dict(),
            config=config,
        )
    labels = list(structure.labels)
    if reorder_largest_first:
        labels = _reorder_largest_first(structure)
    decomposition, raw = parameter_learning(src, labels, config)
    return BoostResult(
        decomposition=decomposition,
        kappa=structure.kappa,
        stop_reason=structure.stop_reason,
        trace=structure.trace,
        ledger=src.ledger.as_dict(),
        config=config,
        raw_coefficients=raw,
    )
