"""Simulated copy access to an unknown state, with explicit copy accounting.

Every statistical operation here stands in for a measurement procedure that
consumes fresh copies of a hidden state. A CopySource wraps the hidden
statevector; estimates either return the exact underlying quantity ("exact"
mode, still charged at nominal cost) or draw from the measurement distribution
("sampled" mode). Derived sources (residuals, post-selected states) charge
their preparation overhead up the parent chain, so the ledger always counts
copies of the original root state.
"""
from __future__ import annotations

import math
from contextlib import contextmanager

import numpy as np

from .errors import (
    DegenerateResidualError,
    ParameterError,
    PostSelectionFailureError,
    ResourceLimitError,
)
from .statevec import (
    ParitySpan,
    ProjectionReport,
    StateVector,
    fourier_amplitudes,
    project_onto_span,
)

# Accuracy targets below this are clamped before shot computation: the derived
# schedules of the deeper routines can demand precisions far beyond float64,
# and the corresponding shot counts only exist as ledger numbers anyway.
MIN_ESTIMATE_EPS = 1e-18
MIN_DELTA = 1e-300
DEFAULT_SWAP_CONSTANT = 2.0

# Sampling fallbacks: per-copy preparation attempts are drawn individually up
# to this many copies (so the attempt cap is checked per copy); past it we
# draw aggregate totals, switching to a normal approximation once the expected
# count no longer fits comfortably in int64 arithmetic.
PER_COPY_DRAW_LIMIT = 100_000
NB_NORMAL_LIMIT = 1e9
_INT64_DRAW_LIMIT = 1 << 62
GEOMETRIC_MIN_P = 1e-9


def shots_for(eps: float, delta: float, c: float = DEFAULT_SWAP_CONSTANT) -> int:
    """Copies needed for additive accuracy eps at confidence 1 - delta."""
    eps = max(float(eps), MIN_ESTIMATE_EPS)
    delta = max(float(delta), MIN_DELTA)
    return max(1, math.ceil(c * math.log(1.0 / delta) / (eps * eps)))


def _check_eps_delta(eps: float, delta: float) -> None:
    if not eps > 0.0:
        raise ParameterError(f"accuracy must be positive, got {eps}")
    if not 0.0 < delta < 1.0:
        raise ParameterError(f"confidence parameter must lie in (0,1), got {delta}")


def default_attempt_cap(eps_s: float, delta_prime: float) -> int:
    """Per-copy preparation attempt budget used for residual sources."""
    return math.ceil((20.0 / eps_s) * math.log(1.0 / max(delta_prime, MIN_DELTA)))


class CopyLedger:
    """Integer copy counts of the root state, split by consuming operation.

    Buckets always sum to the total. Charges issued while an attribution
    context is active are routed to its bucket instead of their natural one,
    which is how whole weak-learner invocations get their own line.
    """

    BUCKETS = ("swap_test", "basis_sample", "postselect_attempts", "weak_learner_calls")

    def __init__(self) -> None:
        self._counts: dict[str, int] = {b: 0 for b in self.BUCKETS}
        self._route_to: str | None = None

    def add(self, bucket: str, m: int) -> None:
        if bucket not in self._counts:
            raise ParameterError(f"unknown ledger bucket {bucket!r}")
        if m < 0:
            raise ParameterError(f"cannot charge a negative copy count ({m})")
        if self._route_to is not None:
            bucket = self._route_to
        self._counts[bucket] += int(m)

    @contextmanager
    def attributed(self, bucket: str = "weak_learner_calls"):
        if bucket not in self._counts:
            raise ParameterError(f"unknown ledger bucket {bucket!r}")
        prev = self._route_to
        self._route_to = bucket
        try:
            yield self
        finally:
            self._route_to = prev

    @property
    def copies_consumed(self) -> int:
        return sum(self._counts.values())

    def __getitem__(self, bucket: str) -> int:
        return self._counts[bucket]

    def as_dict(self) -> dict[str, int]:
        out = dict(self._counts)
        out["copies_consumed"] = self.copies_consumed
        return out

    def __repr__(self) -> str:
        parts = ", ".join(f"{b}={v}" for b, v in self._counts.items())
        return f"CopyLedger(total={self.copies_consumed}, {parts})"


def _draw_binomial(rng: np.random.Generator, n: int, p: float) -> int:
    if n <= _INT64_DRAW_LIMIT:
        return int(rng.binomial(n, p))
    # Counts this large are ledger bookkeeping, not statistics: draw the
    # normal limit instead of materializing an impossible binomial.
    mean = n * p
    sd = math.sqrt(n * p * (1.0 - p)) if 0.0 < p < 1.0 else 0.0
    return min(n, max(0, round(rng.normal(mean, sd)))) if sd else round(mean)


def _draw_binomial_vec(rng: np.random.Generator, n: int, p: np.ndarray) -> np.ndarray:
    p = np.clip(p, 0.0, 1.0)
    if n <= _INT64_DRAW_LIMIT:
        return rng.binomial(n, p).astype(np.float64)
    mean = n * p
    sd = np.sqrt(n * p * (1.0 - p))
    return np.clip(np.rint(rng.normal(mean, sd)), 0.0, float(n))


def _draw_attempts(rng: np.random.Generator, m: int, p: float, cap: int | None) -> int:
    """Total preparation attempts needed for m accepted copies at rate p."""
    if p >= 1.0:
        return m
    if cap is not None and p * cap < 1e-9:
        # Success within the attempt budget is (far) below one in a billion
        # per copy; treat the preparation as failed outright.
        raise PostSelectionFailureError(
            f"acceptance rate {p:.3e} cannot clear the per-copy cap of {cap} attempts"
        )
    if m <= PER_COPY_DRAW_LIMIT and p >= GEOMETRIC_MIN_P:
        per_copy = rng.geometric(p, size=m)
        if cap is not None and int(per_copy.max()) > cap:
            raise PostSelectionFailureError(
                f"a copy needed {int(per_copy.max())} attempts, cap is {cap}"
            )
        return int(per_copy.sum())
    # Aggregate draw; the per-copy cap cannot be checked here and the chance
    # of tripping it is negligible once p * cap is large.
    mean_failures = m * (1.0 - p) / p
    if mean_failures <= NB_NORMAL_LIMIT:
        return m + int(rng.negative_binomial(m, p))
    sd = math.sqrt(m * (1.0 - p)) / p
    return m + int(round(max(0.0, rng.normal(mean_failures, sd))))


class CopySource:
    """Access handle for a hidden state; all consumption goes through here."""

    def __init__(
        self,
        hidden: StateVector,
        ledger: CopyLedger,
        rng: np.random.Generator,
        mode: str,
        swap_constant: float = DEFAULT_SWAP_CONSTANT,
        parent: "CopySource | None" = None,
        prep_p: float = 1.0,
        attempt_cap: int | None = None,
        fourier: np.ndarray | None = None,
    ) -> None:
        if mode not in ("exact", "sampled"):
            raise ParameterError(f"mode must be 'exact' or 'sampled', got {mode!r}")
        if parent is not None:
            if prep_p <= 0.0:
                raise DegenerateResidualError(
                    f"derived source has acceptance probability {prep_p}"
                )
            prep_p = min(float(prep_p), 1.0)
        self.hidden = hidden
        self.ledger = ledger
        self.rng = rng
        self.mode = mode
        self.swap_constant = float(swap_constant)
        self.parent = parent
        self.prep_p = float(prep_p)
        self.attempt_cap = attempt_cap
        self._fourier = fourier

    @classmethod
    def root(
        cls,
        state: StateVector,
        mode: str = "exact",
        seed: int | None = 0,
        swap_constant: float = DEFAULT_SWAP_CONSTANT,
        ledger: CopyLedger | None = None,
        rng: np.random.Generator | None = None,
    ) -> "CopySource":
        if rng is None:
            rng = np.random.default_rng(seed)
        return cls(state, ledger or CopyLedger(), rng, mode, swap_constant)

    @property
    def n(self) -> int:
        return self.hidden.n

    @property
    def sampled(self) -> bool:
        return self.mode == "sampled"

    @property
    def fourier(self) -> np.ndarray:
        """Parity-basis amplitudes of the hidden state (cached, read-only)."""
        if self._fourier is None:
            f = fourier_amplitudes(self.hidden)
            f.setflags(write=False)
            self._fourier = f
        return self._fourier

    def spawn(
        self,
        hidden: StateVector,
        prep_p: float,
        attempt_cap: int | None = None,
        fourier: np.ndarray | None = None,
    ) -> "CopySource":
        return CopySource(
            hidden,
            self.ledger,
            self.rng,
            self.mode,
            self.swap_constant,
            parent=self,
            prep_p=prep_p,
            attempt_cap=attempt_cap,
            fourier=fourier,
        )

    def consume(self, m: int, bucket: str) -> None:
        """Charge m copies of this source, translating to root-state copies."""
        if m < 0:
            raise ParameterError(f"cannot consume {m} copies")
        if m == 0:
            return
        if self.parent is None:
            self.ledger.add(bucket, m)
            return
        if self.sampled:
            attempts = _draw_attempts(self.rng, m, self.prep_p, self.attempt_cap)
        else:
            attempts = m * math.ceil(1.0 / self.prep_p)
        self.parent.consume(m, bucket)
        if attempts > m:
            self.parent.consume(attempts - m, "postselect_attempts")


# ---------------------------------------------------------------------------
# Estimation and sampling primitives


def swap_test_estimate(src: CopySource, other: StateVector, eps: float, delta: float) -> float:
    """Estimate |<hidden|other>|^2 to within eps, w.p. >= 1 - delta."""
    _check_eps_delta(eps, delta)
    if other.n != src.n:
        raise ParameterError(f"state on {other.n} qubits against a {src.n}-qubit source")
    shots = shots_for(eps, delta, src.swap_constant)
    src.consume(shots, "swap_test")
    fidelity = min(1.0, abs(np.vdot(src.hidden.amps, other.amps)) ** 2)
    if not src.sampled:
        return fidelity
    hits = _draw_binomial(src.rng, shots, 0.5 * (1.0 + fidelity))
    return min(1.0, max(0.0, 2.0 * hits / shots - 1.0))


def povm_norm_estimate(src: CopySource, labels, eps: float, delta: float) -> float:
    """Estimate the squared norm of the hidden state's component on a parity span."""
    _check_eps_delta(eps, delta)
    idx = np.asarray(
        labels.labels if isinstance(labels, ParitySpan) else list(labels), dtype=np.int64
    )
    shots = shots_for(eps, delta, src.swap_constant)
    src.consume(shots, "swap_test")
    val = min(1.0, float(np.sum(np.abs(src.fourier[idx]) ** 2)))
    if not src.sampled:
        return val
    hits = _draw_binomial(src.rng, shots, val)
    return hits / shots


def magnitude_estimate(
    src: CopySource,
    state: StateVector,
    eps: float,
    delta: float,
    floor_sq: float | None = None,
) -> float:
    """Estimate |<hidden|state>| to within eps, w.p. >= 1 - delta.

    The magnitude comes from a squared-overlap estimate: with a known floor
    b^2 >= floor_sq on the true squared overlap, accuracy eps * sqrt(floor_sq)
    on the square suffices; without one the square is pushed to eps^2.
    """
    _check_eps_delta(eps, delta)
    if state.n != src.n:
        raise ParameterError(f"state on {state.n} qubits against a {src.n}-qubit source")
    if floor_sq is not None:
        if not 0.0 < floor_sq <= 1.0:
            raise ParameterError(f"floor_sq must lie in (0,1], got {floor_sq}")
        eps_sq = eps * math.sqrt(floor_sq)
    else:
        eps_sq = eps * eps
    shots = shots_for(eps_sq, delta, src.swap_constant)
    src.consume(shots, "swap_test")
    fidelity = min(1.0, abs(np.vdot(src.hidden.amps, state.amps)) ** 2)
    if not src.sampled:
        return math.sqrt(fidelity)
    hits = _draw_binomial(src.rng, shots, 0.5 * (1.0 + fidelity))
    est_sq = min(1.0, max(0.0, 2.0 * hits / shots - 1.0))
    return math.sqrt(est_sq)


def parity_overlap_sq_estimates(
    src: CopySource, masks: np.ndarray, eps: float, delta: float
) -> np.ndarray:
    """Batched swap-test estimates of |<parity mask|hidden>|^2, one per mask.

    Accuracy and confidence are per mask; the charge is shots * len(masks).
    """
    _check_eps_delta(eps, delta)
    masks = np.asarray(masks, dtype=np.int64)
    shots = shots_for(eps, delta, src.swap_constant)
    src.consume(shots * int(masks.shape[0]), "swap_test")
    vals = np.minimum(1.0, np.abs(src.fourier[masks]) ** 2)
    if not src.sampled:
        return vals
    hits = _draw_binomial_vec(src.rng, shots, 0.5 * (1.0 + vals))
    return np.clip(2.0 * hits / shots - 1.0, 0.0, 1.0)


def sample_fourier_counts(src: CopySource, shots: int) -> np.ndarray:
    """Histogram of `shots` parity-basis measurement outcomes (fast path)."""
    if shots < 0:
        raise ParameterError(f"cannot draw {shots} samples")
    if shots > _INT64_DRAW_LIMIT:
        raise ResourceLimitError(f"cannot materialize {shots} basis samples")
    src.consume(shots, "basis_sample")
    probs = np.abs(src.fourier) ** 2
    probs = probs / probs.sum()
    return src.rng.multinomial(shots, probs)


def sample_basis_counts(src: CopySource, shots: int) -> np.ndarray:
    """Histogram of `shots` computational-basis measurement outcomes."""
    if shots < 0:
        raise ParameterError(f"cannot draw {shots} samples")
    if shots > _INT64_DRAW_LIMIT:
        raise ResourceLimitError(f"cannot materialize {shots} basis samples")
    src.consume(shots, "basis_sample")
    probs = np.abs(src.hidden.amps) ** 2
    probs = probs / probs.sum()
    return src.rng.multinomial(shots, probs)


def basis_sample(src: CopySource, shots: int, fourier: bool = False) -> list[int]:
    """Measure `shots` fresh copies in the computational or parity basis."""
    if shots < 0:
        raise ParameterError(f"cannot draw {shots} samples")
    if shots > 10_000_000:
        raise ResourceLimitError(f"refusing to materialize {shots} samples as a list")
    src.consume(shots, "basis_sample")
    amps = src.fourier if fourier else src.hidden.amps
    probs = np.abs(amps) ** 2
    probs = probs / probs.sum()
    return [int(x) for x in src.rng.choice(probs.shape[0], size=shots, p=probs)]


def prepare_residual(
    src: CopySource,
    span: ParitySpan,
    attempt_cap: int | None = None,
    report: ProjectionReport | None = None,
) -> CopySource:
    """Derived source for the hidden state's normalized off-span component.

    Each accepted copy of the child consumes, on average, 1/alpha^2 copies of
    this source, where alpha is the residual norm; the overhead lands in the
    postselect_attempts bucket at consumption time.
    """
    if report is None:
        report = project_onto_span(src.hidden, span)
    if report.residual is None:
        raise DegenerateResidualError(
            "state lies in the parity span; there is no residual to prepare"
        )
    alpha_sq = report.residual_norm**2
    return src.spawn(
        report.residual,
        prep_p=alpha_sq,
        attempt_cap=attempt_cap,
        fourier=report.residual_fourier,
    )
