"""Entanglement and discriminator diagnostics for phase states.

Schmidt ranks across contiguous qubit cuts (the bond-dimension profile), the
planted DNF family whose phase states have maximal rank across the x|y cut,
brute-force checks of the threshold-circuit discriminator bound, and the
residual distribution that links boosting residuals back to that bound.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .concepts import Dnf, ThresholdOfDnfs
from .errors import (
    ContractViolationError,
    DegenerateResidualError,
    ParameterError,
    ResourceLimitError,
)
from .statevec import ParityDecomposition, StateVector, _indices, check_qubit_count

SVD_TOL = 1e-8
MAX_SVD_SIDE = 1 << 12
_ATOL = 1e-12


@dataclass(frozen=True)
class BipartitionCut:
    """Contiguous cut after qubit position c: qubits 0..c-1 against the rest."""

    n: int
    cut_position: int

    def __post_init__(self) -> None:
        if not 1 <= self.cut_position <= self.n - 1:
            raise ParameterError(
                f"cut position must lie in [1, {self.n - 1}], got {self.cut_position}"
            )

    @property
    def sides(self) -> tuple[int, int]:
        return (1 << self.cut_position, 1 << (self.n - self.cut_position))


def schmidt_rank(s: StateVector, cut: BipartitionCut, tol: float = SVD_TOL) -> int:
    """Number of singular values above tol * (largest) across the cut."""
    if cut.n != s.n:
        raise ParameterError(f"cut is for n={cut.n}, state has n={s.n}")
    low, high = cut.sides
    if min(low, high) > MAX_SVD_SIDE:
        raise ResourceLimitError(
            f"cut sides {low}x{high} exceed the dense SVD limit of {MAX_SVD_SIDE}"
        )
    # Index x = (high_bits << cut) | low_bits, so a C-order reshape puts the
    # high side on rows.
    matrix = s.amps.reshape(high, low)
    singular = np.linalg.svd(matrix, compute_uv=False)
    top = float(singular[0])
    if top == 0.0:
        return 0
    return int(np.count_nonzero(singular > tol * top))


def bond_profile(s: StateVector, tol: float = SVD_TOL) -> list[tuple[int, int]]:
    """(cut position, Schmidt rank) for every contiguous cut."""
    return [
        (c, schmidt_rank(s, BipartitionCut(s.n, c), tol)) for c in range(1, s.n)
    ]


def junta_bond_bound(k: int) -> int:
    """Upper bound on any cut rank for a k-junta phase state."""
    return 1 << (k // 2)


# ---------------------------------------------------------------------------
# The hard DNF family


def hard_dnf_instance(s: int) -> Dnf:
    """f(x, y) = OR_i (x_i and y_i) on n = 2s variables; x_i is variable i,
    y_i is variable s + i. Its phase state has Schmidt rank exactly 2^s
    across the cut between the two halves."""
    if s < 1:
        raise ParameterError(f"term count must be >= 1, got {s}")
    check_qubit_count(2 * s)
    terms = tuple(((i, False), (s + i, False)) for i in range(s))
    return Dnf(2 * s, terms)


def hard_dnf_decomposition_check(s: int) -> float:
    """Max deviation of the sign matrix from its rank-2^s closed form.

    Across the x|y cut, the sign matrix of the hard instance equals
    U diag(a) U^T where column S of U indicates subsets containing S
    (U[z, S] = 1 iff S subset of z) and a_empty = 1, a_S = 2 * (-1)^|S|.
    """
    f = hard_dnf_instance(s)
    signs = f.signs().reshape(1 << s, 1 << s)  # rows y, cols x
    masks = _indices(s).astype(np.int64)
    subset = (masks[:, None] & masks[None, :]) == masks[None, :]
    u = subset.astype(np.float64)  # u[z, S] = [S subset of z]
    coeff = np.where(masks == 0, 1.0, 2.0 * (-1.0) ** np.bitwise_count(masks.astype(np.uint64)))
    rebuilt = u @ np.diag(coeff) @ u.T
    return float(np.max(np.abs(signs - rebuilt)))


# ---------------------------------------------------------------------------
# Discriminator checks


def random_product_distribution(
    n: int, rng: np.random.Generator, low: float = 0.1, high: float = 0.9
) -> np.ndarray:
    """Weights of a product distribution with per-bit marginals in [low, high]."""
    if not 0.0 < low <= high < 1.0:
        raise ParameterError(f"need 0 < low <= high < 1, got [{low}, {high}]")
    weights = np.ones(1, dtype=np.float64)
    for i in range(n):
        p = float(rng.uniform(low, high))
        weights = np.kron(np.asarray([1.0 - p, p]), weights)
    return weights


@dataclass(frozen=True)
class DiscriminatorReport:
    index: int
    correlation: float
    bound: float
    correlations: tuple[float, ...]


def verify_discriminator(f: ThresholdOfDnfs, weights: np.ndarray) -> DiscriminatorReport:
    """Best |E_D[f * C_i]| over the input DNFs, in the +-1 view.

    Asserts the threshold-circuit bound max_i |E_D[f C_i]| >= 1/(2m).
    """
    weights = np.asarray(weights, dtype=np.float64)
    if weights.shape != (1 << f.n,):
        raise ParameterError(f"weights must have length {1 << f.n}")
    if np.any(weights < 0.0) or abs(float(weights.sum()) - 1.0) > 1e-9:
        raise ParameterError("weights must be a probability distribution")
    f_signs = f.signs()
    correlations = tuple(
        float(np.sum(weights * f_signs * d.signs())) for d in f.dnfs
    )
    best = int(np.argmax(np.abs(correlations)))
    bound = 1.0 / (2.0 * f.m)
    if abs(correlations[best]) < bound - _ATOL:
        raise ContractViolationError(
            f"discriminator bound violated: best |E_D[f C_i]| = "
            f"{abs(correlations[best]):.6g} < 1/(2m) = {bound:.6g}"
        )
    return DiscriminatorReport(best, correlations[best], bound, correlations)


# ---------------------------------------------------------------------------
# Residual distribution from the depth-3 stopping argument


@dataclass(frozen=True)
class ResidualDistribution:
    """D(x) proportional to |f(x) - h(x)| with normalizer delta = E|f - h|."""

    weights: np.ndarray = field(repr=False)
    delta: float

    def __post_init__(self) -> None:
        weights = np.ascontiguousarray(self.weights, dtype=np.float64)
        if abs(float(weights.sum()) - 1.0) > 1e-9:
            raise ContractViolationError("residual distribution must sum to 1")
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)


@dataclass(frozen=True)
class ResidualDiscriminatorReport:
    t: int
    alpha: float
    delta: float
    delta_bound_ok: bool
    distribution: ResidualDistribution
    best_index: int
    best_overlap: float
    holds_at_m: bool
    holds_at_2m: bool
    holds_at_4m: bool


def residual_discriminator_check(
    f: ThresholdOfDnfs, decomposition: ParityDecomposition, t: int | None = None
) -> ResidualDiscriminatorReport:
    """Correlation of the boosting residual with f's own constituent DNFs.

    Builds the residual state psi_t of f's phase state against the partial
    hypothesis h = sum_j beta_j chi_j, the distribution D(x) proportional to
    |f(x) - h(x)|, and checks delta = E|f - h| >= alpha_t^2 / 2 together with
    the discriminator-driven overlap floors alpha_t / (c * m) at c = 1, 2, 4.
    """
    n = f.n
    if t is None:
        t = len(decomposition.labels) + 1
    f_signs = f.signs()
    if len(decomposition.labels) == 0:
        h_vals = np.zeros(1 << n, dtype=np.float64)
    else:
        h_vals = decomposition.to_vector(n).real * float(np.sqrt(1 << n))
    resid = f_signs - h_vals
    alpha = float(np.sqrt(np.mean(resid**2)))
    if alpha < 1e-12:
        raise DegenerateResidualError("hypothesis matches f exactly; no residual")
    delta = float(np.mean(np.abs(resid)))
    dist = ResidualDistribution(np.abs(resid) / ((1 << n) * delta), delta)
    # <psi_t|phi_c> = 2^-n sum_x resid(x) c(x) / alpha
    overlaps = [
        abs(float(np.mean(resid * d.signs()))) / alpha for d in f.dnfs
    ]
    best = int(np.argmax(overlaps))
    floor = alpha / f.m
    return ResidualDiscriminatorReport(
        t=t,
        alpha=alpha,
        delta=delta,
        delta_bound_ok=bool(delta >= alpha * alpha / 2.0 - _ATOL),
        distribution=dist,
        best_index=best,
        best_overlap=overlaps[best],
        holds_at_m=bool(overlaps[best] >= floor - _ATOL),
        holds_at_2m=bool(overlaps[best] >= floor / 2.0 - _ATOL),
        holds_at_4m=bool(overlaps[best] >= floor / 4.0 - _ATOL),
    )
