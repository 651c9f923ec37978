"""Dense statevector arithmetic for phase states.

Conventions, fixed globally:
  * Little-endian indexing: bit i of an amplitude index is qubit i, so the
    n-bit string x maps to integer sum(x_i << i).
  * A phase state of a Boolean f is 2^(-n/2) * sum_x (-1)^f(x) |x>.
  * A parity state |chi_S> is the phase state of x -> <S,x> mod 2; under the
    unitary Walsh-Hadamard transform it is the basis state |S>, so reading
    entry S of walsh_hadamard(psi) gives <chi_S|psi>.

All tolerances live here: unit norm and orthogonality checks use NORM_ATOL,
residual existence uses RESIDUAL_ATOL. States above SOFT_QUBIT_CAP qubits are
refused (2^24 complex doubles is ~256 MB; fail loudly instead of swapping).
Reassign SOFT_QUBIT_CAP deliberately if you really need more.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError, ResourceLimitError
from .kernels import fwht_inplace

NORM_ATOL = 1e-9
RESIDUAL_ATOL = 1e-9
SOFT_QUBIT_CAP = 24

_INDEX_CACHE: dict[int, np.ndarray] = {}


def _indices(n: int) -> np.ndarray:
    got = _INDEX_CACHE.get(n)
    if got is None:
        got = np.arange(1 << n, dtype=np.uint32)
        got.setflags(write=False)
        _INDEX_CACHE[n] = got
    return got


def check_qubit_count(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ParameterError(f"qubit count must be a positive integer, got {n!r}")
    if n > SOFT_QUBIT_CAP:
        raise ResourceLimitError(
            f"n={n} exceeds the soft qubit cap {SOFT_QUBIT_CAP} "
            f"(2^{n} amplitudes); raise statevec.SOFT_QUBIT_CAP to override"
        )


@dataclass(frozen=True, eq=False)
class StateVector:
    """A unit vector of 2^n complex amplitudes. Immutable once built."""

    n: int
    amps: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        check_qubit_count(self.n)
        amps = np.ascontiguousarray(self.amps, dtype=np.complex128)
        if amps.shape != (1 << self.n,):
            raise ParameterError(
                f"amplitude array has shape {amps.shape}, expected ({1 << self.n},)"
            )
        nrm = float(np.linalg.norm(amps))
        if abs(nrm - 1.0) > NORM_ATOL:
            raise ParameterError(f"state is not normalized: ||amps|| = {nrm!r}")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @classmethod
    def normalized(cls, n: int, amps: np.ndarray) -> "StateVector":
        amps = np.asarray(amps, dtype=np.complex128)
        nrm = float(np.linalg.norm(amps))
        if nrm < RESIDUAL_ATOL:
            raise ParameterError("cannot normalize a (numerically) zero vector")
        return cls(n, amps / nrm)

    def copy_amps(self) -> np.ndarray:
        return np.array(self.amps, dtype=np.complex128)


def parity_signs(n: int, mask: int) -> np.ndarray:
    """(-1)^<mask,x> for every x, as float64. The <,> is popcount(mask & x) mod 2."""
    check_qubit_count(n)
    if not 0 <= mask < (1 << n):
        raise ParameterError(f"mask {mask} out of range for n={n}")
    bits = np.bitwise_count(_indices(n) & np.uint32(mask)) & np.uint8(1)
    return 1.0 - 2.0 * bits.astype(np.float64)


def _signs_of(f, n: int | None) -> tuple[int, np.ndarray]:
    """Accept a BooleanConcept-like object or a 0/1 or +-1 table; return (n, +-1 floats)."""
    if hasattr(f, "signs") and hasattr(f, "n"):
        return int(f.n), np.asarray(f.signs(), dtype=np.float64)
    table = np.asarray(f, dtype=np.float64)
    if table.ndim != 1 or table.size & (table.size - 1) != 0:
        raise ParameterError("truth table must be 1-D with power-of-two length")
    size_n = int(table.size).bit_length() - 1
    if n is not None and n != size_n:
        raise ParameterError(f"table length {table.size} does not match n={n}")
    values = set(np.unique(table))
    if values <= {0.0, 1.0}:
        table = 1.0 - 2.0 * table
    elif not values <= {-1.0, 1.0}:
        raise ParameterError("truth table entries must be 0/1 bits or +-1 signs")
    return size_n, table


def phase_state_of(f, n: int | None = None) -> StateVector:
    """Phase state 2^(-n/2) * sum_x (-1)^f(x) |x> of a concept or truth table."""
    n, signs = _signs_of(f, n)
    check_qubit_count(n)
    amps = signs.astype(np.complex128)
    amps *= 2.0 ** (-n / 2)
    return StateVector(n, amps)


def parity_state(n: int, mask: int) -> StateVector:
    amps = parity_signs(n, mask).astype(np.complex128)
    amps *= 2.0 ** (-n / 2)
    return StateVector(n, amps)


def uniform_state(n: int) -> StateVector:
    check_qubit_count(n)
    amps = np.full(1 << n, 2.0 ** (-n / 2), dtype=np.complex128)
    return StateVector(n, amps)


def basis_state(n: int, x: int) -> StateVector:
    check_qubit_count(n)
    if not 0 <= x < (1 << n):
        raise ParameterError(f"basis index {x} out of range for n={n}")
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[x] = 1.0
    return StateVector(n, amps)


def random_state(n: int, rng: np.random.Generator) -> StateVector:
    check_qubit_count(n)
    amps = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
    return StateVector.normalized(n, amps)


def wht_array(amps: np.ndarray) -> np.ndarray:
    """Unitary Walsh-Hadamard transform of a raw array (copy; orthonormal scaling)."""
    out = np.array(amps, dtype=np.complex128 if np.iscomplexobj(amps) else np.float64)
    fwht_inplace(out)
    out *= 1.0 / np.sqrt(out.shape[0])
    return out


def walsh_hadamard(s: StateVector) -> StateVector:
    """Had^(x)n applied to s; unitary, and its own inverse."""
    return StateVector(s.n, wht_array(s.amps))


def fourier_amplitudes(s: StateVector) -> np.ndarray:
    """Entry S is <chi_S|s>."""
    return wht_array(s.amps)


def overlap(a: StateVector, b: StateVector) -> complex:
    """<a|b> = sum_x conj(a_x) b_x."""
    if a.n != b.n:
        raise ParameterError(f"dimension mismatch: {a.n} vs {b.n} qubits")
    return complex(np.vdot(a.amps, b.amps))


@dataclass(frozen=True)
class ParitySpan:
    """An ordered, duplicate-free list of parity labels; spans Lambda_T."""

    labels: tuple[int, ...]

    def __post_init__(self) -> None:
        labels = tuple(int(m) for m in self.labels)
        if len(set(labels)) != len(labels):
            raise ParameterError(f"duplicate parity labels in span: {labels}")
        if any(m < 0 for m in labels):
            raise ParameterError("parity labels must be non-negative masks")
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, mask: int) -> bool:
        return int(mask) in self.labels


@dataclass(frozen=True)
class ProjectionReport:
    """Projection of a state onto a parity span.

    coefficients[i] = <chi_{S_i}|psi>; residual_norm is
    alpha = sqrt(1 - sum |beta_i|^2); residual is the normalized orthogonal
    part, or None when alpha < RESIDUAL_ATOL. residual_fourier keeps the
    residual's Fourier amplitudes with the span entries exactly zeroed, so a
    downstream consumer can observe exact orthogonality.
    """

    span: ParitySpan
    coefficients: np.ndarray
    residual_norm: float
    residual: StateVector | None
    residual_fourier: np.ndarray | None = field(repr=False, default=None)


def project_onto_span(s: StateVector, span: ParitySpan) -> ProjectionReport:
    if len(span) == 0:
        raise ParameterError("projection span must be nonempty")
    for mask in span:
        if mask >= (1 << s.n):
            raise ParameterError(f"label {mask} out of range for n={s.n}")
    fourier = fourier_amplitudes(s)
    idx = np.fromiter(span.labels, dtype=np.int64)
    coeffs = fourier[idx].copy()
    proj_sq = float(np.sum(np.abs(coeffs) ** 2))
    alpha_sq = max(0.0, 1.0 - proj_sq)
    alpha = float(np.sqrt(alpha_sq))
    if alpha < RESIDUAL_ATOL:
        return ProjectionReport(span, coeffs, alpha, None, None)
    res_fourier = fourier
    res_fourier[idx] = 0.0
    res_fourier /= np.linalg.norm(res_fourier)
    res_amps = wht_array(res_fourier)
    residual = StateVector(s.n, res_amps)
    res_fourier.setflags(write=False)
    return ProjectionReport(span, coeffs, alpha, residual, res_fourier)


@dataclass(frozen=True)
class ParityDecomposition:
    """Hypothesis sum_i coefficients[i] |chi_{labels[i]}>."""

    labels: tuple[int, ...]
    coefficients: np.ndarray

    def __post_init__(self) -> None:
        labels = tuple(int(m) for m in self.labels)
        coeffs = np.asarray(self.coefficients, dtype=np.complex128)
        if len(labels) != coeffs.shape[0]:
            raise ParameterError("labels and coefficients differ in length")
        if len(set(labels)) != len(labels):
            raise ParameterError("duplicate labels in decomposition")
        coeffs.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "coefficients", coeffs)

    def __len__(self) -> int:
        return len(self.labels)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coefficients))

    def to_vector(self, n: int) -> np.ndarray:
        """Amplitudes of sum c_i |chi_i> (not normalized here)."""
        check_qubit_count(n)
        fourier = np.zeros(1 << n, dtype=np.complex128)
        for mask, c in zip(self.labels, self.coefficients):
            if mask >= (1 << n):
                raise ParameterError(f"label {mask} out of range for n={n}")
            fourier[mask] = c
        return wht_array(fourier)

    def to_state(self, n: int) -> StateVector:
        return StateVector.normalized(n, self.to_vector(n))

    def fidelity_with(self, s: StateVector) -> float:
        """|<s|hypothesis>|^2 computed in the Fourier basis (no renormalizing)."""
        fourier = fourier_amplitudes(s)
        idx = np.fromiter(self.labels, dtype=np.int64) if self.labels else np.zeros(0, np.int64)
        inner = complex(np.vdot(fourier[idx], np.asarray(self.coefficients)))
        return abs(inner) ** 2


def make_corrupted_state(
    base: StateVector, opt_lb: float, rng: np.random.Generator
) -> StateVector:
    """sqrt(opt_lb)*base + sqrt(1-opt_lb)*junk with junk random and orthogonal to base.

    The planted fidelity |<base|result>|^2 equals opt_lb exactly (up to float
    round-off), giving experiments a certified lower bound on opt.
    """
    if not 0.0 < opt_lb <= 1.0:
        raise ParameterError(f"opt_lb must be in (0, 1], got {opt_lb}")
    if opt_lb == 1.0:
        return StateVector(base.n, base.copy_amps())
    for _ in range(8):
        junk = random_state(base.n, rng)
        j_amps = junk.copy_amps()
        j_amps -= complex(np.vdot(base.amps, j_amps)) * base.amps
        nrm = float(np.linalg.norm(j_amps))
        if nrm > 1e-6:
            break
    else:
        raise ParameterError("could not draw a junk state orthogonal to base")
    j_amps /= nrm
    out = np.sqrt(opt_lb) * base.amps + np.sqrt(1.0 - opt_lb) * j_amps
    return StateVector.normalized(base.n, out)


def dump_state(s: StateVector, path: str) -> None:
    """Binary dump: u32 little-endian n, then 2^n (re, im) float64 LE pairs."""
    interleaved = np.empty(2 << s.n, dtype="<f8")
    interleaved[0::2] = s.amps.real
    interleaved[1::2] = s.amps.imag
    with open(path, "wb") as fh:
        fh.write(struct.pack("<I", s.n))
        fh.write(interleaved.tobytes())


def load_state(path: str) -> StateVector:
    with open(path, "rb") as fh:
        header = fh.read(4)
        if len(header) != 4:
            raise ParameterError(f"{path}: truncated header")
        n = struct.unpack("<I", header)[0]
        check_qubit_count(n)
        payload = fh.read()
    expected = (2 << n) * 8
    if len(payload) != expected:
        raise ParameterError(f"{path}: expected {expected} payload bytes, got {len(payload)}")
    interleaved = np.frombuffer(payload, dtype="<f8")
    amps = interleaved[0::2] + 1j * interleaved[1::2]
    return StateVector(n, amps)
