"""Time the in-place Walsh-Hadamard kernel across available backends.

Usage: python3 benchmarks/bench_fwht.py [--max-qubits N] [--repeats R]

Prints one table row per (qubits, backend) pair with the best wall time over
R repeats, plus the speedup of each compiled backend over the pure-Python one.
"""

import argparse
import time

import numpy as np

from phaseboost import kernels


def best_time(backend: str, amps: np.ndarray, repeats: int) -> float:
    kernels.set_backend(backend)
    best = float("inf")
    for _ in range(repeats):
        work = amps.copy()
        t0 = time.perf_counter()
        kernels.fwht_inplace(work)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-qubits", type=int, default=18)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    backends = kernels.available_backends()
    original = kernels.ACTIVE_BACKEND
    rng = np.random.default_rng(0)
    print(f"backends: {', '.join(backends)}")
    header = f"{'qubits':>6} " + " ".join(f"{b + ' (s)':>12}" for b in backends)
    if "py" in backends and len(backends) > 1:
        header += f" {'speedup':>8}"
    print(header)
    try:
        for n in range(8, args.max_qubits + 1, 2):
            amps = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
            times = {b: best_time(b, amps, args.repeats) for b in backends}
            row = f"{n:>6} " + " ".join(f"{times[b]:>12.6f}" for b in backends)
            if "py" in times and len(times) > 1:
                fastest_other = min(v for b, v in times.items() if b != "py")
                row += f" {times['py'] / fastest_other:>7.1f}x"
            print(row)
    finally:
        kernels.set_backend(original)


if __name__ == "__main__":
    main()
