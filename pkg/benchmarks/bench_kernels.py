"""Timing comparison of the jit kernels against the pure-numpy fallback.

Calls both implementations directly, so the NONCLASS_NO_NUMBA flag does
not matter here.  Run as: python3 benchmarks/bench_kernels.py
"""

import math
import time

import numpy as np

from nonclass._kernels import (
    _overlaps_numba,
    _overlaps_numpy,
    _wigner_numba,
    _wigner_numpy,
)
from nonclass.states import add_photons, make_coherent, make_squeezed_vacuum


def lattice(radius, res):
    c = np.linspace(-radius, radius, res)
    return (c[None, :] + 1j * c[:, None]).ravel()


def best_of(fn, amps, betas, repeats=3):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(amps, betas)
        times.append(time.perf_counter() - t0)
    return min(times)


def run(title, numpy_fn, numba_fn, amps, betas):
    numba_fn(amps, betas[:1])  # trigger compilation outside the timer
    t_np = best_of(numpy_fn, amps, betas, repeats=3)
    t_nb = best_of(numba_fn, amps, betas, repeats=3)
    print(f"{title}")
    print(f"  {len(amps)} amplitudes x {betas.size} points")
    print(f"  numpy {t_np * 1e3:8.1f} ms")
    print(f"  numba {t_nb * 1e3:8.1f} ms   speedup x{t_np / t_nb:.1f}")


def main():
    svs = make_squeezed_vacuum(2.0, 0.4)
    run(
        "coherent-overlap kernel, squeezed vacuum r=2",
        _overlaps_numpy,
        _overlaps_numba,
        svs.amplitudes,
        lattice(3.0 * math.sinh(2.0) + 5.0, 101),
    )

    pac, _ = add_photons(make_coherent(math.sqrt(1.5)), 2)
    run(
        "Wigner kernel, two photons added to |alpha|^2 = 1.5",
        _wigner_numpy,
        _wigner_numba,
        pac.amplitudes,
        lattice(2.0 * math.sqrt(5.0) + 5.0, 75),
    )


if __name__ == "__main__":
    main()
