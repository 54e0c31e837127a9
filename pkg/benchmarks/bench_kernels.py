"""Timing of the point-sweep kernels under the numba and numpy backends.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat 5] [--points 20000]

Each kernel is compiled once before timing, checked for agreement between
the backends, and reported as the best of ``--repeat`` runs.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from detrep import _kernels


def cases(points: int, rng):
    z1 = np.exp(2j * np.pi * rng.uniform(size=points))
    z2 = np.exp(2j * np.pi * rng.uniform(size=points))
    x1, x2 = rng.normal(size=points), rng.normal(size=points)
    out = []
    for m in (3, 6, 10):
        c = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
        out.append((f"horner2 {m}x{m}", _kernels.horner2, (c, z1, z2)))
    for n in ((1, 1), (2, 2), (4, 3)):
        size = sum(n)
        K = rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
        K /= np.linalg.norm(K, 2)
        out.append((f"detrep_values n={n}", _kernels.detrep_values, (K, n[0], z1, z2)))
    for d in (2, 5, 8):
        X = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        A1 = (X + X.conj().T) / 2
        A2 = A1 @ A1 / d
        out.append((f"pencil_values d={d}", _kernels.pencil_values, (A1, A2, x1, x2)))
    mats = rng.normal(size=(points, 4, 4)) + 1j * rng.normal(size=(points, 4, 4))
    out.append(("det_batch 4x4", _kernels.det_batch, (mats,)))
    return out


def best_time(fn, args, repeat: int) -> float:
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--points", type=int, default=20000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if not _kernels.HAVE_NUMBA:
        print("numba is not importable; nothing to compare")
        return 1
    _kernels.warmup()
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':28s} {'numpy ms':>10s} {'numba ms':>10s} {'speedup':>8s} {'max diff':>10s}")
    old = _kernels.get_backend()
    try:
        for name, fn, fargs in cases(args.points, rng):
            times, values = {}, {}
            for backend in ("numpy", "numba"):
                _kernels.set_backend(backend)
                values[backend] = fn(*fargs)
                times[backend] = best_time(fn, fargs, args.repeat)
            ref = values["numpy"]
            diff = float(np.max(np.abs(values["numba"] - ref) / np.maximum(1.0, np.abs(ref))))
            print(f"{name:28s} {1e3 * times['numpy']:10.2f} {1e3 * times['numba']:10.2f} "
                  f"{times['numpy'] / times['numba']:8.1f} {diff:10.1e}")
    finally:
        _kernels.set_backend(old)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
