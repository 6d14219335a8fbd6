"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--n 20000] [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from ebilliard import _pykernels
from ebilliard.billiard import Billiard

try:
    from ebilliard import _ckernels
except ImportError:
    _ckernels = None


def cases(n):
    B = Billiard(1.5)
    ac, bc = B.caustic_axes
    t = np.linspace(0, 2 * np.pi, n, endpoint=False)
    P = _pykernels.orbit_vertices(B.a, B.b, ac, bc, t)
    s = _pykernels.sidelengths(P)
    tri = s[..., [1, 2, 0]] + s[..., [2, 0, 1]] - s  # X9
    return {
        "orbit_vertices": lambda k: k.orbit_vertices(B.a, B.b, ac, bc, t),
        "sidelengths": lambda k: k.sidelengths(P),
        "trilinear_to_cartesian": lambda k: k.trilinear_to_cartesian(P, s, tri),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"n = {args.n}, best of {args.repeat}")
    print(f"{'kernel':<24}{'python ms':>12}{'cython ms':>12}{'speedup':>10}{'max diff':>12}")
    for name, fn in cases(args.n).items():
        tp = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat)) * 1e3
        if _ckernels is None:
            print(f"{name:<24}{tp:12.3f}{'n/a':>12}")
            continue
        tc = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat)) * 1e3
        a, b = fn(_pykernels), fn(_ckernels)
        a, b = (a[0], b[0]) if isinstance(a, tuple) else (a, b)
        diff = float(np.nanmax(np.abs(a - b)))
        print(f"{name:<24}{tp:12.3f}{tc:12.3f}{tp / tc:10.1f}{diff:12.1e}")


if __name__ == "__main__":
    main()
