"""Compare the compiled and numpy geometric-product kernels on Cl^n.

    python3 benchmarks/bench_kernels.py [--n 9] [--repeat 20]
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from gnspheres import _pykernels, kernels


def _sparse(rng, n, terms):
    idx = np.sort(rng.choice(1 << n, size=terms, replace=False)).astype(np.int64)
    val = rng.integers(-50, 50, size=terms).astype(np.int64)
    return idx, val


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=9)
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    try:
        from gnspheres import _ckernels
    except ImportError:
        print("compiled kernels unavailable; only the numpy backend is timed")
        _ckernels = None

    rng = np.random.default_rng(args.seed)
    n = args.n
    cases = {
        "gp_int64 bivector*bivector": (_sparse(rng, n, 36), _sparse(rng, n, 36)),
        "gp_int64 128 x 128 terms": (_sparse(rng, n, 128), _sparse(rng, n, 128)),
    }
    a = rng.standard_normal(1 << n)
    b = rng.standard_normal(1 << n)
    _pykernels.sign_table(n)  # exclude table construction from the timings

    print(f"backend selected at import: {kernels.BACKEND}")
    print(f"{'kernel':<32}{'numpy [ms]':>12}{'cython [ms]':>13}{'speedup':>10}")
    for name, ((ia, va), (ib, vb)) in cases.items():
        t_py = min(timeit.repeat(lambda: _pykernels.gp_int64(ia, va, ib, vb, n), number=1, repeat=args.repeat))
        line = f"{name:<32}{1e3 * t_py:>12.3f}"
        if _ckernels is not None:
            ref = _pykernels.gp_int64(ia, va, ib, vb, n)
            assert np.array_equal(ref, _ckernels.gp_int64(ia, va, ib, vb, n))
            t_c = min(timeit.repeat(lambda: _ckernels.gp_int64(ia, va, ib, vb, n), number=1, repeat=args.repeat))
            line += f"{1e3 * t_c:>13.3f}{t_py / t_c:>10.1f}"
        print(line)

    t_py = min(timeit.repeat(lambda: _pykernels.gp_float64(a, b), number=1, repeat=max(3, args.repeat // 4)))
    line = f"{'gp_float64 dense':<32}{1e3 * t_py:>12.3f}"
    if _ckernels is not None:
        assert np.allclose(_pykernels.gp_float64(a, b), _ckernels.gp_float64(a, b), atol=1e-9)
        t_c = min(timeit.repeat(lambda: _ckernels.gp_float64(a, b), number=1, repeat=max(3, args.repeat // 4)))
        line += f"{1e3 * t_c:>13.3f}{t_py / t_c:>10.1f}"
    print(line)


if __name__ == "__main__":
    main()
