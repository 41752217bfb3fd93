"""Compiled vs numpy kernels: complex log-gamma, contour sum, incomplete gamma, end-to-end G.

    python3 benchmarks/bench_kernels.py [--repeat N] [--json]
"""

import argparse
import json
import math
import timeit

import numpy as np

from risfso import _backend, _pykernels, specfun
from risfso.specfun import MeijerSpec

try:
    from risfso import _ckernels
except ImportError:
    _ckernels = None


def cases():
    rng = np.random.default_rng(0)
    z = rng.uniform(0.1, 30.0, 20_000) + 1j * rng.uniform(-200.0, 200.0, 20_000)
    x = np.geomspace(1e-4, 1e3, 200_000)
    acc = MeijerSpec(3, 1, (-0.155, 0.845), (-0.155, -0.155, 0.0), 0.7)
    sop = MeijerSpec(3, 2, (0.4, 0.9, 1.0), (0.0, 0.3, 0.8), 1.3)
    prob = specfun._mb_problem(sop)
    c = specfun._place_contour(prob)
    h = math.pi * min(specfun._nearest_pole_distance(prob, c), 1.5) / 46.0
    mb_args = (prob.num_plus, prob.num_minus, prob.den_plus, prob.den_minus,
               prob.poly_plus, prob.poly_minus, prob.logz, c, h, 1e-17, 4_000_000)
    return {
        "clgamma (20k complex)": lambda k: k.clgamma(z),
        "mellin_barnes (one contour)": lambda k: k.mellin_barnes(*mb_args),
        "gammaincc_array (200k)": lambda k: k.gammaincc_array(0.31, x),
        "meijer_g contour (ACC-type spec)":
            lambda k: _with_backend(k, lambda: specfun.meijer_g(acc, method="contour")),
    }


def _with_backend(kernels, fn):
    saved = (_backend.clgamma, _backend.mellin_barnes, _backend.gammaincc_array)
    _backend.clgamma, _backend.mellin_barnes, _backend.gammaincc_array = (
        kernels.clgamma, kernels.mellin_barnes, kernels.gammaincc_array)
    try:
        return fn()
    finally:
        _backend.clgamma, _backend.mellin_barnes, _backend.gammaincc_array = saved


def best_of(fn, repeat):
    n, _ = timeit.Timer(fn).autorange()
    return min(timeit.repeat(fn, number=n, repeat=repeat)) / n


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", action="store_true", help="print results as JSON")
    args = ap.parse_args()

    backends = {"numpy": _pykernels}
    if _ckernels is not None:
        backends["cython"] = _ckernels
    rows = []
    for name, fn in cases().items():
        times = {b: best_of(lambda k=k: fn(k), args.repeat) for b, k in backends.items()}
        rows.append({"kernel": name, **{f"{b}_s": t for b, t in times.items()},
                     "speedup": times["numpy"] / times["cython"] if "cython" in times else None})
    if args.json:
        print(json.dumps(rows, indent=2))
        return
    print(f"{'kernel':36s} {'numpy':>12s} {'cython':>12s} {'speedup':>8s}")
    for r in rows:
        cy = f"{r['cython_s'] * 1e3:10.3f}ms" if "cython_s" in r else f"{'n/a':>12s}"
        sp = f"{r['speedup']:7.1f}x" if r["speedup"] else f"{'n/a':>8s}"
        print(f"{r['kernel']:36s} {r['numpy_s'] * 1e3:10.3f}ms {cy} {sp}")


if __name__ == "__main__":
    main()
