"""Time each kernel under the compiled and the numpy backends.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

import numpy as np

from ultraweight import _kernels_py

try:
    from ultraweight import _kernels as _compiled
except ImportError:
    _compiled = None


def workloads(rng):
    y = np.cumsum(rng.uniform(0, 3, 4001))
    logm = np.cumsum(rng.uniform(0, 1, 201))
    a, b = rng.normal(size=2001), rng.normal(size=2001)
    s = np.linspace(0, 30, 4096)
    phi = np.expm1(s / 2)
    t = np.linspace(0, 1e5, 2000)
    u = np.linspace(-2, 8, 2000)
    cap = np.full(2000, 4000, dtype=np.int64)
    return {
        "lower_hull(n=4001)": ("lower_hull", (y,)),
        "fdb_table(kmax=200)": ("fdb_table", (logm,)),
        "maxplus_conv(n=2001)": ("maxplus_conv", (a, b, 1)),
        "legendre_sweep(4096x2000)": ("legendre_sweep", (phi, s, t)),
        "assoc_max(4001x2000)": ("assoc_max", (y, u, cap)),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    backends = {"python": _kernels_py}
    if _compiled is not None:
        backends["cython"] = _compiled
    rng = np.random.default_rng(0)
    print(f"{'kernel':<28}" + "".join(f"{name:>12}" for name in backends) + ("     speedup" if len(backends) > 1 else ""))
    for label, (fn, call_args) in workloads(rng).items():
        times = {}
        for name, mod in backends.items():
            f = getattr(mod, fn)
            times[name] = min(timeit.repeat(lambda: f(*call_args), number=1, repeat=args.repeat))
        row = f"{label:<28}" + "".join(f"{times[n] * 1e3:>10.2f}ms" for n in backends)
        if len(backends) > 1:
            row += f"{times['python'] / times['cython']:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
