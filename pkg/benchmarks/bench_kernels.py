"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from harmkit._kernels import _py

try:
    from harmkit._kernels import _cy
except ImportError:
    _cy = None


def cases(rng):
    n = 400
    x = rng.uniform(0, 10, size=(n, 2))
    d = np.sqrt(((x[:, None, :] - x[None, :, :]) ** 2).sum(-1))
    f = rng.standard_normal(n)
    a = rng.standard_normal(2000) + 1j * rng.standard_normal(2000)
    b = rng.standard_normal(2000) + 1j * rng.standard_normal(2000)
    centers = np.array([0.0, 3.0])
    floors = np.array([1 / 32, 1 / 32])
    return {
        "march_edges": lambda k: k.march_edges(-200.0, 200.0, centers, floors, 1 / 64, 0.01, 10**7),
        "cauchy_truncated": lambda k: k.cauchy_truncated(a, b, 2000),
        "min_plus": lambda k: k.min_plus(f, d, 1.5),
        "lipschitz_worst": lambda k: k.lipschitz_worst(f, d, 1.5, 1.0),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = {"python": _py} | ({"cython": _cy} if _cy is not None else {})
    print(f"{'kernel':<18}" + "".join(f"{b:>12}" for b in backends) + ("   speedup" if _cy else ""))
    for name, fn in cases(np.random.default_rng(0)).items():
        times = {b: min(timeit.repeat(lambda k=k: fn(k), number=1, repeat=args.repeat)) for b, k in backends.items()}
        line = f"{name:<18}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times.values())
        if _cy is not None:
            line += f"{times['python'] / times['cython']:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
