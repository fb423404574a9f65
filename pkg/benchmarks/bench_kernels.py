"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from zising import _backend
from zising.elliptic import EllipticParameter


def _cases(rng):
    chain = np.asarray(EllipticParameter(0.9).chain, dtype=float)
    t = rng.uniform(-np.pi, np.pi, 100_000)
    J = np.triu(rng.uniform(-1, 1, (20, 20)), 1)
    J = J + J.T
    boundary = np.arange(0, 20, 2, dtype=np.int64)
    return {
        "landen_sncndn (1e5 points)": lambda k: k.landen_sncndn(t, chain),
        "ising_enumerate (20 spins)": lambda k: k.ising_enumerate(J, boundary, True),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    names = ["python"] + (["compiled"] if _backend.has_compiled() else [])
    if len(names) == 1:
        print("compiled kernels not built; timing the fallback only")
    for label, fn in _cases(np.random.default_rng(0)).items():
        times = {}
        for name in names:
            kern = _backend.get(name)
            fn(kern)  # warm up
            times[name] = min(timeit.repeat(lambda: fn(kern), number=1, repeat=args.repeat))
        line = f"{label:30s}" + "".join(f"  {n}: {times[n] * 1e3:9.2f} ms" for n in names)
        if "compiled" in times:
            line += f"  speedup x{times['python'] / times['compiled']:.1f}"
        print(line)


if __name__ == "__main__":
    main()
