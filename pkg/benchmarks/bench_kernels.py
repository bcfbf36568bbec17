"""Time the compiled and pure-Python lattice kernels on every lattice of a size.

    python3 benchmarks/bench_kernels.py [--size 6] [--repeat 3]
"""

import argparse
import time

from latproof import kernels
from latproof.enumerate import enumerate_lattices

KERNELS = ("modular_failure", "distributive_failure", "uvp_failure", "lemma_failures", "tables_from_leq")


def _args(name, L):
    if name == "tables_from_leq":
        return (L.leq,)
    if name in ("modular_failure", "lemma_failures"):
        return (L.leq, L.meet, L.join)
    return (L.meet, L.join)


def bench(backend, lattices, repeat):
    out = {}
    for name in KERNELS:
        fn = getattr(backend, name)
        best = float("inf")
        for _ in range(repeat):
            t0 = time.perf_counter()
            for L in lattices:
                fn(*_args(name, L))
            best = min(best, time.perf_counter() - t0)
        out[name] = best
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--size", type=int, default=6)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    lattices = [L for n in range(1, args.size + 1) for L in enumerate_lattices(n)]
    backends = kernels.available_backends()
    results = {name: bench(mod, lattices, args.repeat) for name, mod in backends.items()}
    print(f"{len(lattices)} lattices of size <= {args.size}, best of {args.repeat}")
    print(f"{'kernel':<22}" + "".join(f"{b:>12}" for b in results) + ("     speedup" if len(results) > 1 else ""))
    for k in KERNELS:
        row = f"{k:<22}" + "".join(f"{results[b][k] * 1e3:>10.2f}ms" for b in results)
        if "cython" in results:
            row += f"{results['python'][k] / max(results['cython'][k], 1e-9):>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
