"""Compare the compiled and pure-numpy tensor-permutation kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Each row times ``perm_index_map`` over all of S_k and one ``perm_sum`` that
assembles a dense isotypic projector, then checks that both backends agree.
"""
import argparse
import itertools
import json
import math
import platform
import timeit

import numpy as np

from combforge import _kernels_py

try:
    from combforge import _kernels as _native
except ImportError:
    _native = None

CASES = [(2, 4), (2, 6), (3, 4), (2, 8), (3, 5), (4, 4)]


def _maps(impl, k, d):
    return np.stack([impl.perm_index_map(np.array(p, dtype=np.int64), d) for p in itertools.permutations(range(k))])


def bench_case(impl, k, d, repeat):
    maps = _maps(impl, k, d)
    coeffs = np.random.default_rng(0).normal(size=len(maps))
    t_map = min(timeit.repeat(lambda: _maps(impl, k, d), number=1, repeat=repeat))
    t_sum = min(timeit.repeat(lambda: impl.perm_sum(maps, coeffs, d**k), number=1, repeat=repeat))
    return t_map, t_sum, impl.perm_sum(maps, coeffs, d**k)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--json", default=None, help="also write the rows to this file")
    args = parser.parse_args(argv)

    impls = [("python", _kernels_py)] + ([("cython", _native)] if _native is not None else [])
    if _native is None:
        print("compiled extension not built; timing the numpy fallback only")
    print(f"python {platform.python_version()}, numpy {np.__version__}")
    header = f"{'d':>2} {'k':>2} {'dim':>6} {'perms':>6}"
    for name, _ in impls:
        header += f" {name + ' map ms':>15} {name + ' sum ms':>15}"
    if _native is not None:
        header += f" {'speedup sum':>12} {'max diff':>9}"
    print(header)

    rows = []
    for d, k in CASES:
        row = {"d": d, "k": k, "dim": d**k, "perms": math.factorial(k)}
        outs = {}
        line = f"{d:>2} {k:>2} {d**k:>6} {math.factorial(k):>6}"
        for name, impl in impls:
            t_map, t_sum, out = bench_case(impl, k, d, args.repeat)
            row[f"{name}_map_ms"] = t_map * 1e3
            row[f"{name}_sum_ms"] = t_sum * 1e3
            outs[name] = out
            line += f" {t_map * 1e3:>15.3f} {t_sum * 1e3:>15.3f}"
        if _native is not None:
            row["speedup_sum"] = row["python_sum_ms"] / row["cython_sum_ms"]
            row["max_diff"] = float(np.abs(outs["python"] - outs["cython"]).max())
            line += f" {row['speedup_sum']:>12.2f} {row['max_diff']:>9.1e}"
        print(line)
        rows.append(row)

    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
