"""Compare the compiled and pure-Python binder kernels.

Usage: python benchmarks/bench_kernel.py [--cases N] [--repeat R]

Part one times the kernel primitives on the same generated expressions.
Part two runs a typecheck-and-normalize workload end to end under each
backend, in a fresh interpreter since the backend is fixed at import.
"""

import argparse
import os
import subprocess
import sys
import timeit

WORKLOAD = """
import random, time
from phoml.harness.properties import typed_case
from phoml.reduction import reduce
from phoml.typecheck import Checker
cases = [typed_case(s) for s in range({n})]
ch = Checker(1000)
t = time.perf_counter()
for c in cases:
    ch.check(c.ctx, c.expr, c.cls)
    reduce(c.expr, 10000)
print(time.perf_counter() - t)
"""


def corpus(n):
    from phoml.harness.properties import typed_case
    return [typed_case(s).expr for s in range(n)]


def primitives(n, repeat):
    from phoml import _pykernel
    try:
        from phoml import _ckernel
    except ImportError:
        print("compiled kernel not built; only the pure backend is available")
        return
    from phoml.syntax import BOT, free_vars
    exprs = corpus(n)
    names = [sorted(free_vars(e).terms) for e in exprs]
    print(f"{'operation':<16}{'python ms':>12}{'cython ms':>12}{'speedup':>10}")
    for op in ("size", "free_names", "locally_closed", "substitute", "abstract"):
        times = []
        for mod in (_pykernel, _ckernel):
            f = getattr(mod, op)
            if op == "substitute":
                run = lambda: [f(e, {x: BOT for x in ns}, {}, {}) for e, ns in zip(exprs, names)]
            elif op == "abstract":
                run = lambda: [f(e, ns, (), ()) for e, ns in zip(exprs, names)]
            else:
                run = lambda: [f(e) for e in exprs]
            times.append(min(timeit.repeat(run, number=1, repeat=repeat)) * 1000)
        print(f"{op:<16}{times[0]:>12.2f}{times[1]:>12.2f}{times[0] / times[1]:>9.2f}x")


def end_to_end(n):
    out = {}
    for label, pure in (("python", "1"), ("cython", "")):
        env = dict(os.environ, PHOML_PURE=pure)
        res = subprocess.run([sys.executable, "-c", WORKLOAD.format(n=n)], env=env,
                             capture_output=True, text=True, check=True)
        out[label] = float(res.stdout.strip())
    print(f"typecheck+normalize {n} cases: python {out['python']:.2f}s, "
          f"cython {out['cython']:.2f}s ({out['python'] / out['cython']:.2f}x)")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cases", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    primitives(args.cases, args.repeat)
    end_to_end(args.cases)


if __name__ == "__main__":
    main()
