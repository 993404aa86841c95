"""Time the Python and Cython kernels on the same inputs.

    python3 benchmarks/bench_kernels.py [--vars N] [--repeat R]

Also times an end-to-end suite run under each backend (in a subprocess,
since the backend is fixed at import).
"""
import argparse
import os
import random
import subprocess
import sys
import timeit

from dlpapar.kernels import available_backends, backend_module


def workloads(n, rng):
    full = (1 << n) - 1
    rd = full
    wr = rng.getrandbits(n) & rd
    v = rng.getrandbits(n)
    pairs = []
    for _ in range(200):
        w1 = rng.getrandbits(n) & wr
        pairs.append((rd, w1, rng.getrandbits(n), rd & ~w1, wr & ~w1, rng.getrandbits(n)))
    states = [(rd, wr, rng.getrandbits(n)) for _ in range(16)]
    cases = [(r1, w1, r2, w2, states, states)
             for r1, w1, r2, w2 in backend_module("python").split_masks(rd, wr)[:64]]
    return {
        "split_masks": lambda k: k.split_masks(rd, wr),
        "merge_masks": lambda k: [k.merge_masks(*p) for p in pairs],
        "par_combine": lambda k: k.par_combine(v, cases),
        "valuation_variants": lambda k: k.valuation_variants(v, full),
    }


def end_to_end(backend):
    env = dict(os.environ)
    env.pop("DLPAPAR_PURE_PYTHON", None)
    if backend == "python":
        env["DLPAPAR_PURE_PYTHON"] = "1"
    code = ("import time; from dlpapar.oracle import Limits, run_suite; t = time.perf_counter(); "
            "run_suite('algebraic', 7, Limits(cases=40)); print(time.perf_counter() - t)")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                         text=True, check=True)
    return float(out.stdout)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--vars", type=int, default=8)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--no-suite", action="store_true", help="skip the end-to-end timing")
    args = ap.parse_args(argv)

    backends = available_backends()
    if "cython" not in backends:
        print("compiled kernels not built; only the Python backend is timed")
    jobs = workloads(args.vars, random.Random(0))
    print(f"{'kernel':<20}" + "".join(f"{b:>12}" for b in backends) + "   speedup")
    for name, job in jobs.items():
        times = []
        for b in backends:
            mod = backend_module(b)
            assert job(mod) == job(backend_module("python")), name
            times.append(min(timeit.repeat(lambda: job(mod), number=20, repeat=args.repeat)) / 20)
        row = f"{name:<20}" + "".join(f"{t * 1e6:>10.1f}us" for t in times)
        if len(times) == 2:
            row += f"   {times[0] / times[1]:.1f}x"
        print(row)
    if not args.no_suite:
        times = [end_to_end(b) for b in backends]
        row = f"{'algebraic suite':<20}" + "".join(f"{t:>11.2f}s" for t in times)
        if len(times) == 2:
            row += f"   {times[0] / times[1]:.2f}x"
        print(row)


if __name__ == "__main__":
    main()
