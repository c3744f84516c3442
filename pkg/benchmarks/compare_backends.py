"""Time the compiled update kernel against the pure-numpy fallback.

Runs the rank-two inverse-Hessian update kernel from both backends on the
same random data and reports per-call time and the compiled/python speedup.
If the compiled extension is not built, only the python backend is timed.

    python3 benchmarks/compare_backends.py --dims 2,8,32,128 --repeats 2000
"""

import argparse
import time

import numpy as np

from spbfgs.updates import CurvaturePair, available_kernels, compute_penalty_scalars


def random_instance(rng, n):
    a = rng.standard_normal((n, n))
    q, _ = np.linalg.qr(a)
    h = (q * rng.uniform(0.5, 3.5, size=n)) @ q.T
    while True:
        s = rng.standard_normal(n)
        y = rng.standard_normal(n)
        if s @ y > 0.1:
            return h, s, y


def time_kernel(kernel, h, s, y, gamma, omega, repeats):
    kernel(h, s, y, gamma, omega)  # warm-up
    t0 = time.perf_counter()
    for _ in range(repeats):
        out = kernel(h, s, y, gamma, omega)
    elapsed = time.perf_counter() - t0
    return elapsed / repeats, out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dims", default="2,8,32,128",
                        help="comma-separated problem dimensions (default 2,8,32,128)")
    parser.add_argument("--repeats", type=int, default=2000,
                        help="kernel calls per timing measurement (default 2000)")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    dims = [int(d) for d in args.dims.split(",")]
    kernels = available_kernels()
    names = list(kernels)
    if "compiled" not in kernels:
        print("compiled extension not built; timing python backend only")
    rng = np.random.default_rng(args.seed)

    header = f"{'n':>6}" + "".join(f"{name + ' us/call':>18}" for name in names)
    if len(names) == 2:
        header += f"{'speedup':>10}{'max|diff|':>12}"
    print(header)
    for n in dims:
        h, s, y = random_instance(rng, n)
        scalars = compute_penalty_scalars(CurvaturePair(s=s, y=y), beta=10.0)
        row = f"{n:>6}"
        per_call = {}
        outs = {}
        for name in names:
            per_call[name], outs[name] = time_kernel(
                kernels[name], h, s, y, scalars.gamma, scalars.omega, args.repeats)
            row += f"{per_call[name] * 1e6:>18.2f}"
        if len(names) == 2:
            row += f"{per_call['python'] / per_call['compiled']:>10.2f}"
            row += f"{np.max(np.abs(outs['python'] - outs['compiled'])):>12.2e}"
        print(row)


if __name__ == "__main__":
    main()
