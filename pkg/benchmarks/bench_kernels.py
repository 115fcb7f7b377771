"""Time the numba and numpy versions of each kernel on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both paths are timed in one process through the ``backend=`` argument, and
their outputs are compared.  The end-to-end section runs public functions
under whatever ``ELLCOT_NUMBA`` selects, so compare

    ELLCOT_NUMBA=1 python3 benchmarks/bench_kernels.py
    ELLCOT_NUMBA=0 python3 benchmarks/bench_kernels.py
"""
import argparse
import time

import numpy as np

from ellcot import _backend, _kernels
from ellcot.classical import binom_bernoulli_table
from ellcot.modular import CharMatrix
from ellcot.numeric import TruncationPolicy
from ellcot.quadratic import QuadraticNumber, split_multiples
from ellcot.series import cot_dirichlet, elliptic_gen_cot
from ellcot.thetakron import ModularParameter, elliptic_bernoulli_batch

TAU = 0.3 + 1.1j


def best_of(fn, repeat):
    fn()  # compile or warm caches
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def kernel_cases():
    rng = np.random.default_rng(1)
    x = rng.uniform(-1, 1, 20000) + 1j * rng.uniform(-0.5, 0.5, 20000)
    kap, lc = _kernels.theta_logcoeffs(TAU, 12)
    yield "theta (20k points)", lambda b: _kernels.theta_values(x, kap, lc, backend=b)

    n = np.arange(1, 10 ** 6 + 1)
    _, frac = split_multiples(QuadraticNumber.golden(), n)
    yield "cot_sum (1e6 terms)", lambda b: _kernels.cot_sum(frac, n, 3, backend=b)

    N = 200
    idx = np.arange(-N, N + 1)
    kint, rho = split_multiples(QuadraticNumber.sqrt(2), idx)
    args = (TAU, 4, 0.21, 0.37, 0.87, 0.42, rho.astype(float), kint.astype(float), kap, lc, -0.87 + 0.42 * TAU)
    yield "xi_shells (N=200)", lambda b: _kernels.xi_shells(*args, backend=b)

    yield "eis_shells (N=400)", lambda b: _kernels.eis_shells(TAU, 4, 0.3, 0.7, 400, backend=b)

    pts = rng.uniform(0, 1, (2, 5000))
    flat = np.zeros(5000, dtype=bool)
    bt = binom_bernoulli_table(6)
    yield "ebern (5k points, m<=6)", lambda b: _kernels.ebern(pts[0], pts[1], flat, TAU, 6, 12, bt, backend=b)


def end_to_end_cases():
    mp = ModularParameter(TAU)
    M = CharMatrix.of(0.21, 0.37, 0.13, 0.58)
    rng = np.random.default_rng(2)
    pts = rng.uniform(0, 1, (2, 5000))
    yield "cot_dirichlet(3, phi), N=1e6", lambda: cot_dirichlet(3, QuadraticNumber.golden(),
                                                               TruncationPolicy(max_index=10 ** 6)).value
    yield "elliptic_gen_cot(4, sqrt 2), N=400", lambda: elliptic_gen_cot(4, QuadraticNumber.sqrt(2), M, mp,
                                                                       TruncationPolicy(max_index=400)).value
    yield "elliptic_bernoulli_batch, 5k points", lambda: elliptic_bernoulli_batch(6, pts[0], pts[1], mp)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    if not _backend.HAVE_NUMBA:
        print("numba is not installed; only the numpy path is available")
        return
    print(f"{'kernel':<28}{'numba ms':>12}{'numpy ms':>12}{'speed-up':>10}{'max rel diff':>15}")
    for name, fn in kernel_cases():
        t_nb, a = best_of(lambda: fn("numba"), args.repeat)
        t_np, b = best_of(lambda: fn("numpy"), args.repeat)
        a, b = np.asarray(a), np.asarray(b)
        diff = float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))
        print(f"{name:<28}{1e3 * t_nb:>12.2f}{1e3 * t_np:>12.2f}{t_np / t_nb:>10.1f}{diff:>15.2e}")

    print()
    print(f"end to end with ELLCOT_NUMBA -> {_backend.backend_name()}")
    for name, fn in end_to_end_cases():
        t, _ = best_of(fn, args.repeat)
        print(f"  {name:<40}{1e3 * t:>10.2f} ms")


if __name__ == "__main__":
    main()
