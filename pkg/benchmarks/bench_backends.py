"""Compare the compiled quadrature core with the numpy fallback.

Usage::

    python benchmarks/bench_backends.py [--repeat N]

Each case calls both cores on identical kernels, panels and tolerances and
reports the best wall time of N repeats, the speedup and the relative
difference of the results. An end-to-end CLI sweep is timed in subprocesses
with and without DISPERSION_KERNEL_PURE.
"""
import argparse
import os
import subprocess
import sys
import tempfile
import time

from dispersion_kernel import _backend, _gkpy, _rules

CASES_1D = [
    ("nonresonant R=3", _rules.KERNEL_NONRESONANT,
     (3.0, -1.0, 1.0, 0.0, 1.5, 1.0, 0.01, 1.5, 1.0, 0.01, 1e-4),
     [0.0, 1 / 6, 1 / 3, 2 / 3, 4 / 3, 20 / 3], 1e-12),
    ("nonresonant R=0.05", _rules.KERNEL_NONRESONANT,
     (0.05, -1.0, 1.0, 0.0, 1.5, 1.0, 0.01, 1.5, 1.0, 0.01, 1e-4),
     [0.0, 10.0, 20.0, 40.0, 80.0, 400.0], 1e-12),
]
CASES_2D = [
    ("planar slab", _rules.KERNEL_SLAB, (-0.5, 1.0, 60.0, 0.0, 0), [0.6, 1.2, 2.4, 60.6], 1e-9),
    ("hemisphere", _rules.KERNEL_HEMISPHERE, (-0.5, 1.0, 60.0, 2.0, 1),
     [2.0, 4.0, 8.0, 1202.0], 1e-9),
    ("half-space cap", _rules.KERNEL_CAP, (-0.5, 1.0, 60.0, 0.5, 1),
     [0.5, 1.0, 2.0, 100.0], 1e-9),
]

SWEEP = """\
[system]
omega_a = 1.0
d2_a = 1.0
gamma_a = 0.0
omega_b = 1.5
d2_b = 1.0
gamma_b = 0.01
n0 = 1e-4
mean_free_path = 62.83185307179586

[task]
name = HemisphereForce

[sweep]
min = 0.01
max = 100
points = 40
spacing = log
units = wavelength
"""


def best_time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def row(name, t_c, t_py, v_c, v_py):
    diff = abs(v_c - v_py) / abs(v_py)
    print(f"{name:<22}{t_c * 1e3:>12.3f}{t_py * 1e3:>12.3f}{t_py / t_c:>10.1f}x{diff:>12.1e}")


def run_cli(pure, path, out):
    env = dict(os.environ, DISPERSION_KERNEL_PURE="1" if pure else "0",
               DISPERSION_KERNEL_THREADS="1")
    t = time.perf_counter()
    subprocess.run([sys.executable, "-m", "dispersion_kernel", "run", "--config", path,
                    "--output", out], env=env, check=True, capture_output=True)
    return time.perf_counter() - t


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)
    compiled = _backend.compiled_core
    if compiled is None:
        print("compiled core not built; nothing to compare", file=sys.stderr)
        return 1
    print(f"{'case':<22}{'compiled ms':>12}{'python ms':>12}{'speedup':>11}{'rel diff':>12}")
    for name, k, params, breaks, tol in CASES_1D:
        t_c, a = best_time(lambda: compiled.integrate_kernel(k, params, breaks, 1e-30, tol,
                                                             10 ** 5), args.repeat)
        t_p, b = best_time(lambda: _gkpy.integrate_kernel(k, params, breaks, 1e-30, tol,
                                                          10 ** 5), args.repeat)
        row(name, t_c, t_p, a[0], b[0])
    for name, k, params, breaks, tol in CASES_2D:
        t_c, a = best_time(lambda: compiled.integrate_kernel2d(k, params, breaks, 1e-30, tol,
                                                               10 ** 5), args.repeat)
        t_p, b = best_time(lambda: _gkpy.integrate_kernel2d(k, params, breaks, 1e-30, tol,
                                                            10 ** 5), args.repeat)
        row(name, t_c, t_p, a[0], b[0])
    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "sweep.ini")
        with open(path, "w") as fh:
            fh.write(SWEEP)
        t_c = min(run_cli(False, path, os.path.join(d, "c.csv")) for _ in range(2))
        t_p = min(run_cli(True, path, os.path.join(d, "p.csv")) for _ in range(2))
    print("\nCLI HemisphereForce sweep, 40 points, 1 thread (includes interpreter start):")
    print(f"  compiled {t_c:.2f} s, python {t_p:.2f} s, speedup {t_p / t_c:.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
