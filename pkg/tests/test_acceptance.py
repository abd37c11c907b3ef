"""Headline acceptance checks, one test per criterion.

Each test records a PASS/FAIL line that is echoed in the terminal summary.
"""

import time

import numpy as np

from ccffs import iris
from ccffs.bench import crossover_iteration, run_bench, totals
from ccffs.correlation import cca, principal_angles, ssc
from ccffs.dataset import from_arrays
from ccffs.kernels import center, coordinates, gram_schmidt, orthonormal_basis
from ccffs.regression import wrapper_greedy
from ccffs.selector import Mode, run, select

from .conftest import random_instance

ENGINES = (Mode.DEFINITION, Mode.H_CORRELATION, Mode.THETA_ANGLE)
SUITE = range(100)


def suite_instance(seed):
    return random_instance(seed, n_max=10, m_max=4, N_range=(10, 60))


def cos2_sum(A, B):
    """Sum of squared cosines between every pair of columns."""
    An = A / np.linalg.norm(A, axis=0)
    Bn = B / np.linalg.norm(B, axis=0)
    return float(np.sum((An.T @ Bn) ** 2))


def split_bases(Xc, Yc, p):
    """W_s spanning the first p columns, W_r the rest orthogonalised against W_s."""
    W = gram_schmidt(Xc).basis
    V = gram_schmidt(Yc).basis
    return W[:, :p], W[:, p:], V


def test_iris_golden_fixture(acceptance_log):
    start = time.perf_counter()
    checks = iris.verify(iris.DEFAULT_TOL)
    elapsed = time.perf_counter() - start
    failed = [c.line() for c in checks if not c.passed]
    increments = sum(len(row) for row in iris.EXPECTED_INCREMENTS)
    passed = not failed and elapsed < 1.0 and increments == 9
    acceptance_log("iris golden fixture (tol 1e-3, < 1 s)", passed,
                   f"{len(checks)} checks, {elapsed:.3f} s")
    assert increments == 9
    assert not failed, failed
    assert elapsed < 1.0


def test_theorem_suite(acceptance_log):
    start = time.perf_counter()
    worst = {"sum h": 0.0, "R = cos angle": 0.0, "sum theta": 0.0,
             "split h": 0.0, "split theta": 0.0}
    for seed in SUITE:
        X, Y = suite_instance(seed)
        n, m = X.shape[1], Y.shape[1]
        Xc, Yc = center(X).values, center(Y).values
        oracle = ssc(X, Y)

        W, V = gram_schmidt(Xc).basis, gram_schmidt(Yc).basis
        worst["sum h"] = max(worst["sum h"], abs(oracle - cos2_sum(W, V)))

        U = orthonormal_basis(np.hstack([Xc, Yc]), n + m)
        FX, FY = coordinates(Xc, U), coordinates(Yc, U)
        R = np.sqrt(cca(X, Y).r_squared)
        diff = np.abs(R - np.cos(principal_angles(FX, FY))).max()
        worst["R = cos angle"] = max(worst["R = cos angle"], diff)

        WU, VU = gram_schmidt(FX).basis, gram_schmidt(FY).basis
        worst["sum theta"] = max(worst["sum theta"], abs(oracle - cos2_sum(WU, VU)))

        p = 1 + seed % (n - 1)
        Ws, Wr, V = split_bases(Xc, Yc, p)
        rhs = ssc(Ws, V) + ssc(Wr, V)
        worst["split h"] = max(worst["split h"], abs(oracle - rhs))

        Ws, Wr, V = split_bases(FX, FY, p)
        rhs = (np.sum(np.cos(principal_angles(Ws, V)) ** 2)
               + np.sum(np.cos(principal_angles(Wr, V)) ** 2))
        worst["split theta"] = max(worst["split theta"], abs(oracle - rhs))
    elapsed = time.perf_counter() - start
    passed = max(worst.values()) <= 1e-8 and elapsed < 30
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    acceptance_log("theorem suite (tol 1e-8, < 30 s)", passed, f"{detail}; {elapsed:.1f} s")
    for name, err in worst.items():
        assert err <= 1e-8, name
    assert elapsed < 30


def test_engine_equivalence(acceptance_log):
    worst, mismatched = 0.0, []
    for seed in SUITE:
        X, Y = suite_instance(seed)
        reports = [select(X, Y, X.shape[1], mode) for mode in ENGINES]
        ref = reports[0]
        for r in reports[1:]:
            if r.indices != ref.indices:
                mismatched.append(seed)
            worst = max(worst, np.abs(np.subtract(r.cumulative, ref.cumulative)).max())
    passed = not mismatched and worst <= 1e-7
    acceptance_log("engine equivalence (tol 1e-7)", passed,
                   f"max diff {worst:.1e}, mismatched seeds {mismatched}")
    assert not mismatched
    assert worst <= 1e-7


def test_monotonicity_and_bounds(acceptance_log):
    low, excess = np.inf, -np.inf
    for seed in SUITE:
        X, Y = suite_instance(seed)
        m = Y.shape[1]
        for mode in ENGINES:
            report = select(X, Y, X.shape[1], mode)
            low = min(low, min(report.increments))
            for p, total in enumerate(report.cumulative, start=1):
                excess = max(excess, total - min(p, m))
    passed = low >= -1e-10 and excess <= 1e-9
    acceptance_log("monotonicity and bounds", passed,
                   f"min increment {low:.1e}, max excess over min(p, m) {excess:.1e}")
    assert low >= -1e-10
    assert excess <= 1e-9


def test_filter_wrapper_equivalence(acceptance_log):
    mismatched = []
    for seed in range(50):
        X, Y = random_instance(1000 + seed, m_max=1)
        n = X.shape[1]
        if select(X, Y, n).indices != wrapper_greedy(X, Y[:, 0], n):
            mismatched.append(seed)
    acceptance_log("filter/wrapper equivalence (50 datasets, exact)", not mismatched,
                   f"mismatched seeds {mismatched}")
    assert not mismatched


def test_timing_ordering(acceptance_log):
    start = time.perf_counter()
    records = run_bench(1000, 200, 20, 100, seed=0, threads=1)
    elapsed = time.perf_counter() - start
    t = totals(records)
    first = {r.engine: r.cumulative_seconds for r in records if r.iteration == 1}
    cross = crossover_iteration(records)
    ordered = t["theta"] < t["h"] < t["definition"]
    first_slow = first["definition"] > first["h"]
    passed = ordered and first_slow and elapsed < 300
    acceptance_log(
        "timing ordering (N=1000, n=200, m=20, t=100, 1 thread)", passed,
        f"theta {t['theta']:.3f} s, h {t['h']:.3f} s, definition {t['definition']:.3f} s; "
        f"iteration 1 definition {first['definition']:.3f} s vs h {first['h']:.3f} s; "
        f"theta ahead of h from iteration {cross}",
    )
    assert ordered
    assert first_slow
    assert elapsed < 300


def test_affine_invariance(acceptance_log):
    worst, mismatched = 0.0, []
    for seed in range(20):
        X, Y = suite_instance(seed)
        rng = np.random.default_rng(seed + 7000)
        scale = rng.uniform(0.01, 100, X.shape[1])
        shift = rng.uniform(-100, 100, X.shape[1])
        for mode in ENGINES:
            a = run(from_arrays(X, Y), X.shape[1], mode)
            b = run(from_arrays(X * scale + shift, Y), X.shape[1], mode)
            if a.indices != b.indices:
                mismatched.append((seed, mode.value))
            worst = max(worst, np.abs(np.subtract(a.increments, b.increments)).max())
    passed = not mismatched and worst <= 1e-8
    acceptance_log("affine invariance (tol 1e-8)", passed,
                   f"max increment change {worst:.1e}, mismatches {mismatched}")
    assert not mismatched
    assert worst <= 1e-8
