"""Elapsed-time comparison of the three selection engines on synthetic data."""

import csv
import platform
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from threadpoolctl import threadpool_limits

from .dataset import RNG_NAME, synthetic_uniform
from .exceptions import EngineDisagreementError
from .selector import Mode, run

ENGINE_ORDER = (Mode.DEFINITION, Mode.H_CORRELATION, Mode.THETA_ANGLE)
CSV_HEADER = ("engine", "iteration", "cumulative_seconds", "N", "n", "m", "t", "seed")


@dataclass(frozen=True)
class BenchRecord:
    engine: str
    iteration: int
    cumulative_seconds: float
    N: int
    n: int
    m: int
    t: int
    seed: int
    rng_name: str = RNG_NAME
    host_note: str = ""


def _engines(engines):
    if engines is None:
        return list(ENGINE_ORDER)
    modes = {Mode(e) if not isinstance(e, Mode) else e for e in engines}
    if not modes:
        raise ValueError("at least one engine is required")
    return [e for e in ENGINE_ORDER if e in modes]


def host_note(threads):
    return (
        f"{platform.platform()}; python {platform.python_version()}; "
        f"numpy {np.__version__}; threads={threads}"
    )


def run_bench(N, n, m, t, seed, engines=None, repeat=1, threads=1):
    """Time ``t`` greedy iterations per engine on one shared dataset.

    Engines run one after the other with BLAS limited to ``threads``.
    Cumulative times are averaged over ``repeat`` runs. Every run must pick
    the same feature sequence; otherwise :class:`EngineDisagreementError`
    reports the first iteration where two runs diverge.
    """
    if not 1 <= t <= n:
        raise ValueError(f"t must be in [1, {n}], got {t}")
    if repeat < 1:
        raise ValueError(f"repeat must be at least 1, got {repeat}")
    modes = _engines(engines)
    dataset = synthetic_uniform(N, n, m, seed)
    note = host_note(threads)
    reference = None
    records = []
    with threadpool_limits(limits=threads):
        for mode in modes:
            runs = []
            for _ in range(repeat):
                report = run(dataset, t, mode, threads=threads)
                if reference is None:
                    reference = (mode, report.indices)
                _check_agreement(reference, mode, report.indices)
                runs.append(np.cumsum(report.iteration_seconds))
            mean = np.mean(runs, axis=0)
            records.extend(
                BenchRecord(mode.value, k + 1, float(mean[k]), N, n, m, t, seed, RNG_NAME, note)
                for k in range(t)
            )
    return records


def _check_agreement(reference, mode, indices):
    ref_mode, ref = reference
    for k, (a, b) in enumerate(zip(ref, indices), start=1):
        if a != b:
            raise EngineDisagreementError(
                f"engines {ref_mode.value} and {mode.value} disagree at iteration {k}: "
                f"feature {a} vs {b}",
                iteration=k,
            )


def _sort_key(record):
    order = [e.value for e in ENGINE_ORDER]
    return (order.index(record.engine), record.iteration)


def emit_csv(records, path):
    if not records:
        raise ValueError("no benchmark records to write")
    rows = sorted(records, key=_sort_key)
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for r in rows:
            writer.writerow([r.engine, r.iteration, repr(r.cumulative_seconds),
                             r.N, r.n, r.m, r.t, r.seed])


def read_csv(path):
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise ValueError(f"unexpected header {reader.fieldnames}")
        return [
            BenchRecord(
                row["engine"], int(row["iteration"]), float(row["cumulative_seconds"]),
                int(row["N"]), int(row["n"]), int(row["m"]), int(row["t"]), int(row["seed"]),
            )
            for row in reader
        ]


def totals(records):
    """Final cumulative time per engine."""
    out = {}
    for r in sorted(records, key=_sort_key):
        out[r.engine] = r.cumulative_seconds
    return out


def curve(records, engine):
    rows = sorted((r for r in records if r.engine == engine), key=lambda r: r.iteration)
    return np.array([r.cumulative_seconds for r in rows])


def crossover_iteration(records, fast="theta", slow="h"):
    """First iteration from which ``fast`` stays ahead of ``slow``, or None."""
    a, b = curve(records, fast), curve(records, slow)
    if a.size == 0 or a.size != b.size:
        return None
    ahead = a < b
    if not ahead[-1]:
        return None
    behind = np.flatnonzero(~ahead)
    return int(behind[-1] + 2) if behind.size else 1
