"""Timing harness over random instance families.

Each (algorithm, family) cell times ``reps`` fresh seeded instances; the
clock covers the solve only — generation and serialization are excluded.
The TSV layout is one row per cell with columns
``algorithm n mean max min reps``; the JSON form adds medians and status
counts.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass, field, replace

from .combine_dp import solve_cit
from .dit import solve_dit
from .generate import InstanceFamily, gen_instance
from .greedy import solve_dit_n1
from .mcdit import solve_mcdit

__all__ = ["ALGORITHMS", "BenchRow", "BenchReport", "run_bench"]

ALGORITHMS = ("n1", "cit", "dit", "mcdit")


@dataclass
class BenchRow:
    algorithm: str
    n: int
    mean: float
    max: float
    min: float
    median: float
    reps: int
    statuses: dict = field(default_factory=dict)


@dataclass
class BenchReport:
    rows: list

    def to_tsv(self) -> str:
        lines = ["algorithm\tn\tmean\tmax\tmin\treps"]
        for row in self.rows:
            lines.append(f"{row.algorithm}\t{row.n}\t{row.mean:.6f}\t{row.max:.6f}"
                         f"\t{row.min:.6f}\t{row.reps}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> list[dict]:
        return [{"algorithm": r.algorithm, "n": r.n, "mean": r.mean, "max": r.max,
                 "min": r.min, "median": r.median, "reps": r.reps,
                 "statuses": r.statuses} for r in self.rows]

    def row(self, algorithm: str, n: int) -> BenchRow:
        for r in self.rows:
            if r.algorithm == algorithm and r.n == n:
                return r
        raise KeyError((algorithm, n))


def _prepare(family: InstanceFamily, algorithm: str, rep: int) -> InstanceFamily:
    fam = family.with_seed(family.seed + rep)
    if algorithm == "n1":
        # The greedy solver's contract: one upgrade, unit change weights.
        fam = replace(fam, r_range=(1, 1), N=1)
    return fam


def _run(algorithm: str, inst, lam):
    if algorithm == "n1":
        return solve_dit_n1(inst)
    if algorithm == "cit":
        return solve_cit(inst, lam=lam).report()
    if algorithm == "dit":
        return solve_dit(inst)
    if algorithm == "mcdit":
        return solve_mcdit(inst)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def run_bench(families, algorithms=ALGORITHMS, reps: int = 5, lam=0.5) -> BenchReport:
    """Time every algorithm on every family; wall clock, solve only."""
    if reps < 1:
        raise ValueError("reps must be >= 1")
    unknown = set(algorithms) - set(ALGORITHMS)
    if unknown:
        raise ValueError(f"unknown algorithms {sorted(unknown)}")
    rows = []
    for family in families:
        for algorithm in algorithms:
            times, statuses = [], {}
            for rep in range(reps):
                inst = gen_instance(_prepare(family, algorithm, rep))
                t0 = time.perf_counter()
                report = _run(algorithm, inst, lam)
                times.append(time.perf_counter() - t0)
                statuses[report.status] = statuses.get(report.status, 0) + 1
            rows.append(BenchRow(algorithm=algorithm, n=family.n,
                                 mean=statistics.fmean(times), max=max(times),
                                 min=min(times), median=statistics.median(times),
                                 reps=reps, statuses=statuses))
    return BenchReport(rows=rows)
