"""Solver-vs-oracle sweeps with counterexample minimization.

Every check draws seeded random integer instances, solves them exactly (all
solver and oracle arithmetic in int/Fraction) and compares results by
equality.  A mismatch is shrunk — drop leaves, kill slacks, lower budgets —
for as long as it keeps mismatching, then written out as an instance file for
analysis.  ``mutate`` deliberately corrupts the solver's answer so the
harness itself can be tested.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from multiprocessing import Pool
from pathlib import Path

from .combine_dp import solve_cit
from .dit import solve_dit
from .generate import InstanceFamily, gen_instance
from .greedy import solve_dit_n1
from .io import save_instance
from .mcdit import solve_mcdit
from .oracle import oracle_cit, oracle_dit, oracle_mcdit, oracle_single_upgrade
from .tree import TreeInstance, build_instance

__all__ = ["PROBLEMS", "LAM_GRID", "Mismatch", "CheckOutcome", "run_check",
           "compare_instance", "minimize_instance", "family_for_seed"]

PROBLEMS = ("cit", "dit", "dit1", "mcdit")
LAM_GRID = (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1))


@dataclass
class Mismatch:
    seed: int
    detail: str
    instance: TreeInstance
    minimized: TreeInstance | None = None
    path: str | None = None


@dataclass
class CheckOutcome:
    problem: str
    checked: int = 0
    mismatches: list = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def summary(self) -> str:
        verdict = "PASS" if self.ok else f"FAIL ({len(self.mismatches)} mismatches)"
        lines = [f"check {self.problem}: {verdict} on {self.checked} instances "
                 f"in {self.wall_time:.2f}s"]
        for m in self.mismatches:
            where = f" -> {m.path}" if m.path else ""
            lines.append(f"  seed {m.seed}: {m.detail}{where}")
        return "\n".join(lines)


def family_for_seed(problem: str, seed: int, max_n: int) -> InstanceFamily:
    """Derive a small-instance family from a seed; n varies with the seed."""
    n = 2 + seed % max(1, max_n - 1)
    fam = InstanceFamily(n=n, seed=seed, r_range=(1, 3))
    if problem == "dit1":
        # The greedy solver needs r == 1, N == 1; divisor costs keep its
        # float arithmetic exact on integer data.
        fam = replace(fam, r_range=(1, 1), N=1, divisor_costs=True)
    else:
        fam = replace(fam, N=1 + seed % 4)
    return fam


def compare_instance(problem: str, inst: TreeInstance, mutate: str | None = None) -> str | None:
    """Exact solver-vs-oracle comparison; None when they agree, else a
    human-readable discrepancy."""
    bump = 1 if mutate == "objective" else 0
    if problem == "cit":
        for lam in LAM_GRID:
            got = solve_cit(inst, lam=lam, exact=True).state.score + bump
            want = oracle_cit(inst, lam=lam, exact=True).best_value
            if got != want:
                return f"lam={lam}: solver {got} != oracle {want}"
        return None
    if problem == "dit":
        rep = solve_dit(inst, exact=True)
        orc = oracle_dit(inst, exact=True)
        if rep.feasible != orc.feasible:
            return f"solver {rep.status} vs oracle {orc.status}"
        if not rep.feasible:
            return None
        got = rep.objective + bump
        if got > orc.best_value:
            return f"solver {got} exceeds oracle {orc.best_value}"
        if got < orc.best_value:
            return f"solver {got} below oracle {orc.best_value}"
        return None
    if problem == "dit1":
        rep = solve_dit_n1(inst, exact=True)
        orc = oracle_single_upgrade(inst, exact=True)
        if rep.feasible != orc.feasible:
            return f"solver {rep.status} vs oracle {orc.status}"
        if rep.feasible and rep.objective + bump != orc.best_value:
            return f"solver {rep.objective + bump} != oracle {orc.best_value}"
        return None
    if problem == "mcdit":
        rep = solve_mcdit(inst, exact=True)
        orc = oracle_mcdit(inst, exact=True)
        if rep.feasible != orc.feasible:
            return f"solver {rep.status} vs oracle {orc.status}"
        if rep.feasible and rep.k_star + bump != orc.best_value:
            return f"solver K*={rep.k_star + bump} != oracle {orc.best_value}"
        return None
    raise ValueError(f"unknown problem {problem!r}")


def _records(inst: TreeInstance):
    return [{"child": inst.names[v], "parent": inst.names[int(inst.parent[v])],
             "w": float(inst.w[v]), "u": float(inst.u[v]), "c": float(inst.c[v]),
             "r": int(inst.r[v])} for v in inst.edges()]


def _drop_leaf(inst: TreeInstance, leaf: int) -> TreeInstance | None:
    if inst.n < 2:
        return None
    records = [rec for rec in _records(inst) if rec["child"] != inst.names[leaf]]
    params = {f: getattr(inst, f) for f in ("M", "K", "N", "D") if getattr(inst, f) is not None}
    return build_instance(inst.names[0], records, params=params)


def _reductions(inst: TreeInstance):
    """Candidate smaller instances, most aggressive first."""
    for leaf in range(1, inst.n + 1):
        if inst.is_leaf(leaf):
            reduced = _drop_leaf(inst, leaf)
            if reduced is not None:
                yield reduced
    if inst.N is not None and inst.N > 1:
        yield inst.with_params(N=inst.N - 1)
    for e in inst.edges():
        if inst.u[e] > inst.w[e]:
            u = inst.u.copy()
            u[e] = inst.w[e]
            yield replace(inst, u=u)
        if inst.r[e] > 1:
            r = inst.r.copy()
            r[e] = 1
            yield replace(inst, r=r)
    if inst.K is not None and inst.K >= 1:
        yield inst.with_params(K=inst.K - 1)
    if inst.M is not None and inst.M >= 1:
        yield inst.with_params(M=inst.M - 1)
    if inst.D is not None and inst.D >= 1:
        yield inst.with_params(D=inst.D - 1)


def minimize_instance(inst: TreeInstance, predicate, budget: int = 300) -> TreeInstance:
    """Greedy shrink: keep any reduction on which ``predicate`` still holds.

    ``predicate`` gets an instance and returns truthy when the interesting
    behavior (usually: still mismatching) persists; reductions that make the
    instance invalid or the predicate raise are skipped.
    """
    current = inst
    spent = 0
    improved = True
    while improved and spent < budget:
        improved = False
        for cand in _reductions(current):
            spent += 1
            if spent >= budget:
                break
            try:
                keep = predicate(cand)
            except Exception:
                continue
            if keep:
                current = cand
                improved = True
                break
    return current


def _one_seed(args):
    problem, seed, max_n, mutate = args
    inst = gen_instance(family_for_seed(problem, seed, max_n))
    return seed, compare_instance(problem, inst, mutate=mutate)


def run_check(problem: str, count: int = 100, max_n: int = 12, seed: int = 0,
              out_dir=None, mutate: str | None = None,
              workers: int | None = None) -> CheckOutcome:
    """Sweep ``count`` seeded instances; minimize and persist any mismatch."""
    if problem not in PROBLEMS:
        raise ValueError(f"unknown problem {problem!r}; expected one of {PROBLEMS}")
    t0 = time.perf_counter()
    if workers is None:
        workers = int(os.environ.get("DITREES_WORKERS", "1"))
    jobs = [(problem, seed + i, max_n, mutate) for i in range(count)]
    if workers > 1:
        with Pool(workers) as pool:
            results = pool.map(_one_seed, jobs)
    else:
        results = [_one_seed(job) for job in jobs]

    outcome = CheckOutcome(problem=problem, checked=count)
    for s, detail in results:
        if detail is None:
            continue
        inst = gen_instance(family_for_seed(problem, s, max_n))
        small = minimize_instance(
            inst, lambda cand: compare_instance(problem, cand, mutate=mutate) is not None)
        mismatch = Mismatch(seed=s, detail=detail, instance=inst, minimized=small)
        if out_dir is not None:
            out = Path(out_dir)
            out.mkdir(parents=True, exist_ok=True)
            path = out / f"{problem}_seed{s}.json"
            save_instance(small, path)
            (out / f"{problem}_seed{s}.info.txt").write_text(
                f"problem: {problem}\nseed: {s}\noriginal n: {inst.n}\n"
                f"minimized n: {small.n}\ndetail: {detail}\n"
                f"minimized detail: {compare_instance(problem, small, mutate=mutate)}\n")
            mismatch.path = str(path)
        outcome.mismatches.append(mismatch)
    outcome.wall_time = time.perf_counter() - t0
    return outcome
