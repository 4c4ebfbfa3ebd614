"""Exhaustive reference solvers for small instances.

Because upgrading an edge at all is only ever useful at its budget-capped
weight, every problem here reduces to choosing a subset of edges to raise to
their caps subject to ``sum r(e) <= N``.  These oracles enumerate those
subsets directly (a reflected Gray walk with incremental path updates keeps
the default n <= 16 cap comfortable) and share no path or cap code with the
solvers under test — that independence is the point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .tree import TreeInstance

__all__ = ["ORACLE_CAP", "OracleResult", "oracle_cit", "oracle_dit",
           "oracle_single_upgrade", "oracle_mcdit"]

ORACLE_CAP = 16


@dataclass
class OracleResult:
    """Ground-truth optimum plus every subset attaining it."""

    status: str  # "optimal" | "infeasible"
    best_value: object = None
    best_sets: list = None
    enumerated: int = 0
    best_min_path: object = None
    best_dist_sum: object = None

    @property
    def feasible(self) -> bool:
        return self.status == "optimal"


def _require_small(inst: TreeInstance, cap: int):
    if inst.n > cap:
        raise ValueError(f"instance has {inst.n} edges, above the oracle cap {cap}")


def _edge_data(inst: TreeInstance, K, exact: bool):
    """Per-edge capped weights and slacks, computed from first principles."""
    if K is None:
        K = inst.K
    if K is None:
        raise ValueError("budget K not given and not set on the instance")
    base, slack = [0], [0]
    for e in range(1, inst.n + 1):
        w_e, u_e, c_e = inst.w[e], inst.u[e], inst.c[e]
        if exact:
            w_i, u_i, c_i = int(w_e), int(u_e), int(c_e)
            if (w_i, u_i, c_i) != (w_e, u_e, c_e) or float(K) != int(K):
                raise ValueError("exact mode needs integral instance data")
            cap_e = min(w_i + Fraction(int(K), c_i), u_i)
            if cap_e.denominator == 1:
                cap_e = int(cap_e)
            base.append(w_i)
            slack.append(cap_e - w_i)
        else:
            base.append(float(w_e))
            slack.append(min(float(w_e) + float(K) / float(c_e), float(u_e)) - float(w_e))
    return base, slack


def _leaf_paths(inst: TreeInstance):
    """(leaf, edges-on-root-path) pairs, derived by walking parent pointers."""
    is_parent = [False] * (inst.n + 1)
    for v in range(1, inst.n + 1):
        is_parent[int(inst.parent[v])] = True
    out = []
    for leaf in range(1, inst.n + 1):
        if is_parent[leaf]:
            continue
        path, v = [], leaf
        while v != 0:
            path.append(v)
            v = int(inst.parent[v])
        out.append((leaf, tuple(path)))
    return out


def _scan(inst: TreeInstance, K, N, exact: bool, key):
    """Walk all subsets with ``sum r <= N``; keep the argmax of ``key``.

    ``key(min_path, dist_sum)`` returns a comparable score or None when the
    subset is to be rejected (e.g. it violates the path bound).  Returns
    (best, best_sets, enumerated, best_min_path, best_dist_sum).
    """
    if N is None:
        N = inst.N
    if N is None:
        raise ValueError("budget N not given and not set on the instance")
    N = int(N)
    n = inst.n
    base, slack = _edge_data(inst, K, exact)
    paths = _leaf_paths(inst)
    leaf_ids = [leaf for leaf, _ in paths]
    path_sum = {}
    for leaf, edges in paths:
        total = 0
        for e in edges:
            total = total + base[e]
        path_sum[leaf] = total
    leaves_of = [[] for _ in range(n + 1)]
    for leaf, edges in paths:
        for e in edges:
            leaves_of[e].append(leaf)
    dist = 0
    for leaf in leaf_ids:
        dist = dist + path_sum[leaf]

    members = [False] * (n + 1)
    used = 0
    best = None
    best_sets: list = []
    best_mp = best_ds = None
    enumerated = 0

    def consider():
        nonlocal best, best_mp, best_ds, enumerated
        enumerated += 1
        mp = min(path_sum[leaf] for leaf in leaf_ids)
        score = key(mp, dist)
        if score is None:
            return
        if best is None or score > best:
            best = score
            best_sets.clear()
            best_sets.append(frozenset(e for e in range(1, n + 1) if members[e]))
            best_mp, best_ds = mp, dist
        elif score == best:
            best_sets.append(frozenset(e for e in range(1, n + 1) if members[e]))

    consider()
    r = inst.r
    for i in range(1, 1 << n):
        e = (i & -i).bit_length()  # trailing-zero count + 1 == edge id to flip
        if members[e]:
            members[e] = False
            used -= int(r[e])
            delta = -slack[e]
        else:
            members[e] = True
            used += int(r[e])
            delta = slack[e]
        if delta != 0:
            dist = dist + delta * len(leaves_of[e])
            for leaf in leaves_of[e]:
                path_sum[leaf] = path_sum[leaf] + delta
        if used <= N:
            consider()
    return best, best_sets, enumerated, best_mp, best_ds


def oracle_cit(inst: TreeInstance, K=None, N=None, lam=0, exact: bool = False,
               cap: int = ORACLE_CAP) -> OracleResult:
    """Max of ``lam * min_path + (1 - lam) * dist_sum`` over capped-upgrade
    subsets within the change-count budget."""
    _require_small(inst, cap)
    if not 0 <= lam <= 1:
        raise ValueError("lam must lie in [0, 1]")
    one = Fraction(1) if exact else 1.0
    if exact and isinstance(lam, float):
        lam = Fraction(lam)

    def key(mp, ds):
        return lam * mp + (one - lam) * ds

    best, sets, count, mp, ds = _scan(inst, K, N, exact, key)
    return OracleResult(status="optimal", best_value=best, best_sets=sets,
                        enumerated=count, best_min_path=mp, best_dist_sum=ds)


def oracle_dit(inst: TreeInstance, K=None, M=None, N=None, exact: bool = False,
               cap: int = ORACLE_CAP) -> OracleResult:
    """Max distance sum over budget-feasible subsets whose shortest root-leaf
    path stays at or above ``M``; infeasible when no subset qualifies."""
    _require_small(inst, cap)
    if M is None:
        M = inst.M
    if M is None:
        raise ValueError("bound M not given and not set on the instance")

    def key(mp, ds):
        return ds if mp >= M else None

    best, sets, count, mp, ds = _scan(inst, K, N, exact, key)
    if best is None:
        return OracleResult(status="infeasible", enumerated=count, best_sets=[])
    return OracleResult(status="optimal", best_value=best, best_sets=sets,
                        enumerated=count, best_min_path=mp, best_dist_sum=ds)


def oracle_single_upgrade(inst: TreeInstance, K=None, M=None,
                          exact: bool = False) -> OracleResult:
    """Restricted ground truth over the no-op plan and every one-edge plan.

    No size cap: the candidate set is linear in n.
    """
    if M is None:
        M = inst.M
    if M is None:
        raise ValueError("bound M not given and not set on the instance")
    base, slack = _edge_data(inst, K, exact)
    paths = _leaf_paths(inst)
    path_sum = {leaf: sum(base[e] for e in edges) for leaf, edges in paths}
    dist = sum(path_sum.values())

    best = None
    best_sets: list = []
    best_mp = best_ds = None
    enumerated = 0
    candidates = [None] + list(range(1, inst.n + 1))
    for e in candidates:
        enumerated += 1
        if e is None:
            mp, ds, members = min(path_sum.values()), dist, frozenset()
        else:
            touches = {leaf for leaf, edges in paths if e in edges}
            mp = min(path_sum[leaf] + (slack[e] if leaf in touches else 0)
                     for leaf, _ in paths)
            ds = dist + slack[e] * len(touches)
            members = frozenset({e})
        if mp < M:
            continue
        if best is None or ds > best:
            best, best_sets, best_mp, best_ds = ds, [members], mp, ds
        elif ds == best:
            best_sets.append(members)
    if best is None:
        return OracleResult(status="infeasible", enumerated=enumerated, best_sets=[])
    return OracleResult(status="optimal", best_value=best, best_sets=best_sets,
                        enumerated=enumerated, best_min_path=best_mp, best_dist_sum=best_ds)


def oracle_mcdit(inst: TreeInstance, M=None, N=None, D=None, exact: bool = False,
                 cap: int = ORACLE_CAP) -> OracleResult:
    """Smallest integer budget K whose ground-truth optimum meets the target
    distance sum, by linear scan from zero (independent of any bisection)."""
    _require_small(inst, cap)
    if D is None:
        D = inst.D
    if D is None:
        raise ValueError("target D not given and not set on the instance")
    k_top = 0
    for e in range(1, inst.n + 1):
        k_top = max(k_top, float(inst.c[e]) * (float(inst.u[e]) - float(inst.w[e])))
    k_top = math.ceil(k_top)
    enumerated = 0
    for k in range(0, k_top + 1):
        res = oracle_dit(inst, K=k, M=M, N=N, exact=exact, cap=cap)
        enumerated += res.enumerated
        if res.feasible and res.best_value >= D:
            return OracleResult(status="optimal", best_value=k, best_sets=res.best_sets,
                                enumerated=enumerated, best_min_path=res.best_min_path,
                                best_dist_sum=res.best_dist_sum)
    return OracleResult(status="infeasible", enumerated=enumerated, best_sets=[])
