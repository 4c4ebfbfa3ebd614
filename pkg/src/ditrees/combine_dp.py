"""Budgeted upgrade DP over the combined objective
``lam * (shortest root-leaf path) + (1 - lam) * (distance sum)``.

The recursion follows the left-subtree decomposition: per node the children
are folded in one at a time, with a single-child transition (upgrade the
connecting edge or not) and a prefix combine that splits the change-count
budget between the already-folded prefix and the next child branch.

The two subtree objectives interact through a ``min`` when sibling branches
are combined, so one scalarized optimum per (node, prefix, budget) cell is
not a sufficient state: a locally lower-scored pair can win upstream when a
sibling caps the shortest path.  Each cell therefore stores the full Pareto
front of achievable ``(min_path, dist_sum)`` pairs (budget-indexed); ``lam``
only enters when a state is evaluated.  Fronts are exact, so the root value
matches brute-force enumeration; ``method="scalarized"`` keeps the naive
one-entry-per-cell recursion for comparison, which can undershoot (see the
regression tests).

Entries carry the realizing choice so plans are rebuilt by walking parent
pointers instead of storing an edge set per cell.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .plans import OPTIMAL, SolveReport, UpgradePlan
from .relax import exact_edge_data, upper_weights
from .tree import TreeInstance, leaf_control

__all__ = ["DPState", "CitTable", "CitSolution", "solve_cit"]

_LEAF_FRONT = ((0, 0, 0, ("leaf",)),)


@dataclass(frozen=True)
class DPState:
    """One evaluated cell: the optimizing pair, its combined score and the
    upgrade set realizing it.  ``score == lam*min_path + (1-lam)*dist_sum``
    by construction."""

    min_path: object
    dist_sum: object
    score: object
    upgrades: frozenset


class CitTable:
    """DP table for one (instance, K, N) triple.

    ``method="front"`` (default) stores exact Pareto fronts, which are
    independent of ``lam``; one table answers every ``lam`` query.
    ``method="scalarized"`` stores a single scalarized optimum per cell and
    needs ``lam`` at build time.
    """

    def __init__(self, inst: TreeInstance, K=None, N=None, exact: bool = False,
                 method: str = "front", lam=None):
        if method not in ("front", "scalarized"):
            raise ValueError(f"unknown method {method!r}")
        if N is None:
            N = inst.N
        if N is None:
            raise ValueError("budget N not given and not set on the instance")
        if isinstance(N, float) and not N.is_integer():
            raise ValueError("budget N must be an integer")
        N = int(N)
        if N < 0:
            raise ValueError("budget N must be nonnegative")
        self.inst = inst
        self.exact = exact
        self.method = method
        self.N = N
        self.K = inst.K if K is None else K
        if method == "scalarized":
            lam = self._check_lam(lam)
        self._build_lam = lam

        ups = upper_weights(inst, self.K, exact=exact)
        if exact:
            self._w = exact_edge_data(inst)[0]
            self._cap = list(ups.capped)
        else:
            self._w = [float(x) for x in inst.w]
            self._cap = [float(x) for x in ups.capped]
        lc = leaf_control(inst, materialize_sets=False)
        self._count = [int(x) for x in lc.control_count]
        self._r = [int(x) for x in inst.r]
        self.k_cap = min(N, sum(self._r[1:]))
        self._fronts: dict[tuple, list] = {}
        self._build()

    # -- construction -----------------------------------------------------
    @staticmethod
    def _check_lam(lam):
        if lam is None:
            raise ValueError("the scalarized method needs lam at build time")
        if not 0 <= lam <= 1:
            raise ValueError("lam must lie in [0, 1]")
        return lam

    def _lam_pair(self, lam):
        """(lam, 1-lam) in arithmetic matching the table's number types."""
        if not 0 <= lam <= 1:
            raise ValueError("lam must lie in [0, 1]")
        if self.exact:
            if isinstance(lam, float):
                lam = Fraction(lam)
            return lam, 1 - lam
        return float(lam), 1.0 - float(lam)

    def _full_key(self, v: int, k: int):
        return ("P", v, len(self.inst.children[v]), k)

    def _full_front(self, v: int, k: int):
        if not self.inst.children[v]:
            return _LEAF_FRONT
        return self._fronts[("P", v, len(self.inst.children[v]), k)]

    def _build(self):
        inst, fronts = self.inst, self._fronts
        w, cap, count, r = self._w, self._cap, self._count, self._r
        budgets = range(self.k_cap + 1)
        scalar = self.method == "scalarized"
        if scalar:
            lam, mu = self._lam_pair(self._build_lam)
        for v in inst.postorder():
            kids = inst.children[v]
            for p, child in enumerate(kids, start=1):
                w_e, cap_e = w[child], cap[child]
                w_gain, cap_gain = count[child] * w_e, count[child] * cap_e
                r_e = r[child]
                for k in budgets:
                    cands = [(sp + w_e, ds + w_gain, nu, ("keep", child, k, i))
                             for i, (sp, ds, nu, _) in enumerate(self._full_front(child, k))]
                    if k >= r_e and cap_e > w_e:
                        kc = k - r_e
                        cands.extend((sp + cap_e, ds + cap_gain, nu + 1, ("take", child, kc, i))
                                     for i, (sp, ds, nu, _) in enumerate(self._full_front(child, kc)))
                    fronts[("S", v, p, k)] = (self._pick_scalar(cands, lam, mu) if scalar
                                              else self._skyline(cands))
                if p == 1:
                    for k in budgets:
                        fronts[("P", v, 1, k)] = fronts[("S", v, 1, k)]
                    continue
                for k in budgets:
                    cands = []
                    for k_left in range(k + 1):
                        left = fronts[("P", v, p - 1, k_left)]
                        right = fronts[("S", v, p, k - k_left)]
                        if scalar:
                            spL, dsL, nuL, _ = left[0]
                            spR, dsR, nuR, _ = right[0]
                            cands.append((min(spL, spR), dsL + dsR, nuL + nuR,
                                          ("join", v, p, k_left, 0, k - k_left, 0)))
                        else:
                            self._combine(left, right, v, p, k_left, k - k_left, cands)
                    fronts[("P", v, p, k)] = (self._pick_scalar(cands, lam, mu) if scalar
                                              else self._skyline(cands))

    @staticmethod
    def _combine(left, right, v, p, k_left, k_right, out):
        """Staircase merge: the Pareto front of ``(min(a, c), b + d)`` over
        two fronts is read off at the union of their path values."""
        sp_l = [e[0] for e in left]
        sp_r = [e[0] for e in right]
        top = min(sp_l[-1], sp_r[-1])
        a_l, a_r = len(sp_l) - 1, len(sp_r) - 1
        j_l, j_r = a_l, a_r
        last = None
        while a_l >= 0 or a_r >= 0:
            if a_l >= 0 and (a_r < 0 or sp_l[a_l] >= sp_r[a_r]):
                t = sp_l[a_l]
                a_l -= 1
            else:
                t = sp_r[a_r]
                a_r -= 1
            if t > top or t == last:
                continue
            last = t
            while j_l > 0 and sp_l[j_l - 1] >= t:
                j_l -= 1
            while j_r > 0 and sp_r[j_r - 1] >= t:
                j_r -= 1
            el, er = left[j_l], right[j_r]
            out.append((t, el[1] + er[1], el[2] + er[2],
                        ("join", v, p, k_left, j_l, k_right, j_r)))

    def _skyline(self, cands):
        """Drop dominated pairs; keep fronts sorted by ascending min_path.

        Ties on the numeric pair are resolved to the entry with the fewest
        upgraded edges, then the lexicographically smallest edge set, so
        reported plans are deterministic.
        """
        cands.sort(key=lambda e: (-e[0], -e[1], e[2]))
        out = []
        best_ds = None
        i, n = 0, len(cands)
        while i < n:
            sp, ds, nu, back = cands[i]
            j = i + 1
            while j < n and cands[j][0] == sp and cands[j][1] == ds:
                j += 1
            if best_ds is None or ds > best_ds:
                pick = cands[i]
                if j - i > 1:  # same pair, same upgrade count: break by edge set
                    group = [e for e in cands[i:j] if e[2] == nu]
                    if len(group) > 1:
                        pick = min(group, key=lambda e: self._set_from_back(e[3]))
                out.append(pick)
                best_ds = ds
            i = j
        out.reverse()
        return out

    def _pick_scalar(self, cands, lam, mu):
        best = None
        best_key = None
        for sp, ds, nu, back in cands:
            key = (lam * sp + mu * ds, sp, -nu)
            if best_key is None or key > best_key:
                best, best_key = (sp, ds, nu, back), key
        return [best]

    # -- plan reconstruction ----------------------------------------------
    def _set_from_back(self, back) -> tuple:
        edges = []
        stack = [back]
        kids = self.inst.children
        fronts = self._fronts
        while stack:
            b = stack.pop()
            tag = b[0]
            if tag == "leaf":
                continue
            if tag == "join":
                _, v, p, k_l, j_l, k_r, j_r = b
                stack.append(fronts[("P", v, p - 1, k_l)][j_l][3])
                stack.append(fronts[("S", v, p, k_r)][j_r][3])
                continue
            child, kc, idx = b[1], b[2], b[3]
            if tag == "take":
                edges.append(child)
            if kids[child]:
                stack.append(fronts[("P", child, len(kids[child]), kc)][idx][3])
        return tuple(sorted(edges))

    # -- queries ------------------------------------------------------------
    def front(self, key=None):
        if key is None:
            key = self._full_key(0, self.k_cap)
        kind, v, p, k = key
        return self._fronts[(kind, v, p, min(k, self.k_cap))]

    def evaluate(self, lam, key=None) -> DPState:
        """Best (score, min_path, dist_sum)-lexicographic entry at ``lam``."""
        lam, mu = self._lam_pair(lam)
        front = self.front(key)
        best = None
        best_key = None
        for entry in front:
            sp, ds = entry[0], entry[1]
            key3 = (lam * sp + mu * ds, sp, ds)
            if best_key is None or key3 > best_key:
                best, best_key = entry, key3
        return DPState(min_path=best[0], dist_sum=best[1], score=best_key[0],
                       upgrades=frozenset(self._set_from_back(best[3])))

    def state(self, v: int, p: int, k: int, lam, kind: str = "P") -> DPState:
        """Evaluate the cell for children ``1..p`` of ``v`` (or the single
        child branch ``p`` with ``kind="S"``) at budget ``k``."""
        return self.evaluate(lam, key=(kind, v, p, k))

    def plan(self, lam) -> tuple[DPState, UpgradePlan]:
        state = self.evaluate(lam)
        if self.exact:
            weights = tuple(self._cap[e] if e in state.upgrades else self._w[e]
                            for e in range(self.inst.n + 1))
        else:
            weights = np.array(self.inst.w)
            for e in state.upgrades:
                weights[e] = self._cap[e]
            weights.setflags(write=False)
        return state, UpgradePlan(upgrades=state.upgrades, weights=weights)

    def max_dist_sum(self):
        """Largest distance sum reachable at the root (any feasible plan)."""
        return max(e[1] for e in self.front())

    @property
    def n_states(self) -> int:
        return len(self._fronts)

    @property
    def max_front(self) -> int:
        return max(len(f) for f in self._fronts.values())


@dataclass
class CitSolution:
    """Root state + realizing plan for one combined-objective solve."""

    state: DPState
    plan: UpgradePlan
    lam: object
    table: CitTable
    wall_time: float
    method: str = "front"

    def report(self) -> SolveReport:
        return SolveReport(problem="cit", status=OPTIMAL, objective=self.state.score,
                           min_path=self.state.min_path, plan=self.plan,
                           wall_time=self.wall_time,
                           notes={"dist_sum": self.state.dist_sum, "lam": self.lam,
                                  "method": self.method})


def solve_cit(inst: TreeInstance, K=None, N=None, lam=0, exact: bool = False,
              method: str = "front") -> CitSolution:
    """Maximize ``lam*min_path + (1-lam)*dist_sum`` under both budgets.

    Returns the root state (its ``score`` is the exact optimum for
    ``method="front"``) together with the realizing upgrade plan.
    """
    if not 0 <= lam <= 1:
        raise ValueError("lam must lie in [0, 1]")
    t0 = time.perf_counter()
    table = CitTable(inst, K=K, N=N, exact=exact, method=method, lam=lam)
    state, plan = table.plan(lam)
    return CitSolution(state=state, plan=plan, lam=lam, table=table,
                       wall_time=time.perf_counter() - t0, method=method)
