"""Random instance families for tests and benchmarks.

Topology is uniform attachment: node i (1-based) picks its parent uniformly
from the nodes 0..i-1, giving shallow random trees.  Attribute ranges are
inclusive; with the default disjoint w/u ranges the cap bound u >= w holds by
construction, with overlapping ranges u is clipped up to w.

Unset problem parameters are derived per instance with documented rules:

* K: a uniform fraction (25%..90%) of the largest single-edge cap cost
  ``max_e c(e) * (u(e) - w(e))``, at least 1.
* N: uniform integer in [1, max(1, n // 3)].
* M: uniform between the shortest and the longest root-leaf path under w.
* D: uniform between the distance sum under w and 1.05x the one under u.

All draws come from one seeded generator, so equal seeds give equal
instances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .relax import root_distances
from .tree import InstanceError, TreeInstance, leaf_control, srd

__all__ = ["InstanceFamily", "gen_instance"]


@dataclass(frozen=True)
class InstanceFamily:
    """Parameters of a random-instance distribution.

    ``integer`` samples every attribute integral (the default; exact-mode
    friendly).  ``divisor_costs`` resamples each c(e) from the divisors of K
    so every uncapped slack K/c(e) is integral — with integer data that keeps
    all float arithmetic exact.  Explicit K/M/N/D override the derivation
    rules above.
    """

    n: int
    seed: int = 0
    w_range: tuple = (0, 10)
    u_range: tuple = (10, 20)
    c_range: tuple = (1, 5)
    r_range: tuple = (1, 3)
    integer: bool = True
    divisor_costs: bool = False
    K: object = None
    M: object = None
    N: object = None
    D: object = None

    def with_seed(self, seed: int) -> "InstanceFamily":
        return replace(self, seed=seed)


def _validate(f: InstanceFamily):
    if f.n < 1:
        raise InstanceError("family needs n >= 1")
    for name, (lo, hi) in (("w", f.w_range), ("u", f.u_range),
                           ("c", f.c_range), ("r", f.r_range)):
        if lo > hi:
            raise InstanceError(f"{name} range is empty")
    if f.w_range[0] < 0:
        raise InstanceError("w range must be nonnegative")
    if f.u_range[1] < f.w_range[1]:
        raise InstanceError("u range below w range: caps u >= w cannot hold")
    if f.c_range[0] <= 0:
        raise InstanceError("c range must be positive")
    if f.r_range[0] < 1 or any(int(x) != x for x in f.r_range):
        raise InstanceError("r range must be integers >= 1")


def _divisors(k: int) -> list[int]:
    out = [d for d in range(1, k + 1) if k % d == 0]
    return out or [1]


def gen_instance(family: InstanceFamily) -> TreeInstance:
    """Draw one instance; deterministic under the family seed."""
    _validate(family)
    f = family
    n = f.n
    rng = np.random.default_rng(f.seed)

    parent = np.full(n + 1, -1, dtype=np.int64)
    for i in range(1, n + 1):
        parent[i] = rng.integers(0, i)

    def draw(lo, hi, size):
        if f.integer:
            return rng.integers(int(lo), int(hi) + 1, size=size).astype(float)
        return rng.uniform(lo, hi, size=size)

    w = np.zeros(n + 1)
    u = np.zeros(n + 1)
    c = np.ones(n + 1)
    r = np.ones(n + 1, dtype=np.int64)
    w[1:] = draw(*f.w_range, n)
    u[1:] = np.maximum(w[1:], draw(*f.u_range, n))
    c[1:] = draw(*f.c_range, n)
    r[1:] = rng.integers(int(f.r_range[0]), int(f.r_range[1]) + 1, size=n)

    K = f.K
    if K is None:
        k_top = float(np.max(c[1:] * (u[1:] - w[1:])))
        K = max(1, math.ceil(rng.uniform(0.25, 0.9) * k_top)) if k_top > 0 else 1
    if f.divisor_costs:
        if not (f.integer and float(K).is_integer()):
            raise InstanceError("divisor_costs needs integer data and an integer K")
        divs = [d for d in _divisors(int(K)) if f.c_range[0] <= d <= f.c_range[1]] or [1]
        c[1:] = rng.choice(divs, size=n)

    kids: list[list[int]] = [[] for _ in range(n + 1)]
    for v in range(1, n + 1):
        kids[parent[v]].append(v)
    inst = TreeInstance(parent=parent, children=tuple(tuple(sorted(k)) for k in kids),
                        w=w, u=u, c=c, r=r, names=tuple(range(n + 1)), K=K)

    N = f.N if f.N is not None else int(rng.integers(1, max(1, n // 3) + 1))
    M = f.M
    if M is None:
        lc = leaf_control(inst, materialize_sets=False)
        dist = root_distances(inst, inst.w)
        lo = min(dist[t] for t in lc.leaves)
        hi = max(dist[t] for t in lc.leaves)
        M = rng.uniform(lo, hi)
        if f.integer:
            M = int(round(M))
    D = f.D
    if D is None:
        base = srd(inst, inst.w)
        top = srd(inst, inst.u)
        D = rng.uniform(base, 1.05 * top)
        if f.integer:
            D = int(round(D))
    return inst.with_params(K=K, M=M, N=int(N), D=D)
