"""Rooted edge-weighted trees for budgeted upgrade problems.

An instance holds ``n`` non-root nodes with dense integer ids ``1..n``; the
root is node ``0``.  The edge entering node ``v`` from its parent is
identified by ``v`` itself, so every per-edge vector (``w``, ``u``, ``c``,
``r``, upgraded weights, ...) is an array of length ``n + 1`` indexed by
child node id, with slot 0 unused.  External node labels are mapped to dense
ids at construction time and kept on the instance for reporting.

Instances are immutable after construction (arrays are marked read-only) and
can be shared freely between concurrent solver runs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, NamedTuple

import numpy as np

__all__ = [
    "InstanceError",
    "TreeInstance",
    "LeafControl",
    "SubtreeIndex",
    "build_instance",
    "leaf_control",
    "path_weight",
    "srd",
    "srd_by_paths",
    "subtree_intervals",
    "subtree_edges",
]

_EDGE_FIELDS = ("child", "parent", "w", "u", "c", "r")
_PARAM_FIELDS = ("M", "K", "N", "D")


class InstanceError(ValueError):
    """Raised when node/edge records do not form a valid instance."""


def _check_number(value, what: str):
    if isinstance(value, bool) or not isinstance(value, (int, float, np.integer, np.floating)):
        raise InstanceError(f"{what} must be a number, got {value!r}")
    return value


@dataclass(frozen=True)
class TreeInstance:
    """A rooted tree with per-edge upgrade data and problem parameters.

    Attributes
    ----------
    parent : int array [n+1], ``parent[0] == -1``.
    children : per-node tuple of child ids, in the order the left-subtree
        recursion of the solvers will visit them (ascending id by default).
    w, u, c : float arrays [n+1] indexed by child id — original weight,
        upgraded-weight upper bound and unit upgrade cost of each edge.
    r : int array [n+1] — per-edge weight of the change-count budget.
    names : external label of each node (``names[v]``).
    M : required lower bound on the shortest root-leaf distance.
    K : budget for ``max_e c(e) * (new_w(e) - w(e))``.
    N : budget for ``sum r(e)`` over edges whose weight changes.
    D : target distance sum (minimum-cost variant only).
    """

    parent: np.ndarray
    children: tuple[tuple[int, ...], ...]
    w: np.ndarray
    u: np.ndarray
    c: np.ndarray
    r: np.ndarray
    names: tuple
    M: float | None = None
    K: float | None = None
    N: int | None = None
    D: float | None = None

    def __post_init__(self):
        parent = np.asarray(self.parent, dtype=np.int64)
        w = np.asarray(self.w, dtype=np.float64)
        u = np.asarray(self.u, dtype=np.float64)
        c = np.asarray(self.c, dtype=np.float64)
        r = np.asarray(self.r, dtype=np.int64)
        object.__setattr__(self, "parent", parent)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "r", r)
        n = parent.shape[0] - 1
        if n < 1:
            raise InstanceError("instance needs at least one non-root node")
        for arr, name in ((w, "w"), (u, "u"), (c, "c"), (r, "r")):
            if arr.shape != (n + 1,):
                raise InstanceError(f"{name} must have length n+1 = {n + 1}")
        if len(self.children) != n + 1 or len(self.names) != n + 1:
            raise InstanceError("children/names must have length n+1")
        if parent[0] != -1:
            raise InstanceError("parent[0] must be -1 (node 0 is the root)")
        if np.any(parent[1:] < 0) or np.any(parent[1:] > n):
            raise InstanceError("parent ids out of range")
        if np.any(parent[1:] == np.arange(1, n + 1)):
            raise InstanceError("node cannot be its own parent")
        flat = [ch for kids in self.children for ch in kids]
        if len(flat) != n or set(flat) != set(range(1, n + 1)):
            raise InstanceError("children lists must partition nodes 1..n without duplicates")
        for v, kids in enumerate(self.children):
            for ch in kids:
                if self.parent[ch] != v:
                    raise InstanceError(f"children[{v}] lists {ch} but parent[{ch}] != {v}")
        # Reachability from the root; catches cycles among non-root nodes.
        seen = np.zeros(n + 1, dtype=bool)
        queue = deque([0])
        seen[0] = True
        while queue:
            v = queue.popleft()
            for ch in self.children[v]:
                seen[ch] = True
                queue.append(ch)
        if not seen.all():
            missing = int(np.flatnonzero(~seen)[0])
            raise InstanceError(f"node {self.names[missing]!r} is not reachable from the root")
        if np.any(w[1:] < 0):
            raise InstanceError("edge weights w must be nonnegative")
        if np.any(w[1:] > u[1:]):
            bad = int(np.flatnonzero(w[1:] > u[1:])[0]) + 1
            raise InstanceError(f"w > u on edge into node {self.names[bad]!r}")
        if np.any(c[1:] <= 0):
            raise InstanceError("upgrade costs c must be positive")
        if np.any(r[1:] < 1):
            raise InstanceError("hamming weights r must be integers >= 1")
        if self.K is not None and self.K < 0:
            raise InstanceError("budget K must be nonnegative")
        if self.N is not None:
            if isinstance(self.N, float) and not float(self.N).is_integer():
                raise InstanceError("budget N must be an integer")
            object.__setattr__(self, "N", int(self.N))
            if self.N < 0:
                raise InstanceError("budget N must be nonnegative")
        for arr in (parent, w, u, c, r):
            arr.setflags(write=False)

    # -- basic shape ----------------------------------------------------
    @property
    def n(self) -> int:
        """Number of edges (= number of non-root nodes)."""
        return self.parent.shape[0] - 1

    @property
    def root(self) -> int:
        return 0

    def edges(self) -> range:
        """Edge ids (child node ids) 1..n."""
        return range(1, self.n + 1)

    def is_leaf(self, v: int) -> bool:
        return not self.children[v]

    def postorder(self) -> list[int]:
        """Node ids with every node listed after all of its descendants."""
        order: list[int] = []
        stack = [0]
        while stack:
            v = stack.pop()
            order.append(v)
            stack.extend(reversed(self.children[v]))
        order.reverse()
        return order

    def index_of(self, label) -> int:
        try:
            return self.names.index(label)
        except ValueError:
            raise KeyError(f"unknown node label {label!r}") from None

    def with_params(self, **params) -> "TreeInstance":
        """Copy of the instance with some of M, K, N, D replaced."""
        unknown = set(params) - set(_PARAM_FIELDS)
        if unknown:
            raise InstanceError(f"unknown parameters {sorted(unknown)}")
        return replace(self, **params)


@dataclass(frozen=True)
class LeafControl:
    """Leaves in traversal order plus, per edge, how many (and optionally
    which) leaves route through it."""

    leaves: tuple[int, ...]
    control_count: np.ndarray  # [n+1]; control_count[0] is the leaf total
    leaf_sets: tuple | None = None  # frozenset per edge id, or None

    @property
    def m(self) -> int:
        return len(self.leaves)


class SubtreeIndex(NamedTuple):
    """Identifies the subtree hanging off children ``p..q`` of ``node``
    (1-based child positions; ``q < p`` encodes the empty subtree)."""

    node: int
    p: int
    q: int


def build_instance(root, edges: Iterable, params: Mapping | None = None,
                   children_order: Mapping | None = None) -> TreeInstance:
    """Validate raw node/edge records and return a `TreeInstance`.

    ``edges`` is an iterable of records, each either a mapping with exactly
    the keys child/parent/w/u/c/r or a 6-tuple in that order.  Dense ids are
    assigned to child labels in record order (root gets id 0), so the default
    "ascending node id" child ordering coincides with record order.  Pass
    ``children_order`` (parent label -> list of child labels) to fix a
    different sibling order.
    """
    records = []
    for i, rec in enumerate(edges):
        if isinstance(rec, Mapping):
            extra = set(rec) - set(_EDGE_FIELDS)
            if extra:
                raise InstanceError(f"edges[{i}]: unknown field {sorted(extra)[0]!r}")
            missing = set(_EDGE_FIELDS) - set(rec)
            if missing:
                raise InstanceError(f"edges[{i}]: missing field {sorted(missing)[0]!r}")
            rec = tuple(rec[f] for f in _EDGE_FIELDS)
        else:
            rec = tuple(rec)
            if len(rec) != 6:
                raise InstanceError(f"edges[{i}]: expected 6 fields, got {len(rec)}")
        records.append(rec)
    if not records:
        raise InstanceError("instance needs at least one edge")

    index = {root: 0}
    for i, (child, *_rest) in enumerate(records):
        if child == root:
            raise InstanceError("root cannot appear as a child")
        if child in index:
            raise InstanceError(f"duplicate edge into node {child!r}")
        index[child] = i + 1

    n = len(records)
    parent = np.full(n + 1, -1, dtype=np.int64)
    w = np.zeros(n + 1)
    u = np.zeros(n + 1)
    c = np.ones(n + 1)
    r = np.ones(n + 1, dtype=np.int64)
    for child, par, we, ue, ce, re in records:
        v = index[child]
        if par not in index:
            raise InstanceError(f"edge into {child!r} references undeclared node {par!r}")
        parent[v] = index[par]
        w[v] = _check_number(we, f"w of edge into {child!r}")
        u[v] = _check_number(ue, f"u of edge into {child!r}")
        c[v] = _check_number(ce, f"c of edge into {child!r}")
        _check_number(re, f"r of edge into {child!r}")
        if isinstance(re, float) and not re.is_integer():
            raise InstanceError(f"r of edge into {child!r} must be an integer")
        r[v] = int(re)
        if r[v] < 1:
            raise InstanceError(f"r of edge into {child!r} must be >= 1")
        if w[v] > u[v]:
            raise InstanceError(f"w > u on edge into node {child!r}")
        if c[v] <= 0:
            raise InstanceError(f"c of edge into {child!r} must be positive")

    kids: list[list[int]] = [[] for _ in range(n + 1)]
    for v in range(1, n + 1):
        kids[parent[v]].append(v)
    for lst in kids:
        lst.sort()
    if children_order:
        for par_label, order in children_order.items():
            pv = index.get(par_label)
            if pv is None:
                raise InstanceError(f"children_order references unknown node {par_label!r}")
            ordered = [index.get(ch) for ch in order]
            if None in ordered or sorted(ordered) != kids[pv]:
                raise InstanceError(f"children_order for {par_label!r} is not a permutation "
                                    "of its children")
            kids[pv] = ordered

    names = [None] * (n + 1)
    for label, v in index.items():
        names[v] = label

    kv = {}
    if params:
        unknown = set(params) - set(_PARAM_FIELDS)
        if unknown:
            raise InstanceError(f"params: unknown field {sorted(unknown)[0]!r}")
        for f in _PARAM_FIELDS:
            if f in params and params[f] is not None:
                kv[f] = _check_number(params[f], f"parameter {f}")

    return TreeInstance(parent=parent, children=tuple(tuple(k) for k in kids),
                        w=w, u=u, c=c, r=r, names=tuple(names), **kv)


def leaf_control(inst: TreeInstance, materialize_sets: bool | None = None) -> LeafControl:
    """Count, for every edge, the leaves whose root path uses it.

    One post-order pass.  ``materialize_sets`` forces (or suppresses) the
    per-edge leaf sets; by default they are kept only for small instances
    (n <= 64) since the counts are all the solvers need.
    """
    n = inst.n
    count = np.zeros(n + 1, dtype=np.int64)
    order = inst.postorder()
    leaves = [v for v in order if v != 0 and inst.is_leaf(v)]
    for v in order:
        if v == 0:
            continue
        if inst.is_leaf(v):
            count[v] = 1
        count[inst.parent[v]] += count[v]
    total = int(count[0])
    count[0] = total
    sets = None
    if materialize_sets or (materialize_sets is None and n <= 64):
        acc: list[set] = [set() for _ in range(n + 1)]
        for v in order:
            if v == 0:
                continue
            if inst.is_leaf(v):
                acc[v].add(v)
            acc[inst.parent[v]] |= acc[v]
        sets = tuple(frozenset(acc[v]) for v in range(n + 1))
    count.setflags(write=False)
    return LeafControl(leaves=tuple(leaves), control_count=count, leaf_sets=sets)


def subtree_intervals(inst: TreeInstance) -> tuple[np.ndarray, np.ndarray]:
    """Preorder entry/exit indexes per node; node x lies in v's subtree iff
    tin[v] <= tin[x] < tout[v]."""
    n = inst.n
    tin = np.zeros(n + 1, dtype=np.int64)
    tout = np.zeros(n + 1, dtype=np.int64)
    clock = 0
    stack: list[tuple[int, bool]] = [(0, False)]
    while stack:
        v, done = stack.pop()
        if done:
            tout[v] = clock
            continue
        tin[v] = clock
        clock += 1
        stack.append((v, True))
        stack.extend((ch, False) for ch in reversed(inst.children[v]))
    return tin, tout


def subtree_edges(inst: TreeInstance, idx: SubtreeIndex) -> frozenset[int]:
    """Edge ids contained in the subtree ``T_idx.node(p:q)``."""
    out: set[int] = set()
    for pos in range(idx.p, idx.q + 1):
        child = inst.children[idx.node][pos - 1]
        stack = [child]
        while stack:
            v = stack.pop()
            out.add(v)
            stack.extend(inst.children[v])
    return frozenset(out)


def path_weight(inst: TreeInstance, weights, leaf: int):
    """Sum of ``weights`` along the root path of ``leaf``.

    ``weights`` is any per-edge vector indexed by child id (numpy array or
    plain sequence, e.g. of Fractions in exact runs).
    """
    if leaf == 0 or not inst.is_leaf(leaf):
        raise ValueError(f"node {leaf} is not a leaf")
    total = weights[leaf]
    v = int(inst.parent[leaf])
    while v != 0:
        total = total + weights[v]
        v = int(inst.parent[v])
    return total


def srd(inst: TreeInstance, weights, control: LeafControl | None = None):
    """Distance sum over all leaves: ``sum_e |L(e)| * weights[e]``.

    Equal (up to float rounding) to summing `path_weight` over the leaves;
    `srd_by_paths` computes that independent route for cross-checks.
    """
    counts = (control or leaf_control(inst, materialize_sets=False)).control_count
    if isinstance(weights, np.ndarray) and weights.dtype != object:
        return float(np.dot(counts[1:], weights[1:]))
    total = 0
    for v in range(1, inst.n + 1):
        total = total + int(counts[v]) * weights[v]
    return total


def srd_by_paths(inst: TreeInstance, weights, control: LeafControl | None = None):
    """Distance sum computed leaf by leaf (independent of `srd`)."""
    lc = control or leaf_control(inst, materialize_sets=False)
    total = 0
    for leaf in lc.leaves:
        total = total + path_weight(inst, weights, leaf)
    return total
