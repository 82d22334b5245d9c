"""Exhaustive search for small bitrades, independent of the spectral argument.

A bitrade is a signed vector chi on Gr(k) with incidence @ chi == 0 at
level t.  The search grows the support in enumeration order, one column at
a time, trying sizes 2, 4, ... below the bound so the first hit is minimum.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ScaleGuardExceeded
from .gf import FieldSpec, field_spec
from .grassmann import CanonicalSubspace, covers, enumerate_subspaces, gaussian_binomial
from .trades import Bitrade, TradeParams

DEFAULT_MAX_INCIDENCE = 10 ** 7


@dataclass
class IncidenceSystem:
    t_subspaces: list[CanonicalSubspace]
    k_subspaces: list[CanonicalSubspace]
    incidence: np.ndarray  # bool, rows Gr(t), columns Gr(k)

    @property
    def column_rows(self) -> list[tuple[int, ...]]:
        return [tuple(np.flatnonzero(col)) for col in self.incidence.T]


def build_incidence(params: TradeParams, spec: Optional[FieldSpec] = None,
                    max_entries: int = DEFAULT_MAX_INCIDENCE) -> IncidenceSystem:
    spec = spec or field_spec(params.q, max_q=params.q)
    q, t, k, v = params.q, params.t, params.k, params.v
    size = gaussian_binomial(v, t, q) * gaussian_binomial(v, k, q)
    if size > max_entries:
        raise ScaleGuardExceeded(f"incidence matrix with {size} entries exceeds {max_entries}")
    ts = list(enumerate_subspaces(v, t, spec))
    ks = list(enumerate_subspaces(v, k, spec))
    inc = np.zeros((len(ts), len(ks)), dtype=bool)
    for j, Y in enumerate(ks):
        for i, X in enumerate(ts):
            inc[i, j] = covers(X, Y)
    return IncidenceSystem(ts, ks, inc)


@dataclass
class Verdict:
    params: TradeParams
    bound: int
    found: Optional[Bitrade]
    exhausted: bool
    nodes_visited: int
    wall_time_ms: float = 0.0

    @property
    def inconclusive(self) -> bool:
        return self.found is None and not self.exhausted

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "bound": self.bound,
            "found": None if self.found is None else self.found.to_json(),
            "exhausted": self.exhausted,
            "nodes_visited": self.nodes_visited,
            "wall_time_ms": round(self.wall_time_ms, 3),
        }


class _Budget(Exception):
    pass


@dataclass
class _DFS:
    cols: list[tuple[int, ...]]
    nrows: int
    max_nodes: Optional[int] = None
    deadline: Optional[float] = None
    nodes: int = 0
    last_cover: list[int] = field(default_factory=list)

    def __post_init__(self):
        last = [-1] * self.nrows
        for j, rows in enumerate(self.cols):
            for i in rows:
                last[i] = j
        self.last_cover = last
        self.colsize = max(len(c) for c in self.cols)

    def run(self, size: int, first: Optional[int] = None) -> Optional[list[tuple[int, int]]]:
        """Find a signed support of exactly ``size`` columns, or None.

        ``first`` pins the smallest support column (used to split work).
        """
        self.sums = [0] * self.nrows
        self.l1 = 0
        self.chosen: list[tuple[int, int]] = []
        firsts = range(len(self.cols) - size + 1) if first is None else [first]
        for j in firsts:
            # sign symmetry: the least support element carries +1
            self._apply(j, 1)
            self.chosen.append((j, 1))
            if self._dfs(j + 1, size - 1, 1):
                return list(self.chosen)
            self.chosen.pop()
            self._apply(j, -1)
        return None

    def _apply(self, j: int, sign: int) -> None:
        sums = self.sums
        l1 = self.l1
        for i in self.cols[j]:
            old = sums[i]
            sums[i] = old + sign
            l1 += abs(old + sign) - abs(old)
        self.l1 = l1

    def _dfs(self, start: int, remaining: int, balance: int) -> bool:
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise _Budget
        if self.deadline is not None and self.nodes & 0x3FF == 0 and time.monotonic() > self.deadline:
            raise _Budget
        if remaining == 0:
            return self.l1 == 0 and balance == 0
        if abs(balance) > remaining or self.l1 > remaining * self.colsize:
            return False
        sums, last = self.sums, self.last_cover
        for i in range(self.nrows):
            if sums[i] and last[i] < start:
                return False
        for j in range(start, len(self.cols) - remaining + 1):
            for sign in (1, -1):
                self._apply(j, sign)
                self.chosen.append((j, sign))
                if self._dfs(j + 1, remaining - 1, balance + sign):
                    return True
                self.chosen.pop()
                self._apply(j, -sign)
        return False


def _subtree(args):
    cols, nrows, size, first = args
    dfs = _DFS(cols, nrows)
    hit = dfs.run(size, first)
    return hit, dfs.nodes


def search_below(params: TradeParams, bound: int, spec: Optional[FieldSpec] = None,
                 max_nodes: Optional[int] = None, time_budget_s: Optional[float] = None,
                 workers: int = 1, system: Optional[IncidenceSystem] = None) -> Verdict:
    """Look for a bitrade of cardinality < bound.

    With ``workers > 1`` each support size is split by its least column
    across processes; every subtree of that size is run to completion, so
    node counts differ from the serial run but stay deterministic.
    Budgets apply to the serial path only.
    """
    if bound < 2:
        raise ValueError("bound must be at least 2")
    spec = spec or field_spec(params.q, max_q=params.q)
    start = time.monotonic()
    system = system or build_incidence(params, spec)
    cols = system.column_rows
    nrows = len(system.t_subspaces)
    deadline = None if time_budget_s is None else start + time_budget_s
    nodes = 0
    hit = None
    exhausted = True
    for size in range(2, bound, 2):
        if workers > 1:
            jobs = [(cols, nrows, size, j) for j in range(len(cols) - size + 1)]
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_subtree, jobs))
            nodes += sum(n for _, n in results)
            hit = next((h for h, _ in results if h is not None), None)
        else:
            dfs = _DFS(cols, nrows, None if max_nodes is None else max_nodes - nodes, deadline)
            try:
                hit = dfs.run(size)
            except _Budget:
                nodes += dfs.nodes
                exhausted = False
                break
            nodes += dfs.nodes
        if hit is not None:
            break
    found = None
    if hit is not None:
        ks = system.k_subspaces
        t0 = frozenset(ks[j] for j, s in hit if s > 0)
        t1 = frozenset(ks[j] for j, s in hit if s < 0)
        found = Bitrade(params, t0, t1, spec)
        exhausted = False
    elapsed = (time.monotonic() - start) * 1000
    return Verdict(params, bound, found, exhausted and found is None, nodes, elapsed)
