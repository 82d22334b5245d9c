"""Subspace bitrades: data model, covering-balance verification, the
minimum-cardinality formula and the hyperbolic-quadric construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import InadmissibleParams, NotATotalTradeSet, ParamsMismatch
from .gf import FieldSpec, field_spec, tables
from .grassmann import (
    CanonicalSubspace,
    covers,
    enumerate_subspaces,
    gaussian_binomial,
    intersection_dim,
)
from .linalg import intersect, permute_columns


@dataclass(frozen=True)
class TradeParams:
    q: int
    t: int
    k: int
    v: int

    def __post_init__(self):
        if not 0 <= self.t < self.k < self.v - self.t:
            raise InadmissibleParams(
                f"(t={self.t}, k={self.k}, v={self.v}) violates 0 <= t < k < v - t")

    def to_json(self) -> dict:
        return {"q": self.q, "t": self.t, "k": self.k, "v": self.v}


def _sorted(subs) -> list[CanonicalSubspace]:
    return sorted(subs, key=CanonicalSubspace.sort_key)


@dataclass(frozen=True)
class Bitrade:
    """A pair (T0, T1) of disjoint nonempty families of k-subspaces.

    Equal volumes are not enforced here; an unequal pair simply fails
    verification at s = 0.
    """

    params: TradeParams
    t0: frozenset
    t1: frozenset
    spec: FieldSpec = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "t0", frozenset(self.t0))
        object.__setattr__(self, "t1", frozenset(self.t1))
        if self.spec is None:
            object.__setattr__(self, "spec", field_spec(self.params.q, max_q=self.params.q))
        p = self.params
        if not self.t0 or not self.t1:
            raise ParamsMismatch("both trades must be nonempty")
        if self.t0 & self.t1:
            raise ParamsMismatch("T0 and T1 must be disjoint")
        for Y in self.t0 | self.t1:
            if Y.dim != p.k or Y.v != p.v or Y.spec != self.spec:
                raise ParamsMismatch(f"{Y!r} is not a {p.k}-subspace of GF({p.q})^{p.v}")

    @property
    def cardinality(self) -> int:
        return len(self.t0) + len(self.t1)

    @property
    def members(self) -> list[CanonicalSubspace]:
        return _sorted(self.t0 | self.t1)

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "field": self.spec.to_json(),
            "t0": [Y.to_json() for Y in _sorted(self.t0)],
            "t1": [Y.to_json() for Y in _sorted(self.t1)],
        }

    @classmethod
    def from_json(cls, d: dict) -> "Bitrade":
        p = d["params"]
        params = TradeParams(int(p["q"]), int(p["t"]), int(p["k"]), int(p["v"]))
        spec = FieldSpec.from_json(d["field"]) if "field" in d else field_spec(params.q, max_q=params.q)
        if spec.q != params.q:
            raise ParamsMismatch(f"field of order {spec.q} does not match q={params.q}")
        t0 = [CanonicalSubspace.from_json(y, spec) for y in d["t0"]]
        t1 = [CanonicalSubspace.from_json(y, spec) for y in d["t1"]]
        return cls(params, frozenset(t0), frozenset(t1), spec)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)


def min_cardinality(q: int, t: int) -> int:
    """prod_{i=0}^t (1 + q^i), asserted equal to the sum form."""
    prod = 1
    for i in range(t + 1):
        prod *= 1 + q ** i
    assert prod == min_cardinality_sum(q, t)
    return prod


def min_cardinality_sum(q: int, t: int) -> int:
    """sum_{j=0}^{t+1} q^(j(j-1)/2) [t+1 choose j]_q."""
    return sum(q ** (j * (j - 1) // 2) * gaussian_binomial(t + 1, j, q) for j in range(t + 2))


# -- verification ------------------------------------------------------------

@dataclass
class BalanceReport:
    s: int
    balanced: bool
    violations: list  # (X, count0, count1)

    def certificate(self) -> str:
        """Plain-text report: a header line, then one violation per line."""
        lines = [f"s={self.s} balanced={str(self.balanced).lower()} violations={len(self.violations)}"]
        for X, c0, c1 in self.violations:
            lines.append(f"{json.dumps([list(r) for r in X.rows])} {c0} {c1}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "s": self.s,
            "balanced": self.balanced,
            "violations": [{"x": X.to_json(), "count0": c0, "count1": c1}
                           for X, c0, c1 in self.violations],
        }


def verify_bitrade(b: Bitrade, s: int) -> BalanceReport:
    """Check that every s-subspace is covered equally often by T0 and T1."""
    p = b.params
    if not 0 <= s <= p.k:
        raise ParamsMismatch(f"balance level s={s} outside 0..{p.k}")
    t0, t1 = _sorted(b.t0), _sorted(b.t1)
    violations = []
    for X in enumerate_subspaces(p.v, s, b.spec):
        c0 = sum(covers(X, Y) for Y in t0)
        c1 = sum(covers(X, Y) for Y in t1)
        if c0 != c1:
            violations.append((X, c0, c1))
    return BalanceReport(s, not violations, violations)


# -- the quadric construction ------------------------------------------------

@dataclass(frozen=True)
class QuadraticForm:
    """x_1 x_{t+2} + ... + x_{t+1} x_{2t+2} with x_{k+t+2} = ... = x_v = 0.

    ``pairs`` and ``zero_coords`` hold 0-based coordinate indices.
    """

    ambient_v: int
    pairs: tuple[tuple[int, int], ...]
    zero_coords: tuple[int, ...]

    @classmethod
    def for_params(cls, params: TradeParams) -> "QuadraticForm":
        t, k, v = params.t, params.k, params.v
        pairs = tuple((i, t + 1 + i) for i in range(t + 1))
        return cls(v, pairs, tuple(range(k + t + 1, v)))

    def value(self, x: Sequence[int], spec: FieldSpec) -> int:
        tb = tables(spec)
        acc = 0
        for a, b in self.pairs:
            acc = tb.add[acc][tb.mul[x[a]][x[b]]]
        return acc

    def polar(self, x: Sequence[int], y: Sequence[int], spec: FieldSpec) -> int:
        """Q(x + y) - Q(x) - Q(y)."""
        tb = tables(spec)
        s = [tb.add[a][b] for a, b in zip(x, y)]
        out = self.value(s, spec)
        out = tb.add[out][tb.neg[self.value(x, spec)]]
        return tb.add[out][tb.neg[self.value(y, spec)]]


def is_totally_singular(Y: CanonicalSubspace, qf: QuadraticForm) -> bool:
    """Every vector of Y is on the quadric and has the forced zero coordinates.

    Checked on the basis only: Q(b_i) = 0 and polar(b_i, b_j) = 0.
    """
    spec = Y.spec
    rows = Y.rows
    for b in rows:
        if any(b[c] for c in qf.zero_coords) or qf.value(b, spec):
            return False
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            if qf.polar(rows[i], rows[j], spec):
                return False
    return True


def is_totally_singular_bruteforce(Y: CanonicalSubspace, qf: QuadraticForm) -> bool:
    spec = Y.spec
    return all(not any(x[c] for c in qf.zero_coords) and qf.value(x, spec) == 0
               for x in Y.vectors())


def hyperbolic_part(Y: CanonicalSubspace, t: int) -> CanonicalSubspace:
    """Y ∩ <e_1, ..., e_{2t+2}>."""
    E = CanonicalSubspace.coordinate(range(2 * t + 2), Y.v, Y.spec)
    return CanonicalSubspace._trusted(intersect(Y.basis, E.basis))


def reference_generator(params: TradeParams, spec: Optional[FieldSpec] = None) -> CanonicalSubspace:
    """Z' = <e_1, ..., e_{t+1}>, i.e. x_{t+2} = ... = x_v = 0."""
    spec = spec or field_spec(params.q, max_q=params.q)
    return CanonicalSubspace.coordinate(range(params.t + 1), params.v, spec)


def split_families(T, params: TradeParams) -> tuple[frozenset, frozenset]:
    """Split the quadric's generators by the parity of (t+1) - dim(Y' ∩ Z')."""
    T = list(T)
    if not T:
        raise NotATotalTradeSet("empty set")
    spec = T[0].spec
    qf = QuadraticForm.for_params(params)
    Z = reference_generator(params, spec)
    t0, t1 = [], []
    for Y in T:
        if Y.dim != params.k or not is_totally_singular(Y, qf):
            raise NotATotalTradeSet(f"{Y!r} is not a totally singular {params.k}-subspace")
        # Z' lies inside <e_1..e_{2t+2}>, so Y ∩ Z' = Y' ∩ Z'
        d = intersection_dim(Y, Z)
        (t0 if (params.t + 1 - d) % 2 == 0 else t1).append(Y)
    return frozenset(t0), frozenset(t1)


def quadric_generators(params: TradeParams, spec: FieldSpec) -> list[CanonicalSubspace]:
    """All k-subspaces satisfying the quadric and zero-coordinate conditions.

    Each is Y' + <e_{2t+3}, ..., e_{k+t+1}> with Y' a totally singular
    (t+1)-subspace of <e_1, ..., e_{2t+2}>.
    """
    t, k, v = params.t, params.k, params.v
    hyper = QuadraticForm(2 * t + 2, tuple((i, t + 1 + i) for i in range(t + 1)), ())
    radical = [[int(c == i) for c in range(v)] for i in range(2 * t + 2, k + t + 1)]
    out = []
    for W in enumerate_subspaces(2 * t + 2, t + 1, spec):
        if is_totally_singular(W, hyper):
            lifted = [list(r) + [0] * (v - 2 * t - 2) for r in W.rows]
            out.append(CanonicalSubspace.span(lifted + radical, v, spec))
    return _sorted(out)


def construct_minimum(params: TradeParams, basis_choice: Optional[Sequence[int]] = None,
                      spec: Optional[FieldSpec] = None) -> Bitrade:
    """A bitrade of cardinality min_cardinality(q, t).

    ``basis_choice`` maps coordinate j to position basis_choice[j], placing
    the construction in another coordinate frame.
    """
    spec = spec or field_spec(params.q, max_q=params.q)
    if spec.q != params.q:
        raise ParamsMismatch(f"field of order {spec.q} does not match q={params.q}")
    if params.t == 0:
        it = enumerate_subspaces(params.v, params.k, spec)
        t0, t1 = frozenset([next(it)]), frozenset([next(it)])
    else:
        t0, t1 = split_families(quadric_generators(params, spec), params)
    if basis_choice is not None:
        def move(Y):
            return CanonicalSubspace._trusted(permute_columns(Y.basis, basis_choice))
        t0 = frozenset(map(move, t0))
        t1 = frozenset(map(move, t1))
    return Bitrade(params, t0, t1, spec)
