"""Weight distributions over completely regular sets and the eigenvalue
recursion that predicts them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from .errors import DegenerateShellStructure, DimensionMismatch, EmptyReferenceSet
from .gf import FieldSpec
from .grassmann import (
    CanonicalSubspace,
    GrassmannGraph,
    covers,
    enumerate_subspaces,
    gaussian_binomial,
    grassmann_eigenvalue,
    grassmann_graph,
    hat_set,
)
from .trades import Bitrade


@dataclass(frozen=True)
class SignedFunction:
    """Integer-valued function on Gr(k), stored by its support."""

    values: dict
    spec: FieldSpec
    v: int
    k: int

    def __post_init__(self):
        object.__setattr__(self, "values", {Y: int(x) for Y, x in self.values.items() if x})
        for Y in self.values:
            if Y.dim != self.k or Y.v != self.v:
                raise DimensionMismatch(f"{Y!r} is not a {self.k}-subspace of dimension-{self.v} space")

    @classmethod
    def from_bitrade(cls, b: Bitrade) -> "SignedFunction":
        vals = {Y: 1 for Y in b.t0}
        vals.update({Y: -1 for Y in b.t1})
        return cls(vals, b.spec, b.params.v, b.params.k)

    def __call__(self, Y: CanonicalSubspace) -> int:
        return self.values.get(Y, 0)

    @property
    def support(self) -> list[CanonicalSubspace]:
        return sorted(self.values, key=CanonicalSubspace.sort_key)

    def total(self) -> int:
        return sum(self.values.values())

    def graph(self, scale_override: bool = False) -> GrassmannGraph:
        return grassmann_graph(self.spec, self.v, self.k, scale_override)


@dataclass(frozen=True)
class WeightDistribution:
    values: tuple[int, ...]
    reference: str = "S"
    reference_dim: Optional[int] = None

    @property
    def r(self) -> int:
        return len(self.values) - 1

    def multiple_of(self, base) -> Optional[int]:
        """The integer c with values == c * base, or None."""
        base = list(base)
        if len(base) != len(self.values) or base[0] == 0:
            return None
        c, rem = divmod(self.values[0], base[0])
        if rem or any(w != c * b for w, b in zip(self.values, base)):
            return None
        return c

    def to_json(self, dims: Optional[dict] = None) -> dict:
        d = dict(dims or {})
        if self.reference_dim is not None:
            d.setdefault("reference", self.reference_dim)
        return {"reference": self.reference, "dims": d, "values": list(self.values)}


def _reference_indices(S: Iterable[CanonicalSubspace], graph: GrassmannGraph) -> np.ndarray:
    S = list(S)
    if not S:
        raise EmptyReferenceSet("the reference set is empty")
    for X in S:
        if X not in graph.index:
            raise DimensionMismatch(f"{X!r} is not a vertex of J_{graph.spec.q}({graph.v},{graph.k})")
    return graph.indices_of(S)


def shells(S: Iterable[CanonicalSubspace], graph: GrassmannGraph) -> np.ndarray:
    """Distance from every vertex to the set S."""
    return graph.distances_to_set(_reference_indices(S, graph))


def weight_distribution(phi: SignedFunction, S: Iterable[CanonicalSubspace],
                        graph: Optional[GrassmannGraph] = None,
                        reference: str = "S", reference_dim: Optional[int] = None) -> WeightDistribution:
    """W^j = sum of phi over the vertices at distance exactly j from S."""
    graph = graph or phi.graph()
    dist = shells(S, graph)
    W = [0] * (int(dist.max()) + 1)
    for Y, x in phi.values.items():
        W[dist[graph.index[Y]]] += x
    return WeightDistribution(tuple(W), reference, reference_dim)


def hat_weight_distribution(phi: SignedFunction, Z: CanonicalSubspace,
                            graph: Optional[GrassmannGraph] = None) -> WeightDistribution:
    return weight_distribution(phi, hat_set(Z, phi.k), graph, "hat(Z')", Z.dim)


@dataclass(frozen=True)
class IntersectionNumbers:
    """rows[i] = (s_{i,i-1}, s_{i,i}, s_{i,i+1}); the undefined ends are 0."""

    rows: tuple[tuple[int, int, int], ...]

    def down(self, i: int) -> int:
        return self.rows[i][0]

    def same(self, i: int) -> int:
        return self.rows[i][1]

    def up(self, i: int) -> int:
        return self.rows[i][2]

    @property
    def r(self) -> int:
        return len(self.rows) - 1

    def to_json(self) -> list[dict]:
        return [{"i": i, "down": d, "same": s, "up": u} for i, (d, s, u) in enumerate(self.rows)]


@dataclass(frozen=True)
class IntersectionResult:
    regular: bool
    numbers: Optional[IntersectionNumbers]
    shell_sizes: tuple[int, ...]


def intersection_numbers(S: Iterable[CanonicalSubspace],
                         graph: Optional[GrassmannGraph] = None) -> IntersectionResult:
    """Test complete regularity of S and report its intersection numbers."""
    S = list(S)
    if not S:
        raise EmptyReferenceSet("the reference set is empty")
    if graph is None:
        X = S[0]
        graph = grassmann_graph(X.spec, X.v, X.dim)
    dist = shells(S, graph)
    counts = graph.shell_neighbor_counts(dist)
    r = counts.shape[1] - 1
    sizes = tuple(int((dist == i).sum()) for i in range(r + 1))
    rows = []
    for i in range(r + 1):
        block = counts[dist == i]
        first = block[0]
        if not (block == first).all():
            return IntersectionResult(False, None, sizes)
        outside = [j for j in range(r + 1) if abs(j - i) > 1 and first[j]]
        if outside:  # pragma: no cover - impossible for distance shells
            return IntersectionResult(False, None, sizes)
        rows.append((int(first[i - 1]) if i > 0 else 0,
                     int(first[i]),
                     int(first[i + 1]) if i < r else 0))
    return IntersectionResult(True, IntersectionNumbers(tuple(rows)), sizes)


def predicted_distribution(theta: int, nums: IntersectionNumbers, r: int) -> list[Fraction]:
    """w^0 = 1, w^{i+1} = (θ w^i - s_{i,i} w^i - s_{i-1,i} w^{i-1}) / s_{i+1,i}."""
    if r > nums.r:
        raise DegenerateShellStructure(f"r={r} exceeds the {nums.r + 1} available shells")
    w = [Fraction(1)]
    prev = Fraction(0)
    for i in range(r):
        denom = nums.down(i + 1)
        if denom == 0:
            raise DegenerateShellStructure(f"s_{{{i + 1},{i}}} = 0")
        back = nums.up(i - 1) * prev if i > 0 else 0
        nxt = (theta * w[i] - nums.same(i) * w[i] - back) / denom
        prev = w[i]
        w.append(nxt)
    return w


def expected_min_distribution(q: int, t: int) -> list[int]:
    """((-1)^j q^(j(j-1)/2) [t+1 choose j]_q) for j = 0..t+1."""
    return [(-1) ** j * q ** (j * (j - 1) // 2) * gaussian_binomial(t + 1, j, q)
            for j in range(t + 2)]


def hat_inner_products(phi: SignedFunction, j: int) -> dict:
    """<phi, χ_{X̂}> for every X in Gr(j): the sum of phi over k-subspaces containing X."""
    if not 0 <= j <= phi.k:
        raise DimensionMismatch(f"level j={j} outside 0..{phi.k}")
    support = phi.support
    out = {}
    for X in enumerate_subspaces(phi.v, j, phi.spec):
        out[X] = sum(phi.values[Y] for Y in support if covers(X, Y))
    return out


def orthogonal_to_level(phi: SignedFunction, j: int) -> bool:
    return not any(hat_inner_products(phi, j).values())


def numeric_spectrum(graph: GrassmannGraph, tol: float = 1e-6) -> list[int]:
    """Distinct adjacency eigenvalues, decreasing, each within tol of an integer."""
    ev = np.linalg.eigvalsh(graph.adjacency_matrix().astype(float))
    rounded = np.rint(ev)
    if np.abs(ev - rounded).max() > tol:
        raise ArithmeticError("adjacency spectrum is not integral within tolerance")
    return sorted({int(x) for x in rounded}, reverse=True)


def formula_spectrum(graph: GrassmannGraph) -> list[int]:
    return [grassmann_eigenvalue(j, graph.params) for j in range(graph.params.kbar + 1)]
