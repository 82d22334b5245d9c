"""Subspaces of F_q^v in canonical form, Gaussian binomials, and the
Grassmann graph J_q(v, k).

A subspace is stored as its RREF basis, so equality and hashing of
:class:`CanonicalSubspace` coincide with equality of subspaces.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import DimensionMismatch, OutOfRange, ScaleGuardExceeded
from .gf import FieldSpec, field_spec, tables
from .linalg import MatrixGF, rank_rows, rref_rows

DEFAULT_MAX_VERTICES = 10 ** 7


def max_vertices() -> int:
    return int(os.environ.get("QTRADE_MAX_VERTICES", DEFAULT_MAX_VERTICES))


def q_integer(r: int, q: int) -> int:
    """[r]_q = 1 + q + ... + q^(r-1)."""
    return sum(q ** i for i in range(r))


def gaussian_binomial(n: int, j: int, q: int) -> int:
    """Number of j-dimensional subspaces of an n-dimensional space over GF(q)."""
    if j < 0 or j > n:
        raise OutOfRange(f"gaussian_binomial needs 0 <= j <= n, got n={n}, j={j}")
    num = den = 1
    for i in range(j):
        num *= q_integer(n - i, q)
        den *= q_integer(i + 1, q)
    return num // den


@dataclass(frozen=True)
class CanonicalSubspace:
    basis: MatrixGF

    def __post_init__(self):
        rows, _ = rref_rows(self.basis.rows, self.basis.cols, self.basis.spec)
        if tuple(map(tuple, rows)) != self.basis.rows:
            raise ValueError("basis is not in reduced row echelon form without zero rows")

    @classmethod
    def _trusted(cls, basis: MatrixGF) -> "CanonicalSubspace":
        obj = object.__new__(cls)
        object.__setattr__(obj, "basis", basis)
        return obj

    @classmethod
    def span(cls, vectors: Sequence[Sequence[int]], v: int, spec: FieldSpec) -> "CanonicalSubspace":
        rows, _ = rref_rows(vectors, v, spec)
        return cls._trusted(MatrixGF.from_rows(rows, v, spec))

    @classmethod
    def coordinate(cls, indices: Sequence[int], v: int, spec: FieldSpec) -> "CanonicalSubspace":
        """Span of the standard basis vectors e_i, i in indices (0-based)."""
        return cls.span([[int(c == i) for c in range(v)] for i in indices], v, spec)

    @property
    def dim(self) -> int:
        return len(self.basis.rows)

    @property
    def v(self) -> int:
        return self.basis.cols

    @property
    def spec(self) -> FieldSpec:
        return self.basis.spec

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        return self.basis.rows

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(r) if x) for r in self.rows)

    def sort_key(self):
        """Enumeration order: pivot set first, then entries row-major."""
        return (self.pivots, self.rows)

    def vectors(self) -> Iterator[tuple[int, ...]]:
        """All q^dim vectors of the subspace."""
        tb = tables(self.spec)
        add, mul = tb.add, tb.mul
        for coeffs in product(range(self.spec.q), repeat=self.dim):
            vec = [0] * self.v
            for c, row in zip(coeffs, self.rows):
                if c:
                    vec = [add[x][mul[c][y]] for x, y in zip(vec, row)]
            yield tuple(vec)

    def to_json(self) -> dict:
        return {"v": self.v, "dim": self.dim, "rows": [list(r) for r in self.rows]}

    @classmethod
    def from_json(cls, d: dict, spec: FieldSpec) -> "CanonicalSubspace":
        sub = cls.span(d["rows"], int(d["v"]), spec)
        if "dim" in d and int(d["dim"]) != sub.dim:
            raise DimensionMismatch(f"declared dim {d['dim']} but rows span dim {sub.dim}")
        return sub

    def __repr__(self) -> str:
        return f"CanonicalSubspace(v={self.v}, rows={[list(r) for r in self.rows]})"


@dataclass(frozen=True)
class GrassmannParams:
    q: int
    v: int
    k: int

    def __post_init__(self):
        if not 0 < self.k < self.v:
            raise OutOfRange(f"need 0 < k < v, got k={self.k}, v={self.v}")

    @property
    def kbar(self) -> int:
        return min(self.k, self.v - self.k)


def enumerate_subspaces(v: int, i: int, spec: FieldSpec) -> Iterator[CanonicalSubspace]:
    """Every i-dimensional subspace of F_q^v exactly once, in canonical order."""
    if not 0 <= i <= v:
        raise OutOfRange(f"need 0 <= i <= v, got i={i}, v={v}")
    q = spec.q
    for piv in combinations(range(v), i):
        pset = set(piv)
        free = [(r, c) for r, p in enumerate(piv) for c in range(p + 1, v) if c not in pset]
        for vals in product(range(q), repeat=len(free)):
            rows = [[0] * v for _ in range(i)]
            for r, p in enumerate(piv):
                rows[r][p] = 1
            for (r, c), x in zip(free, vals):
                rows[r][c] = x
            yield CanonicalSubspace._trusted(
                MatrixGF(tuple(map(tuple, rows)), v, spec))


def _check_ambient(X: CanonicalSubspace, Y: CanonicalSubspace) -> None:
    if X.v != Y.v or X.spec != Y.spec:
        raise DimensionMismatch("subspaces live in different ambient spaces")


def intersection_dim(X: CanonicalSubspace, Y: CanonicalSubspace) -> int:
    _check_ambient(X, Y)
    return X.dim + Y.dim - rank_rows(X.rows + Y.rows, X.v, X.spec)


def grassmann_distance(X: CanonicalSubspace, Y: CanonicalSubspace) -> int:
    if X.dim != Y.dim:
        raise DimensionMismatch(f"distance needs equal dimensions, got {X.dim} and {Y.dim}")
    return X.dim - intersection_dim(X, Y)


def covers(X: CanonicalSubspace, Y: CanonicalSubspace) -> bool:
    """True iff X ⊆ Y."""
    if X.dim > Y.dim:
        raise DimensionMismatch(f"cannot test dim {X.dim} inside dim {Y.dim}")
    _check_ambient(X, Y)
    if X.dim == 0:
        return True
    return rank_rows(Y.rows + X.rows, Y.v, Y.spec) == Y.dim


def grassmann_eigenvalue(j: int, params: GrassmannParams) -> int:
    """θ_j = q^(j+1) [k-j]_q [v-k-j]_q - [j]_q, strictly decreasing in j."""
    if not 0 <= j <= params.kbar:
        raise OutOfRange(f"eigenvalue index {j} outside 0..{params.kbar}")
    q, v, k = params.q, params.v, params.k
    return q ** (j + 1) * q_integer(k - j, q) * q_integer(v - k - j, q) - q_integer(j, q)


def hat_set(X: CanonicalSubspace, k: int) -> list[CanonicalSubspace]:
    """All k-subspaces containing X, in canonical order.

    Uses F^v = X ⊕ C with C spanned by the non-pivot coordinates of X:
    each k-subspace Y ⊇ X is X ⊕ (Y ∩ C).
    """
    d, v, spec = X.dim, X.v, X.spec
    if not d <= k <= v:
        raise DimensionMismatch(f"hat set needs dim(X)={d} <= k={k} <= v={v}")
    free_cols = [c for c in range(v) if c not in set(X.pivots)]
    out = []
    for W in enumerate_subspaces(len(free_cols), k - d, spec):
        lifted = []
        for r in W.rows:
            row = [0] * v
            for c, x in zip(free_cols, r):
                row[c] = x
            lifted.append(row)
        out.append(CanonicalSubspace.span(list(X.rows) + lifted, v, spec))
    out.sort(key=CanonicalSubspace.sort_key)
    return out


# -- the materialized graph --------------------------------------------------

@lru_cache(maxsize=None)
def projective_points(v: int, spec: FieldSpec) -> dict[tuple[int, ...], int]:
    """Index of each normalized nonzero vector (first nonzero entry 1)."""
    pts: dict[tuple[int, ...], int] = {}
    for P in enumerate_subspaces(v, 1, spec):
        pts[P.rows[0]] = len(pts)
    return pts


def point_indices(X: CanonicalSubspace) -> list[int]:
    """Indices of the 1-dimensional subspaces contained in X."""
    pts = projective_points(X.v, X.spec)
    out = []
    for vec in X.vectors():
        lead = next((x for x in vec if x), 0)
        if lead == 1:
            out.append(pts[vec])
    return out


class GrassmannGraph:
    """J_q(v, k) with vertices in canonical order.

    Each vertex is also stored as the 0/1 incidence row of its projective
    points; two k-subspaces meeting in dimension d share [d]_q points, so
    pairwise intersection dimensions reduce to an integer matrix product.
    """

    def __init__(self, spec: FieldSpec, v: int, k: int):
        self.spec, self.v, self.k = spec, v, k
        self.params = GrassmannParams(spec.q, v, k)
        self.vertices = list(enumerate_subspaces(v, k, spec))
        self.index = {Y: n for n, Y in enumerate(self.vertices)}
        npts = len(projective_points(v, spec))
        inc = np.zeros((len(self.vertices), npts), dtype=np.int32)
        for n, Y in enumerate(self.vertices):
            inc[n, point_indices(Y)] = 1
        self.incidence = inc
        q = spec.q
        lookup = np.full(q_integer(k, q) + 1, -1, dtype=np.int64)
        for d in range(k + 1):
            lookup[q_integer(d, q)] = d
        self._dim_of_count = lookup

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def degree(self) -> int:
        return grassmann_eigenvalue(0, self.params)

    def indices_of(self, subspaces) -> np.ndarray:
        return np.array([self.index[Y] for Y in subspaces], dtype=np.int64)

    def intersection_dims(self, rows: np.ndarray, cols: Optional[np.ndarray] = None) -> np.ndarray:
        """dim(Y_a ∩ Y_b) for a in rows, b in cols (all vertices by default)."""
        right = self.incidence if cols is None else self.incidence[cols]
        common = self.incidence[rows] @ right.T
        return self._dim_of_count[common]

    def distances_to_set(self, members: np.ndarray, chunk: int = 4096) -> np.ndarray:
        """d(Y, S) = min over S of k - dim(Y ∩ X), for every vertex Y."""
        members = np.asarray(members, dtype=np.int64)
        out = np.empty(len(self), dtype=np.int64)
        right = self.incidence[members].T
        for lo in range(0, len(self), chunk):
            common = self.incidence[lo:lo + chunk] @ right
            out[lo:lo + chunk] = self.k - self._dim_of_count[common].max(axis=1)
        return out

    def adjacency_matrix(self) -> np.ndarray:
        dims = self.intersection_dims(np.arange(len(self)))
        return (dims == self.k - 1).astype(np.int64)

    def neighbor_lists(self) -> list[np.ndarray]:
        adj = []
        for lo in range(0, len(self), 1024):
            dims = self.intersection_dims(np.arange(lo, min(lo + 1024, len(self))))
            adj.extend(np.flatnonzero(row == self.k - 1) for row in dims)
        return adj

    def shell_neighbor_counts(self, shells: np.ndarray, chunk: int = 2048) -> np.ndarray:
        """counts[Y, j] = number of neighbours of Y lying in shell j."""
        r = int(shells.max())
        onehot = np.zeros((len(self), r + 1), dtype=np.int64)
        onehot[np.arange(len(self)), shells] = 1
        out = np.empty((len(self), r + 1), dtype=np.int64)
        for lo in range(0, len(self), chunk):
            rows = np.arange(lo, min(lo + chunk, len(self)))
            adj = (self.intersection_dims(rows) == self.k - 1).astype(np.int64)
            out[rows] = adj @ onehot
        return out


def check_scale(count: int, scale_override: bool = False) -> None:
    if count > max_vertices() and not scale_override:
        raise ScaleGuardExceeded(
            f"{count} vertices exceeds the guard {max_vertices()}; "
            "set QTRADE_MAX_VERTICES or pass scale_override")


@lru_cache(maxsize=8)
def _cached_graph(spec: FieldSpec, v: int, k: int) -> GrassmannGraph:
    return GrassmannGraph(spec, v, k)


def grassmann_graph(spec: FieldSpec, v: int, k: int, scale_override: bool = False) -> GrassmannGraph:
    """Materialize J_q(v, k), shared read-only between callers."""
    check_scale(gaussian_binomial(v, k, spec.q), scale_override)
    return _cached_graph(spec, v, k)


def graph_for(q: int, v: int, k: int) -> GrassmannGraph:
    return grassmann_graph(field_spec(q), v, k)
