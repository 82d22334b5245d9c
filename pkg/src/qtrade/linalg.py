"""Exact matrix algebra over GF(q).

Matrices are immutable row tuples of field-element indices.  The row space
is what matters everywhere downstream, so most functions return the reduced
row echelon form with zero rows dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import AmbientMismatch
from .gf import FieldSpec, tables

Row = tuple[int, ...]


@dataclass(frozen=True)
class MatrixGF:
    rows: tuple[Row, ...]
    cols: int
    spec: FieldSpec

    def __post_init__(self):
        if self.cols < 1:
            raise ValueError("a matrix needs at least one column")
        q = self.spec.q
        for r in self.rows:
            if len(r) != self.cols:
                raise ValueError(f"row {r} has length {len(r)}, expected {self.cols}")
            if any(not 0 <= x < q for x in r):
                raise ValueError(f"row {r} has entries outside GF({q})")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], cols: int, spec: FieldSpec) -> "MatrixGF":
        return cls(tuple(tuple(int(x) for x in r) for r in rows), cols, spec)

    @classmethod
    def zero(cls, cols: int, spec: FieldSpec) -> "MatrixGF":
        return cls((), cols, spec)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def to_json(self) -> dict:
        return {"v": self.cols, "rows": [list(r) for r in self.rows]}


def _check_same_ambient(a: MatrixGF, b: MatrixGF) -> None:
    if a.cols != b.cols or a.spec != b.spec:
        raise AmbientMismatch(
            f"ambient mismatch: {a.cols} cols over GF({a.spec.q}) vs "
            f"{b.cols} cols over GF({b.spec.q})")


def rref_rows(rows: Iterable[Sequence[int]], cols: int,
              spec: FieldSpec) -> tuple[list[list[int]], list[int]]:
    """Row-reduce a list of rows; returns (nonzero RREF rows, pivot columns)."""
    tb = tables(spec)
    add, mul, neg, inv = tb.add, tb.mul, tb.neg, tb.inv
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == len(m):
            break
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        lead = m[r][c]
        if lead != 1:
            f = inv[lead]
            m[r] = [mul[f][x] for x in m[r]]
        prow = m[r]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = neg[m[i][c]]
                mi = m[i]
                m[i] = [add[x][mul[f][y]] for x, y in zip(mi, prow)]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rref(M: MatrixGF) -> tuple[MatrixGF, int, list[int]]:
    """Reduced row echelon form of M's row space, its rank and pivot columns."""
    rows, pivots = rref_rows(M.rows, M.cols, M.spec)
    return MatrixGF.from_rows(rows, M.cols, M.spec), len(pivots), pivots


def rank_rows(rows: Sequence[Sequence[int]], cols: int, spec: FieldSpec) -> int:
    if spec.q == 2:
        return gf2_rank_packed([pack_gf2(r) for r in rows])
    return len(rref_rows(rows, cols, spec)[1])


def rank(M: MatrixGF) -> int:
    return rank_rows(M.rows, M.cols, M.spec)


def sum_space(A: MatrixGF, B: MatrixGF) -> MatrixGF:
    _check_same_ambient(A, B)
    rows, _ = rref_rows(A.rows + B.rows, A.cols, A.spec)
    return MatrixGF.from_rows(rows, A.cols, A.spec)


def intersect(A: MatrixGF, B: MatrixGF) -> MatrixGF:
    """Basis (RREF) of rowspace(A) ∩ rowspace(B), by the Zassenhaus method.

    Reduce the block matrix [[A, A], [B, 0]]; rows whose left half vanishes
    carry a basis of the intersection in their right half.
    """
    _check_same_ambient(A, B)
    v = A.cols
    zero = (0,) * v
    block = [a + a for a in A.rows] + [b + zero for b in B.rows]
    if not block:
        return MatrixGF.zero(v, A.spec)
    red, _ = rref_rows(block, 2 * v, A.spec)
    inter = [r[v:] for r in red if not any(r[:v])]
    rows, _ = rref_rows(inter, v, A.spec)
    return MatrixGF.from_rows(rows, v, A.spec)


def contains_vector(A: MatrixGF, x: Sequence[int]) -> bool:
    """True iff x lies in rowspace(A)."""
    return rank_rows(list(A.rows) + [tuple(x)], A.cols, A.spec) == rank(A)


def permute_columns(M: MatrixGF, perm: Sequence[int]) -> MatrixGF:
    """Move column j to position perm[j] and re-reduce."""
    if sorted(perm) != list(range(M.cols)):
        raise ValueError(f"{list(perm)} is not a permutation of range({M.cols})")
    out = []
    for r in M.rows:
        new = [0] * M.cols
        for j, x in enumerate(r):
            new[perm[j]] = x
        out.append(new)
    rows, _ = rref_rows(out, M.cols, M.spec)
    return MatrixGF.from_rows(rows, M.cols, M.spec)


# -- bit-packed GF(2) path ---------------------------------------------------
# Column j maps to bit j.  Differentially tested against rref_rows.

def pack_gf2(row: Sequence[int]) -> int:
    out = 0
    for j, x in enumerate(row):
        if x:
            out |= 1 << j
    return out


def unpack_gf2(word: int, cols: int) -> list[int]:
    return [(word >> j) & 1 for j in range(cols)]


def gf2_rref_packed(words: Iterable[int], cols: int) -> tuple[list[int], list[int]]:
    m = list(words)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        bit = 1 << c
        piv = next((i for i in range(r, len(m)) if m[i] & bit), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i] & bit:
                m[i] ^= m[r]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def gf2_rank_packed(words: Iterable[int]) -> int:
    """Rank of packed GF(2) rows via an XOR basis keyed by leading bit."""
    basis: dict[int, int] = {}
    for w in words:
        while w:
            hb = w.bit_length() - 1
            if hb in basis:
                w ^= basis[hb]
            else:
                basis[hb] = w
                break
    return len(basis)
