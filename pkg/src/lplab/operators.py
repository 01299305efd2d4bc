"""Dense matrix realizations of the representations under study.

The left regular convolution operator, the coset-averaging projection, the
quotient compression, coset block structure for subgroup-supported elements,
and the regular covariant representation of the translation crossed product
on the pairs space l(G x G).

Row/column convention: entry[s][t] multiplies input coordinate t, so the
matrix of a point mass is the permutation matrix of left translation.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Any

import numpy as np

from .algebra import AlgebraError, GroupAlgebraElement, push_quotient, restrict_subgroup
from .groups import FiniteGroup, GroupError, SubgroupHandle, quotient

CROSSED_MAX_ORDER = 24


@dataclass(eq=False)
class OperatorMatrix:
    dim: int
    entries: np.ndarray
    index_kind: str  # "group-elements" | "group-pairs"
    index: tuple

    def __post_init__(self) -> None:
        self.entries = np.asarray(self.entries, dtype=np.complex128)
        if self.entries.shape != (self.dim, self.dim):
            raise ValueError("entry matrix shape mismatch")
        if len(self.index) != self.dim:
            raise ValueError("index map size must match dim")
        if not (np.all(np.isfinite(self.entries.real)) and np.all(np.isfinite(self.entries.imag))):
            raise ValueError("entries must be finite")


def regular_matrix(f: GroupAlgebraElement) -> OperatorMatrix:
    """Matrix of left convolution by f: entry[s][t] = f(s t^{-1})."""
    g = f.group
    idx = g.cayley[:, g.inverse]  # idx[s, t] = s * t^{-1}
    return OperatorMatrix(dim=g.order, entries=f.coeffs[idx],
                          index_kind="group-elements", index=tuple(g.elements))


def averaging_projection(n: SubgroupHandle) -> OperatorMatrix:
    """Projection averaging over right translation by a normal subgroup.

    entry[s][t] = 1/|N| when s^{-1} t lies in N; a doubly stochastic
    idempotent of norm one for every p.
    """
    if not n.is_normal:
        raise GroupError("averaging projection requires a normal subgroup")
    return OperatorMatrix(dim=n.parent.order,
                          entries=_coset_indicator(n).astype(np.complex128) / n.order,
                          index_kind="group-elements",
                          index=tuple(n.parent.elements))


def _coset_indicator(n: SubgroupHandle) -> np.ndarray:
    """0/1 matrix with entry[s][t] = 1 iff s^{-1} t is in N (same left coset)."""
    g = n.parent
    prod = g.cayley[g.inverse[:, None], np.arange(g.order)[None, :]]
    return np.asarray(n.position[prod] >= 0, dtype=np.int64)


def coset_averaging_map(n: SubgroupHandle,
                        quotient_data: tuple[FiniteGroup, np.ndarray] | None = None,
                        ) -> np.ndarray:
    """|G/N| x |G| map averaging a vector on G over each left coset."""
    if not n.is_normal:
        raise GroupError("coset averaging requires a normal subgroup")
    q, projection = quotient_data if quotient_data is not None else quotient(n.parent, n)
    s = np.zeros((q.order, n.parent.order))
    s[projection, np.arange(n.parent.order)] = 1.0 / n.order
    return s


def coset_lift_map(n: SubgroupHandle,
                   quotient_data: tuple[FiniteGroup, np.ndarray] | None = None,
                   ) -> np.ndarray:
    """|G| x |G/N| map sending a vector on G/N to its coset-constant lift."""
    if not n.is_normal:
        raise GroupError("coset lifting requires a normal subgroup")
    q, projection = quotient_data if quotient_data is not None else quotient(n.parent, n)
    lift = np.zeros((n.parent.order, q.order))
    lift[np.arange(n.parent.order), projection] = 1.0
    return lift


def quotient_compression(n: SubgroupHandle, f: GroupAlgebraElement,
                         quotient_data: tuple[FiniteGroup, np.ndarray] | None = None,
                         ) -> OperatorMatrix:
    """Regular matrix, over G/N, of the coset pushforward of f.

    Satisfies the commuting identity  compress(f) . avg = avg . regular(f)
    with avg = coset_averaging_map(N), up to float reassociation.
    """
    if not n.is_normal:
        raise GroupError("quotient compression requires a normal subgroup")
    qdata = quotient_data if quotient_data is not None else quotient(n.parent, n)
    return regular_matrix(push_quotient(n, f, qdata))


@dataclass(eq=False)
class BlockReport:
    """Result of checking the right-coset block decomposition."""

    num_blocks: int
    block_size: int
    permutation: tuple[int, ...]
    off_block_max: float
    block_mismatch_max: float
    subgroup_matrix: OperatorMatrix

    @property
    def identical(self) -> bool:
        return self.off_block_max == 0.0 and self.block_mismatch_max == 0.0

    def to_json(self) -> dict[str, Any]:
        return {
            "num_blocks": self.num_blocks,
            "block_size": self.block_size,
            "permutation": list(self.permutation),
            "off_block_max": self.off_block_max,
            "block_mismatch_max": self.block_mismatch_max,
            "identical": self.identical,
        }


def coset_block_structure(h: SubgroupHandle, f: GroupAlgebraElement) -> BlockReport:
    """Verify that conv-by-f, for f supported on H, is right-coset block
    diagonal with |G|/|H| copies of the subgroup's own convolution matrix."""
    g = h.parent
    f_h = restrict_subgroup(h, f)  # raises if f is supported off H
    members = list(h.member_ids)
    seen = np.zeros(g.order, dtype=bool)
    perm: list[int] = []
    for t in g.elements:  # right cosets Ht, representative = smallest id
        if not seen[t]:
            block = g.cayley[members, t]
            seen[block] = True
            perm.extend(int(x) for x in block)
    order = np.asarray(perm)
    permuted = regular_matrix(f).entries[np.ix_(order, order)]
    k = h.order
    blocks = g.order // k
    sub_matrix = regular_matrix(f_h)
    off = 0.0
    mismatch = 0.0
    for b in range(blocks):
        for c in range(blocks):
            piece = permuted[b * k:(b + 1) * k, c * k:(c + 1) * k]
            if b == c:
                mismatch = max(mismatch, float(np.max(np.abs(piece - sub_matrix.entries))))
            else:
                off = max(off, float(np.max(np.abs(piece))))
    return BlockReport(num_blocks=blocks, block_size=k, permutation=tuple(perm),
                       off_block_max=off, block_mismatch_max=mismatch,
                       subgroup_matrix=sub_matrix)


def _pairs_index(g: FiniteGroup) -> tuple:
    n = g.order
    return tuple((x // n, x % n) for x in range(n * n))


def crossed_unit_int(g: FiniteGroup, x: int, y: int) -> np.ndarray:
    """0/1 integer matrix of the crossed-product unit a_{x,y} acting on pairs.

    Row (a, b) carries a single 1, at column (y x^{-1} a, b), present iff
    a*b = x.  Exact integer entries make relation checks exact.
    """
    n = g.order
    if n > CROSSED_MAX_ORDER:
        raise GroupError(f"crossed-product cap is order {CROSSED_MAX_ORDER}")
    m = np.zeros((n * n, n * n), dtype=np.int64)
    shift = g.mul(y, g.inv(x))  # left factor y x^{-1}
    for a in g.elements:
        for b in g.elements:
            if g.cayley[a, b] == x:
                m[a * n + b, g.cayley[shift, a] * n + b] = 1
    return m


def crossed_matrix_unit(g: FiniteGroup, x: int, y: int) -> OperatorMatrix:
    n = g.order
    return OperatorMatrix(dim=n * n, entries=crossed_unit_int(g, x, y).astype(np.complex128),
                          index_kind="group-pairs", index=_pairs_index(g))


def crossed_operator(g: FiniteGroup, c: np.ndarray) -> OperatorMatrix:
    """sum_{x,y} C[x][y] a_{x,y} in the regular covariant representation."""
    n = g.order
    if n > CROSSED_MAX_ORDER:
        raise GroupError(f"crossed-product cap is order {CROSSED_MAX_ORDER}")
    c = np.asarray(c, dtype=np.complex128)
    if c.shape != (n, n):
        raise ValueError("coefficient matrix must be |G| x |G|")
    if not (np.all(np.isfinite(c.real)) and np.all(np.isfinite(c.imag))):
        raise ValueError("coefficient matrix must be finite")
    entries = np.zeros((n * n, n * n), dtype=np.complex128)
    a_grid, b_grid = np.divmod(np.arange(n * n), n)
    x = g.cayley[a_grid, b_grid]  # row (a,b) belongs to the unit family with a*b = x
    for y in g.elements:
        shift = g.cayley[y, g.inverse[x]]
        cols = g.cayley[shift, a_grid] * n + b_grid
        entries[np.arange(n * n), cols] += c[x, y]
    return OperatorMatrix(dim=n * n, entries=entries,
                          index_kind="group-pairs", index=_pairs_index(g))


def matrix_to_json(m: OperatorMatrix) -> dict[str, Any]:
    return {
        "dim": m.dim,
        "index_kind": m.index_kind,
        "entries": [[float(v.real), float(v.imag)] for v in m.entries.ravel()],
    }


def matrix_to_csv(m: OperatorMatrix) -> str:
    """Dense CSV with interleaved re/im columns."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    header: list[str] = []
    for j in range(m.dim):
        header.extend([f"re{j}", f"im{j}"])
    writer.writerow(header)
    for i in range(m.dim):
        row: list[str] = []
        for j in range(m.dim):
            row.extend([repr(float(m.entries[i, j].real)), repr(float(m.entries[i, j].imag))])
        writer.writerow(row)
    return out.getvalue()
