"""Lie algebra data: tori and sums of gl blocks with one unit block removed."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact import to_fraction


class NoUnitBlock(ValueError):
    pass


@dataclass(frozen=True)
class LieData:
    dim: int
    basis_labels: tuple
    structure_constants: dict = field(default_factory=dict)  # (i, j, k) -> chi^k_ij, 0-based
    block_structure: tuple | None = None  # ((vertex, size), ...) for retained blocks

    @property
    def is_abelian(self) -> bool:
        return not self.structure_constants

    def bracket(self, i: int, j: int) -> dict[int, Fraction]:
        """[A_i, A_j] as {k: coefficient}."""
        return {k: v for (a, b, k), v in self.structure_constants.items() if a == i and b == j}

    def nonzero_brackets(self):
        """{(i, j): {k: chi}} over pairs with a nonzero bracket."""
        out: dict = {}
        for (i, j, k), v in self.structure_constants.items():
            out.setdefault((i, j), {})[k] = v
        return out

    def rank(self) -> int:
        """Rank of the corresponding group (sum of block sizes; dim for tori)."""
        if self.block_structure is None:
            return self.dim
        return sum(size for _, size in self.block_structure)


@dataclass(frozen=True)
class Character:
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(to_fraction(v) for v in self.values))

    def __getitem__(self, i):
        return self.values[i]

    def __len__(self):
        return len(self.values)


def torus_lie(d: int) -> LieData:
    if d < 1:
        raise ValueError("torus dimension must be positive")
    return LieData(d, tuple(f"A{i + 1}" for i in range(d)), {}, None)


def gl_sum_lie(block_sizes: Sequence[int], distinguished_vertex: int | None, vertex_ids: Sequence | None = None) -> LieData:
    """Matrix units of every gl block except the distinguished size-1 block.

    The distinguished block absorbs the diagonal center, so the retained
    blocks are a Lie subalgebra complementary to it.
    """
    if vertex_ids is None:
        vertex_ids = list(range(len(block_sizes)))
    if distinguished_vertex is None:
        raise NoUnitBlock("a size-1 block must be designated to absorb the diagonal center")
    pos = list(vertex_ids).index(distinguished_vertex)
    if block_sizes[pos] != 1:
        raise NoUnitBlock(f"block at vertex {distinguished_vertex} has size {block_sizes[pos]}, not 1")
    labels = []
    blocks = []
    for vid, size in zip(vertex_ids, block_sizes):
        if vid == distinguished_vertex or size == 0:
            continue
        blocks.append((vid, size))
        for p in range(1, size + 1):
            for q in range(1, size + 1):
                labels.append((vid, p, q))
    index = {lab: n for n, lab in enumerate(labels)}
    chi = {}
    # [E_pq, E_rs] = delta_qr E_ps - delta_sp E_rq within one block
    for (v1, p, q), i in index.items():
        for (v2, r, s), j in index.items():
            if v1 != v2:
                continue
            acc: dict = {}
            if q == r:
                k = index[(v1, p, s)]
                acc[k] = acc.get(k, 0) + 1
            if s == p:
                k = index[(v1, r, q)]
                acc[k] = acc.get(k, 0) - 1
            for k, v in acc.items():
                if v:
                    chi[(i, j, k)] = Fraction(v)
    return LieData(len(labels), tuple(labels), chi, tuple(blocks))


def _bracket_vec(L: LieData, u: dict, v: dict) -> dict:
    out: dict = {}
    for (i, j, k), c in L.structure_constants.items():
        a = u.get(i)
        b = v.get(j)
        if a and b:
            out[k] = out.get(k, 0) + a * b * c
    return {k: c for k, c in out.items() if c}


def jacobi_check(L: LieData):
    """(True, None) if antisymmetry and Jacobi hold, else (False, first bad triple)."""
    chi = L.structure_constants
    for (i, j, k), c in sorted(chi.items()):
        if chi.get((j, i, k), 0) != -c:
            return False, (i, j, k)
    if L.dim > 32:
        raise ValueError("exhaustive Jacobi check limited to dim <= 32")
    for i in range(L.dim):
        for j in range(L.dim):
            for k in range(L.dim):
                ei, ej, ek = {i: 1}, {j: 1}, {k: 1}
                total: dict = {}
                for a, b, c in ((ei, ej, ek), (ej, ek, ei), (ek, ei, ej)):
                    inner = _bracket_vec(L, b, c)
                    for key, val in _bracket_vec(L, a, inner).items():
                        total[key] = total.get(key, 0) + val
                if any(total.values()):
                    return False, (i, j, k)
    return True, None


def validate_character(L: LieData, c: Character) -> bool:
    if len(c) != L.dim:
        return False
    for (i, j), br in L.nonzero_brackets().items():
        if sum(v * c[k] for k, v in br.items()):
            return False
    if L.block_structure is not None:
        per_block: dict = {}
        for n, (vid, p, q) in enumerate(L.basis_labels):
            if p != q:
                if c[n]:
                    return False
            else:
                per_block.setdefault(vid, set()).add(c[n])
        if any(len(vals) > 1 for vals in per_block.values()):
            return False
    return True


def trace_character(L: LieData, per_vertex: dict) -> Character:
    """c = sum_i c_i Tr restricted to the retained blocks."""
    if L.block_structure is None:
        raise ValueError("trace characters need block data")
    vals = []
    for vid, p, q in L.basis_labels:
        vals.append(to_fraction(per_vertex.get(vid, 0)) if p == q else Fraction(0))
    return Character(tuple(vals))
