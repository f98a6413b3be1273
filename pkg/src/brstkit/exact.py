"""Exact rational linear algebra and truncated generating series.

Rationals are ``fractions.Fraction``. Matrices are stored sparsely as
``{(row, col): value}`` tables with no zero entries. Elimination works on
integer-scaled rows (content removed after every step), so results are
bit-identical across runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence


class ContainmentViolation(ValueError):
    """A span that should sit inside another one does not."""


def to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            den_i = int(den)
            if den_i == 0:
                raise ZeroDivisionError(f"zero denominator in {value!r}")
            return Fraction(int(num), den_i)
        return Fraction(text)
    return Fraction(value)


def format_fraction(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class SparseMatrix:
    rows: int
    cols: int
    entries: Mapping[tuple[int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (r, c), v in self.entries.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise IndexError(f"entry ({r}, {c}) outside {self.rows}x{self.cols}")
            v = to_fraction(v)
            if v:
                clean[(r, c)] = v
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence]) -> "SparseMatrix":
        n_rows = len(rows)
        n_cols = len(rows[0]) if n_rows else 0
        entries = {}
        for i, row in enumerate(rows):
            if len(row) != n_cols:
                raise ValueError("ragged matrix")
            for j, v in enumerate(row):
                if v:
                    entries[(i, j)] = to_fraction(v)
        return cls(n_rows, n_cols, entries)

    @classmethod
    def from_columns(cls, n_rows: int, columns: Sequence[Mapping[int, Fraction]]) -> "SparseMatrix":
        entries = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                entries[(i, j)] = v
        return cls(n_rows, len(columns), entries)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls(rows, cols, {})

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, {(i, i): Fraction(1) for i in range(n)})

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def row_vectors(self) -> list[dict[int, Fraction]]:
        out: list[dict[int, Fraction]] = [{} for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def column_vectors(self) -> list[dict[int, Fraction]]:
        out: list[dict[int, Fraction]] = [{} for _ in range(self.cols)]
        for (r, c), v in self.entries.items():
            out[c][r] = v
        return out

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        other_rows = other.row_vectors()
        acc: dict[tuple[int, int], Fraction] = {}
        for (i, k), a in self.entries.items():
            for j, b in other_rows[k].items():
                key = (i, j)
                acc[key] = acc.get(key, 0) + a * b
        return SparseMatrix(self.rows, other.cols, acc)

    def is_zero(self) -> bool:
        return not self.entries

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def dump_triplets(self) -> str:
        """Plain-text ``row col value`` dump, preceded by a ``rows cols nnz`` header."""
        lines = ["% sparse triplets", f"{self.rows} {self.cols} {len(self.entries)}"]
        for (r, c) in sorted(self.entries):
            lines.append(f"{r} {c} {format_fraction(self.entries[(r, c)])}")
        return "\n".join(lines) + "\n"

    @classmethod
    def load_triplets(cls, text: str) -> "SparseMatrix":
        lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("%")]
        rows, cols, nnz = (int(t) for t in lines[0].split())
        entries = {}
        for ln in lines[1:]:
            r, c, v = ln.split()
            entries[(int(r), int(c))] = to_fraction(v)
        if len(entries) != nnz:
            raise ValueError(f"expected {nnz} entries, found {len(entries)}")
        return cls(rows, cols, entries)


def _integer_row(vec: Mapping[int, Fraction]) -> dict[int, int]:
    den = 1
    for v in vec.values():
        d = v.denominator if isinstance(v, Fraction) else 1
        den = den * d // gcd(den, d)
    row = {}
    g = 0
    for k, v in vec.items():
        iv = int(v * den)
        if iv:
            row[k] = iv
            g = gcd(g, iv)
    if g > 1:
        row = {k: v // g for k, v in row.items()}
    return row


class Echelon:
    """Incrementally built echelon basis of a row span.

    Each stored row is led by its largest column index; the set of leading
    columns is an invariant of the span, so ``count_leading_at_most(c)`` is
    the dimension of the span's intersection with the coordinate subspace
    spanned by columns ``<= c``.
    """

    def __init__(self):
        self._rows: dict[int, dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self._rows)

    def pivots(self) -> list[int]:
        return sorted(self._rows)

    def reduce(self, vec: Mapping[int, Fraction]) -> dict[int, int]:
        row = _integer_row(vec)
        rows = self._rows
        while row:
            lead = max(row)
            pivot_row = rows.get(lead)
            if pivot_row is None:
                return row
            a = pivot_row[lead]
            b = row[lead]
            g = gcd(a, b)
            a //= g
            b //= g
            new = {k: v * a for k, v in row.items()}
            for k, v in pivot_row.items():
                nv = new.get(k, 0) - b * v
                if nv:
                    new[k] = nv
                else:
                    new.pop(k, None)
            g = 0
            for v in new.values():
                g = gcd(g, v)
                if g == 1:
                    break
            if g > 1:
                new = {k: v // g for k, v in new.items()}
            row = new
        return row

    def insert(self, vec: Mapping[int, Fraction]) -> bool:
        """Add ``vec`` to the span; True if the rank grew."""
        row = self.reduce(vec)
        if not row:
            return False
        lead = max(row)
        if row[lead] < 0:
            row = {k: -v for k, v in row.items()}
        self._rows[lead] = row
        return True

    def contains(self, vec: Mapping[int, Fraction]) -> bool:
        return not self.reduce(vec)

    def count_leading_at_most(self, col: int) -> int:
        return sum(1 for p in self._rows if p <= col)


def rank(m: SparseMatrix) -> int:
    ech = Echelon()
    for row in m.row_vectors():
        if row:
            ech.insert(row)
    return ech.rank


def kernel_dimension(m: SparseMatrix) -> int:
    return m.cols - rank(m)


def quotient_dimension(ambient_dim: int, numerator_span: SparseMatrix, denominator_span: SparseMatrix) -> int:
    """dim(row span of numerator / row span of denominator).

    Raises ContainmentViolation if the denominator rows are not in the
    numerator span.
    """
    for m in (numerator_span, denominator_span):
        if m.cols != ambient_dim:
            raise ValueError(f"span has {m.cols} columns, ambient dimension is {ambient_dim}")
    num = Echelon()
    for row in numerator_span.row_vectors():
        if row:
            num.insert(row)
    den = Echelon()
    for i, row in enumerate(denominator_span.row_vectors()):
        if not row:
            continue
        if not num.contains(row):
            raise ContainmentViolation(f"denominator row {i} is not in the numerator span")
        den.insert(row)
    return num.rank - den.rank


@dataclass(frozen=True)
class SeriesTruncation:
    coefficients: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(int(c) for c in self.coefficients))
        if not self.coefficients:
            raise ValueError("a truncation keeps at least degree 0")

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, k: int) -> int:
        return self.coefficients[k]

    def __len__(self) -> int:
        return len(self.coefficients)

    def __iter__(self):
        return iter(self.coefficients)

    def as_list(self) -> list[int]:
        return list(self.coefficients)


def poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def poly_pow(a: Sequence[int], e: int) -> list[int]:
    out = [1]
    for _ in range(e):
        out = poly_mul(out, a)
    return out


def one_minus_t_power(d: int, e: int) -> list[int]:
    """Coefficients of (1 - t^d)^e."""
    if d < 1:
        raise ValueError("factor degree must be at least 1")
    base = [1] + [0] * (d - 1) + [-1]
    return poly_pow(base, e)


def expand_rational_series(
    numerator: Sequence[int],
    denominator_factors: Iterable[tuple[int, int]],
    N: int,
) -> SeriesTruncation:
    """Power series of numerator / prod (1 - t^d)^e through degree N."""
    coeffs = [0] * (N + 1)
    for k, c in enumerate(numerator):
        if k <= N:
            coeffs[k] = int(c)
    for d, e in denominator_factors:
        if d < 1:
            raise ValueError("factor degree must be at least 1")
        for _ in range(e):
            # multiply by 1/(1 - t^d): running sum with stride d
            for k in range(d, N + 1):
                coeffs[k] += coeffs[k - d]
    return SeriesTruncation(coeffs)


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form of a small dense matrix; returns (rows, pivot columns)."""
    m = [[to_fraction(v) for v in row] for row in rows]
    if not m:
        return [], []
    n_cols = len(m[0])
    pivots = []
    r = 0
    for c in range(n_cols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def kernel_basis(rows: Sequence[Sequence], n_cols: int | None = None) -> list[list[Fraction]]:
    """Basis of the right null space of a small dense matrix."""
    if n_cols is None:
        n_cols = len(rows[0])
    reduced, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n_cols
        v[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def determinant(rows: Sequence[Sequence]) -> Fraction:
    m = [[to_fraction(v) for v in row] for row in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / m[c][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det
