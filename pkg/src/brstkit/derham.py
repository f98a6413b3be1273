"""Poincare polynomials of reductive groups and the predicted BRST multiplicities."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Sequence

from .exact import poly_mul, poly_pow
from .models import ReductionSetup


class UnknownFamily(ValueError):
    pass


@dataclass(frozen=True)
class PoincarePolynomial:
    coefficients: tuple

    def __post_init__(self):
        coeffs = [int(c) for c in self.coefficients]
        if any(c < 0 for c in coeffs):
            raise ValueError("Poincare coefficients are nonnegative")
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs or [0]))

    def __getitem__(self, m: int) -> int:
        return self.coefficients[m] if 0 <= m < len(self.coefficients) else 0

    @property
    def top(self) -> int:
        return len(self.coefficients) - 1

    def evaluate(self, t=1):
        return sum(c * t**m for m, c in enumerate(self.coefficients))

    def is_palindromic(self) -> bool:
        return self.coefficients == self.coefficients[::-1]

    def as_list(self) -> list[int]:
        return list(self.coefficients)

    def __mul__(self, other: "PoincarePolynomial") -> "PoincarePolynomial":
        return kunneth(self, other)

    def render(self) -> str:
        terms = []
        for m, c in enumerate(self.coefficients):
            if not c:
                continue
            mono = "1" if m == 0 else ("t" if m == 1 else f"t^{m}")
            terms.append(mono if c == 1 and m else (str(c) if m == 0 else f"{c}{mono}"))
        return " + ".join(terms) or "0"


def gl_poincare(m: int) -> PoincarePolynomial:
    """prod_{k=1}^{m} (1 + t^{2k-1}): exterior algebra on e_1, e_3, ..., e_{2m-1}."""
    if m < 1:
        raise ValueError("m must be at least 1")
    p = [1]
    for k in range(1, m + 1):
        f = [0] * (2 * k)
        f[0] = 1
        f[2 * k - 1] = 1
        p = poly_mul(p, f)
    return PoincarePolynomial(tuple(p))


def kunneth(a: PoincarePolynomial, b: PoincarePolynomial) -> PoincarePolynomial:
    return PoincarePolynomial(tuple(poly_mul(list(a.coefficients), list(b.coefficients))))


def torus_poincare(d: int) -> PoincarePolynomial:
    return PoincarePolynomial(tuple(comb(d, m) for m in range(d + 1)))


def blockwise_poincare(block_sizes: Sequence[int]) -> PoincarePolynomial:
    """Kunneth product over GL blocks; an empty list is the trivial group."""
    p = PoincarePolynomial((1,))
    for m in block_sizes:
        if m:
            p = kunneth(p, gl_poincare(m))
    return p


def factored_form(block_sizes: Sequence[int]) -> str:
    """E.g. [1, 1, 1, 2] -> '(1+t)^3 (1+t^3)'."""
    counts: dict = {}
    for m in block_sizes:
        for k in range(1, m + 1):
            counts[2 * k - 1] = counts.get(2 * k - 1, 0) + 1
    if not counts:
        return "1"
    parts = []
    for e in sorted(counts):
        base = "(1+t)" if e == 1 else f"(1+t^{e})"
        parts.append(base if counts[e] == 1 else f"{base}^{counts[e]}")
    return " ".join(parts)


def sra_generating_series(ell: int, n: int) -> PoincarePolynomial:
    """(1 + t + t^3 + ... + t^{2n-1})^ell, expanded literally."""
    if ell < 0 or n < 1:
        raise ValueError("need ell >= 0 and n >= 1")
    base = [0] * (2 * n)
    base[0] = 1
    for k in range(1, n + 1):
        base[2 * k - 1] = 1
    return PoincarePolynomial(tuple(poly_pow(base, ell)))


def _type_and_rank(name: str) -> tuple[str, int]:
    letter, digits = name[0].upper(), name[1:]
    if letter not in "ADE" or not digits.isdigit():
        raise UnknownFamily(f"unrecognized Dynkin label {name!r}")
    return letter, int(digits)


def preprojective_blocks(name: str) -> list[int]:
    """Retained GL block sizes for the affine quiver with v = delta (extended vertex removed)."""
    from .models import affine_quiver, minimal_imaginary_root

    try:
        Q = affine_quiver(name)
    except Exception as exc:
        raise UnknownFamily(str(exc)) from exc
    delta = minimal_imaginary_root(Q)
    return [int(x) for x in delta[1:]]


def predicted_poincare(family, **params) -> PoincarePolynomial:
    """Prediction for a named family or a ReductionSetup.

    Families: ``"preprojective"`` (``dynkin="A3"`` ...), ``"hypertoric"``
    (``d=2``), ``"sra"`` (``ell``, ``n``), ``"blocks"`` (``sizes=[...]``).
    """
    if isinstance(family, ReductionSetup):
        return predicted_for_setup(family)
    if family == "preprojective":
        letter, ell = _type_and_rank(params["dynkin"])
        if letter == "A":
            return torus_poincare(ell)
        if letter == "D":
            if ell < 4:
                raise UnknownFamily("D type needs rank at least 4")
            p = torus_poincare(ell)
            for _ in range(ell - 3):
                p = kunneth(p, PoincarePolynomial((1, 0, 0, 1)))
            return p
        return blockwise_poincare(preprojective_blocks(params["dynkin"]))
    if family == "hypertoric":
        return torus_poincare(int(params["d"]))
    if family == "sra":
        return sra_generating_series(int(params["ell"]), int(params["n"]))
    if family == "blocks":
        return blockwise_poincare(params["sizes"])
    raise UnknownFamily(f"unknown family {family!r}")


def predicted_for_setup(setup: ReductionSetup) -> PoincarePolynomial:
    if setup.is_torus:
        return torus_poincare(setup.g_dim)
    blocks = setup.lie.block_structure
    if blocks is None:
        raise UnknownFamily("nonabelian setup without block data")
    return blockwise_poincare([m for _, m in blocks])


def setup_block_sizes(setup: ReductionSetup) -> list[int]:
    if setup.is_torus:
        return [1] * setup.g_dim
    return [m for _, m in setup.lie.block_structure or ()]


@dataclass(frozen=True)
class PredictedCell:
    weight: tuple
    ghost_degree: int
    bound: int
    dim: int


def predicted_dimension_table(setup: ReductionSetup, lc_dims: Sequence[int], N: int | None = None) -> list[PredictedCell]:
    """Expected weight-0 H^n dims: Poincare coefficient at n times the invariant dimension at each bound."""
    if not setup.is_torus:
        raise UnknownFamily("dimension tables are only predicted for torus setups")
    P = predicted_for_setup(setup)
    lc = list(lc_dims)
    N = len(lc) - 1 if N is None else N
    zero = (0,) * setup.weight_rank
    out = []
    for n in range(-setup.g_dim, setup.g_dim + 1):
        for k in range(N + 1):
            base = lc[k] if k < len(lc) else 0
            out.append(PredictedCell(zero, n, k, P[n] * base if n >= 0 else 0))
    return out
