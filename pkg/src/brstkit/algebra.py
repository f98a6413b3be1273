"""Weyl algebra, symbol algebra, Clifford ghosts and their tensor product.

Monomials are tuples of exponents.  A Weyl monomial ``(alpha, beta)`` is
x^alpha d^beta with every x to the left of every d.  A ghost monomial
``(S, T)`` is psi_S psi*_T with all psi's first and both index tuples
strictly increasing (indices are 1-based, as in the rendered text).
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, factorial
from typing import Mapping, Sequence

from .exact import format_fraction, to_fraction


class VariableCountMismatch(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class _NegInfinity:
    """Degree of the zero element; below every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NegInfinity"

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __sub__(self, other):
        return self


NegInfinity = _NegInfinity()


class _Mixed:
    def __repr__(self):
        return "Mixed"


Mixed = _Mixed()


def _add_into(acc: dict, key, value) -> None:
    v = acc.get(key)
    if v is None:
        acc[key] = value
    else:
        v = v + value
        if v:
            acc[key] = v
        else:
            del acc[key]


def _clean(terms: Mapping) -> dict:
    out = {}
    for k, v in terms.items():
        v = to_fraction(v)
        if v:
            out[k] = v
    return out


class _Element:
    """Shared plumbing: a finitely supported table monomial -> Fraction."""

    __slots__ = ("terms",)

    def _same(self, other) -> None:  # pragma: no cover - overridden
        raise NotImplementedError

    def _new(self, terms):  # pragma: no cover - overridden
        raise NotImplementedError

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._scalar(other)
        if type(other) is not type(self):
            return NotImplemented
        return self._shape() == other._shape() and self.terms == other.terms

    def __hash__(self):
        return hash((type(self).__name__, self._shape(), frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._scalar(other)
        self._same(other)
        acc = dict(self.terms)
        for k, v in other.terms.items():
            _add_into(acc, k, v)
        return self._new(acc)

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "_Element":
        c = to_fraction(c)
        if not c:
            return self._new({})
        return self._new({k: v * c for k, v in self.terms.items()})

    def __repr__(self):
        return f"{type(self).__name__}({self.render()!r})"

    def __str__(self):
        return self.render()

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for i, key in enumerate(sorted(self.terms, key=self._sort_key)):
            coeff = self.terms[key]
            factors = self._factor_text(key)
            mag = abs(coeff)
            if factors:
                body = factors if mag == 1 else f"{format_fraction(mag)} {factors}"
            else:
                body = format_fraction(mag)
            if i == 0:
                parts.append(body if coeff > 0 else f"-{body}")
            else:
                parts.append(("+ " if coeff > 0 else "- ") + body)
        return " ".join(parts)


def _monomial_degree(key) -> int:
    return sum(key[0]) + sum(key[1])


def _xd_text(alpha, beta, dname="d") -> list[str]:
    out = []
    for i, a in enumerate(alpha):
        if a:
            out.append(f"x{i + 1}" + (f"^{a}" if a > 1 else ""))
    for i, b in enumerate(beta):
        if b:
            out.append(f"{dname}{i + 1}" + (f"^{b}" if b > 1 else ""))
    return out


def _ghost_text(S, T) -> list[str]:
    return [f"ps{i}" for i in S] + [f"ps*{i}" for i in T]


# ---------------------------------------------------------------- Weyl


@lru_cache(maxsize=None)
def _reorder(beta: tuple[int, ...], gamma: tuple[int, ...]) -> tuple[tuple[tuple[int, ...], int], ...]:
    """d^beta x^gamma = sum_k coeff * x^(gamma-k) d^(beta-k); returns (k, coeff) pairs."""
    per_var = []
    for b, g in zip(beta, gamma):
        opts = []
        for k in range(min(b, g) + 1):
            opts.append((k, factorial(k) * comb(b, k) * comb(g, k)))
        per_var.append(opts)
    out = [((), 1)]
    for opts in per_var:
        out = [(ks + (k,), c * ck) for ks, c in out for k, ck in opts]
    return tuple(out)


def weyl_monomial_product(a, b) -> list[tuple[tuple, int]]:
    """Product of normal-ordered monomials (alpha, beta) * (gamma, delta)."""
    alpha, beta = a
    gamma, delta = b
    out = []
    for ks, c in _reorder(beta, gamma):
        new_alpha = tuple(x + y - k for x, y, k in zip(alpha, gamma, ks))
        new_beta = tuple(x - k + y for x, k, y in zip(beta, ks, delta))
        out.append(((new_alpha, new_beta), c))
    return out


class WeylElement(_Element):
    """Element of the Weyl algebra on ``n_vars`` coordinates, normal ordered."""

    __slots__ = ("n_vars",)

    def __init__(self, n_vars: int, terms: Mapping | None = None):
        self.n_vars = n_vars
        self.terms = _clean(terms or {})
        for alpha, beta in self.terms:
            if len(alpha) != n_vars or len(beta) != n_vars:
                raise VariableCountMismatch(f"monomial {(alpha, beta)} does not have {n_vars} variables")

    def _shape(self):
        return self.n_vars

    def _same(self, other):
        if not isinstance(other, WeylElement):
            raise TypeError(f"cannot combine WeylElement with {type(other).__name__}")
        if other.n_vars != self.n_vars:
            raise VariableCountMismatch(f"{self.n_vars} vs {other.n_vars} variables")

    def _new(self, terms):
        return WeylElement(self.n_vars, terms)

    def _scalar(self, c):
        return WeylElement.constant(self.n_vars, c)

    @staticmethod
    def _sort_key(key):
        return (-_monomial_degree(key), tuple(-a for a in key[0]), tuple(-b for b in key[1]))

    @staticmethod
    def _factor_text(key):
        return " ".join(_xd_text(*key))

    @classmethod
    def constant(cls, n_vars: int, c=1) -> "WeylElement":
        z = (0,) * n_vars
        return cls(n_vars, {(z, z): c})

    @classmethod
    def x(cls, n_vars: int, i: int, power: int = 1) -> "WeylElement":
        """Coordinate x_i (0-based index)."""
        alpha = tuple(power if j == i else 0 for j in range(n_vars))
        return cls(n_vars, {(alpha, (0,) * n_vars): 1})

    @classmethod
    def d(cls, n_vars: int, i: int, power: int = 1) -> "WeylElement":
        """Derivation d/dx_i (0-based index)."""
        beta = tuple(power if j == i else 0 for j in range(n_vars))
        return cls(n_vars, {((0,) * n_vars, beta): 1})

    @classmethod
    def monomial(cls, alpha, beta, coeff=1) -> "WeylElement":
        return cls(len(alpha), {(tuple(alpha), tuple(beta)): coeff})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return weyl_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e: int):
        out = WeylElement.constant(self.n_vars)
        for _ in range(e):
            out = out * self
        return out

    def apply(self, poly: Mapping[tuple[int, ...], Fraction]) -> dict[tuple[int, ...], Fraction]:
        """Act on a polynomial {exponent: coeff} in the x's by differentiation and multiplication."""
        out: dict = {}
        for (alpha, beta), c in self.terms.items():
            for gamma, v in poly.items():
                coeff = c * v
                ok = True
                for g, b in zip(gamma, beta):
                    if b > g:
                        ok = False
                        break
                    coeff *= factorial(g) // factorial(g - b)
                if not ok:
                    continue
                new = tuple(g - b + a for g, b, a in zip(gamma, beta, alpha))
                _add_into(out, new, coeff)
        return out


def weyl_mul(a: WeylElement, b: WeylElement) -> WeylElement:
    a._same(b)
    acc: dict = {}
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            for key, c in weyl_monomial_product(ka, kb):
                _add_into(acc, key, ca * cb * c)
    return WeylElement(a.n_vars, acc)


def weyl_commutator(a: WeylElement, b: WeylElement) -> WeylElement:
    return weyl_mul(a, b) - weyl_mul(b, a)


def bernstein_degree(a: "WeylElement | PolyElement"):
    if not a.terms:
        return NegInfinity
    return max(_monomial_degree(k) for k in a.terms)


def monomial_weight(alpha, beta, weights: Sequence[Sequence[int]]) -> tuple[int, ...]:
    if not weights:
        return ()
    dim = len(weights[0])
    w = [0] * dim
    for j, (a, b) in enumerate(zip(alpha, beta)):
        if a != b:
            diff = a - b
            wj = weights[j]
            for r in range(dim):
                w[r] += wj[r] * diff
    return tuple(w)


def torus_weight(a: WeylElement, weights_per_variable: Sequence[Sequence[int]]):
    """Common torus weight of all terms, ``Mixed`` if they disagree (zero vector for 0)."""
    if len(weights_per_variable) != a.n_vars:
        raise VariableCountMismatch(f"need weights for {a.n_vars} variables")
    dim = len(weights_per_variable[0]) if weights_per_variable else 0
    seen = None
    for alpha, beta in a.terms:
        w = monomial_weight(alpha, beta, weights_per_variable)
        if seen is None:
            seen = w
        elif w != seen:
            return Mixed
    return seen if seen is not None else (0,) * dim


# --------------------------------------------------------------- symbols


class PolyElement(_Element):
    """Commutative polynomial in x_i and xi_i (the symbol algebra)."""

    __slots__ = ("n_vars",)

    def __init__(self, n_vars: int, terms: Mapping | None = None):
        self.n_vars = n_vars
        self.terms = _clean(terms or {})

    def _shape(self):
        return self.n_vars

    def _same(self, other):
        if not isinstance(other, PolyElement):
            raise TypeError(f"cannot combine PolyElement with {type(other).__name__}")
        if other.n_vars != self.n_vars:
            raise VariableCountMismatch(f"{self.n_vars} vs {other.n_vars} variables")

    def _new(self, terms):
        return PolyElement(self.n_vars, terms)

    def _scalar(self, c):
        z = (0,) * self.n_vars
        return PolyElement(self.n_vars, {(z, z): c})

    _sort_key = staticmethod(WeylElement._sort_key)

    @staticmethod
    def _factor_text(key):
        return " ".join(_xd_text(*key, dname="xi"))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._same(other)
        acc: dict = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                key = (tuple(x + y for x, y in zip(a1, a2)), tuple(x + y for x, y in zip(b1, b2)))
                _add_into(acc, key, c1 * c2)
        return PolyElement(self.n_vars, acc)

    __rmul__ = __mul__

    def is_homogeneous(self) -> bool:
        return len({_monomial_degree(k) for k in self.terms}) <= 1

    def flat_terms(self) -> dict[tuple[int, ...], Fraction]:
        """Terms keyed by the concatenated exponent vector (x's then xi's)."""
        return {alpha + beta: c for (alpha, beta), c in self.terms.items()}


def principal_symbol(a: WeylElement) -> PolyElement:
    if not a.terms:
        return PolyElement(a.n_vars)
    top = bernstein_degree(a)
    return PolyElement(a.n_vars, {k: v for k, v in a.terms.items() if _monomial_degree(k) == top})


# ---------------------------------------------------------------- ghosts


def _insert_sorted(seq: tuple[int, ...], i: int) -> tuple[tuple[int, ...], int]:
    """Insert i into a sorted tuple; returns (new tuple, number of entries greater than i)."""
    above = sum(1 for s in seq if s > i)
    pos = len(seq) - above
    return seq[:pos] + (i,) + seq[pos:], above


def _times_psi_star(terms: dict, w: int) -> dict:
    out: dict = {}
    for (S, T), c in terms.items():
        if w in T:
            continue
        T2, above = _insert_sorted(T, w)
        _add_into(out, (S, T2), -c if above % 2 else c)
    return out


def _times_psi(terms: dict, u: int) -> dict:
    out: dict = {}
    for (S, T), c in terms.items():
        k = len(T)
        # psi*_T psi_u = (-1)^k psi_u psi*_T + (-1)^(k-m) psi*_{T without u}
        if u in T:
            m = T.index(u) + 1
            T2 = T[: m - 1] + T[m:]
            _add_into(out, (S, T2), -c if (k - m) % 2 else c)
        if u not in S:
            S2, above = _insert_sorted(S, u)
            sign = (k + above) % 2
            _add_into(out, (S2, T), -c if sign else c)
    return out


@lru_cache(maxsize=None)
def ghost_monomial_product(a: tuple, b: tuple) -> tuple[tuple[tuple, int], ...]:
    """(psi_S psi*_T)(psi_U psi*_W) in normal order, as ((S', T'), sign) pairs."""
    S, T = a
    U, W = b
    terms: dict = {(S, T): 1}
    for u in U:
        terms = _times_psi(terms, u)
    for w in W:
        terms = _times_psi_star(terms, w)
    return tuple(sorted(terms.items()))


def ghost_bidegree(S, T) -> tuple[int, int]:
    return (-len(S), len(T))


class GhostElement(_Element):
    """Element of the Clifford superalgebra on psi_1..psi_g, psi*_1..psi*_g."""

    __slots__ = ("g_dim",)

    def __init__(self, g_dim: int, terms: Mapping | None = None):
        self.g_dim = g_dim
        self.terms = _clean(terms or {})
        for S, T in self.terms:
            for idx in (S, T):
                if list(idx) != sorted(set(idx)) or any(not 1 <= i <= g_dim for i in idx):
                    raise ValueError(f"bad ghost monomial {(S, T)} for g_dim={g_dim}")

    def _shape(self):
        return self.g_dim

    def _same(self, other):
        if not isinstance(other, GhostElement):
            raise TypeError(f"cannot combine GhostElement with {type(other).__name__}")
        if other.g_dim != self.g_dim:
            raise DimensionMismatch(f"g_dim {self.g_dim} vs {other.g_dim}")

    def _new(self, terms):
        return GhostElement(self.g_dim, terms)

    def _scalar(self, c):
        return GhostElement.constant(self.g_dim, c)

    @staticmethod
    def _sort_key(key):
        S, T = key
        return (len(S) + len(T), S, T)

    @staticmethod
    def _factor_text(key):
        return " ".join(_ghost_text(*key))

    @classmethod
    def constant(cls, g_dim: int, c=1) -> "GhostElement":
        return cls(g_dim, {((), ()): c})

    @classmethod
    def psi(cls, g_dim: int, i: int) -> "GhostElement":
        return cls(g_dim, {((i,), ()): 1})

    @classmethod
    def psi_star(cls, g_dim: int, i: int) -> "GhostElement":
        return cls(g_dim, {((), (i,)): 1})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return ghost_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def parity(self):
        ps = {(len(S) + len(T)) % 2 for S, T in self.terms}
        return ps.pop() if len(ps) == 1 else (0 if not ps else None)

    def degree(self):
        ds = {len(T) - len(S) for S, T in self.terms}
        return ds.pop() if len(ds) == 1 else (0 if not ds else None)


def ghost_mul(a: GhostElement, b: GhostElement) -> GhostElement:
    a._same(b)
    acc: dict = {}
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            for key, s in ghost_monomial_product(ka, kb):
                _add_into(acc, key, ca * cb * s)
    return GhostElement(a.g_dim, acc)


def super_commutator(a, b):
    """[a, b] = ab - (-1)^{|a||b|} ba for parity-homogeneous a, b."""
    pa, pb = a.parity(), b.parity()
    if pa is None or pb is None:
        raise ValueError("super-commutator needs parity-homogeneous arguments")
    sign = -1 if (pa * pb) % 2 else 1
    return a * b - (b * a).scale(sign)


# ------------------------------------------------------------- C(R)


class BRSTElement(_Element):
    """Element of (Weyl algebra) tensor (Clifford ghosts); keys (alpha, beta, S, T)."""

    __slots__ = ("n_vars", "g_dim")

    def __init__(self, n_vars: int, g_dim: int, terms: Mapping | None = None):
        self.n_vars = n_vars
        self.g_dim = g_dim
        self.terms = _clean(terms or {})

    def _shape(self):
        return (self.n_vars, self.g_dim)

    def _same(self, other):
        if not isinstance(other, BRSTElement):
            raise TypeError(f"cannot combine BRSTElement with {type(other).__name__}")
        if other.n_vars != self.n_vars or other.g_dim != self.g_dim:
            raise DimensionMismatch(f"{self._shape()} vs {other._shape()}")

    def _new(self, terms):
        return BRSTElement(self.n_vars, self.g_dim, terms)

    def _scalar(self, c):
        z = (0,) * self.n_vars
        return BRSTElement(self.n_vars, self.g_dim, {(z, z, (), ()): c})

    @staticmethod
    def _sort_key(key):
        alpha, beta, S, T = key
        return (len(T) - len(S), S, T) + WeylElement._sort_key((alpha, beta))

    @staticmethod
    def _factor_text(key):
        alpha, beta, S, T = key
        return " ".join(_xd_text(alpha, beta) + _ghost_text(S, T))

    @classmethod
    def tensor(cls, w: WeylElement, g: GhostElement) -> "BRSTElement":
        terms = {}
        for (alpha, beta), c1 in w.terms.items():
            for (S, T), c2 in g.terms.items():
                terms[(alpha, beta, S, T)] = c1 * c2
        return cls(w.n_vars, g.g_dim, terms)

    @classmethod
    def unit(cls, n_vars: int, g_dim: int) -> "BRSTElement":
        z = (0,) * n_vars
        return cls(n_vars, g_dim, {(z, z, (), ()): 1})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return brst_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def parity(self):
        ps = {(len(k[2]) + len(k[3])) % 2 for k in self.terms}
        return ps.pop() if len(ps) == 1 else (0 if not ps else None)

    def ghost_degree(self):
        ds = {len(k[3]) - len(k[2]) for k in self.terms}
        return ds.pop() if len(ds) == 1 else (0 if not ds else None)

    def bidegree(self):
        bs = {ghost_bidegree(k[2], k[3]) for k in self.terms}
        return bs.pop() if len(bs) == 1 else (None if bs else (0, 0))

    def bernstein_degree(self):
        if not self.terms:
            return NegInfinity
        return max(sum(k[0]) + sum(k[1]) for k in self.terms)

    def ghost_components(self) -> dict[tuple, WeylElement]:
        """Split as sum over ghost monomials of (Weyl coefficient) tensor psi_S psi*_T."""
        parts: dict = {}
        for (alpha, beta, S, T), c in self.terms.items():
            parts.setdefault((S, T), {})[(alpha, beta)] = c
        return {k: WeylElement(self.n_vars, v) for k, v in parts.items()}

    def bidegree_part(self, bideg: tuple[int, int]) -> "BRSTElement":
        return self._new({k: v for k, v in self.terms.items() if ghost_bidegree(k[2], k[3]) == bideg})


def brst_mul(a: BRSTElement, b: BRSTElement) -> BRSTElement:
    # the Weyl factor is purely even, so no Koszul sign appears
    a._same(b)
    acc: dict = {}
    for (a1, b1, S1, T1), c1 in a.terms.items():
        for (a2, b2, S2, T2), c2 in b.terms.items():
            ghosts = ghost_monomial_product((S1, T1), (S2, T2))
            if not ghosts:
                continue
            for (alpha, beta), cw in weyl_monomial_product((a1, b1), (a2, b2)):
                base = c1 * c2 * cw
                for (S, T), s in ghosts:
                    _add_into(acc, (alpha, beta, S, T), base * s)
    return BRSTElement(a.n_vars, a.g_dim, acc)


# ------------------------------------------------------------ parsing

_TOKEN = re.compile(r"\s*(?:(?P<op>[+-])|(?P<num>\d+(?:/\d+)?)|(?P<gen>ps\*\d+|ps\d+|x\d+|d\d+)(?:\^(?P<exp>\d+))?)")


def parse_element(text: str, n_vars: int, g_dim: int = 0) -> BRSTElement:
    """Parse the canonical rendering, e.g. ``3/2 x1^2 d2 ps*1 - x1``.

    Factors inside a term are multiplied in the order written, so
    non-normal-ordered input is accepted and normalized.
    """
    pos = 0
    text = text.strip()
    if text == "0":
        return BRSTElement(n_vars, g_dim)
    total = BRSTElement(n_vars, g_dim)
    sign = 1
    coeff = Fraction(1)
    factors: list[BRSTElement] = []
    started = False

    def flush():
        nonlocal total, coeff, factors, sign, started
        if not started:
            return
        term = BRSTElement.unit(n_vars, g_dim).scale(sign * coeff)
        for f in factors:
            term = term * f
        total = total + term
        sign, coeff, factors, started = 1, Fraction(1), [], False

    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse {text!r} at column {pos + 1}")
        pos = m.end()
        if m.group("op"):
            flush()
            sign = -1 if m.group("op") == "-" else 1
            started = True
        elif m.group("num"):
            coeff *= to_fraction(m.group("num"))
            started = True
        else:
            gen = m.group("gen")
            power = int(m.group("exp") or 1)
            factors.extend([_generator(gen, n_vars, g_dim)] * power)
            started = True
    flush()
    return total


def _generator(token: str, n_vars: int, g_dim: int) -> BRSTElement:
    if token.startswith("ps*"):
        i = int(token[3:])
        if not 1 <= i <= g_dim:
            raise ValueError(f"ghost index {i} out of range")
        return BRSTElement.tensor(WeylElement.constant(n_vars), GhostElement.psi_star(g_dim, i))
    if token.startswith("ps"):
        i = int(token[2:])
        if not 1 <= i <= g_dim:
            raise ValueError(f"ghost index {i} out of range")
        return BRSTElement.tensor(WeylElement.constant(n_vars), GhostElement.psi(g_dim, i))
    i = int(token[1:])
    if not 1 <= i <= n_vars:
        raise ValueError(f"variable index {i} out of range")
    w = WeylElement.x(n_vars, i - 1) if token[0] == "x" else WeylElement.d(n_vars, i - 1)
    return BRSTElement.tensor(w, GhostElement.constant(g_dim))


def parse_weyl(text: str, n_vars: int) -> WeylElement:
    el = parse_element(text, n_vars, 0)
    return WeylElement(n_vars, {(k[0], k[1]): v for k, v in el.terms.items()})


def parse_ghost(text: str, g_dim: int) -> GhostElement:
    el = parse_element(text, 0, g_dim)
    return GhostElement(g_dim, {(k[2], k[3]): v for k, v in el.terms.items()})


# ------------------------------------------------------------ bases


@lru_cache(maxsize=64)
def _exponents_up_to(n: int, N: int) -> tuple[tuple[int, ...], ...]:
    """All exponent vectors of length n with total degree <= N, by degree then lex."""
    out = []
    for deg in range(N + 1):
        level = []
        _exact_degree(n, deg, [], level)
        out.extend(sorted(level))
    return tuple(out)


def _exact_degree(slots, remaining, prefix, out):
    if slots == 0:
        if remaining == 0:
            out.append(tuple(prefix))
        return
    if slots == 1:
        out.append(tuple(prefix) + (remaining,))
        return
    for e in range(remaining + 1):
        prefix.append(e)
        _exact_degree(slots - 1, remaining - e, prefix, out)
        prefix.pop()


@lru_cache(maxsize=256)
def weyl_monomials_by_weight(n_vars: int, weights: tuple, N: int) -> dict:
    """Weyl monomials of degree <= N grouped by torus weight."""
    groups: dict = {}
    for vec in _exponents_up_to(2 * n_vars, N):
        alpha, beta = vec[:n_vars], vec[n_vars:]
        w = monomial_weight(alpha, beta, weights)
        groups.setdefault(w, []).append((alpha, beta))
    return groups


def ghost_monomials(g_dim: int, n: int) -> list[tuple]:
    """psi_S psi*_T with |T| - |S| = n."""
    idx = range(1, g_dim + 1)
    out = []
    for s in range(g_dim + 1):
        t = n + s
        if 0 <= t <= g_dim:
            for S in combinations(idx, s):
                for T in combinations(idx, t):
                    out.append((S, T))
    return out


def enumerate_basis(
    n_vars: int,
    g_dim: int,
    n: int,
    weight: Sequence[int],
    weights: Sequence[Sequence[int]],
    N: int,
    ghost_weights: Sequence[Sequence[int]] | None = None,
) -> list[tuple]:
    """Basis monomials (alpha, beta, S, T) of C^n of Bernstein degree <= N and torus weight ``weight``.

    ``ghost_weights[i]`` is the weight of psi_{i+1}; psi*_{i+1} carries its
    negative.  Omitted means all ghosts have weight zero (torus case).
    """
    if N < 0:
        return []
    wkey = tuple(tuple(w) for w in weights)
    groups = weyl_monomials_by_weight(n_vars, wkey, N)
    target = tuple(weight)
    out = []
    for S, T in ghost_monomials(g_dim, n):
        need = target
        if ghost_weights is not None:
            shift = [0] * len(target)
            for i in S:
                shift = [a + b for a, b in zip(shift, ghost_weights[i - 1])]
            for i in T:
                shift = [a - b for a, b in zip(shift, ghost_weights[i - 1])]
            need = tuple(a - b for a, b in zip(target, shift))
        out.extend((a, b, S, T) for (a, b) in groups.get(need, []))
    out.sort(key=lambda k: (sum(k[0]) + sum(k[1]), k[0], k[1], k[2], k[3]))
    return out

