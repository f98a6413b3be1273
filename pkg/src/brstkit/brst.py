"""BRST element, its differentials and truncated cohomology.

Truncation convention: cochains of Bernstein degree <= N.  The
differential maps the <= k part into the <= k+2 part; the cohomology cell
at bound k inside a run at level N is

    dim ker(d on C_{<=k}) - dim(d(C_{<=N-2}) meet C_{<=k}).

A cell is flagged stable when the same number comes out at level N-2.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Callable, Sequence

from .algebra import (
    BRSTElement,
    GhostElement,
    WeylElement,
    _add_into,
    _exact_degree,
    enumerate_basis,
    ghost_monomial_product,
    super_commutator,
    torus_weight,
    Mixed,
    weyl_monomial_product,
    weyl_monomials_by_weight,
)
from .exact import Echelon, SparseMatrix, expand_rational_series, one_minus_t_power, poly_mul, rank
from .models import ReductionSetup

# Coefficient of the cubic ghost term of Q_c.  With a moment map that is a
# Lie homomorphism, -1/2 is the value for which Q_c squares to zero.
CUBIC_COEFF = Fraction(-1, 2)


class NotBihomogeneous(ValueError):
    pass


class NonabelianInvariants(ValueError):
    pass


# ------------------------------------------------------------ context


class _Context:
    """Per-setup caches for Q_c and the ghost pieces of the differentials."""

    def __init__(self, setup: ReductionSetup):
        self.setup = setup
        self.n = setup.n_vars
        self.g = setup.g_dim
        self.moments = list(setup.quantized_moments)
        self.shifted = setup.shifted_moments()
        self.cubic = _cubic_ghost(setup)
        self._bg_psi: dict = {}
        self._bg_psistar: dict = {}
        self._comm: dict = {}
        self._left: dict = {}
        self.Qc = _assemble_Qc(setup, self.cubic)

    def commutator_with_moment(self, i: int, mono) -> dict:
        key = (i, mono)
        out = self._comm.get(key)
        if out is None:
            out = {}
            for km, cm in self.moments[i].terms.items():
                for k, c in weyl_monomial_product(km, mono):
                    _add_into(out, k, cm * c)
                for k, c in weyl_monomial_product(mono, km):
                    _add_into(out, k, -cm * c)
            self._comm[key] = out
        return out

    def left_shifted(self, i: int, mono) -> dict:
        key = (i, mono)
        out = self._left.get(key)
        if out is None:
            out = {}
            for km, cm in self.shifted[i].terms.items():
                for k, c in weyl_monomial_product(km, mono):
                    _add_into(out, k, cm * c)
            self._left[key] = out
        return out

    def cubic_on_psi(self, S: tuple) -> tuple[dict, dict]:
        """[cubic, psi_S] split into its (.,+1) part J and its (+1,.) part K."""
        hit = self._bg_psi.get(S)
        if hit is None:
            el = GhostElement(self.g, {(S, ()): 1})
            br = super_commutator(self.cubic, el) if self.cubic else GhostElement(self.g)
            J, K = {}, {}
            for (S2, T2), c in br.terms.items():
                if len(T2) == 1 and len(S2) == len(S):
                    J[(S2, T2)] = c
                elif not T2 and len(S2) == len(S) - 1:
                    K[(S2, T2)] = c
                else:  # pragma: no cover - excluded by the bidegree count
                    raise AssertionError(f"unexpected bidegree in [B, psi_{S}]")
            hit = (J, K)
            self._bg_psi[S] = hit
        return hit

    def cubic_on_psistar(self, T: tuple) -> dict:
        hit = self._bg_psistar.get(T)
        if hit is None:
            el = GhostElement(self.g, {((), T): 1})
            br = super_commutator(self.cubic, el) if self.cubic else GhostElement(self.g)
            hit = dict(br.terms)
            self._bg_psistar[T] = hit
        return hit


_CONTEXTS: "weakref.WeakKeyDictionary[ReductionSetup, _Context]" = weakref.WeakKeyDictionary()


def _ctx(setup: ReductionSetup) -> _Context:
    ctx = _CONTEXTS.get(setup)
    if ctx is None:
        ctx = _Context(setup)
        _CONTEXTS[setup] = ctx
    return ctx


def _cubic_ghost(setup: ReductionSetup) -> GhostElement:
    g = setup.g_dim
    acc = GhostElement(g)
    for (i, j, k), chi in setup.lie.structure_constants.items():
        term = GhostElement.psi(g, k + 1) * GhostElement.psi_star(g, i + 1) * GhostElement.psi_star(g, j + 1)
        acc = acc + term.scale(CUBIC_COEFF * chi)
    return acc


def _assemble_Qc(setup: ReductionSetup, cubic: GhostElement) -> BRSTElement:
    n, g = setup.n_vars, setup.g_dim
    Q = BRSTElement(n, g)
    for i, m in enumerate(setup.shifted_moments()):
        Q = Q + BRSTElement.tensor(m, GhostElement.psi_star(g, i + 1))
    return Q + BRSTElement.tensor(WeylElement.constant(n), cubic)


def build_Qc(setup: ReductionSetup) -> BRSTElement:
    """sum_i (mu(A_i) + c(A_i)) psi*_i  -  1/2 sum chi^k_ij psi_k psi*_i psi*_j."""
    return _ctx(setup).Qc


# --------------------------------------------------------- operators


def _parity_split(a: BRSTElement) -> list[tuple[int, BRSTElement]]:
    even, odd = {}, {}
    for k, v in a.terms.items():
        (odd if (len(k[2]) + len(k[3])) % 2 else even)[k] = v
    out = []
    if even:
        out.append((0, BRSTElement(a.n_vars, a.g_dim, even)))
    if odd:
        out.append((1, BRSTElement(a.n_vars, a.g_dim, odd)))
    return out


def apply_ad_Qc(setup: ReductionSetup, a: BRSTElement) -> BRSTElement:
    """[Q_c, a] = Q_c a - (-1)^{|a|} a Q_c, extended linearly over parity components."""
    Q = _ctx(setup).Qc
    out = BRSTElement(a.n_vars, a.g_dim)
    for parity, part in _parity_split(a):
        left = Q * part
        right = part * Q
        out = out + (left + right if parity else left - right)
    return out


def _check_bihomogeneous(a: BRSTElement) -> None:
    if a.terms and a.bidegree() is None:
        raise NotBihomogeneous("d+ and d- need an element of a single ghost bidegree")


def _d_plus_terms(ctx: _Context, alpha, beta, S, T, coeff, acc: dict) -> None:
    mono = (alpha, beta)
    sign = -1 if len(S) % 2 else 1
    for i in range(ctx.g):
        comm = ctx.commutator_with_moment(i, mono)
        if not comm:
            continue
        for (S2, T2), s in ghost_monomial_product((S, (i + 1,)), ((), T)):
            f = coeff * sign * s
            for (a2, b2), c in comm.items():
                _add_into(acc, (a2, b2, S2, T2), f * c)
    if ctx.cubic:
        J, _ = ctx.cubic_on_psi(S)
        for key, c in J.items():
            for (S2, T2), s in ghost_monomial_product(key, ((), T)):
                _add_into(acc, (alpha, beta, S2, T2), coeff * c * s)
        for key, c in ctx.cubic_on_psistar(T).items():
            for (S2, T2), s in ghost_monomial_product((S, ()), key):
                _add_into(acc, (alpha, beta, S2, T2), coeff * sign * c * s)


def _d_minus_terms(ctx: _Context, alpha, beta, S, T, coeff, acc: dict) -> None:
    mono = (alpha, beta)
    for pos, i in enumerate(S):
        # [psi*_i, psi_S] removes psi_i with sign (-1)^pos
        S2 = S[:pos] + S[pos + 1:]
        f = -coeff if pos % 2 else coeff
        for (a2, b2), c in ctx.left_shifted(i - 1, mono).items():
            _add_into(acc, (a2, b2, S2, T), f * c)
    if ctx.cubic:
        _, K = ctx.cubic_on_psi(S)
        for key, c in K.items():
            for (S2, T2), s in ghost_monomial_product(key, ((), T)):
                _add_into(acc, (alpha, beta, S2, T2), coeff * c * s)


def apply_d_plus(setup: ReductionSetup, a: BRSTElement) -> BRSTElement:
    """Bidegree (0, +1) part: Lie algebra cohomology direction."""
    _check_bihomogeneous(a)
    ctx = _ctx(setup)
    acc: dict = {}
    for (alpha, beta, S, T), c in a.terms.items():
        _d_plus_terms(ctx, alpha, beta, S, T, c, acc)
    return BRSTElement(a.n_vars, a.g_dim, acc)


def apply_d_minus(setup: ReductionSetup, a: BRSTElement) -> BRSTElement:
    """Bidegree (+1, 0) part: Koszul direction, left multiplication by mu + c."""
    _check_bihomogeneous(a)
    ctx = _ctx(setup)
    acc: dict = {}
    for (alpha, beta, S, T), c in a.terms.items():
        _d_minus_terms(ctx, alpha, beta, S, T, c, acc)
    return BRSTElement(a.n_vars, a.g_dim, acc)


def _total_on_monomial(ctx: _Context, key) -> dict:
    acc: dict = {}
    alpha, beta, S, T = key
    _d_plus_terms(ctx, alpha, beta, S, T, Fraction(1), acc)
    _d_minus_terms(ctx, alpha, beta, S, T, Fraction(1), acc)
    return acc


def _d_minus_on_monomial(ctx: _Context, key) -> dict:
    acc: dict = {}
    alpha, beta, S, T = key
    _d_minus_terms(ctx, alpha, beta, S, T, Fraction(1), acc)
    return acc


# ------------------------------------------------------- truncation


@dataclass(frozen=True, eq=False)
class TruncationSpec:
    setup: ReductionSetup
    weight: tuple
    degree_bound: int

    def __post_init__(self):
        if self.degree_bound < 0 or self.degree_bound % 2:
            raise ValueError("degree bound must be even and nonnegative")
        object.__setattr__(self, "weight", tuple(int(x) for x in self.weight))
        if len(self.weight) != self.setup.weight_rank:
            raise ValueError(f"weight needs {self.setup.weight_rank} entries")
        gw = None if self.setup.is_torus else self.setup.ghost_weights
        object.__setattr__(self, "_ghost_weights", gw)

    @property
    def ghost_range(self) -> range:
        g = self.setup.g_dim
        return range(-g, g + 1)

    def basis(self, n: int, bound: int | None = None) -> list[tuple]:
        s = self.setup
        N = self.degree_bound if bound is None else bound
        return enumerate_basis(s.n_vars, s.g_dim, n, self.weight, s.variable_weights, N, self._ghost_weights)


def assemble_differential(spec: TruncationSpec, n: int, route: str = "split") -> SparseMatrix:
    """Matrix of ad Q_c from C^n_{<=N} to C^{n+1}_{<=N+2} in enumerate_basis order.

    ``route="split"`` evaluates d+ + d- termwise; ``route="adjoint"``
    multiplies out the super-commutator with Q_c.
    """
    ctx = _ctx(spec.setup)
    domain = spec.basis(n)
    codomain = spec.basis(n + 1, spec.degree_bound + 2)
    index = {k: i for i, k in enumerate(codomain)}
    cols = []
    for key in domain:
        if route == "split":
            img = _total_on_monomial(ctx, key)
        elif route == "adjoint":
            el = BRSTElement(ctx.n, ctx.g, {key: 1})
            img = apply_ad_Qc(spec.setup, el).terms
        else:
            raise ValueError(f"unknown route {route!r}")
        cols.append({index[k]: v for k, v in img.items()})
    return SparseMatrix.from_columns(len(codomain), cols)


@dataclass(frozen=True)
class Cell:
    weight: tuple
    ghost_degree: int
    bound: int
    kernel_dim: int
    image_dim: int
    dim: int
    stable: bool

    def as_dict(self) -> dict:
        return {
            "weight": list(self.weight),
            "ghost_degree": self.ghost_degree,
            "bound": self.bound,
            "kernel_dim": self.kernel_dim,
            "image_dim": self.image_dim,
            "dim": self.dim,
            "stable": self.stable,
        }


@dataclass
class CohomologyReport:
    weight: tuple
    degree_bound: int
    cells: list = field(default_factory=list)

    def cell(self, n: int, k: int | None = None) -> Cell:
        k = self.degree_bound if k is None else k
        for c in self.cells:
            if c.ghost_degree == n and c.bound == k:
                return c
        raise KeyError((n, k))

    def dim(self, n: int, k: int | None = None) -> int:
        """Cohomology dimension at (n, k); ghost degrees outside the complex give 0."""
        try:
            return self.cell(n, k).dim
        except KeyError:
            return 0

    def dims(self, k: int | None = None) -> dict[int, int]:
        k = self.degree_bound if k is None else k
        return {c.ghost_degree: c.dim for c in self.cells if c.bound == k}

    def stable_cells(self) -> list[Cell]:
        return [c for c in self.cells if c.stable]


def _degree_of(key) -> int:
    return sum(key[0]) + sum(key[1])


def _last_index_by_degree(basis: Sequence, N: int) -> list[int]:
    """last[k] = index of the last basis element of degree <= k (-1 if none)."""
    last = [-1] * (N + 1)
    pos = -1
    j = 0
    for k in range(N + 1):
        while j < len(basis) and _degree_of(basis[j]) <= k:
            pos = j
            j += 1
        last[k] = pos
    return last


def _filtered_cohomology(
    weight: tuple,
    degrees: Sequence[int],
    basis_of: Callable[[int, int], list],
    image_of: Callable[[tuple], dict],
    N: int,
    step: int = 1,
) -> CohomologyReport:
    """Cells for the complex deg -> deg + step, truncated by Bernstein degree."""
    report = CohomologyReport(tuple(weight), N)
    for n in degrees:
        here = basis_of(n, N)
        nxt = basis_of(n + step, N + 2)
        nxt_index = {k: i for i, k in enumerate(nxt)}
        # kernel of d on C^n_{<=k}, k = 0..N
        ker = [0] * (N + 1)
        ech = Echelon()
        last_here = _last_index_by_degree(here, N)
        j = 0
        for k in range(N + 1):
            while j <= last_here[k]:
                img = image_of(here[j])
                if img:
                    ech.insert({nxt_index[key]: v for key, v in img.items()})
                j += 1
            ker[k] = (last_here[k] + 1) - ech.rank
        # boundaries from C^{n-step}_{<=N-2} and _{<=N-4}, cut down to C^n_{<=k}
        prev = basis_of(n - step, N - 2) if N >= 2 else []
        here_index = {key: i for i, key in enumerate(here)}
        bech = Echelon()
        snap_lo = None
        for key in prev:
            if snap_lo is None and _degree_of(key) > N - 4:
                snap_lo = [bech.count_leading_at_most(last_here[k]) for k in range(N + 1)]
            img = image_of(key)
            if img:
                bech.insert({here_index[k2]: v for k2, v in img.items()})
        if snap_lo is None:
            snap_lo = [bech.count_leading_at_most(last_here[k]) for k in range(N + 1)]
        im = [bech.count_leading_at_most(last_here[k]) for k in range(N + 1)]
        for k in range(N + 1):
            dim = ker[k] - im[k]
            stable = k <= N - 2 and N >= 2 and dim == ker[k] - snap_lo[k]
            report.cells.append(Cell(tuple(weight), n, k, ker[k], im[k], dim, stable))
    return report


def brst_cohomology(spec: TruncationSpec) -> CohomologyReport:
    ctx = _ctx(spec.setup)
    g = ctx.g
    return _filtered_cohomology(
        spec.weight,
        list(range(-g, g + 1)),
        lambda n, bound: spec.basis(n, bound) if -g <= n <= g and bound >= 0 else [],
        lambda key: _total_on_monomial(ctx, key),
        spec.degree_bound,
    )


def column_cohomology(spec: TruncationSpec, j: int) -> CohomologyReport:
    """Cohomology of d- on the column C^{., j}; ghost_degree in the report is m = -|S|."""
    setup = spec.setup
    ctx = _ctx(setup)
    g = ctx.g

    def basis_of(m: int, bound: int) -> list:
        if not (-g <= m <= 0) or bound < 0:
            return []
        return [k for k in spec.basis(j + m, bound) if len(k[3]) == j]

    return _filtered_cohomology(
        spec.weight,
        list(range(-g, 1)),
        basis_of,
        lambda key: _d_minus_on_monomial(ctx, key),
        spec.degree_bound,
    )


# ------------------------------------------------------------ oracles


@dataclass
class OracleTable:
    weight: tuple
    degree_bound: int
    dims: list  # dims[k] for k = 0..N
    stable: list

    @property
    def dim(self) -> int:
        return self.dims[self.degree_bound]


def lc_oracle(setup: ReductionSetup, weight, N: int, side: str = "left") -> OracleTable:
    """Dimension of the weight sector of D(V)_{<=N} modulo the ideal generated by mu(A_i) + c(A_i).

    ``side="left"`` uses products a*(mu+c) (the left ideal); ``"right"``
    uses (mu+c)*a.  Multipliers have degree <= N-2.
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    weight = tuple(int(x) for x in weight)
    wkey = tuple(tuple(w) for w in setup.variable_weights)
    groups = weyl_monomials_by_weight(setup.n_vars, wkey, N)
    space = groups.get(weight, [])
    index = {k: i for i, k in enumerate(space)}
    last = _last_index_by_degree(space, N)
    gens = []
    for i, m in enumerate(setup.shifted_moments()):
        w = torus_weight(setup.quantized_moments[i], setup.variable_weights)
        if w is Mixed:
            raise ValueError(f"moment {i} is not weight-homogeneous")
        gens.append((tuple(w), m))
    ech = Echelon()
    snap_lo = None
    pairs = []
    for wm, m in gens:
        need = tuple(a - b for a, b in zip(weight, wm))
        if N < 2:
            continue
        for mono in weyl_monomials_by_weight(setup.n_vars, wkey, N - 2).get(need, []):
            pairs.append((_degree_of(mono), mono, m))
    pairs.sort(key=lambda t: t[0])
    for deg, mono, m in pairs:
        if snap_lo is None and deg > N - 4:
            snap_lo = [ech.count_leading_at_most(last[k]) for k in range(N + 1)]
        a = WeylElement(setup.n_vars, {mono: 1})
        prod = a * m if side == "left" else m * a
        ech.insert({index[k]: v for k, v in prod.terms.items()})
    if snap_lo is None:
        snap_lo = [ech.count_leading_at_most(last[k]) for k in range(N + 1)]
    dims, stable = [], []
    for k in range(N + 1):
        total = last[k] + 1
        d = total - ech.count_leading_at_most(last[k])
        dims.append(d)
        stable.append(k <= N - 2 and d == total - snap_lo[k])
    return OracleTable(weight, N, dims, stable)


def lc_invariants_oracle(setup: ReductionSetup, N: int) -> OracleTable:
    if not setup.is_torus:
        raise NonabelianInvariants("invariants are only computed for torus groups")
    return lc_oracle(setup, (0,) * setup.weight_rank, N)


def _wedge_matrix(weight: Sequence[int], g: int, n: int) -> SparseMatrix:
    """omega -> (sum_i weight_i psi*_i) omega from Lambda^n to Lambda^{n+1}."""
    src = list(combinations(range(1, g + 1), n))
    dst = {T: i for i, T in enumerate(combinations(range(1, g + 1), n + 1))}
    cols = []
    for T in src:
        col: dict = {}
        for i, w in enumerate(weight, start=1):
            if w and i not in T:
                for (_, T2), s in ghost_monomial_product(((), (i,)), ((), T)):
                    _add_into(col, dst[T2], Fraction(w * s))
        cols.append(col)
    return SparseMatrix.from_columns(len(dst), cols)


def lie_cohomology_of_weight(weight: Sequence[int], g: int) -> list[int]:
    """dim H^n of Lambda(g*) under wedge with the weight covector, n = 0..g."""
    ranks = [rank(_wedge_matrix(weight, g, n)) if n < g else 0 for n in range(g + 1)]
    return [comb(g, n) - ranks[n] - (ranks[n - 1] if n else 0) for n in range(g + 1)]


def dplus_on_Lc_cohomology(setup: ReductionSetup, weight, N: int) -> dict:
    """Cohomology of d+ on (L_c sector) tensor Lambda(g*) for a torus; {n: [dim at bound k]}."""
    if not setup.is_torus:
        raise NonabelianInvariants("d+ on L_c is only computed for torus groups")
    lc = lc_oracle(setup, weight, N)
    h = lie_cohomology_of_weight(weight, setup.g_dim)
    return {n: [h[n] * d for d in lc.dims] for n in range(setup.g_dim + 1)}


# ---------------------------------------------------------- flatness


@dataclass
class FlatnessCertificate:
    ok: bool
    first_failing_degree: int | None
    hilbert: list
    expected: list
    generator_degrees: list
    expected_dimension: int
    dimension_target: int | None = None


def _monomials_of_degree(nvars: int, k: int) -> list[tuple]:
    out: list = []
    _exact_degree(nvars, k, [], out)
    return sorted(out)


def quotient_hilbert_function(n_coords: int, generators: Sequence[dict], N: int) -> list[int]:
    """Hilbert function of k[y_1..y_m]/(generators) through degree N; generators homogeneous."""
    out = []
    gens = []
    for gdict in generators:
        degs = {sum(e) for e in gdict}
        if len(degs) != 1:
            raise ValueError("generators must be homogeneous")
        gens.append((degs.pop(), gdict))
    for k in range(N + 1):
        monos = _monomials_of_degree(n_coords, k)
        index = {m: i for i, m in enumerate(monos)}
        ech = Echelon()
        for dg, gdict in gens:
            if dg > k:
                continue
            for m in _monomials_of_degree(n_coords, k - dg):
                row: dict = {}
                for e, c in gdict.items():
                    _add_into(row, index[tuple(a + b for a, b in zip(m, e))], c)
                if row:
                    ech.insert(row)
        out.append(len(monos) - ech.rank)
    return out


def koszul_flatness_certificate(setup: ReductionSetup, N: int, generators=None) -> FlatnessCertificate:
    """Compare the quotient Hilbert function with the complete-intersection series.

    ``generators`` defaults to the classical moments; any list of
    homogeneous PolyElements may be passed (used for negative controls).
    """
    gens = list(setup.classical_moments if generators is None else generators)
    flat = [g.flat_terms() for g in gens]
    degs = [sum(next(iter(f))) for f in flat]
    m = 2 * setup.n_vars
    hilbert = quotient_hilbert_function(m, flat, N)
    numerator = [1]
    
    for d in degs:
        numerator = poly_mul(numerator, one_minus_t_power(d, 1))
    expected = expand_rational_series(numerator, [(1, m)], N).as_list()
    first = next((k for k in range(N + 1) if hilbert[k] != expected[k]), None)
    target = setup.metadata.get("flatness_dimension_target")
    return FlatnessCertificate(
        ok=first is None,
        first_failing_degree=first,
        hilbert=hilbert,
        expected=expected,
        generator_degrees=degs,
        expected_dimension=m - len(gens),
        dimension_target=target,
    )


def scan_weights(setup: ReductionSetup, N: int) -> list[tuple]:
    """Weight sectors with |lambda_i| <= N that contain a Weyl monomial of degree <= N."""
    wkey = tuple(tuple(w) for w in setup.variable_weights)
    groups = weyl_monomials_by_weight(setup.n_vars, wkey, N)
    return sorted(w for w in groups if all(abs(x) <= N for x in w))


def predicted_multiplicity(setup: ReductionSetup, n: int) -> int:
    return comb(setup.g_dim, n) if 0 <= n <= setup.g_dim else 0


# ------------------------------------------------ identities and dumps


def random_bihomogeneous(setup: ReductionSetup, rng, max_degree: int = 3, n_terms: int = 3) -> BRSTElement:
    """A random element of a single ghost bidegree with small integer coefficients."""
    n, g = setup.n_vars, setup.g_dim
    s_size = rng.randint(0, g)
    t_size = rng.randint(0, g)
    terms: dict = {}
    for _ in range(n_terms):
        exps = [0] * (2 * n)
        for _ in range(rng.randint(0, max_degree)):
            exps[rng.randrange(2 * n)] += 1
        S = tuple(sorted(rng.sample(range(1, g + 1), s_size)))
        T = tuple(sorted(rng.sample(range(1, g + 1), t_size)))
        _add_into(terms, (tuple(exps[:n]), tuple(exps[n:]), S, T), Fraction(rng.randint(-3, 3)))
    return BRSTElement(n, g, terms)


@dataclass(frozen=True)
class IdentityReport:
    name: str
    ok: bool
    samples: int
    witness: object = None


def check_exact_identities(setup: ReductionSetup, samples: int = 50, seed: int = 0) -> list[IdentityReport]:
    """(ad Q)^2 = 0, d+^2 = d-^2 = d+d- + d-d+ = 0 and ad Q = d+ + d- on random elements."""
    import random

    rng = random.Random(seed)
    names = ["ad_Q_squared", "d_plus_squared", "d_minus_squared", "d_anticommute", "ad_Q_split"]
    failures: dict = {}
    Q = build_Qc(setup)
    if (Q * Q).terms:
        failures["ad_Q_squared"] = "Q_c^2"
    for idx in range(samples):
        a = random_bihomogeneous(setup, rng)
        dp, dm = apply_d_plus(setup, a), apply_d_minus(setup, a)
        ad = apply_ad_Qc(setup, a)
        found = {
            "ad_Q_squared": bool(apply_ad_Qc(setup, ad).terms),
            "d_plus_squared": bool(dp.terms and apply_d_plus(setup, dp).terms),
            "d_minus_squared": bool(dm.terms and apply_d_minus(setup, dm).terms),
            "d_anticommute": bool(
                ((apply_d_minus(setup, dp) if dp.terms else BRSTElement(a.n_vars, a.g_dim))
                 + (apply_d_plus(setup, dm) if dm.terms else BRSTElement(a.n_vars, a.g_dim))).terms
            ),
            "ad_Q_split": ad != dp + dm,
        }
        for k, bad in found.items():
            if bad and k not in failures:
                failures[k] = a.render()
    return [IdentityReport(k, k not in failures, samples, failures.get(k)) for k in names]


def dump_differential(spec: TruncationSpec, n: int, path) -> SparseMatrix:
    """Write the assembled matrix in the sparse triplet format and return it."""
    m = assemble_differential(spec, n)
    with open(path, "w") as fh:
        fh.write(m.dump_triplets())
    return m
