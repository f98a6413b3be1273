"""Quiver and hypertoric reduction setups with their moment maps."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from .algebra import Mixed, WeylElement, principal_symbol, torus_weight
from .exact import determinant, kernel_basis, rref, to_fraction
from .liealg import Character, LieData, gl_sum_lie, torus_lie, trace_character, validate_character


class NotAffine(ValueError):
    pass


class StabilityViolation(ValueError):
    pass


class ZeroDimensionVector(ValueError):
    pass


class NotUnimodular(ValueError):
    pass


class RankDeficient(ValueError):
    pass


class QuiverError(ValueError):
    pass


@dataclass(frozen=True)
class Quiver:
    vertices: tuple
    arrows: tuple  # ((arrow id, out vertex, in vertex), ...)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        arrows = []
        for n, a in enumerate(self.arrows):
            if len(a) == 2:
                a = (n, a[0], a[1])
            aid, out, inn = a
            if out == inn:
                raise QuiverError(f"arrow {aid} is a loop at vertex {out}")
            if out not in self.vertices or inn not in self.vertices:
                raise QuiverError(f"arrow {aid} uses an unknown vertex")
            arrows.append((aid, out, inn))
        object.__setattr__(self, "arrows", tuple(arrows))

    def index(self, v) -> int:
        return self.vertices.index(v)

    def symmetrized_form(self) -> list[list[int]]:
        """Matrix of (a, b) = q(a + b) - q(a) - q(b): 2 on the diagonal, minus edge counts off it."""
        n = len(self.vertices)
        m = [[0] * n for _ in range(n)]
        for i in range(n):
            m[i][i] = 2
        for _, out, inn in self.arrows:
            i, j = self.index(out), self.index(inn)
            m[i][j] -= 1
            m[j][i] -= 1
        return m

    def is_connected_on(self, support: Sequence) -> bool:
        support = set(support)
        if not support:
            return False
        start = next(iter(support))
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for _, out, inn in self.arrows:
                for a, b in ((out, inn), (inn, out)):
                    if a == v and b in support and b not in seen:
                        seen.add(b)
                        stack.append(b)
        return seen == support


def _vec(Q: Quiver, v) -> list[int]:
    if isinstance(v, dict):
        return [int(v.get(x, 0)) for x in Q.vertices]
    v = list(v)
    if len(v) != len(Q.vertices):
        raise ValueError(f"vector has {len(v)} entries, quiver has {len(Q.vertices)} vertices")
    return v


def p_of_v(Q: Quiver, v) -> int:
    vv = _vec(Q, v)
    total = 1 - sum(x * x for x in vv)
    for _, out, inn in Q.arrows:
        total += vv[Q.index(out)] * vv[Q.index(inn)]
    return total


def tits_form(Q: Quiver, v) -> int:
    return 1 - p_of_v(Q, v)


def enumerate_bounded_roots(Q: Quiver, bound) -> list[tuple[int, ...]]:
    """Nonzero vectors with 0 <= a_i <= bound_i, connected support and q <= 1, plus negatives."""
    n = len(Q.vertices)
    bounds = [bound] * n if isinstance(bound, int) else _vec(Q, bound)
    positive = []
    for vec in product(*(range(b + 1) for b in bounds)):
        if not any(vec):
            continue
        support = [Q.vertices[i] for i, x in enumerate(vec) if x]
        if not Q.is_connected_on(support):
            continue
        if tits_form(Q, vec) <= 1:
            positive.append(tuple(vec))
    positive.sort(key=lambda r: (sum(r), r))
    return positive + [tuple(-x for x in r) for r in positive]


def minimal_imaginary_root(Q: Quiver) -> tuple[int, ...]:
    form = Q.symmetrized_form()
    basis = kernel_basis(form, len(Q.vertices))
    if len(basis) != 1:
        raise NotAffine(f"radical of the symmetrized form has dimension {len(basis)}")
    v = basis[0]
    den = 1
    for x in v:
        den = den * x.denominator // _gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = _gcd(g, abs(x))
    ints = [x // g for x in ints]
    if all(x <= 0 for x in ints):
        ints = [-x for x in ints]
    if not all(x > 0 for x in ints):
        raise NotAffine("radical generator is not positive")
    if not Q.is_connected_on(Q.vertices):
        raise NotAffine("underlying graph is disconnected")
    return tuple(ints)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _dot(a, b) -> Fraction:
    return sum((to_fraction(x) * y for x, y in zip(a, b)), Fraction(0))


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    witness: object = None
    detail: str = ""

    def __bool__(self):
        return self.ok


def check_stability_preprojective(Q: Quiver, delta, theta) -> CheckResult:
    theta = [to_fraction(t) for t in _vec(Q, theta)]
    delta = tuple(_vec(Q, delta))
    if _dot(theta, delta) != 0:
        return CheckResult(False, delta, "theta . delta != 0")
    for root in enumerate_bounded_roots(Q, 1):
        if root == delta or tuple(-x for x in root) == delta:
            continue
        if _dot(theta, root) == 0:
            return CheckResult(False, root, "theta vanishes on a root")
    return CheckResult(True)


def check_stability_cm(Q: Quiver, n: int, theta) -> CheckResult:
    theta = [to_fraction(t) for t in _vec(Q, theta)]
    for root in enumerate_bounded_roots(Q, n):
        if _dot(theta, root) == 0:
            return CheckResult(False, root, "theta vanishes on a root")
    return CheckResult(True)


def flatness_dimension_target(Q: Quiver, v) -> int:
    vv = _vec(Q, v)
    return sum(x * x for x in vv) - 1 + 2 * p_of_v(Q, vv)


# ------------------------------------------------------------ presets


def affine_quiver(kind: str) -> Quiver:
    """Affine ADE diagram with vertex 0 extended; arrows point from lower to higher id."""
    t, rank = kind[0].upper(), int(kind[1:])
    if t == "A":
        if rank < 1:
            raise ValueError("affine A needs rank >= 1")
        if rank == 1:
            edges = [(0, 1), (0, 1)]
        else:
            edges = [(i, i + 1) for i in range(rank)] + [(0, rank)]
    elif t == "D":
        if rank < 4:
            raise ValueError("affine D needs rank >= 4")
        edges = [(0, 2), (1, 2)] + [(i, i + 1) for i in range(2, rank - 2)] + [(rank - 2, rank - 1), (rank - 2, rank)]
    elif t == "E":
        edges = {
            6: [(0, 1), (1, 2), (2, 3), (3, 4), (2, 5), (5, 6)],
            7: [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (3, 7)],
            8: [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (5, 8)],
        }.get(rank)
        if edges is None:
            raise ValueError(f"no affine E{rank}")
    else:
        raise ValueError(f"unknown diagram type {kind!r}")
    edges = sorted((min(a, b), max(a, b)) for a, b in edges)
    return Quiver(tuple(range(rank + 1)), tuple((n, a, b) for n, (a, b) in enumerate(edges)))


def finite_quiver_A(rank: int) -> Quiver:
    return Quiver(tuple(range(rank)), tuple((n, n, n + 1) for n in range(rank - 1)))


def default_theta_preprojective(Q: Quiver, delta) -> tuple[Fraction, ...]:
    """Generic theta: distinct powers of two off the extended vertex, balanced there."""
    theta = [Fraction(0)] * len(Q.vertices)
    for i in range(1, len(theta)):
        theta[i] = Fraction(2 ** (i - 1))
    theta[0] = -sum(t * d for t, d in zip(theta[1:], delta[1:])) / delta[0]
    return tuple(theta)


def default_theta_cm(Q: Quiver) -> tuple[Fraction, ...]:
    return tuple(Fraction(2**i) for i in range(len(Q.vertices)))


# -------------------------------------------------------------- setups


@dataclass(frozen=True)
class HypertoricData:
    M: tuple
    theta: tuple
    c: tuple

    def __post_init__(self):
        object.__setattr__(self, "M", tuple(tuple(int(x) for x in row) for row in self.M))
        object.__setattr__(self, "theta", tuple(to_fraction(t) for t in self.theta))
        object.__setattr__(self, "c", tuple(to_fraction(t) for t in self.c))

    @property
    def d(self) -> int:
        return len(self.M)

    @property
    def n(self) -> int:
        return len(self.M[0])

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.M)


def check_unimodular(M) -> CheckResult:
    d, n = len(M), len(M[0])
    reduced, _ = rref(M)
    if len(reduced) < d:
        return CheckResult(False, None, "rank deficient")
    for cols in combinations(range(n), d):
        det = determinant([[M[i][j] for j in cols] for i in range(d)])
        if det not in (-1, 0, 1):
            return CheckResult(False, cols, f"minor {det}")
    return CheckResult(True)


def _span_dim(vectors) -> int:
    if not vectors:
        return 0
    return len(rref(vectors)[0])


def check_hypertoric_smoothness(h: HypertoricData) -> CheckResult:
    """Fail with the first J (1-based, by size then lex) whose span has dim d-1 and contains theta."""
    d, n = h.d, h.n
    cols = [h.column(j) for j in range(n)]
    for size in range(n + 1):
        for J in combinations(range(n), size):
            vecs = [cols[j] for j in J]
            dim = _span_dim(vecs)
            if dim != d - 1:
                continue
            if _span_dim(vecs + [h.theta]) == dim:
                return CheckResult(False, tuple(j + 1 for j in J), "theta lies in a wall")
    return CheckResult(True)


@dataclass(frozen=True, eq=False)
class ReductionSetup:
    kind: str
    n_vars: int
    lie: LieData
    classical_moments: tuple
    quantized_moments: tuple
    character: Character
    variable_weights: tuple
    variable_labels: tuple
    theta: tuple = ()
    provenance: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    @property
    def g_dim(self) -> int:
        return self.lie.dim

    @property
    def is_torus(self) -> bool:
        return self.lie.is_abelian

    @property
    def weight_rank(self) -> int:
        return len(self.variable_weights[0]) if self.variable_weights else 0

    @property
    def ghost_weights(self) -> tuple:
        """Torus weight of psi_i, equal to the weight of the moment mu(A_i)."""
        out = []
        for m in self.quantized_moments:
            w = torus_weight(m, self.variable_weights)
            if w is Mixed:
                raise ValueError("moment is not weight-homogeneous")
            out.append(tuple(w))
        return tuple(out)

    def shifted_moments(self) -> list[WeylElement]:
        """mu(A_i) + c(A_i)."""
        return [m + self.character[i] for i, m in enumerate(self.quantized_moments)]


def build_hypertoric_setup(h: HypertoricData) -> ReductionSetup:
    chk = check_unimodular(h.M)
    if not chk.ok:
        if chk.detail == "rank deficient":
            raise RankDeficient("M does not have full row rank")
        raise NotUnimodular(f"columns {chk.witness} give {chk.detail}")
    if len(h.c) != h.d:
        raise ValueError(f"c needs {h.d} entries")
    n = h.n
    moments = []
    for i in range(h.d):
        mu = WeylElement(n, {})
        for j in range(n):
            if h.M[i][j]:
                mu = mu + WeylElement.x(n, j) * WeylElement.d(n, j) * h.M[i][j]
        moments.append(mu)
    lie = torus_lie(h.d)
    return ReductionSetup(
        kind="hypertoric",
        n_vars=n,
        lie=lie,
        classical_moments=tuple(principal_symbol(m) for m in moments),
        quantized_moments=tuple(moments),
        character=Character(h.c),
        variable_weights=tuple(h.column(j) for j in range(n)),
        variable_labels=tuple(f"x{j + 1}" for j in range(n)),
        theta=h.theta,
        provenance={"kind": "hypertoric", "M": [list(r) for r in h.M], "theta": list(h.theta), "c": list(h.c)},
        metadata={"smooth": check_hypertoric_smoothness(h).ok},
    )


def build_quiver_setup(Q: Quiver, v, theta, c_pre, distinguished, kind: str = "quiver", extra: dict | None = None) -> ReductionSetup:
    vv = _vec(Q, v)
    if any(x < 0 for x in vv) or not any(vv):
        raise ZeroDimensionVector("dimension vector must be nonnegative and nonzero")
    theta = tuple(to_fraction(t) for t in _vec(Q, theta))
    c_pre = tuple(to_fraction(t) for t in _vec(Q, c_pre))
    if _dot(theta, vv) != 0:
        raise StabilityViolation("theta . v != 0")
    if _dot(c_pre, vv) != 0:
        raise ValueError("c . v != 0")
    dim_of = dict(zip(Q.vertices, vv))
    lie = gl_sum_lie(vv, distinguished, Q.vertices)

    # variable (arrow, row p <= v_in, col q <= v_out) -> index
    var_index = {}
    labels = []
    for aid, out, inn in Q.arrows:
        for p in range(1, dim_of[inn] + 1):
            for q in range(1, dim_of[out] + 1):
                var_index[(aid, p, q)] = len(labels)
                labels.append(f"a{aid}_{p}{q}")
    n = len(labels)

    moments = []
    for vid, p, q in lie.basis_labels:
        terms: dict = {}
        for aid, out, inn in Q.arrows:
            if out == vid:
                for j in range(1, dim_of[inn] + 1):
                    a_idx = var_index[(aid, j, p)]
                    b_idx = var_index[(aid, j, q)]
                    _add_xd(terms, n, a_idx, b_idx, 1)
            if inn == vid:
                for j in range(1, dim_of[out] + 1):
                    a_idx = var_index[(aid, q, j)]
                    b_idx = var_index[(aid, p, j)]
                    _add_xd(terms, n, a_idx, b_idx, -1)
        moments.append(WeylElement(n, terms))

    diag = [(k, lab) for k, lab in enumerate(lie.basis_labels) if lab[1] == lab[2]]
    weights = []
    for aid, out, inn in Q.arrows:
        for p in range(1, dim_of[inn] + 1):
            for q in range(1, dim_of[out] + 1):
                w = []
                for _, (vid, r, _r) in diag:
                    val = 0
                    if out == vid and q == r:
                        val += 1
                    if inn == vid and p == r:
                        val -= 1
                    w.append(val)
                weights.append(tuple(w))

    character = trace_character(lie, dict(zip(Q.vertices, c_pre)))
    if not validate_character(lie, character):  # pragma: no cover - trace characters always pass
        raise ValueError("character does not vanish on brackets")
    metadata = {
        "p_of_v": p_of_v(Q, vv),
        "flatness_dimension_target": flatness_dimension_target(Q, vv),
        "distinguished_vertex": distinguished,
    }
    metadata.update(extra or {})
    return ReductionSetup(
        kind=kind,
        n_vars=n,
        lie=lie,
        classical_moments=tuple(principal_symbol(m) for m in moments),
        quantized_moments=tuple(moments),
        character=character,
        variable_weights=tuple(weights),
        variable_labels=tuple(labels),
        theta=theta,
        provenance={
            "kind": kind,
            "vertices": list(Q.vertices),
            "arrows": [list(a) for a in Q.arrows],
            "dimension": vv,
            "theta": list(theta),
            "c": list(c_pre),
        },
        metadata=metadata,
    )


def _add_xd(terms: dict, n: int, x_idx: int, d_idx: int, coeff: int) -> None:
    alpha = tuple(1 if k == x_idx else 0 for k in range(n))
    beta = tuple(1 if k == d_idx else 0 for k in range(n))
    key = (alpha, beta)
    terms[key] = terms.get(key, 0) + coeff


def shift_vector(Q: Quiver) -> tuple[int, ...]:
    delta = minimal_imaginary_root(Q)
    d = dict(zip(Q.vertices, delta))
    out = []
    for i in Q.vertices:
        s = -d[i]
        for _, o, inn in Q.arrows:
            if o == i:
                s += d[inn]
        out.append(s)
    return tuple(out)


def build_preprojective_setup(Q: Quiver, theta=None, c_pre=None, extended_vertex=0) -> ReductionSetup:
    delta = minimal_imaginary_root(Q)
    if theta is None:
        theta = default_theta_preprojective(Q, delta)
    chk = check_stability_preprojective(Q, delta, theta)
    if not chk.ok:
        raise StabilityViolation(f"{chk.detail}; witness {chk.witness}")
    if c_pre is None:
        c_pre = [0] * len(Q.vertices)
    return build_quiver_setup(
        Q, delta, theta, c_pre, extended_vertex, kind="preprojective",
        extra={"delta": delta, "shift_vector": shift_vector(Q)},
    )


def calogero_moser_quiver(base: Quiver, extended_vertex=0) -> Quiver:
    if "inf" in base.vertices:
        raise QuiverError("base quiver already has a vertex named 'inf'")
    arrows = list(base.arrows) + [(len(base.arrows), "inf", extended_vertex)]
    return Quiver(tuple(base.vertices) + ("inf",), tuple(arrows))


def build_cm_setup(base: Quiver, n: int, theta=None, c_pre=None, extended_vertex=0) -> ReductionSetup:
    if n < 1:
        raise ZeroDimensionVector("Calogero-Moser rank n must be positive")
    delta = minimal_imaginary_root(base)
    if theta is None:
        theta = default_theta_cm(base)
    theta = [to_fraction(t) for t in _vec(base, theta)]
    chk = check_stability_cm(base, n, theta)
    if not chk.ok:
        raise StabilityViolation(f"{chk.detail}; witness {chk.witness}")
    if c_pre is None:
        c_pre = [0] * len(base.vertices)
    c_pre = [to_fraction(t) for t in _vec(base, c_pre)]
    Q = calogero_moser_quiver(base, extended_vertex)
    v = [n * d for d in delta] + [1]
    nd = [n * d for d in delta]
    theta_full = theta + [-_dot(theta, nd)]
    c_full = c_pre + [-_dot(c_pre, nd)]
    return build_quiver_setup(
        Q, v, theta_full, c_full, "inf", kind="calogero-moser",
        extra={"delta": delta, "rank_n": n},
    )


# ------------------------------------------------------- moment checks


def check_moment_homomorphism(setup: ReductionSetup) -> CheckResult:
    """[mu(A_i), mu(A_j)] = sum_k chi^k_ij mu(A_k) for every pair (i, j)."""
    mus = setup.quantized_moments
    brackets = setup.lie.nonzero_brackets()
    for i in range(setup.g_dim):
        for j in range(setup.g_dim):
            lhs = mus[i] * mus[j] - mus[j] * mus[i]
            rhs = WeylElement(setup.n_vars, {})
            for k, chi in brackets.get((i, j), {}).items():
                rhs = rhs + mus[k].scale(chi)
            if lhs != rhs:
                return CheckResult(False, (i, j), "moment map is not a Lie homomorphism")
    return CheckResult(True)


def check_symbol_identity(setup: ReductionSetup) -> CheckResult:
    """Principal symbols of the quantized moments are the classical moments."""
    for i, (q, c) in enumerate(zip(setup.quantized_moments, setup.classical_moments)):
        if principal_symbol(q) != c:
            return CheckResult(False, i, "principal symbol differs from the classical moment")
    return CheckResult(True)
