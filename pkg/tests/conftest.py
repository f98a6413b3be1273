"""Independent oracles shared by the test modules.

Nothing here calls into the code under test's elimination or product
routines: ranks use plain dense Gaussian elimination, Weyl products are
checked by letting operators act on polynomials, ghost products by a
matrix representation of the Clifford algebra.
"""

from fractions import Fraction
from itertools import product
from math import factorial

import pytest


def dense_rank(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return 0
    rank, ncols = 0, len(m[0])
    for col in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                f = m[r][col] / m[rank][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def act(terms, poly):
    """Apply sum c x^alpha d^beta to a polynomial {exponent: coeff} by explicit differentiation."""
    out = {}
    for (alpha, beta), c in terms.items():
        for gamma, v in poly.items():
            # differentiate beta_i times in variable i, then multiply by x^alpha
            cur = {tuple(gamma): v}
            for i, b in enumerate(beta):
                for _ in range(b):
                    nxt = {}
                    for g, w in cur.items():
                        if g[i]:
                            g2 = list(g)
                            g2[i] -= 1
                            nxt[tuple(g2)] = nxt.get(tuple(g2), 0) + w * g[i]
                    cur = nxt
            for g, w in cur.items():
                key = tuple(a + b for a, b in zip(g, alpha))
                out[key] = out.get(key, 0) + c * w
    return {k: v for k, v in out.items() if v}


def mat_mul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n) if a[i][k]) for j in range(n)] for i in range(n)]


def mat_add(a, b, s=1):
    return [[x + s * y for x, y in zip(r, q)] for r, q in zip(a, b)]


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def clifford_rep(g):
    """Jordan-Wigner matrices (psi_i, psi*_i) with psi_i psi*_j + psi*_j psi_i = delta_ij."""
    dim = 2**g
    states = list(product((0, 1), repeat=g))
    index = {s: n for n, s in enumerate(states)}

    def op(i, create):
        m = [[Fraction(0)] * dim for _ in range(dim)]
        for s in states:
            if s[i] == (0 if create else 1):
                t = list(s)
                t[i] = 1 - t[i]
                sign = (-1) ** sum(s[:i])
                m[index[tuple(t)]][index[s]] = Fraction(sign)
        return m

    return [op(i, False) for i in range(g)], [op(i, True) for i in range(g)]


def ghost_to_matrix(el, rep):
    psi, psis = rep
    dim = len(psi[0])
    total = [[Fraction(0)] * dim for _ in range(dim)]
    for (S, T), c in el.terms.items():
        m = identity(dim)
        for i in S:
            m = mat_mul(m, psi[i - 1])
        for i in T:
            m = mat_mul(m, psis[i - 1])
        total = mat_add(total, [[c * x for x in r] for r in m])
    return total


def falling(n, k):
    return factorial(n) // factorial(n - k) if k <= n else 0


@pytest.fixture(scope="session")
def shipped_setups():
    from brstkit import models as M

    return {
        "M1": M.build_hypertoric_setup(M.HypertoricData([[1]], (1,), ("1/3",))),
        "M11": M.build_hypertoric_setup(M.HypertoricData([[1, 1]], (1,), ("1/3",))),
        "hyp2x3": M.build_hypertoric_setup(M.HypertoricData([[1, 0, 1], [0, 1, 1]], (1, 2), ("1/3", "2/7"))),
        "A1": M.build_preprojective_setup(M.affine_quiver("A1")),
        "A2": M.build_preprojective_setup(M.affine_quiver("A2")),
        "A3": M.build_preprojective_setup(M.affine_quiver("A3")),
        "A4": M.build_preprojective_setup(M.affine_quiver("A4")),
        "D4": M.build_preprojective_setup(M.affine_quiver("D4")),
        "CM1": M.build_cm_setup(M.affine_quiver("A1"), 1),
    }
