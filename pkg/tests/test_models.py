from fractions import Fraction

import pytest

from brstkit import models as M
from brstkit.algebra import WeylElement, bernstein_degree, principal_symbol, torus_weight

AFFINE_DELTA = {
    "A1": (1, 1),
    "A2": (1, 1, 1),
    "A3": (1, 1, 1, 1),
    "D4": (1, 1, 2, 1, 1),
    "D5": (1, 1, 2, 2, 1, 1),
    "E6": (1, 2, 3, 2, 1, 2, 1),
    "E7": (1, 2, 3, 4, 3, 2, 1, 2),
    "E8": (1, 2, 3, 4, 5, 6, 4, 2, 3),
}


def test_p_of_v_examples():
    A1 = M.affine_quiver("A1")
    assert M.p_of_v(A1, (1, 1)) == 1
    assert M.p_of_v(M.finite_quiver_A(2), (1, 1)) == 0
    assert M.p_of_v(A1, (1, 0)) == 0
    assert M.tits_form(A1, (1, 1)) == 0


@pytest.mark.parametrize("name", sorted(AFFINE_DELTA))
def test_minimal_imaginary_root(name):
    Q = M.affine_quiver(name)
    delta = M.minimal_imaginary_root(Q)
    # labels of the extended vertex and the sum are basis independent; the full vector depends on vertex order
    assert delta[0] == 1
    assert sorted(delta) == sorted(AFFINE_DELTA[name])
    assert M.p_of_v(Q, delta) == 1


def test_minimal_root_orders():
    assert M.minimal_imaginary_root(M.affine_quiver("D4")) == (1, 1, 2, 1, 1)
    assert M.minimal_imaginary_root(M.affine_quiver("A3")) == (1, 1, 1, 1)


def test_finite_type_is_not_affine():
    with pytest.raises(M.NotAffine):
        M.minimal_imaginary_root(M.finite_quiver_A(2))


def test_bounded_roots():
    A1 = M.affine_quiver("A1")
    roots = M.enumerate_bounded_roots(A1, 1)
    pos = [r for r in roots if sum(r) > 0]
    assert sorted(pos) == [(0, 1), (1, 0), (1, 1)]
    assert {M.tits_form(A1, r) for r in pos} == {0, 1}
    assert sorted(tuple(-x for x in r) for r in pos) == sorted(r for r in roots if sum(r) < 0)
    path = M.finite_quiver_A(2)
    pos = [r for r in M.enumerate_bounded_roots(path, 1) if sum(r) > 0]
    assert sorted(pos) == [(0, 1), (1, 0), (1, 1)]
    assert all(M.tits_form(path, r) == 1 for r in pos)


def test_stability_preprojective():
    A1 = M.affine_quiver("A1")
    assert M.check_stability_preprojective(A1, (1, 1), (1, -1)).ok
    res = M.check_stability_preprojective(A1, (1, 1), (0, 0))
    assert not res.ok and res.witness in ((1, 0), (0, 1))
    assert not M.check_stability_preprojective(A1, (1, 1), (1, 1)).ok


def test_stability_cm():
    A1 = M.affine_quiver("A1")
    assert M.check_stability_cm(A1, 1, (1, 3)).ok
    res = M.check_stability_cm(A1, 1, (1, -1))
    assert not res.ok and res.witness == (1, 1)
    res = M.check_stability_cm(A1, 1, (0, 2))
    assert not res.ok and res.witness == (1, 0)


def test_flatness_targets():
    A1 = M.affine_quiver("A1")
    assert M.flatness_dimension_target(A1, (1, 1)) == 3
    assert M.flatness_dimension_target(M.affine_quiver("D4"), (1, 1, 2, 1, 1)) == 9
    assert M.flatness_dimension_target(A1, (1, 0)) == 0


def test_loops_rejected():
    with pytest.raises(M.QuiverError):
        M.Quiver((0,), ((0, 0),))


def test_hypertoric_moments():
    s = M.build_hypertoric_setup(M.HypertoricData([[1, 1]], (1,), (Fraction(1, 3),)))
    X, D = WeylElement.x, WeylElement.d
    assert s.quantized_moments[0] == X(2, 0) * D(2, 0) + X(2, 1) * D(2, 1)
    s1 = M.build_hypertoric_setup(M.HypertoricData([[1]], (1,), (Fraction(1, 3),)))
    assert s1.quantized_moments[0] == X(1, 0) * D(1, 0)
    assert s.variable_weights == ((1,), (1,))
    with pytest.raises(M.NotUnimodular):
        M.build_hypertoric_setup(M.HypertoricData([[2, 1]], (1,), (0,)))
    with pytest.raises(M.RankDeficient):
        M.build_hypertoric_setup(M.HypertoricData([[1, 1], [1, 1]], (1, 1), (0, 0)))


def test_hypertoric_smoothness():
    H = M.HypertoricData
    assert M.check_hypertoric_smoothness(H([[1, 1]], (1,), (0,))).ok
    res = M.check_hypertoric_smoothness(H([[1, 1]], (0,), (0,)))
    assert not res.ok and res.witness == ()
    res = M.check_hypertoric_smoothness(H([[1, 0, 1], [0, 1, 1]], (1, 0), (0, 0)))
    assert not res.ok and res.witness == (1,)
    assert M.check_hypertoric_smoothness(H([[1, 0, 1], [0, 1, 1]], (1, Fraction(1, 2)), (0, 0))).ok


def test_affine_A1_quiver_setup():
    s = M.build_preprojective_setup(M.affine_quiver("A1"))
    assert s.g_dim == 1 and s.n_vars == 2
    X, D = WeylElement.x, WeylElement.d
    # both arrows end at the retained vertex, so the moment carries a minus sign
    assert s.quantized_moments[0] == -(X(2, 0) * D(2, 0) + X(2, 1) * D(2, 1))
    assert s.classical_moments[0].render() == "-x1 xi1 - x2 xi2"
    hyp = M.build_hypertoric_setup(M.HypertoricData([[1, 1]], (1,), (0,)))
    assert s.quantized_moments[0] == -hyp.quantized_moments[0]
    assert s.metadata["flatness_dimension_target"] == 3


def test_shift_vector():
    # arrows 0->1 twice: vertex 0 gets -1 + 2, vertex 1 gets -1
    assert M.shift_vector(M.affine_quiver("A1")) == (1, -1)


def test_preprojective_requires_affine():
    with pytest.raises(M.NotAffine):
        M.build_preprojective_setup(M.finite_quiver_A(3))


def test_d4_setup_shape(shipped_setups):
    s = shipped_setups["D4"]
    assert s.g_dim == 7 and s.n_vars == 8
    assert all(bernstein_degree(m) == 2 for m in s.quantized_moments)


def test_cm_setups():
    A1 = M.affine_quiver("A1")
    s = M.build_cm_setup(A1, 1)
    assert s.is_torus and s.g_dim == 2 and s.n_vars == 3
    s2 = M.build_cm_setup(A1, 2)
    assert not s2.is_torus
    assert s2.lie.block_structure == ((0, 2), (1, 2))
    with pytest.raises(M.ZeroDimensionVector):
        M.build_cm_setup(A1, 0)
    with pytest.raises(M.StabilityViolation):
        M.build_cm_setup(A1, 1, theta=(1, -1))


@pytest.mark.parametrize("name", ["M1", "M11", "hyp2x3", "A1", "A2", "A3", "A4", "D4", "CM1"])
def test_moment_map_properties(shipped_setups, name):
    s = shipped_setups[name]
    assert M.check_symbol_identity(s).ok
    assert M.check_moment_homomorphism(s).ok
    for i, mu in enumerate(s.quantized_moments):
        assert principal_symbol(mu) == s.classical_moments[i]
        if s.is_torus:
            assert torus_weight(mu, s.variable_weights) == (0,) * s.weight_rank
        # equivariance: [mu, x_j] is linear in the coordinates
        for j in range(s.n_vars):
            xj = WeylElement.x(s.n_vars, j)
            br = mu * xj - xj * mu
            assert all(sum(a) == 1 and not any(b) for a, b in br.terms)
    if s.is_torus:
        # the torus acts on x_j through the j-th weight vector
        for i, mu in enumerate(s.quantized_moments):
            for j in range(s.n_vars):
                xj = WeylElement.x(s.n_vars, j)
                assert mu * xj - xj * mu == xj.scale(s.variable_weights[j][i])


def test_moment_homomorphism_detects_corruption(shipped_setups):
    import dataclasses

    s = shipped_setups["D4"]
    broken = dataclasses.replace(s, quantized_moments=(s.quantized_moments[1],) + s.quantized_moments[1:])
    assert not M.check_moment_homomorphism(broken).ok
