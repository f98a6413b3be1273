from math import comb

import pytest
from hypothesis import given, strategies as st

from brstkit import derham as Dr


def test_gl_poincare():
    assert Dr.gl_poincare(1).as_list() == [1, 1]
    assert Dr.gl_poincare(2).as_list() == [1, 1, 0, 1, 1]
    for m in range(1, 6):
        p = Dr.gl_poincare(m)
        assert p.evaluate(1) == 2**m
        assert p.top == m * m
    with pytest.raises(ValueError):
        Dr.gl_poincare(0)


def test_kunneth():
    t = Dr.PoincarePolynomial((1, 1))
    assert Dr.kunneth(t, t).as_list() == [1, 2, 1]
    cube = Dr.kunneth(Dr.kunneth(t, t), t)
    assert Dr.kunneth(cube, Dr.gl_poincare(2)).as_list() == [1, 4, 6, 5, 5, 6, 4, 1]


@given(st.integers(1, 8))
def test_torus_binomials(d):
    p = Dr.torus_poincare(d)
    assert p.as_list() == [comb(d, m) for m in range(d + 1)]
    assert p == Dr.blockwise_poincare([1] * d)


def test_named_families():
    assert Dr.predicted_poincare("preprojective", dynkin="A3").as_list() == [1, 3, 3, 1]
    assert Dr.predicted_poincare("sra", ell=1, n=2).as_list() == [1, 1, 0, 1]
    assert Dr.predicted_poincare("hypertoric", d=2).as_list() == [1, 2, 1]
    assert Dr.predicted_poincare("blocks", sizes=[2]).as_list() == [1, 1, 0, 1, 1]
    with pytest.raises(Dr.UnknownFamily):
        Dr.predicted_poincare("spin")
    with pytest.raises(Dr.UnknownFamily):
        Dr.predicted_poincare("preprojective", dynkin="Q3")


@pytest.mark.parametrize("ell", range(1, 7))
def test_type_a_binomials(ell):
    p = Dr.predicted_poincare("preprojective", dynkin=f"A{ell}")
    assert p.as_list() == [comb(ell, m) for m in range(ell + 1)]


@pytest.mark.parametrize("ell", [4, 5, 6, 7])
def test_type_d_descriptions_agree(ell):
    closed = Dr.predicted_poincare("preprojective", dynkin=f"D{ell}")
    blocks = Dr.blockwise_poincare(Dr.preprojective_blocks(f"D{ell}"))
    assert closed == blocks
    p = Dr.torus_poincare(3)
    for _ in range(ell - 3):
        p = Dr.kunneth(p, Dr.gl_poincare(2))
    assert closed == p


@pytest.mark.parametrize("name", ["A2", "D4", "D5", "E6", "E7", "E8"])
def test_blockwise_predictions_are_palindromic(name):
    blocks = Dr.preprojective_blocks(name)
    p = Dr.predicted_poincare("preprojective", dynkin=name)
    assert p.is_palindromic()
    assert p.evaluate(1) == 2 ** sum(blocks)


def test_e6_blocks_and_factored_form():
    assert sorted(Dr.preprojective_blocks("E6")) == [1, 1, 2, 2, 2, 3]
    assert Dr.factored_form([1, 1, 1, 2]) == "(1+t)^4 (1+t^3)"


def test_sra_literal_series_is_not_palindromic():
    # the literal generating function is not a Poincare polynomial of a group
    p = Dr.sra_generating_series(1, 2)
    assert not p.is_palindromic()
    assert Dr.sra_generating_series(2, 2).as_list() == [1, 2, 1, 2, 2, 0, 1]


def test_predicted_dimension_table(shipped_setups):
    s1 = shipped_setups["M1"]
    cells = Dr.predicted_dimension_table(s1, [1, 1, 1])
    by = {(c.ghost_degree, c.bound): c.dim for c in cells}
    assert by[(0, 2)] == by[(1, 2)] == 1 and by[(-1, 2)] == 0
    s2 = shipped_setups["hyp2x3"]
    cells = Dr.predicted_dimension_table(s2, [1])
    assert [c.dim for c in cells if c.bound == 0 and c.ghost_degree >= 0] == [1, 2, 1]
    assert Dr.predicted_dimension_table(s1, [], N=2)[0].dim == 0
    with pytest.raises(Dr.UnknownFamily):
        Dr.predicted_dimension_table(shipped_setups["D4"], [1])


def test_setup_predictions(shipped_setups):
    assert Dr.predicted_for_setup(shipped_setups["D4"]).as_list() == [1, 4, 6, 5, 5, 6, 4, 1]
    assert Dr.predicted_for_setup(shipped_setups["CM1"]).as_list() == [1, 2, 1]
    assert Dr.gl_poincare(2).render() == "1 + t + t^3 + t^4"
