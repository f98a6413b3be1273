from fractions import Fraction

import pytest

from brstkit.liealg import (
    Character,
    LieData,
    NoUnitBlock,
    gl_sum_lie,
    jacobi_check,
    torus_lie,
    trace_character,
    validate_character,
)


def test_torus():
    for d in (1, 2, 3):
        L = torus_lie(d)
        assert L.dim == d and L.is_abelian
        assert jacobi_check(L) == (True, None)


def test_gl_sum_dimensions():
    L = gl_sum_lie([1, 1, 1, 1, 2], 0)
    assert L.dim == 7
    assert L.block_structure == ((1, 1), (2, 1), (3, 1), (4, 2))
    A1 = gl_sum_lie([1, 1], 0)
    assert A1.dim == 1 and A1.is_abelian
    for sizes in ([1, 2, 3], [1, 3], [2, 1, 2]):
        L = gl_sum_lie(sizes, sizes.index(1))
        assert L.dim == sum(m * m for m in sizes) - 1


def test_matrix_unit_bracket():
    L = gl_sum_lie([1, 2], 0)
    idx = {lab: n for n, lab in enumerate(L.basis_labels)}
    br = L.bracket(idx[(1, 1, 1)], idx[(1, 1, 2)])
    assert br == {idx[(1, 1, 2)]: 1}
    br = L.bracket(idx[(1, 1, 2)], idx[(1, 2, 1)])
    assert br == {idx[(1, 1, 1)]: 1, idx[(1, 2, 2)]: -1}


def test_no_unit_block():
    with pytest.raises(NoUnitBlock):
        gl_sum_lie([2, 2], 0)
    with pytest.raises(NoUnitBlock):
        gl_sum_lie([1, 2], None)


def test_jacobi_for_blocks_and_corruption():
    L = gl_sum_lie([1, 1, 1, 1, 2], 0)
    assert jacobi_check(L) == (True, None)
    L3 = gl_sum_lie([1, 3], 0)
    assert jacobi_check(L3)[0]
    chi = dict(L.structure_constants)
    key = sorted(chi)[0]
    chi[key] = -chi[key]
    bad = LieData(L.dim, L.basis_labels, chi, L.block_structure)
    ok, triple = jacobi_check(bad)
    assert not ok and triple == key


def test_jacobi_catches_non_antisymmetric_but_consistent_data():
    # symmetric "bracket" [A0, A1] = [A1, A0] = A0 is flagged at the first entry
    bad = LieData(2, ("a", "b"), {(0, 1, 0): Fraction(1), (1, 0, 0): Fraction(1)})
    assert jacobi_check(bad) == (False, (0, 1, 0))


def test_validate_character():
    assert validate_character(torus_lie(2), Character((Fraction(1, 3), 5)))
    L = gl_sum_lie([1, 2], 0)
    c = trace_character(L, {1: Fraction(1, 3)})
    assert validate_character(L, c)
    labels = L.basis_labels
    bad = Character(tuple(1 if lab == (1, 1, 2) else 0 for lab in labels))
    assert not validate_character(L, bad)
    uneven = Character(tuple(Fraction(1) if lab == (1, 1, 1) else 0 for lab in labels))
    assert not validate_character(L, uneven)
    assert not validate_character(L, Character((0,)))


def test_trace_characters_always_pass():
    for sizes, dist in (([1, 2, 3], 0), ([2, 1, 1], 1)):
        L = gl_sum_lie(sizes, dist)
        per = {v: Fraction(v + 1, 7) for v in range(len(sizes))}
        assert validate_character(L, trace_character(L, per))
