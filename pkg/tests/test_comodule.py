import random
import pytest
from hypothesis import given, strategies as st

from coringkit.algebra import tensor, upper_triangular
from coringkit.comodule import (Bicomodule, check_comodule, cotensor, cotensor_map, dual_comodule,
                                hom_comodules, is_colinear, left_counit_iso, regular_comodule,
                                regular_left, regular_right, right_comodule, right_counit_iso)
from coringkit.coring import divided_power_coalgebra, grouplike_coalgebra, matrix_coalgebra
from coringkit.linalg import GF, QQ, Matrix
from coringkit.verdict import StructureError

from oracles import naive_cotensor_dim
from generators import (column_comodule, low_comodule, random_coalgebra, random_left_comodule,
                        random_right_comodule, space)


def random_pair(seed):
    rng = random.Random(seed)
    f = QQ if seed % 3 else GF(5)
    c = random_coalgebra(rng, f)
    return random_right_comodule(c, rng), random_left_comodule(c, rng)


@pytest.mark.parametrize("seed", range(50))
def test_cotensor_dimension_matches_naive_elimination(seed):
    m, n = random_pair(seed)
    assert m.dim <= 4 and n.dim <= 4
    assert cotensor(m, n).dim == naive_cotensor_dim(m, n)


@given(st.integers(0, 2 ** 20))
def test_random_comodules_satisfy_the_axioms(seed):
    m, n = random_pair(seed)
    assert check_comodule(m).verified
    assert check_comodule(n).verified


@given(st.integers(0, 2 ** 20))
def test_counit_isomorphisms(seed):
    m, n = random_pair(seed)
    cp, fwd, back = right_counit_iso(m)
    assert cp.dim == m.dim
    assert (fwd @ back).is_identity() and (back @ fwd).is_identity()
    cp, fwd, back = left_counit_iso(n)
    assert cp.dim == n.dim
    assert (fwd @ back).is_identity()


@given(st.integers(0, 2 ** 20))
def test_cotensor_is_a_bicomodule(seed):
    m, n = random_pair(seed)
    cp = cotensor(m, n)
    assert check_comodule(cp.bicomodule).verified


def test_grouplike_cotensor_counts_matching_labels():
    f = QQ
    c = grouplike_coalgebra(f, 3)
    # M labelled (0, 0, 2), N labelled (0, 2, 2): matches 2*1 + 1*2 = 4
    def labelled(labels, left):
        d = len(labels)
        cols = []
        for j, x in enumerate(labels):
            v = [0] * (d * 3)
            v[j * 3 + x] = 1
            cols.append(v)
        rho_k = Matrix.from_columns(f, d * 3, cols)
        mod = space(f, d)
        m = right_comodule(c, mod, tensor(mod, c.bimodule).pi @ rho_k)
        return dual_comodule(m) if left else m
    m = labelled((0, 0, 2), False)
    n = labelled((0, 2, 2), True)
    assert cotensor(m, n).dim == 4
    assert len(hom_comodules(m, m)) == 2 * 2 + 1


def test_hom_of_regular_divided_powers():
    c = divided_power_coalgebra(QQ, 3)
    reg = regular_right(c)
    # End^C(C) is the dual algebra, of dimension 3
    basis = hom_comodules(reg, reg)
    assert len(basis) == 3
    assert all(is_colinear(h, reg, reg) for h in basis)


def test_hom_between_simple_and_regular():
    f = QQ
    col = column_comodule(f, 2)
    reg = regular_right(col.right)
    assert len(hom_comodules(col, reg)) == 2
    assert len(hom_comodules(reg, col)) == 2
    assert len(hom_comodules(col, col)) == 1


def test_low_comodule_embeds_in_regular():
    low = low_comodule()
    reg = regular_right(low.right)
    assert len(hom_comodules(low, reg)) == 1
    assert len(hom_comodules(reg, low)) == 1


def test_cotensor_map_of_identities_is_identity():
    col = column_comodule()
    row = dual_comodule(col)
    cp = cotensor(col, row)
    assert cp.dim == 1
    assert cotensor_map(col.identity(), row.identity(), cp, cp).is_identity()


def test_regular_bicomodule_checks():
    c = matrix_coalgebra(QQ, 2)
    assert check_comodule(regular_comodule(c)).verified
    assert check_comodule(regular_left(c)).verified


def test_bad_coaction_rejected():
    c = divided_power_coalgebra(QQ, 2)
    mod = space(QQ, 1)
    rt = tensor(mod, c.bimodule)
    with pytest.raises(StructureError):
        right_comodule(c, mod, rt.pi @ Matrix(QQ, [[0], [1]]))
    m = right_comodule(c, mod, rt.pi @ Matrix(QQ, [[0], [1]]), check=False)
    v = check_comodule(m)
    assert v.outcome == "refuted" and v.reason == "counit"


def test_comodules_over_different_corings_do_not_cotensor():
    m = column_comodule()
    n = dual_comodule(column_comodule())
    assert m.right is not n.left
    with pytest.raises(StructureError):
        cotensor(m, n)


def test_module_over_the_wrong_algebra():
    c = matrix_coalgebra(QQ, 2)
    reg = upper_triangular(QQ, 2).regular
    with pytest.raises(StructureError):
        Bicomodule(c, c, reg)


def test_coaction_of_the_wrong_shape():
    c = matrix_coalgebra(QQ, 2)
    with pytest.raises(StructureError):
        Bicomodule(c, c, space(QQ, 1))
