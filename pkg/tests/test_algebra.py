import itertools
import random

import pytest
from hypothesis import given, strategies as st

from coringkit.algebra import (AlgebraPresentation, Bimodule, BimoduleMap, associator,
                               dual_basis, element_power, faithfulness_report, ground,
                               group_algebra, is_projective_module, jacobson_radical,
                               left_unitor, left_unitor_inv, matrix_algebra, poly_quotient,
                               product_algebra, tensor, tensor_algebra, upper_triangular,
                               validate_presentation)
from coringkit.linalg import GF, QQ, Matrix, inverse
from coringkit.verdict import StructureError

from generators import nonfaithful_module, random_invertible


def small_algebras(f):
    k = ground(f)
    return [
        k,
        matrix_algebra(f, 2),
        upper_triangular(f, 2),
        upper_triangular(f, 3),
        poly_quotient(f, [0, 0, 1]),
        poly_quotient(f, [1, 0, 1]),
        product_algebra(k, k),
        group_algebra(f, [[0, 1], [1, 0]]),
        tensor_algebra(matrix_algebra(f, 2), poly_quotient(f, [0, 0, 1])),
    ]


@pytest.mark.parametrize("f", [QQ, GF(2), GF(5)], ids=["QQ", "GF2", "GF5"])
def test_builders_satisfy_the_algebra_laws(f):
    for a in small_algebras(f):
        assert validate_presentation(a).verified, a
        assert validate_presentation(a.regular).verified, a


def test_dimensions():
    assert matrix_algebra(QQ, 3).dim == 9
    assert upper_triangular(QQ, 3).dim == 6
    assert tensor_algebra(matrix_algebra(QQ, 2), upper_triangular(QQ, 2)).dim == 12


def test_broken_associativity_is_reported():
    # e0 = 1, e1 e1 = e0 + e1 is fine; break it by making e1 e1 = e1 but e1 e0 = 0
    c = [[[1, 0], [0, 1]], [[0, 0], [0, 1]]]
    a = AlgebraPresentation.from_structure_constants(QQ, c, [1, 0])
    v = validate_presentation(a)
    assert v.outcome == "refuted"


def test_bad_shapes_raise():
    with pytest.raises(StructureError):
        AlgebraPresentation(QQ, 2, Matrix.zeros(QQ, 2, 3), [1, 0])
    k = ground(QQ)
    with pytest.raises(StructureError):
        Bimodule(k, k, 2, [Matrix.identity(QQ, 3)], [Matrix.identity(QQ, 2)])


def test_non_commuting_actions_are_refuted():
    a = matrix_algebra(QQ, 2)
    reg = a.regular
    bad = Bimodule(a, a, 4, reg.L, reg.L)
    assert validate_presentation(bad).outcome == "refuted"


# radicals: frozen values over QQ and a brute-force nilpotent count over small fields

@pytest.mark.parametrize("name,alg,dim", [
    ("upper2", upper_triangular(QQ, 2), 1),
    ("upper3", upper_triangular(QQ, 3), 3),
    ("dual_numbers", poly_quotient(QQ, [0, 0, 1]), 1),
    ("matrix2", matrix_algebra(QQ, 2), 0),
    ("QC2", group_algebra(QQ, [[0, 1], [1, 0]]), 0),
    ("k[x]/x^3", poly_quotient(QQ, [0, 0, 0, 1]), 2),
])
def test_radical_dimensions_over_rationals(name, alg, dim):
    assert jacobson_radical(alg).dim == dim


def _nilpotent_elements(a):
    p = a.field.characteristic
    out = []
    for coords in itertools.product(range(p), repeat=a.dim):
        if all(x == 0 for x in element_power(a, coords, a.dim)):
            out.append(coords)
    return out


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("coeffs", [[0, 0, 1], [1, 0, 1], [0, 1, 1], [1, 0, 0, 1]])
def test_commutative_radical_is_the_nilpotent_set(p, coeffs):
    a = poly_quotient(GF(p), coeffs)
    rad = jacobson_radical(a)
    nil = _nilpotent_elements(a)
    assert p ** rad.dim == len(nil)
    assert all(rad.contains(v) for v in nil)


def test_group_algebra_in_characteristic_two_has_a_radical():
    a = group_algebra(GF(2), [[0, 1], [1, 0]])
    rad = jacobson_radical(a)
    assert rad.dim == 1 and rad.contains((1, 1))


# tensor products

@given(st.integers(0, 2 ** 16), st.sampled_from(["matrix2", "upper2", "dual"]))
def test_tensor_with_the_regular_module_is_the_identity(seed, kind):
    rng = random.Random(seed)
    a = {"matrix2": matrix_algebra(QQ, 2), "upper2": upper_triangular(QQ, 2),
         "dual": poly_quotient(QQ, [0, 0, 1])}[kind]
    reg = a.regular
    p = random_invertible(QQ, a.dim, rng)
    pi = inverse(p)
    n = Bimodule(a, ground(QQ), a.dim, [pi @ x @ p for x in reg.L], [Matrix.identity(QQ, a.dim)])
    t = tensor(reg, n)
    assert t.dim == n.dim
    assert (left_unitor(n) @ left_unitor_inv(n)).is_identity()
    assert (left_unitor_inv(n) @ left_unitor(n)).is_identity()


def test_column_times_row_over_matrix_algebra():
    f = QQ
    a = matrix_algebra(f, 2)
    k = ground(f)
    units = [Matrix(f, [[int(r == i and c == j) for c in range(2)] for r in range(2)])
             for i in range(2) for j in range(2)]
    col = Bimodule(a, k, 2, units, [Matrix.identity(f, 2)])
    row = Bimodule(k, a, 2, [Matrix.identity(f, 2)], [u.T for u in units])
    assert tensor(row, col).dim == 1
    assert tensor(col, row).dim == 4


def test_associator_is_invertible():
    a = upper_triangular(QQ, 2)
    reg = a.regular
    m = associator(reg, reg, reg)
    assert inverse(m) is not None


def test_bimodule_map_validation():
    a = upper_triangular(QQ, 2)
    reg = a.regular
    assert validate_presentation(BimoduleMap(reg, reg, reg.identity())).verified
    bad = Matrix(QQ, [[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    assert validate_presentation(BimoduleMap(reg, reg, bad)).outcome == "refuted"


# projectivity and faithfulness

def test_projectivity():
    f = QQ
    dual = poly_quotient(f, [0, 0, 1])
    assert is_projective_module(dual.regular, "right").verified
    simple = Bimodule.right_module(dual, 1, [Matrix(f, [[1]]), Matrix(f, [[0]])])
    v = is_projective_module(simple, "right")
    assert v.outcome == "refuted" and v.witnesses["certificate"] is not None


def test_dual_basis_reconstructs_elements():
    a = upper_triangular(QQ, 2)
    reg = a.regular
    elems, funcs = dual_basis(reg, "right")
    for m in range(reg.dim):
        v = tuple(int(i == m) for i in range(reg.dim))
        total = [0] * reg.dim
        for e, fj in zip(elems, funcs):
            coeffs = fj.apply(v)
            img = reg.act_right(coeffs).apply(e)
            total = [x + y for x, y in zip(total, img)]
        assert tuple(total) == v


def test_faithfulness():
    f = QQ
    a = matrix_algebra(f, 2)
    col = Bimodule(a, ground(f), 2,
                   [Matrix(f, [[int(r == i and c == j) for c in range(2)] for r in range(2)])
                    for i in range(2) for j in range(2)], [Matrix.identity(f, 2)])
    assert faithfulness_report(col).verified
    v = faithfulness_report(nonfaithful_module(f).module)
    assert v.outcome == "refuted"
    assert v.witnesses["annihilating_element"] == (0, 1)
