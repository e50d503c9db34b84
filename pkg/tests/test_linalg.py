from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from coringkit.linalg import (GF, QQ, CoefficientGuardError, DimensionError, Field,
                              FieldMismatchError, Matrix, MatrixEquationSystem, image,
                              infeasibility_certificate, inverse, kernel, kron, naive_rref,
                              parse_field, rank, solve_linear)

FIELDS = [QQ, GF(2), GF(5), GF(101)]


@st.composite
def matrices(draw, max_rows=5, max_cols=5, fields=FIELDS):
    f = draw(st.sampled_from(fields))
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    rows = [[draw(st.integers(-4, 4)) for _ in range(c)] for _ in range(r)]
    if f.is_rational and draw(st.booleans()):
        rows[0][0] = Fraction(draw(st.integers(-3, 3)), draw(st.integers(1, 4)))
    return Matrix(f, rows)


def test_field_coercion_and_names():
    assert QQ("3/6") == Fraction(1, 2)
    assert QQ(Fraction(4, 2)) == 2 and isinstance(QQ(Fraction(4, 2)), int)
    assert GF(5)(Fraction(1, 2)) == 3
    assert GF(7)(-1) == 6
    assert GF(5) is GF(5)
    assert parse_field("rationals") == QQ
    assert parse_field("gf:7") == GF(7) == parse_field("gf(7)")
    assert GF(3).name == "gf:3" and QQ.name == "rationals"


@pytest.mark.parametrize("p", [1, 4, 9, 2**31 + 11])
def test_field_rejects_non_primes(p):
    with pytest.raises(ValueError):
        Field(p)


def test_unknown_field_text():
    with pytest.raises(ValueError):
        parse_field("reals")


def test_matrix_arithmetic_basics():
    a = Matrix(QQ, [[1, 2], [3, 4]])
    b = Matrix(QQ, [[0, 1], [1, 0]])
    assert (a @ b).rows == ((2, 1), (4, 3))
    assert (a + b - b) == a
    assert a.T.rows == ((1, 3), (2, 4))
    assert a.scale(Fraction(1, 2)).rows[0] == (Fraction(1, 2), 1)
    assert inverse(a) @ a == Matrix.identity(QQ, 2)
    assert inverse(Matrix(QQ, [[1, 2], [2, 4]])) is None
    assert a.first_difference(a) is None


def test_kron_is_row_major():
    a = Matrix(QQ, [[1, 2]])
    b = Matrix(QQ, [[1], [10]])
    assert kron(a, b).rows == ((1, 2), (10, 20))


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatchError):
        Matrix(QQ, [[1]]) @ Matrix(GF(3), [[1]])
    with pytest.raises(DimensionError):
        Matrix(QQ, [[1, 2]]) @ Matrix(QQ, [[1, 2]])


def test_entries_are_reduced_mod_p():
    m = Matrix(GF(3), [[4, -1]])
    assert m.rows == ((1, 2),)


@given(matrices())
def test_rank_matches_textbook_elimination(m):
    assert rank(m) == len(naive_rref(m)[1])


@given(matrices())
def test_kernel_is_annihilated_and_has_complementary_dimension(m):
    ker = kernel(m)
    assert ker.dim == m.ncols - rank(m)
    for v in ker.vectors():
        assert all(x == 0 for x in m.apply(v))


@given(matrices())
def test_image_dimension_is_rank(m):
    assert image(m).dim == rank(m)


@given(matrices(), st.data())
def test_solve_or_certificate(m, data):
    f = m.field
    b = [f(data.draw(st.integers(-3, 3))) for _ in range(m.nrows)]
    x = solve_linear(m, b)
    y = infeasibility_certificate(m, b)
    assert (x is None) == (y is not None)
    if x is not None:
        assert tuple(m.apply(x)) == tuple(f(v) for v in b)
    else:
        ya = (Matrix(f, [list(y)]) @ m).rows[0]
        assert all(v == 0 for v in ya)
        assert f(sum(p * q for p, q in zip(y, b))) != 0


@given(matrices(max_rows=4, max_cols=4))
def test_equation_system_agrees_with_direct_solve(m):
    # X @ m == target, with a target that is known to be reachable
    f = m.field
    x0 = Matrix(f, [[(i + 2 * j) % 3 - 1 for j in range(m.nrows)] for i in range(2)])
    target = x0 @ m
    sys = MatrixEquationSystem(f, 2, m.nrows)
    sys.add([(Matrix.identity(f, 2), m)], target)
    x = sys.solve()
    assert x is not None and x @ m == target
    assert sys.homogeneous_dim() == 2 * (m.nrows - rank(m))
    for h in sys.solution_space():
        assert (h @ m).is_zero()


def test_equation_system_certificate():
    sys = MatrixEquationSystem(QQ, 1, 1)
    one = Matrix.identity(QQ, 1)
    sys.add([(one, one)], Matrix(QQ, [[1]]))
    sys.add([(one, one)], Matrix(QQ, [[2]]))
    assert sys.solve() is None
    y = sys.certificate()
    a, b = sys.coefficient_matrix(), sys.rhs_vector()
    assert all(v == 0 for v in (Matrix(QQ, [list(y)]) @ a).rows[0])
    assert sum(p * q for p, q in zip(y, b)) != 0


def test_coefficient_guard(monkeypatch):
    m = Matrix(QQ, [[3**40 + i * j + (i == j) for j in range(4)] for i in range(4)])
    assert rank(m) == 4
    monkeypatch.setenv("CORINGKIT_MAX_BITS", "16")
    with pytest.raises(CoefficientGuardError):
        rank(m)
