"""Finite-dimensional algebras, bimodules and tensor products over an algebra.

Conventions: an algebra of dimension ``n`` is stored as its multiplication
map ``mu`` (an ``n x n^2`` matrix whose column ``i*n + j`` is ``e_i e_j``)
plus unit coordinates.  A bimodule stores one matrix per basis element of
each acting algebra; matrices act on column vectors, so the left action is a
homomorphism and the right action an anti-homomorphism.
"""

from __future__ import annotations

from functools import cached_property, lru_cache
from typing import Sequence

from .linalg import (
    Field, Matrix, SubspaceBasis, MatrixEquationSystem, kernel, kron, rank,
    rref_sparse,
)
from .verdict import Verdict, StructureError


class AlgebraPresentation:
    def __init__(self, field: Field, dim: int, mu: Matrix, unit: Sequence, name: str = "A"):
        if mu.shape != (dim, dim * dim):
            raise StructureError(f"multiplication must be {dim}x{dim * dim}, got {mu.shape}")
        if len(unit) != dim:
            raise StructureError(f"unit has {len(unit)} coordinates, expected {dim}")
        if mu.field != field:
            raise StructureError("multiplication table over the wrong field")
        self.field = field
        self.dim = dim
        self.mu = mu
        self.unit = tuple(field(x) for x in unit)
        self.name = name

    def __repr__(self):
        return f"Algebra({self.name}, dim={self.dim}, {self.field})"

    @classmethod
    def from_structure_constants(cls, field: Field, c, unit, name="A") -> "AlgebraPresentation":
        """``c[i][j][k]`` is the coefficient of ``e_k`` in ``e_i e_j``."""
        n = len(c)
        cols = [c[i][j] for i in range(n) for j in range(n)]
        return cls(field, n, Matrix.from_columns(field, n, cols), unit, name)

    def product(self, x: Sequence, y: Sequence) -> tuple:
        xy = [a * b for a in x for b in y]
        return self.mu.apply(xy)

    def basis_product(self, i: int, j: int) -> tuple:
        return self.mu.col(i * self.dim + j)

    @cached_property
    def left_mult(self) -> tuple[Matrix, ...]:
        """``left_mult[i]`` is the matrix of ``x -> e_i x``."""
        n = self.dim
        return tuple(self.mu.take_columns([i * n + j for j in range(n)]) for i in range(n))

    @cached_property
    def right_mult(self) -> tuple[Matrix, ...]:
        """``right_mult[j]`` is the matrix of ``x -> x e_j``."""
        n = self.dim
        return tuple(self.mu.take_columns([i * n + j for i in range(n)]) for j in range(n))

    def left_mult_by(self, a: Sequence) -> Matrix:
        return combine(self.field, self.dim, self.left_mult, a)

    def right_mult_by(self, a: Sequence) -> Matrix:
        return combine(self.field, self.dim, self.right_mult, a)

    def unit_vector(self) -> Matrix:
        return Matrix.column(self.field, self.unit)

    def basis_vector(self, i: int) -> tuple:
        return tuple(1 if k == i else 0 for k in range(self.dim))

    @cached_property
    def regular(self) -> "Bimodule":
        """``A`` as an ``A``-``A``-bimodule."""
        return Bimodule(self, self, self.dim, self.left_mult, self.right_mult, name=self.name)

    @property
    def is_ground(self) -> bool:
        return self.dim == 1 and self.unit == (1,) and self.mu.rows == ((1,),)

    def opposite(self) -> "AlgebraPresentation":
        n = self.dim
        cols = [self.basis_product(j, i) for i in range(n) for j in range(n)]
        return AlgebraPresentation(self.field, n, Matrix.from_columns(self.field, n, cols),
                                   self.unit, self.name + "^op")


def combine(field: Field, n: int, mats: Sequence[Matrix], coeffs: Sequence) -> Matrix:
    """``sum_i coeffs[i] * mats[i]``."""
    out = Matrix.zeros(field, n, n) if not mats else None
    for c, m in zip(coeffs, mats):
        if c:
            t = m if c == 1 else m.scale(c)
            out = t if out is None else out + t
    if out is None:
        out = Matrix.zeros(field, mats[0].nrows, mats[0].ncols)
    return out


# ---------------------------------------------------------------------------
# builders


@lru_cache(maxsize=None)
def ground(field: Field) -> AlgebraPresentation:
    return AlgebraPresentation(field, 1, Matrix(field, [[1]]), (1,), name="k")


def matrix_algebra(field: Field, n: int) -> AlgebraPresentation:
    """``M_n(k)`` with basis ``E_ij`` at index ``i*n + j``."""
    d = n * n
    c = [[[0] * d for _ in range(d)] for _ in range(d)]
    for i in range(n):
        for j in range(n):
            for l in range(n):
                c[i * n + j][j * n + l][i * n + l] = 1
    unit = [1 if (k // n) == (k % n) else 0 for k in range(d)]
    return AlgebraPresentation.from_structure_constants(field, c, unit, name=f"M{n}")


def poly_quotient(field: Field, coeffs: Sequence, name: str | None = None) -> AlgebraPresentation:
    """``k[x]/(f)`` where ``coeffs = [c0, ..., cd]`` lists ``f`` from the constant term up."""
    coeffs = [field(c) for c in coeffs]
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    d = len(coeffs) - 1
    if d < 1:
        raise StructureError("polynomial must have degree >= 1")
    lead_inv = field.inv(coeffs[-1])
    monic = [c * lead_inv for c in coeffs]

    def reduce(poly):
        poly = list(poly)
        for k in range(len(poly) - 1, d - 1, -1):
            c = poly[k]
            if c:
                for t in range(d + 1):
                    poly[k - d + t] -= c * monic[t]
        return [field(x) if not field.characteristic else x % field.characteristic
                for x in poly[:d]]

    c = []
    for i in range(d):
        row = []
        for j in range(d):
            poly = [0] * (2 * d)
            poly[i + j] = 1
            row.append(reduce(poly))
        c.append(row)
    unit = [1] + [0] * (d - 1)
    return AlgebraPresentation.from_structure_constants(field, c, unit, name=name or f"k[x]/f{d}")


def product_algebra(a: AlgebraPresentation, b: AlgebraPresentation) -> AlgebraPresentation:
    if a.field != b.field:
        raise StructureError("product of algebras over different fields")
    n, m = a.dim, b.dim
    d = n + m
    c = [[[0] * d for _ in range(d)] for _ in range(d)]
    for i in range(n):
        for j in range(n):
            for k, v in enumerate(a.basis_product(i, j)):
                c[i][j][k] = v
    for i in range(m):
        for j in range(m):
            for k, v in enumerate(b.basis_product(i, j)):
                c[n + i][n + j][n + k] = v
    return AlgebraPresentation.from_structure_constants(a.field, c, a.unit + b.unit,
                                                        name=f"{a.name}x{b.name}")


def upper_triangular(field: Field, n: int) -> AlgebraPresentation:
    idx = [(i, j) for i in range(n) for j in range(i, n)]
    pos = {p: t for t, p in enumerate(idx)}
    d = len(idx)
    c = [[[0] * d for _ in range(d)] for _ in range(d)]
    for s, (i, j) in enumerate(idx):
        for t, (k, l) in enumerate(idx):
            if j == k:
                c[s][t][pos[(i, l)]] = 1
    unit = [1 if i == j else 0 for i, j in idx]
    return AlgebraPresentation.from_structure_constants(field, c, unit, name=f"T{n}")


def group_algebra(field: Field, table: Sequence[Sequence[int]], name: str = "kG") -> AlgebraPresentation:
    """Group algebra from a multiplication table (``table[g][h]`` is ``gh``)."""
    n = len(table)
    e = next(g for g in range(n) if all(table[g][h] == h for h in range(n)))
    c = [[[1 if k == table[i][j] else 0 for k in range(n)] for j in range(n)] for i in range(n)]
    return AlgebraPresentation.from_structure_constants(
        field, c, [1 if g == e else 0 for g in range(n)], name=name)


def tensor_algebra(a: AlgebraPresentation, b: AlgebraPresentation) -> AlgebraPresentation:
    """``A (x)_k B`` with basis index ``i*dim(B) + j``."""
    if a.field != b.field:
        raise StructureError("tensor of algebras over different fields")
    mu = kron(a.mu, b.mu)
    n, m = a.dim, b.dim
    # kron(mu_A, mu_B) expects (a a')(b b') ordering; permute to (a b)(a' b')
    perm = []
    for i in range(n):
        for j in range(m):
            for k in range(n):
                for l in range(m):
                    perm.append((i * n + k) * m * m + j * m + l)
    mu = mu.take_columns(perm)
    unit = [x * y for x in a.unit for y in b.unit]
    return AlgebraPresentation(a.field, n * m, mu, unit, name=f"{a.name}(x){b.name}")


# ---------------------------------------------------------------------------
# algebra maps


class AlgebraMap:
    """Unital algebra homomorphism given by its matrix (columns = images of basis)."""

    def __init__(self, source: AlgebraPresentation, target: AlgebraPresentation, matrix: Matrix):
        if matrix.shape != (target.dim, source.dim):
            raise StructureError(f"algebra map must be {target.dim}x{source.dim}")
        self.source, self.target, self.matrix = source, target, matrix

    @classmethod
    def identity(cls, a: AlgebraPresentation) -> "AlgebraMap":
        return cls(a, a, Matrix.identity(a.field, a.dim))

    @classmethod
    def unit_map(cls, a: AlgebraPresentation) -> "AlgebraMap":
        """``k -> A``."""
        return cls(ground(a.field), a, a.unit_vector())

    def check(self) -> Verdict:
        s, t, f = self.source, self.target, self.matrix
        if f.apply(s.unit) != t.unit:
            return Verdict.fail("unit", witnesses={"image_of_unit": f.apply(s.unit)})
        lhs = f @ s.mu
        rhs = t.mu @ kron(f, f)
        j = lhs.first_difference(rhs)
        if j is not None:
            return Verdict.fail("multiplicative", witnesses={"i": j // s.dim, "j": j % s.dim})
        return Verdict.ok()

    def compose(self, other: "AlgebraMap") -> "AlgebraMap":
        """``self o other``."""
        return AlgebraMap(other.source, self.target, self.matrix @ other.matrix)


# ---------------------------------------------------------------------------
# bimodules


class Bimodule:
    """``left``-``right`` bimodule: ``L[i]`` acts by ``e_i`` on the left, ``R[j]`` by ``e_j`` on the right."""

    def __init__(self, left: AlgebraPresentation, right: AlgebraPresentation, dim: int,
                 L: Sequence[Matrix], R: Sequence[Matrix], name: str = "M"):
        if left.field != right.field:
            raise StructureError("bimodule over algebras with different fields")
        if len(L) != left.dim or len(R) != right.dim:
            raise StructureError("one action matrix per basis element required")
        for m in list(L) + list(R):
            if m.shape != (dim, dim):
                raise StructureError(f"action matrices must be {dim}x{dim}")
        self.left, self.right, self.dim = left, right, dim
        self.L, self.R = tuple(L), tuple(R)
        self.name = name

    @property
    def field(self) -> Field:
        return self.left.field

    def __repr__(self):
        return f"Bimodule({self.name}: {self.left.name}-{self.right.name}, dim={self.dim})"

    @classmethod
    def left_module(cls, a: AlgebraPresentation, dim: int, L: Sequence[Matrix], name="M") -> "Bimodule":
        k = ground(a.field)
        return cls(a, k, dim, L, (Matrix.identity(a.field, dim),), name)

    @classmethod
    def right_module(cls, a: AlgebraPresentation, dim: int, R: Sequence[Matrix], name="M") -> "Bimodule":
        k = ground(a.field)
        return cls(k, a, dim, (Matrix.identity(a.field, dim),), R, name)

    @classmethod
    def zero(cls, left: AlgebraPresentation, right: AlgebraPresentation) -> "Bimodule":
        z = Matrix.zeros(left.field, 0, 0)
        return cls(left, right, 0, (z,) * left.dim, (z,) * right.dim, "0")

    def act_left(self, a: Sequence) -> Matrix:
        return combine(self.field, self.dim, self.L, a)

    def act_right(self, b: Sequence) -> Matrix:
        return combine(self.field, self.dim, self.R, b)

    def identity(self) -> Matrix:
        return Matrix.identity(self.field, self.dim)

    def forget_left(self) -> "Bimodule":
        return Bimodule(ground(self.field), self.right, self.dim,
                        (self.identity(),), self.R, self.name)

    def forget_right(self) -> "Bimodule":
        return Bimodule(self.left, ground(self.field), self.dim, self.L,
                        (self.identity(),), self.name)

    def restrict(self, left: AlgebraMap | None = None, right: AlgebraMap | None = None) -> "Bimodule":
        """Pull the actions back along algebra maps into ``left``/``right`` algebras."""
        L, la = self.L, self.left
        if left is not None:
            L = tuple(self.act_left(left.matrix.col(i)) for i in range(left.source.dim))
            la = left.source
        R, ra = self.R, self.right
        if right is not None:
            R = tuple(self.act_right(right.matrix.col(i)) for i in range(right.source.dim))
            ra = right.source
        return Bimodule(la, ra, self.dim, L, R, self.name)

    def direct_sum(self, other: "Bimodule") -> "Bimodule":
        def blk(a, b):
            top = [tuple(r) + (0,) * b.ncols for r in a.rows]
            bot = [(0,) * a.ncols + tuple(r) for r in b.rows]
            return Matrix(self.field, top + bot, a.ncols + b.ncols)
        return Bimodule(self.left, self.right, self.dim + other.dim,
                        [blk(x, y) for x, y in zip(self.L, other.L)],
                        [blk(x, y) for x, y in zip(self.R, other.R)],
                        f"{self.name}+{other.name}")

    def submodule(self, basis: SubspaceBasis, name: str | None = None) -> tuple["Bimodule", Matrix]:
        """Restrict to an invariant subspace; returns the submodule and its inclusion."""
        inc = basis.inclusion()
        L = [basis.coordinate_matrix(m @ inc) for m in self.L]
        R = [basis.coordinate_matrix(m @ inc) for m in self.R]
        return Bimodule(self.left, self.right, basis.dim, L, R, name or self.name), inc

    def dual(self) -> "Bimodule":
        """k-dual ``M*`` as a ``right``-``left`` bimodule: ``(b f a)(m) = f(a m b)``."""
        return Bimodule(self.right, self.left, self.dim,
                        [m.T for m in self.R], [m.T for m in self.L], self.name + "*")


class BimoduleMap:
    def __init__(self, source: Bimodule, target: Bimodule, matrix: Matrix):
        if matrix.shape != (target.dim, source.dim):
            raise StructureError(f"map matrix must be {target.dim}x{source.dim}, got {matrix.shape}")
        self.source, self.target, self.matrix = source, target, matrix

    def __repr__(self):
        return f"BimoduleMap({self.source.name} -> {self.target.name})"

    def compose(self, other: "BimoduleMap") -> "BimoduleMap":
        return BimoduleMap(other.source, self.target, self.matrix @ other.matrix)


# ---------------------------------------------------------------------------
# validation


def validate_presentation(obj) -> Verdict:
    """Check the defining laws of an algebra, bimodule or bimodule map."""
    if isinstance(obj, AlgebraPresentation):
        return _validate_algebra(obj)
    if isinstance(obj, Bimodule):
        return _validate_bimodule(obj)
    if isinstance(obj, BimoduleMap):
        return _validate_map(obj)
    if isinstance(obj, AlgebraMap):
        return obj.check()
    raise TypeError(f"cannot validate {type(obj).__name__}")


def _validate_algebra(a: AlgebraPresentation) -> Verdict:
    n = a.dim
    lu = a.left_mult_by(a.unit)
    ru = a.right_mult_by(a.unit)
    for name, m in (("unit law (left)", lu), ("unit law (right)", ru)):
        if not m.is_identity():
            j = m.first_difference(Matrix.identity(a.field, n))
            return Verdict.fail("unit law", checks={"unit": False},
                                witnesses={"i": j, "law": name})
    # (e_i e_j) e_k = e_i (e_j e_k) <=> L(e_i e_j) = L_i L_j
    for i in range(n):
        for j in range(n):
            lhs = a.left_mult_by(a.basis_product(i, j))
            rhs = a.left_mult[i] @ a.left_mult[j]
            k = lhs.first_difference(rhs)
            if k is not None:
                return Verdict.fail("associativity", checks={"unit": True, "associative": False},
                                    witnesses={"i": i, "j": j, "k": k})
    return Verdict.ok(checks={"unit": True, "associative": True})


def _validate_bimodule(m: Bimodule) -> Verdict:
    checks = {}
    for side, alg, acts, combine_, anti in (
        ("left", m.left, m.L, m.act_left, False),
        ("right", m.right, m.R, m.act_right, True),
    ):
        if not combine_(alg.unit).is_identity():
            return Verdict.fail(f"{side} action not unital", checks={f"{side}_unital": False})
        checks[f"{side}_unital"] = True
        for i in range(alg.dim):
            for j in range(alg.dim):
                lhs = combine_(alg.basis_product(i, j))
                rhs = acts[j] @ acts[i] if anti else acts[i] @ acts[j]
                col = lhs.first_difference(rhs)
                if col is not None:
                    return Verdict.fail(f"{side} action not associative", checks={**checks,
                                        f"{side}_associative": False},
                                        witnesses={"i": i, "j": j, "vector": col})
        checks[f"{side}_associative"] = True
    for i, l in enumerate(m.L):
        for j, r in enumerate(m.R):
            col = (l @ r).first_difference(r @ l)
            if col is not None:
                return Verdict.fail("actions do not commute", checks={**checks, "commute": False},
                                    witnesses={"i": i, "j": j, "vector": col})
    checks["commute"] = True
    return Verdict.ok(checks=checks)


def _validate_map(f: BimoduleMap) -> Verdict:
    s, t, m = f.source, f.target, f.matrix
    if s.left is not t.left and s.left.dim != t.left.dim:
        return Verdict.fail("left algebras differ")
    for i in range(len(s.L)):
        col = (m @ s.L[i]).first_difference(t.L[i] @ m)
        if col is not None:
            return Verdict.fail("not left linear", checks={"left_linear": False},
                                witnesses={"i": i, "vector": col})
    for j in range(len(s.R)):
        col = (m @ s.R[j]).first_difference(t.R[j] @ m)
        if col is not None:
            return Verdict.fail("not right linear", checks={"left_linear": True, "right_linear": False},
                                witnesses={"j": j, "vector": col})
    return Verdict.ok(checks={"left_linear": True, "right_linear": True})


def require_valid(obj, what: str = "") -> None:
    v = validate_presentation(obj)
    if not v:
        raise StructureError(f"{what or obj!r}: {v.reason}", v)


# ---------------------------------------------------------------------------
# tensor products over an algebra


class QuotientPresentation:
    """``M (x)_A N`` as a quotient of ``M (x)_k N`` by the balancing relations."""

    def __init__(self, m: Bimodule, n: Bimodule):
        if m.right is not n.left and not _same_algebra(m.right, n.left):
            raise StructureError(f"cannot tensor {m} with {n}: algebra mismatch")
        self.left_factor, self.right_factor = m, n
        field = m.field
        self.field = field
        dm, dn = m.dim, n.dim
        self.ambient = dm * dn
        if m.right.is_ground:
            rows, piv = [], []
        else:
            gens = []
            ltn = [ln.T for ln in n.L]
            for a in range(m.right.dim):
                ra = m.R[a].T.rows   # ra[i][k] = R_a[k][i]
                la = ltn[a].rows     # la[j][l] = L_a[l][j]
                for i in range(dm):
                    for j in range(dn):
                        v: dict = {}
                        for k, x in enumerate(ra[i]):
                            if x:
                                v[k * dn + j] = x
                        for l, y in enumerate(la[j]):
                            if y:
                                key = i * dn + l
                                v[key] = v.get(key, 0) - y
                        if field.characteristic:
                            v = {c: x % field.characteristic for c, x in v.items()
                                 if x % field.characteristic}
                        else:
                            v = {c: x for c, x in v.items() if x}
                        if v:
                            gens.append(v)
            rows, piv = rref_sparse(field, gens, self.ambient)
        self.relations = SubspaceBasis(field, self.ambient, rows, piv)
        pset = set(piv)
        self.free = tuple(j for j in range(self.ambient) if j not in pset)
        self.dim = len(self.free)
        pos = {f: t for t, f in enumerate(self.free)}
        pi = [[0] * self.ambient for _ in range(self.dim)]
        for f, t in pos.items():
            pi[t][f] = 1
        p = field.characteristic
        for row, c in zip(rows, piv):
            for f, x in row.items():
                if f != c:
                    pi[pos[f]][c] = (-x) % p if p else -x
        self.pi = Matrix(field, tuple(tuple(r) for r in pi), self.ambient, _trusted=True) \
            if self.dim else Matrix.zeros(field, 0, self.ambient)
        sig = [[0] * self.dim for _ in range(self.ambient)]
        for f, t in pos.items():
            sig[f][t] = 1
        self.sigma = Matrix(field, tuple(tuple(r) for r in sig), self.dim, _trusted=True)

    def __repr__(self):
        return f"Tensor({self.left_factor.name} (x) {self.right_factor.name}, dim={self.dim})"

    @cached_property
    def module(self) -> Bimodule:
        m, n = self.left_factor, self.right_factor
        im, inn = m.identity(), n.identity()
        L = [self.pi @ kron(x, inn) @ self.sigma for x in m.L]
        R = [self.pi @ kron(im, y) @ self.sigma for y in n.R]
        return Bimodule(m.left, n.right, self.dim, L, R,
                        name=f"{m.name}(x){n.name}")

    def element(self, u: Sequence, v: Sequence) -> tuple:
        """Class of ``u (x) v``."""
        return self.pi.apply([a * b for a in u for b in v])

    def descends(self, k_map: Matrix, target: "QuotientPresentation") -> bool:
        """True if ``k_map`` sends the relation subspace into the target relations."""
        if self.relations.dim == 0:
            return True
        img = target.pi @ k_map @ self.relations.inclusion()
        return img.is_zero()


def _same_algebra(a: AlgebraPresentation, b: AlgebraPresentation) -> bool:
    return a.field == b.field and a.dim == b.dim and a.mu == b.mu and a.unit == b.unit


_tensor_cache: dict = {}


def tensor(m: Bimodule, n: Bimodule) -> QuotientPresentation:
    """Cached ``M (x)_A N``."""
    key = (id(m), id(n))
    hit = _tensor_cache.get(key)
    if hit is not None and hit.left_factor is m and hit.right_factor is n:
        return hit
    q = QuotientPresentation(m, n)
    _tensor_cache[key] = q
    return q


def tensor_over_A(m: Bimodule, n: Bimodule) -> tuple[QuotientPresentation, Bimodule]:
    q = tensor(m, n)
    return q, q.module


def tensor_map(src: QuotientPresentation, dst: QuotientPresentation, f: Matrix, g: Matrix,
               check: bool = False) -> Matrix:
    """Matrix of ``f (x) g`` between tensor quotients."""
    k = kron(f, g)
    if check and not src.descends(k, dst):
        raise StructureError("map does not descend to the tensor product (not balanced)")
    return dst.pi @ k @ src.sigma


def induced_tensor_map(f: BimoduleMap, g: BimoduleMap, src: QuotientPresentation,
                       dst: QuotientPresentation) -> BimoduleMap:
    mat = tensor_map(src, dst, f.matrix, g.matrix, check=True)
    return BimoduleMap(src.module, dst.module, mat)


def associator(p: Bimodule, q: Bimodule, r: Bimodule) -> Matrix:
    """``(P (x) Q) (x) R -> P (x) (Q (x) R)``."""
    pq = tensor(p, q)
    qr = tensor(q, r)
    pq_r = tensor(pq.module, r)
    p_qr = tensor(p, qr.module)
    return (p_qr.pi @ kron(p.identity(), qr.pi) @ kron(pq.sigma, r.identity()) @ pq_r.sigma)


def left_action_map(n: Bimodule) -> Matrix:
    """``A (x)_k N -> N``, ``a (x) x -> a x``."""
    cols = []
    for a in range(n.left.dim):
        cols.extend(n.L[a].columns())
    # column order must be a*dimN + j
    return Matrix.from_columns(n.field, n.dim, cols) if cols else Matrix.zeros(n.field, n.dim, 0)


def right_action_map(m: Bimodule) -> Matrix:
    """``M (x)_k A -> M``, ``x (x) a -> x a``."""
    da = m.right.dim
    cols = [None] * (m.dim * da)
    for a in range(da):
        for j, c in enumerate(m.R[a].columns()):
            cols[j * da + a] = c
    return Matrix.from_columns(m.field, m.dim, cols) if cols else Matrix.zeros(m.field, m.dim, 0)


def left_unitor(n: Bimodule) -> Matrix:
    """``A (x)_A N -> N``."""
    return left_action_map(n) @ tensor(n.left.regular, n).sigma


def left_unitor_inv(n: Bimodule) -> Matrix:
    return tensor(n.left.regular, n).pi @ kron(n.left.unit_vector(), n.identity())


def right_unitor(m: Bimodule) -> Matrix:
    """``M (x)_A A -> M``."""
    return right_action_map(m) @ tensor(m, m.right.regular).sigma


def right_unitor_inv(m: Bimodule) -> Matrix:
    return tensor(m, m.right.regular).pi @ kron(m.identity(), m.right.unit_vector())


# ---------------------------------------------------------------------------
# radical, projectivity, faithfulness


def trace_form(a: AlgebraPresentation) -> Matrix:
    n = a.dim
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            m = a.left_mult_by(a.basis_product(i, j))
            s = sum(m.rows[t][t] for t in range(n))
            row.append(s)
        rows.append(row)
    return Matrix(a.field, rows, n)


def ideal_product(a: AlgebraPresentation, x: SubspaceBasis, y: SubspaceBasis) -> SubspaceBasis:
    vecs = [a.product(u, v) for u in x.vectors() for v in y.vectors()]
    return SubspaceBasis.span(a.field, a.dim, vecs)


def is_two_sided_ideal(a: AlgebraPresentation, i: SubspaceBasis) -> bool:
    for v in i.vectors():
        for k in range(a.dim):
            e = a.basis_vector(k)
            if not i.contains(a.product(e, v)) or not i.contains(a.product(v, e)):
                return False
    return True


def is_nilpotent_ideal(a: AlgebraPresentation, i: SubspaceBasis) -> bool:
    power = i
    for _ in range(a.dim + 1):
        if power.dim == 0:
            return True
        power = ideal_product(a, power, i)
    return power.dim == 0


def quotient_algebra(a: AlgebraPresentation, ideal: SubspaceBasis) -> tuple[AlgebraPresentation, Matrix]:
    """``A / I`` with the projection matrix (non-pivot coordinates)."""
    pset = set(ideal.pivots)
    free = [j for j in range(a.dim) if j not in pset]
    pm = quotient_projection(ideal)
    d = len(free)
    cols = []
    for i in free:
        for j in free:
            cols.append(pm.apply(a.basis_product(i, j)))
    if d == 0:
        mu = Matrix.zeros(a.field, 0, 0)
        return AlgebraPresentation(a.field, 0, mu, (), a.name + "/I"), pm
    mu = Matrix.from_columns(a.field, d, cols)
    return AlgebraPresentation(a.field, d, mu, pm.apply(a.unit), a.name + "/I"), pm


def _is_semisimple_by_trace(a: AlgebraPresentation) -> bool:
    return a.dim == 0 or rank(trace_form(a)) == a.dim


class RadicalUndecided(Exception):
    pass


def verify_radical_candidate(a: AlgebraPresentation, cand: SubspaceBasis) -> bool:
    """Sound test: nilpotent two-sided ideal with nondegenerate trace form on the quotient."""
    if not is_two_sided_ideal(a, cand) or not is_nilpotent_ideal(a, cand):
        return False
    q, _ = quotient_algebra(a, cand)
    return _is_semisimple_by_trace(q)


def jacobson_radical(a: AlgebraPresentation, candidate: SubspaceBasis | None = None) -> SubspaceBasis:
    """Basis of ``rad(A)``.

    In characteristic 0 this is the kernel of the trace form.  In
    characteristic ``p`` a nondegenerate trace form gives ``rad = 0``;
    otherwise the trace-form kernel or a supplied candidate is accepted only if
    it is a nilpotent ideal with trace-form-semisimple quotient.
    """
    tf = trace_form(a)
    ker = kernel(tf)
    if a.field.characteristic == 0:
        return ker
    if ker.dim == 0:
        return ker
    cands = [candidate] if candidate is not None else []
    if is_commutative(a):
        cands.append(_frobenius_nilradical(a))
    cands.append(ker)
    for cand in cands:
        if verify_radical_candidate(a, cand):
            return cand
    raise RadicalUndecided(f"radical of {a.name} undecided in characteristic {a.field.characteristic}")


def is_commutative(a: AlgebraPresentation) -> bool:
    return all(a.left_mult[i] == a.right_mult[i] for i in range(a.dim))


def element_power(a: AlgebraPresentation, x: Sequence, e: int) -> tuple:
    result, base = a.unit, tuple(x)
    while e:
        if e & 1:
            result = a.product(result, base)
        base = a.product(base, base)
        e >>= 1
    return result


def _frobenius_nilradical(a: AlgebraPresentation) -> SubspaceBasis:
    """For commutative ``A`` over GF(p) the p-th power map is linear; its
    iterated kernel is the set of nilpotents."""
    n = a.dim
    cols = []
    for i in range(n):
        cols.append(element_power(a, a.basis_vector(i), a.field.characteristic))
    frob = Matrix.from_columns(a.field, n, cols)
    power = frob
    for _ in range(n):
        power = power @ frob
    return kernel(power)


def is_semisimple(a: AlgebraPresentation) -> bool | None:
    try:
        return jacobson_radical(a).dim == 0
    except RadicalUndecided:
        return None


def _free_cover_section(m: Bimodule, side: str) -> tuple[Matrix | None, Matrix, MatrixEquationSystem]:
    """Solve for a module section of the free cover on the full basis of ``m``."""
    f = m.field
    if side == "left":
        a = m.left
        cover = left_action_map(Bimodule(a, ground(f), m.dim, m.L, (m.identity(),)))
        # free module A (x)_k M with A acting on the first factor
        acts_free = [kron(x, m.identity()) for x in a.left_mult]
        acts_m = m.L
    else:
        a = m.right
        cover = right_action_map(Bimodule(ground(f), a, m.dim, (m.identity(),), m.R))
        acts_free = [kron(m.identity(), x) for x in a.right_mult]
        acts_m = m.R
    n = m.dim * a.dim
    sys = MatrixEquationSystem(f, n, m.dim)
    for x, y in zip(acts_free, acts_m):
        # s y = x s
        sys.add([(Matrix.identity(f, n), y), (-1, x, m.identity())])
    sys.add([(cover, m.identity())], m.identity())
    return sys.solve(), cover, sys


def is_projective_module(m: Bimodule, side: str = "left") -> Verdict:
    """Projectivity of ``m`` as a one-sided module via a section of the free cover."""
    if m.dim == 0:
        return Verdict.ok(checks={"section": True},
                          witnesses={"section": Matrix.zeros(m.field, 0, 0)})
    s, cover, sys = _free_cover_section(m, side)
    if s is None:
        return Verdict.fail("free cover does not split", checks={"section": False},
                            witnesses={"certificate": sys.certificate()})
    return Verdict.ok(checks={"section": True}, witnesses={"section": s, "cover": cover})


def dual_basis(m: Bimodule, side: str = "right") -> tuple[list[tuple], list[Matrix]] | None:
    """Dual basis ``{(e_j, f_j)}`` for a projective module.

    For a right module, ``f_j`` is an ``A``-valued right linear functional
    (a ``dim A x dim M`` matrix) and ``m = sum_j e_j f_j(m)``.  For a left
    module, ``m = sum_j f_j(m) e_j``.
    """
    v = is_projective_module(m, side)
    if not v:
        return None
    s = v.witnesses["section"]
    da = m.right.dim if side == "right" else m.left.dim
    elems, funcs = [], []
    for j in range(m.dim):
        if side == "right":
            # s(m) = sum_j e_j (x) f_j(m): rows j*da + a
            fj = s.take_rows([j * da + a for a in range(da)])
        else:
            # s(m) = sum_j f_j(m) (x) e_j: rows a*dim + j
            fj = s.take_rows([a * m.dim + j for a in range(da)])
        elems.append(tuple(1 if k == j else 0 for k in range(m.dim)))
        funcs.append(fj)
    return elems, funcs


def faithfulness_report(w: Bimodule, side: str = "left", radical: SubspaceBasis | None = None) -> Verdict:
    """Complete faithfulness and faithful flatness of ``w`` as a one-sided module.

    Complete faithfulness is tested as injectivity of ``A/rad -> End(W/rad W)``.
    """
    a = w.left if side == "left" else w.right
    acts = w.L if side == "left" else w.R
    act = w.act_left if side == "left" else w.act_right
    try:
        rad = radical if radical is not None else jacobson_radical(a)
    except RadicalUndecided as e:
        return Verdict("undecided", checks={"completely_faithful": None, "faithfully_flat": None},
                       reason=str(e))
    f = w.field
    radw = SubspaceBasis.span(f, w.dim, [c for v in rad.vectors() for c in act(v).columns()])
    pset = set(radw.pivots)
    free = [j for j in range(w.dim) if j not in pset]
    # representation on W / rad W evaluated on the basis of A, vectorised
    sub = Matrix.from_columns(f, w.dim, [tuple(1 if k == j else 0 for k in range(w.dim)) for j in free]) \
        if free else Matrix.zeros(f, w.dim, 0)
    qp = quotient_projection(radw)
    cols = []
    for x in acts:
        img = qp @ x @ sub
        cols.append(tuple(e for r in img.rows for e in r))
    nvec = len(free) * len(free)
    rep = Matrix.from_columns(f, nvec, cols) if nvec else Matrix.zeros(f, 0, a.dim)
    ker = kernel(rep)
    cf = ker.dim == rad.dim
    witnesses = {"radical_dim": rad.dim, "kernel_dim": ker.dim}
    if not cf:
        witnesses["annihilating_element"] = next(v for v in ker.vectors() if not rad.contains(v))
    proj = bool(is_projective_module(w, side))
    checks = {"completely_faithful": cf, "projective": proj, "faithfully_flat": cf and proj}
    outcome = "verified" if cf and proj else "refuted"
    reason = "" if cf and proj else ("not completely faithful" if not cf else "not projective")
    return Verdict(outcome, checks, witnesses, reason=reason)


def quotient_projection(sub: SubspaceBasis) -> Matrix:
    """Projection ``k^n -> k^n / sub`` onto the non-pivot coordinates."""
    n = sub.ambient
    pset = set(sub.pivots)
    free = [j for j in range(n) if j not in pset]
    pos = {x: t for t, x in enumerate(free)}
    p = sub.field.characteristic
    rows = [[0] * n for _ in free]
    for x, t in pos.items():
        rows[t][x] = 1
    for row, c in zip(sub.rows, sub.pivots):
        for x, val in row.items():
            if x != c:
                rows[pos[x]][c] = (-val) % p if p else -val
    return Matrix(sub.field, rows, n) if free else Matrix.zeros(sub.field, 0, n)

