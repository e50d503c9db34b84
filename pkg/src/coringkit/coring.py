"""Corings over finite-dimensional algebras, their morphisms and witnesses."""

from __future__ import annotations

from functools import cached_property, lru_cache
from typing import Sequence

from .algebra import (
    AlgebraMap, AlgebraPresentation, Bimodule, BimoduleMap, ground, tensor,
    tensor_map, associator, left_unitor, right_unitor, right_unitor_inv,
    left_action_map, right_action_map, validate_presentation,
)
from .linalg import (
    Field, Matrix, MatrixEquationSystem, kron, kron_left_terms, kron_right_terms,
    inverse, rank,
)
from .verdict import Verdict, StructureError


class Coring:
    """An ``A``-coring: bimodule ``C`` with ``delta: C -> C (x)_A C`` and ``eps: C -> A``."""

    def __init__(self, base: AlgebraPresentation, bimodule: Bimodule, delta: Matrix,
                 eps: Matrix, name: str = "C"):
        if bimodule.left is not base or bimodule.right is not base:
            raise StructureError("coring bimodule must be over the base algebra on both sides")
        self.base = base
        self.bimodule = bimodule
        self.cc = tensor(bimodule, bimodule)
        if delta.shape != (self.cc.dim, bimodule.dim):
            raise StructureError(f"delta must be {self.cc.dim}x{bimodule.dim}, got {delta.shape}")
        if eps.shape != (base.dim, bimodule.dim):
            raise StructureError(f"eps must be {base.dim}x{bimodule.dim}, got {eps.shape}")
        self.delta = delta
        self.eps = eps
        self.name = name

    def __repr__(self):
        return f"Coring({self.name} over {self.base.name}, dim={self.dim})"

    @property
    def dim(self) -> int:
        return self.bimodule.dim

    @property
    def field(self) -> Field:
        return self.base.field

    def identity(self) -> Matrix:
        return self.bimodule.identity()

    def with_maps(self, delta: Matrix | None = None, eps: Matrix | None = None) -> "Coring":
        return Coring(self.base, self.bimodule, self.delta if delta is None else delta,
                      self.eps if eps is None else eps, self.name)


# ---------------------------------------------------------------------------
# axioms


def coassociativity_sides(c: Coring) -> tuple[Matrix, Matrix]:
    """``(C (x) delta) delta`` and the associated ``(delta (x) C) delta``, both in ``C (x) (C (x) C)``."""
    m = c.bimodule
    ccm = c.cc.module
    lhs = tensor_map(c.cc, tensor(m, ccm), c.identity(), c.delta) @ c.delta
    rhs = associator(m, m, m) @ tensor_map(c.cc, tensor(ccm, m), c.delta, c.identity()) @ c.delta
    return lhs, rhs


def counit_sides(c: Coring) -> tuple[Matrix, Matrix]:
    """``(eps (x) C) delta`` and ``(C (x) eps) delta`` pushed into ``C``."""
    m = c.bimodule
    reg = c.base.regular
    left = left_unitor(m) @ tensor_map(c.cc, tensor(reg, m), c.eps, c.identity()) @ c.delta
    right = right_unitor(m) @ tensor_map(c.cc, tensor(m, reg), c.identity(), c.eps) @ c.delta
    return left, right


def check_coring(c: Coring) -> Verdict:
    """Exact check of the bimodule, counit and coassociativity laws."""
    checks = {}
    bv = validate_presentation(c.bimodule)
    checks["bimodule"] = bool(bv)
    if not bv:
        return Verdict.fail(f"bimodule: {bv.reason}", checks=checks, witnesses=bv.witnesses)
    for name, tgt, mat in (("delta_linear", c.cc.module, c.delta), ("eps_linear", c.base.regular, c.eps)):
        v = validate_presentation(BimoduleMap(c.bimodule, tgt, mat))
        checks[name] = bool(v)
        if not v:
            return Verdict.fail(f"{name}: {v.reason}", checks=checks, witnesses=v.witnesses)
    left, right = counit_sides(c)
    ident = c.identity()
    for side, m in (("left", left), ("right", right)):
        j = m.first_difference(ident)
        checks[f"counit_{side}"] = j is None
        if j is not None:
            return Verdict.fail("counit", checks=checks,
                                witnesses={"basis_vector": j, "side": side, "image": m.col(j)})
    lhs, rhs = coassociativity_sides(c)
    j = lhs.first_difference(rhs)
    checks["coassociative"] = j is None
    if j is not None:
        return Verdict.fail("coassociativity", checks=checks,
                            witnesses={"basis_vector": j, "lhs": lhs.col(j), "rhs": rhs.col(j)})
    return Verdict.ok(checks=checks)


def require_coring(c: Coring) -> Coring:
    v = check_coring(c)
    if not v:
        raise StructureError(f"{c.name}: {v.reason}", v)
    return c


# ---------------------------------------------------------------------------
# builders


@lru_cache(maxsize=None)
def trivial_coring(a: AlgebraPresentation) -> Coring:
    """``A`` with ``a -> a (x) 1`` and identity counit."""
    reg = a.regular
    return Coring(a, reg, right_unitor_inv(reg), Matrix.identity(a.field, a.dim), name=f"{a.name}")


def coalgebra(field: Field, dim: int, delta_k: Matrix, eps_k: Matrix, name: str = "C") -> Coring:
    """A k-coalgebra from ``delta_k`` (``dim^2 x dim``) and ``eps_k`` (``1 x dim``)."""
    k = ground(field)
    ident = Matrix.identity(field, dim)
    mod = Bimodule(k, k, dim, (ident,), (ident,), name)
    c = Coring(k, mod, tensor(mod, mod).pi @ delta_k, eps_k, name)
    return c


def matrix_coalgebra(field: Field, n: int) -> Coring:
    """Comatrix coalgebra with basis ``e_ij`` (index ``i*n + j``), ``e_ij -> sum_l e_il (x) e_lj``."""
    d = n * n
    cols = []
    for i in range(n):
        for j in range(n):
            v = [0] * (d * d)
            for l in range(n):
                v[(i * n + l) * d + l * n + j] = 1
            cols.append(v)
    delta = Matrix.from_columns(field, d * d, cols)
    eps = Matrix(field, [[1 if i == j else 0 for i in range(n) for j in range(n)]])
    return coalgebra(field, d, delta, eps, name=f"matrix{n}")


def grouplike_coalgebra(field: Field, size: int, name: str | None = None) -> Coring:
    cols = []
    for x in range(size):
        v = [0] * (size * size)
        v[x * size + x] = 1
        cols.append(v)
    delta = Matrix.from_columns(field, size * size, cols) if size else Matrix.zeros(field, 0, 0)
    eps = Matrix(field, [[1] * size], size)
    return coalgebra(field, size, delta, eps, name=name or f"grouplike{size}")


def divided_power_coalgebra(field: Field, n: int) -> Coring:
    """Dual of ``k[x]/(x^n)``: ``c_m -> sum_{i+j=m} c_i (x) c_j``."""
    cols = []
    for m in range(n):
        v = [0] * (n * n)
        for i in range(m + 1):
            v[i * n + (m - i)] = 1
        cols.append(v)
    delta = Matrix.from_columns(field, n * n, cols)
    eps = Matrix(field, [[1] + [0] * (n - 1)])
    return coalgebra(field, n, delta, eps, name=f"divided{n}")


def entwining_coring(a: AlgebraPresentation, c: Coring, psi: Matrix, name: str | None = None) -> Coring:
    """``A (x)_k C`` for a k-coalgebra ``C`` and ``psi: C (x) A -> A (x) C``.

    Basis index of ``a (x) c`` is ``a*dim(C) + c``.  The right action is
    ``(a (x) c) b = a psi(c (x) b)``, ``delta(a (x) c) = (a (x) c1) (x)_A (1 (x) c2)``
    and ``eps(a (x) c) = a eps_C(c)``.  The data are not assumed to be an
    entwining; the resulting coring is checked and a failure names the
    broken law.
    """
    if not c.base.is_ground:
        raise StructureError("entwining needs a coalgebra over the ground field")
    f = a.field
    n, d = a.dim, c.dim
    if psi.shape != (n * d, d * n):
        raise StructureError(f"psi must be {n * d}x{d * n}")
    ia, ic = Matrix.identity(f, n), Matrix.identity(f, d)
    L = [kron(x, ic) for x in a.left_mult]
    mu_c = kron(a.mu, ic)
    R = []
    for t in range(n):
        e = Matrix.unit_column(f, n, t)
        R.append(mu_c @ kron(ia, psi @ kron(ic, e)))
    mod = Bimodule(a, a, n * d, L, R, name or f"{a.name}(x){c.name}")
    bv = validate_presentation(mod)
    if not bv:
        raise StructureError(f"entwining: right action fails ({bv.reason})", bv)
    delta_c_k = c.cc.sigma @ c.delta
    delta_k = kron(ia, kron(ic, kron(a.unit_vector(), ic)) @ delta_c_k)
    cc = tensor(mod, mod)
    delta = cc.pi @ delta_k
    eps = kron(ia, c.eps)
    out = Coring(a, mod, delta, eps, mod.name)
    v = check_coring(out)
    if not v:
        raise StructureError(f"entwining: induced coring fails {v.reason}", v)
    return out


def opposite_coring(c: Coring) -> Coring:
    """The co-opposite coring over ``A^op``: same space, sides swapped, ``delta`` flipped."""
    aop = c.base.opposite()
    m = c.bimodule
    mod = Bimodule(aop, aop, m.dim, m.R, m.L, c.name + "^cop")
    d = m.dim
    perm = [j * d + i for i in range(d) for j in range(d)]
    flip = Matrix.identity(c.field, d * d).take_rows(perm)
    cc_op = tensor(mod, mod)
    delta = cc_op.pi @ flip @ c.cc.sigma @ c.delta
    return Coring(aop, mod, delta, c.eps, mod.name)


# ---------------------------------------------------------------------------
# coseparability and cosplitting


class CoseparabilityWitness:
    def __init__(self, coring: Coring, matrix: Matrix):
        self.coring, self.matrix = coring, matrix

    def __repr__(self):
        return f"CoseparabilityWitness({self.coring.name})"


def _colinearity_maps(c: Coring):
    """Maps needed to express bicolinearity of ``p: C (x) C -> C``."""
    m = c.bimodule
    ccm = c.cc.module
    t_cc_c = tensor(ccm, m)        # (C C) C
    t_c_cc = tensor(m, ccm)        # C (C C)
    delta_x_c = tensor_map(c.cc, t_cc_c, c.delta, c.identity())   # CC -> (CC)C
    c_x_delta = tensor_map(c.cc, t_c_cc, c.identity(), c.delta)   # CC -> C(CC)
    assoc = associator(m, m, m)                                   # (CC)C -> C(CC)
    return t_cc_c, t_c_cc, delta_x_c, c_x_delta, assoc


def associator_inverse(p: Bimodule, q: Bimodule, r: Bimodule) -> Matrix:
    """``P (x) (Q (x) R) -> (P (x) Q) (x) R``."""
    pq, qr = tensor(p, q), tensor(q, r)
    pq_r, p_qr = tensor(pq.module, r), tensor(p, qr.module)
    return pq_r.pi @ kron(pq.pi, r.identity()) @ kron(p.identity(), qr.sigma) @ p_qr.sigma


def _coseparability_system(c: Coring) -> MatrixEquationSystem:
    f = c.field
    m = c.bimodule
    q, d = c.cc.dim, c.dim
    ccm = c.cc.module
    t_cc_c, t_c_cc, delta_x_c, c_x_delta, assoc = _colinearity_maps(c)
    sys = MatrixEquationSystem(f, d, q)
    iq, idd = Matrix.identity(f, q), Matrix.identity(f, d)
    for x, y in zip(m.L, ccm.L):
        sys.add([(idd, y), (-1, x, iq)])
    for x, y in zip(m.R, ccm.R):
        sys.add([(idd, y), (-1, x, iq)])
    sys.add([(idd, c.delta)], idd)
    # delta p = (C (x) p) assoc (delta (x) C)
    rf = t_c_cc.sigma @ assoc @ delta_x_c
    sys.add([(c.delta, iq)] + [(-1, c.cc.pi @ pl, ql @ rf)
                               for pl, ql in kron_left_terms(f, d, d, q)])
    # delta p = (p (x) C) assoc^-1 (C (x) delta)
    rf2 = t_cc_c.sigma @ associator_inverse(m, m, m) @ c_x_delta
    sys.add([(c.delta, iq)] + [(-1, c.cc.pi @ pr, qr @ rf2)
                               for pr, qr in kron_right_terms(f, d, d, q)])
    return sys


def coseparability_witness(c: Coring) -> CoseparabilityWitness | None:
    """First solution (RREF tie-break) of the linear system for a bicolinear
    bimodule retraction ``p: C (x)_A C -> C`` of ``delta``."""
    sol = _coseparability_system(c).solve()
    return None if sol is None else CoseparabilityWitness(c, sol)


def noncoseparability_certificate(c: Coring):
    """Left-null vector proving no witness exists (``None`` if one does)."""
    return _coseparability_system(c).certificate()


def verify_coseparability_witness(c: Coring, p: Matrix) -> Verdict:
    """Re-check a candidate retraction by direct composition."""
    m = c.bimodule
    checks = {}
    checks["bimodule_map"] = bool(validate_presentation(BimoduleMap(c.cc.module, m, p)))
    checks["retraction"] = (p @ c.delta).is_identity()
    t_cc_c, t_c_cc, delta_x_c, c_x_delta, assoc = _colinearity_maps(c)
    lhs = c.delta @ p
    rhs1 = tensor_map(t_c_cc, c.cc, c.identity(), p) @ assoc @ delta_x_c
    rhs2 = tensor_map(t_cc_c, c.cc, p, c.identity()) @ associator_inverse(m, m, m) @ c_x_delta
    checks["left_colinear"] = lhs == rhs1
    checks["right_colinear"] = lhs == rhs2
    return Verdict.from_checks(checks)


def _cosplit_system(c: Coring) -> MatrixEquationSystem:
    f = c.field
    a = c.base
    n, d = a.dim, c.dim
    sys = MatrixEquationSystem(f, d, n)
    ia, idd = Matrix.identity(f, n), Matrix.identity(f, d)
    for x, y in zip(c.bimodule.L, a.left_mult):
        sys.add([(idd, y), (-1, x, ia)])
    for x, y in zip(c.bimodule.R, a.right_mult):
        sys.add([(idd, y), (-1, x, ia)])
    sys.add([(c.eps, ia)], ia)
    return sys


def cosplit_witness(c: Coring) -> BimoduleMap | None:
    """Bimodule section ``A -> C`` of the counit (RREF tie-break), or ``None``."""
    sol = _cosplit_system(c).solve()
    if sol is None:
        return None
    return BimoduleMap(c.base.regular, c.bimodule, sol)


def noncosplit_certificate(c: Coring):
    """Left-null vector proving the counit has no bimodule section."""
    return _cosplit_system(c).certificate()


# ---------------------------------------------------------------------------
# morphisms and base change


class CoringMorphism:
    """``(phi, rho)``: ``C -> D`` with ``rho: A -> B`` an algebra map and ``phi`` ``A``-bilinear."""

    def __init__(self, source: Coring, target: Coring, phi: Matrix, rho: AlgebraMap | None = None):
        if rho is None:
            if source.base is not target.base:
                raise StructureError("algebra map required when base algebras differ")
            rho = AlgebraMap.identity(source.base)
        if rho.source is not source.base or rho.target is not target.base:
            raise StructureError("algebra map does not match the coring bases")
        if phi.shape != (target.dim, source.dim):
            raise StructureError(f"phi must be {target.dim}x{source.dim}")
        self.source, self.target, self.phi, self.rho = source, target, phi, rho

    def __repr__(self):
        return f"CoringMorphism({self.source.name} -> {self.target.name})"

    @classmethod
    def identity(cls, c: Coring) -> "CoringMorphism":
        return cls(c, c, c.identity())

    @classmethod
    def counit(cls, c: Coring) -> "CoringMorphism":
        """``(eps_C, 1_A)``: ``C -> A``."""
        return cls(c, trivial_coring(c.base), c.eps)

    @cached_property
    def restricted_target(self) -> Bimodule:
        """``D`` viewed as an ``A``-bimodule through ``rho``."""
        return self.target.bimodule.restrict(self.rho, self.rho)

    def compose(self, other: "CoringMorphism") -> "CoringMorphism":
        """``self o other``."""
        return CoringMorphism(other.source, self.target, self.phi @ other.phi,
                              self.rho.compose(other.rho))


def check_coring_morphism(mor: CoringMorphism) -> Verdict:
    c, d = mor.source, mor.target
    checks = {}
    rv = mor.rho.check()
    checks["algebra_map"] = bool(rv)
    if not rv:
        return Verdict.fail(f"algebra map: {rv.reason}", checks=checks, witnesses=rv.witnesses)
    dres = mor.restricted_target
    lv = validate_presentation(BimoduleMap(c.bimodule, dres, mor.phi))
    checks["bilinear"] = bool(lv)
    if not lv:
        return Verdict.fail(f"phi: {lv.reason}", checks=checks, witnesses=lv.witnesses)
    lhs = d.eps @ mor.phi
    rhs = mor.rho.matrix @ c.eps
    j = lhs.first_difference(rhs)
    checks["counit_square"] = j is None
    if j is not None:
        return Verdict.fail("counit square", checks=checks, witnesses={"basis_vector": j})
    t_dd_a = tensor(dres, dres)
    # canonical surjection D (x)_A D -> D (x)_B D: both quotients of the same k-space
    omega = d.cc.pi @ t_dd_a.sigma
    lhs = d.delta @ mor.phi
    rhs = omega @ tensor_map(c.cc, t_dd_a, mor.phi, mor.phi) @ c.delta
    j = lhs.first_difference(rhs)
    checks["comultiplication_square"] = j is None
    if j is not None:
        return Verdict.fail("comultiplication square", checks=checks,
                            witnesses={"basis_vector": j, "lhs": lhs.col(j), "rhs": rhs.col(j)})
    return Verdict.ok(checks=checks)


def is_coring_isomorphism(mor: CoringMorphism) -> Verdict:
    v = check_coring_morphism(mor)
    inv = inverse(mor.phi) if mor.phi.nrows == mor.phi.ncols else None
    rinv = inverse(mor.rho.matrix) if mor.rho.matrix.nrows == mor.rho.matrix.ncols else None
    v.checks["bijective"] = inv is not None and rinv is not None
    if v and inv is None:
        return Verdict.fail("not bijective", checks=v.checks,
                            witnesses={"rank": rank(mor.phi), "source_dim": mor.source.dim,
                                       "target_dim": mor.target.dim})
    if v and rinv is None:
        return Verdict.fail("algebra map not bijective", checks=v.checks)
    return v


class BaseChange:
    """``B (x)_A C (x)_A B`` with its ``B``-coring structure."""

    def __init__(self, mor: CoringMorphism):
        c, rho = mor.source, mor.rho
        b = rho.target
        f = c.field
        self.morphism = mor
        b_a = b.regular.restrict(None, rho)    # B-A
        a_b = b.regular.restrict(rho, None)    # A-B
        self.t1 = tensor(b_a, c.bimodule)
        self.t2 = tensor(self.t1.module, a_b)
        tm = self.t2.module
        mod = Bimodule(b, b, tm.dim, tm.L, tm.R, f"{b.name}{c.name}{b.name}")
        nb, nc = b.dim, c.dim
        ib = Matrix.identity(f, nb)
        # projection from the k-space B C B and a lift back
        self.proj = self.t2.pi @ kron(self.t1.pi, ib)
        self.lift = kron(self.t1.sigma, ib) @ self.t2.sigma
        tt = tensor(mod, mod)
        u = b.unit_vector()
        dk = kron(kron(ib, c.cc.sigma @ c.delta), ib)           # B C C B
        ins = kron(kron(Matrix.identity(f, nb * nc), kron(u, u)), Matrix.identity(f, nc * nb))
        delta = tt.pi @ kron(self.proj, self.proj) @ ins @ dk @ self.lift
        eps_k = b.mu @ kron(b.mu, ib) @ kron(kron(ib, rho.matrix @ c.eps), ib)
        eps = eps_k @ self.lift
        self.coring = Coring(b, mod, delta, eps, mod.name)

    def element(self, bl: Sequence, cv: Sequence, br: Sequence) -> tuple:
        v = [x * y * z for x in bl for y in cv for z in br]
        return self.proj.apply(v)


def base_change_coring(mor: CoringMorphism) -> Coring:
    return BaseChange(mor).coring


def base_change_comparison(bc: BaseChange) -> Matrix:
    """``B C B -> D``, ``b (x) c (x) b' -> b phi(c) b'``."""
    mor = bc.morphism
    d = mor.target
    b = mor.rho.target
    f = d.field
    nb = b.dim
    ib = Matrix.identity(f, nb)
    act_l = left_action_map(d.bimodule)    # B (x) D -> D
    act_r = right_action_map(d.bimodule)   # D (x) B -> D
    k_map = act_r @ kron(act_l, ib) @ kron(kron(ib, mor.phi), ib)
    return k_map @ bc.lift
