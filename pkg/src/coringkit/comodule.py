"""Comodules, bicomodules and the cotensor product.

Every comodule is stored as a bicomodule.  A right ``C``-comodule whose
module carries an extra left action of ``B`` is a bicomodule over the trivial
``B``-coring on the left with the canonical coaction ``m -> 1 (x) m``; the
bicomodule compatibility law then says exactly that the coaction is left
``B``-linear.
"""

from __future__ import annotations

from functools import cached_property

from .algebra import (
    Bimodule, BimoduleMap, tensor, tensor_map, associator, left_unitor,
    left_unitor_inv, right_unitor, right_unitor_inv, validate_presentation,
    dual_basis, is_projective_module,
)
from .coring import Coring, trivial_coring, associator_inverse
from .linalg import (
    Matrix, MatrixEquationSystem, SubspaceBasis, kernel, kron_left_terms,
    kron_right_terms, solve_many, kron,
)
from .verdict import Verdict, StructureError


class Bicomodule:
    """``C'``-``C`` bicomodule: ``lam: M -> C' (x) M`` and ``rho: M -> M (x) C``."""

    def __init__(self, left: Coring, right: Coring, module: Bimodule,
                 lam: Matrix | None = None, rho: Matrix | None = None, name: str | None = None,
                 check: bool = True):
        if module.left is not left.base or module.right is not right.base:
            raise StructureError(f"{module.name}: module algebras do not match the corings")
        self.left, self.right, self.module = left, right, module
        self.name = name or module.name
        self.lt = tensor(left.bimodule, module)
        self.rt = tensor(module, right.bimodule)
        self.lam = left_unitor_inv(module) if lam is None else lam
        self.rho = right_unitor_inv(module) if rho is None else rho
        if self.lam.shape != (self.lt.dim, module.dim) or self.rho.shape != (self.rt.dim, module.dim):
            raise StructureError(f"{self.name}: coaction has the wrong shape")
        if check:
            v = check_comodule(self)
            if not v:
                raise StructureError(f"{self.name}: {v.reason}", v)

    def __repr__(self):
        return f"Bicomodule({self.name}: {self.left.name}-{self.right.name}, dim={self.dim})"

    @property
    def dim(self) -> int:
        return self.module.dim

    @property
    def field(self):
        return self.module.field

    def identity(self) -> Matrix:
        return self.module.identity()

    @property
    def left_is_trivial(self) -> bool:
        return self.left is trivial_coring(self.module.left)

    @property
    def right_is_trivial(self) -> bool:
        return self.right is trivial_coring(self.module.right)


def right_comodule(c: Coring, module: Bimodule, rho: Matrix, name: str | None = None,
                   check: bool = True) -> Bicomodule:
    """Right ``C``-comodule; any left action on ``module`` is kept as a trivial left coaction."""
    return Bicomodule(trivial_coring(module.left), c, module, None, rho, name, check)


def left_comodule(c: Coring, module: Bimodule, lam: Matrix, name: str | None = None,
                  check: bool = True) -> Bicomodule:
    return Bicomodule(c, trivial_coring(module.right), module, lam, None, name, check)


def regular_comodule(c: Coring) -> Bicomodule:
    """``C`` as a ``C``-``C``-bicomodule via ``delta`` on both sides."""
    return Bicomodule(c, c, c.bimodule, c.delta, c.delta, name=c.name)


def regular_right(c: Coring) -> Bicomodule:
    """``C`` as a right comodule with its left ``A``-action kept."""
    return right_comodule(c, c.bimodule, c.delta, name=c.name)


def regular_left(c: Coring) -> Bicomodule:
    return left_comodule(c, c.bimodule, c.delta, name=c.name)


# ---------------------------------------------------------------------------
# axioms


def _right_sides(m: Bicomodule):
    c = m.right
    mod = m.module
    lhs = tensor_map(m.rt, tensor(mod, c.cc.module), m.identity(), c.delta) @ m.rho
    rhs = associator(mod, c.bimodule, c.bimodule) @ \
        tensor_map(m.rt, tensor(m.rt.module, c.bimodule), m.rho, c.identity()) @ m.rho
    counit = right_unitor(mod) @ tensor_map(m.rt, tensor(mod, c.base.regular),
                                            m.identity(), c.eps) @ m.rho
    return lhs, rhs, counit


def _left_sides(m: Bicomodule):
    c = m.left
    mod = m.module
    lhs = tensor_map(m.lt, tensor(c.bimodule, m.lt.module), c.identity(), m.lam) @ m.lam
    rhs = associator(c.bimodule, c.bimodule, mod) @ \
        tensor_map(m.lt, tensor(c.cc.module, mod), c.delta, m.identity()) @ m.lam
    counit = left_unitor(mod) @ tensor_map(m.lt, tensor(c.base.regular, mod),
                                           c.eps, m.identity()) @ m.lam
    return lhs, rhs, counit


def check_comodule(m: Bicomodule) -> Verdict:
    """Module laws, both coaction laws and the bicomodule compatibility."""
    checks = {}
    mv = validate_presentation(m.module)
    checks["module"] = bool(mv)
    if not mv:
        return Verdict.fail(f"module: {mv.reason}", checks=checks, witnesses=mv.witnesses)
    for side, coact, t in (("right", m.rho, m.rt), ("left", m.lam, m.lt)):
        v = validate_presentation(BimoduleMap(m.module, t.module, coact))
        checks[f"{side}_coaction_linear"] = bool(v)
        if not v:
            return Verdict.fail(f"{side} coaction: {v.reason}", checks=checks, witnesses=v.witnesses)
    ident = m.identity()
    for side, sides in (("right", _right_sides), ("left", _left_sides)):
        if side == "left" and m.left_is_trivial and m.lam == left_unitor_inv(m.module):
            checks["left_counit"] = checks["left_coassociative"] = True
            continue
        if side == "right" and m.right_is_trivial and m.rho == right_unitor_inv(m.module):
            checks["right_counit"] = checks["right_coassociative"] = True
            continue
        lhs, rhs, counit = sides(m)
        j = counit.first_difference(ident)
        checks[f"{side}_counit"] = j is None
        if j is not None:
            return Verdict.fail("counit", checks=checks,
                                witnesses={"basis_vector": j, "side": side, "image": counit.col(j)})
        j = lhs.first_difference(rhs)
        checks[f"{side}_coassociative"] = j is None
        if j is not None:
            return Verdict.fail("coassociativity", checks=checks,
                                witnesses={"basis_vector": j, "side": side})
    lhs, rhs = compatibility_sides(m)
    j = lhs.first_difference(rhs)
    checks["compatible"] = j is None
    if j is not None:
        return Verdict.fail("coactions do not commute", checks=checks, witnesses={"basis_vector": j})
    return Verdict.ok(checks=checks)


def compatibility_sides(m: Bicomodule) -> tuple[Matrix, Matrix]:
    """``(C' (x) rho) lam`` and ``(lam (x) C) rho`` in ``C' (x) (M (x) C)``."""
    cl, cr, mod = m.left.bimodule, m.right.bimodule, m.module
    lhs = tensor_map(m.lt, tensor(cl, m.rt.module), m.left.identity(), m.rho) @ m.lam
    rhs = associator(cl, mod, cr) @ tensor_map(m.rt, tensor(m.lt.module, cr),
                                                m.lam, m.right.identity()) @ m.rho
    return lhs, rhs


# ---------------------------------------------------------------------------
# morphisms


def colinear_equations(m: Bicomodule, n: Bicomodule, sides=("right",)) -> MatrixEquationSystem:
    """Linear system for ``f: M -> N`` bimodule maps that are colinear on ``sides``."""
    f = m.field
    sys = MatrixEquationSystem(f, n.dim, m.dim)
    im, inn = m.identity(), n.identity()
    for x, y in zip(m.module.L, n.module.L):
        sys.add([(inn, x), (-1, y, im)])
    for x, y in zip(m.module.R, n.module.R):
        sys.add([(inn, x), (-1, y, im)])
    if "right" in sides:
        c = m.right
        if c is not n.right:
            raise StructureError("comodules over different corings")
        # (f (x) C) rho_M = rho_N f
        right = m.rt.sigma @ m.rho
        terms = [(-1, n.rho, im)]
        for p, q in kron_right_terms(f, c.dim, n.dim, m.dim):
            terms.append((n.rt.pi @ p, q @ right))
        sys.add(terms)
    if "left" in sides:
        c = m.left
        if c is not n.left:
            raise StructureError("comodules over different corings")
        left = m.lt.sigma @ m.lam
        terms = [(-1, n.lam, im)]
        for p, q in kron_left_terms(f, c.dim, n.dim, m.dim):
            terms.append((n.lt.pi @ p, q @ left))
        sys.add(terms)
    return sys


def _right_linear_only(b: Bicomodule) -> Bicomodule:
    """View a bicomodule as a plain right comodule (left action forgotten)."""
    mod = b.module.forget_left()
    return Bicomodule(trivial_coring(mod.left), b.right, mod, None,
                      tensor(mod, b.right.bimodule).pi @ b.rt.sigma @ b.rho, check=False)


def hom_comodules(m: Bicomodule, n: Bicomodule) -> list[Matrix]:
    """RREF basis of right ``C``-colinear, right ``A``-linear maps ``M -> N``.

    Left actions are ignored (they act on the Hom space instead, see
    :func:`hom_left_action`).
    """
    return colinear_equations(_right_linear_only(m), _right_linear_only(n)).solution_space()


def is_colinear(f: Matrix, m: Bicomodule, n: Bicomodule, sides=("right",)) -> bool:
    lhs_ok = True
    if "right" in sides:
        lhs = tensor_map(m.rt, n.rt, f, m.right.identity()) @ m.rho
        lhs_ok = lhs == n.rho @ f
    if lhs_ok and "left" in sides:
        lhs = tensor_map(m.lt, n.lt, m.left.identity(), f) @ m.lam
        lhs_ok = lhs == n.lam @ f
    return lhs_ok and bool(validate_presentation(BimoduleMap(m.module, n.module, f)))


def hom_basis_space(basis: list[Matrix], rows: int, cols: int, field) -> SubspaceBasis:
    return SubspaceBasis.span(field, rows * cols, [[x for r in b.rows for x in r] for b in basis])


# ---------------------------------------------------------------------------
# cotensor product


class CotensorPresentation:
    """``M []_C N`` as the kernel of ``omega`` inside ``M (x)_A N``."""

    def __init__(self, m: Bicomodule, n: Bicomodule):
        if m.right is not n.left:
            raise StructureError(f"cannot cotensor {m.name} with {n.name}: middle corings differ")
        self.m, self.n = m, n
        c = m.right
        self.coring = c
        self.ambient = tensor(m.module, n.module)
        mod_m, mod_n = m.module, n.module
        mcn = tensor(m.rt.module, mod_n)         # (M C) N
        self.mcn = mcn
        ik = Matrix.identity(m.field, mod_n.dim)
        a = kron(m.rho, ik)
        b = kron(m.rt.pi, ik) @ kron(mod_m.identity(), n.lt.sigma @ n.lam)
        self.omega = mcn.pi @ (a - b) @ self.ambient.sigma
        self.kernel = kernel(self.omega)
        self.inclusion = self.kernel.inclusion()

    def __repr__(self):
        return f"Cotensor({self.m.name} [] {self.n.name}, dim={self.dim})"

    @property
    def dim(self) -> int:
        return self.kernel.dim

    @cached_property
    def module(self) -> Bimodule:
        sub, _ = self.ambient.module.submodule(self.kernel, name=f"{self.m.name}[]{self.n.name}")
        return sub

    def coordinates(self, v) -> tuple:
        x = self.kernel.coordinates(v)
        if x is None:
            raise ValueError("vector is not in the cotensor product")
        return x

    @cached_property
    def left_coaction(self) -> Matrix:
        m, n = self.m, self.n
        d = m.left
        k = self.module
        if m.left_is_trivial and m.lam == left_unitor_inv(m.module):
            return left_unitor_inv(k)
        t_dk = tensor(d.bimodule, k)
        t_dmn = tensor(d.bimodule, self.ambient.module)
        comparison = tensor_map(t_dk, t_dmn, d.identity(), self.inclusion)
        target = associator(d.bimodule, m.module, n.module) @ \
            tensor_map(self.ambient, tensor(m.lt.module, n.module), m.lam, n.identity()) @ \
            self.inclusion
        sol = solve_many(comparison, target)
        if sol is None:
            raise StructureError("induced left coaction does not factor through the cotensor product")
        return sol

    @cached_property
    def right_coaction(self) -> Matrix:
        m, n = self.m, self.n
        d = n.right
        k = self.module
        if n.right_is_trivial and n.rho == right_unitor_inv(n.module):
            return right_unitor_inv(k)
        t_kd = tensor(k, d.bimodule)
        t_mnd = tensor(self.ambient.module, d.bimodule)
        comparison = tensor_map(t_kd, t_mnd, self.inclusion, d.identity())
        target = associator_inverse(m.module, n.module, d.bimodule) @ \
            tensor_map(self.ambient, tensor(m.module, n.rt.module), m.identity(), n.rho) @ \
            self.inclusion
        sol = solve_many(comparison, target)
        if sol is None:
            raise StructureError("induced right coaction does not factor through the cotensor product")
        return sol

    @cached_property
    def bicomodule(self) -> Bicomodule:
        """The cotensor product with its induced outer coactions (checked)."""
        return Bicomodule(self.m.left, self.n.right, self.module, self.left_coaction,
                          self.right_coaction, name=self.module.name)


_cotensor_cache: dict = {}


def cotensor(m: Bicomodule, n: Bicomodule) -> CotensorPresentation:
    key = (id(m), id(n))
    hit = _cotensor_cache.get(key)
    if hit is not None and hit.m is m and hit.n is n:
        return hit
    out = CotensorPresentation(m, n)
    _cotensor_cache[key] = out
    return out


def cotensor_map(f: Matrix, g: Matrix, src: CotensorPresentation, dst: CotensorPresentation) -> Matrix:
    """Restriction of ``f (x) g`` to the cotensor products."""
    img = tensor_map(src.ambient, dst.ambient, f, g) @ src.inclusion
    try:
        return dst.kernel.coordinate_matrix(img)
    except ValueError:
        raise StructureError("image escapes the target cotensor product (non-colinear input)")


def right_counit_iso(m: Bicomodule) -> tuple[CotensorPresentation, Matrix, Matrix]:
    """``M []_C C -> M`` via ``M (x) eps`` and its inverse given by ``rho``."""
    c = m.right
    reg = regular_comodule(c)
    ct = cotensor(m, reg)
    fwd = right_unitor(m.module) @ tensor_map(ct.ambient, tensor(m.module, c.base.regular),
                                              m.identity(), c.eps) @ ct.inclusion
    back = ct.kernel.coordinate_matrix(tensor(m.module, c.bimodule).pi @ m.rt.sigma @ m.rho)
    return ct, fwd, back


def left_counit_iso(n: Bicomodule) -> tuple[CotensorPresentation, Matrix, Matrix]:
    """``C []_C N -> N`` via ``eps (x) N`` and its inverse given by ``lam``."""
    c = n.left
    reg = regular_comodule(c)
    ct = cotensor(reg, n)
    fwd = left_unitor(n.module) @ tensor_map(ct.ambient, tensor(c.base.regular, n.module),
                                             c.eps, n.identity()) @ ct.inclusion
    back = ct.kernel.coordinate_matrix(n.lam)
    return ct, fwd, back


# ---------------------------------------------------------------------------
# duals


class DualComodule:
    """``S* = Hom_A(S, A)`` for a right comodule ``S`` finitely generated projective over ``A``.

    ``functionals[s]`` is the ``dim A x dim S`` matrix of the ``s``-th basis
    functional.  The result is a left ``C``-comodule with right ``B``-action,
    ``B`` being the extra left algebra of ``S``.
    """

    def __init__(self, s: Bicomodule, basis: list[tuple] | None = None):
        c = s.right
        a = c.base
        f = s.field
        smod = s.module
        self.source = s
        sys = MatrixEquationSystem(f, a.dim, s.dim)
        for x, y in zip(smod.R, a.right_mult):
            sys.add([(Matrix.identity(f, a.dim), x), (-1, y, Matrix.identity(f, s.dim))])
        self.functionals = sys.solution_space()
        self.space = hom_basis_space(self.functionals, a.dim, s.dim, f)
        d = len(self.functionals)
        self.dim = d

        def coords(mat: Matrix) -> tuple:
            x = self.space.coordinates([v for r in mat.rows for v in r])
            if x is None:
                raise StructureError("functional outside Hom_A(S, A)")
            return x

        self._coords = coords
        L = [Matrix.from_columns(f, d, [coords(y @ fn) for fn in self.functionals])
             if d else Matrix.zeros(f, 0, 0) for y in a.left_mult]
        R = [Matrix.from_columns(f, d, [coords(fn @ x) for fn in self.functionals])
             if d else Matrix.zeros(f, 0, 0) for x in smod.L]
        self.module = Bimodule(a, smod.left, d, L, R, name=f"{s.name}*")
        pv = is_projective_module(smod.forget_left(), "right")
        if not pv:
            raise StructureError(f"{s.name} is not projective over {a.name}", pv)
        if basis is None:
            elems, funcs = dual_basis(smod.forget_left(), "right")
            basis = list(zip(elems, funcs))
        self.dual_basis = basis
        self.comodule = left_comodule(c, self.module, self._coaction(), name=f"{s.name}*")

    def element(self, functional: Matrix) -> tuple:
        return self._coords(functional)

    def _coaction(self) -> Matrix:
        s = self.source
        c = s.right
        a = c.base
        f = s.field
        t_out = tensor(c.bimodule, self.module)
        t_ac = tensor(a.regular, c.bimodule)
        lu = left_unitor(c.bimodule)
        cols = []
        for fn in self.functionals:
            total = [0] * t_out.dim
            for e, ei_star in self.dual_basis:
                rho_e = s.rho.apply(e)
                ce = lu.apply(tensor_map(s.rt, t_ac, fn, c.identity()).apply(rho_e))
                star = self._coords(ei_star)
                v = t_out.element(ce, star)
                total = [x + y for x, y in zip(total, v)]
            cols.append(tuple(f(x) for x in total))
        if not cols:
            return Matrix.zeros(f, t_out.dim, 0)
        return Matrix.from_columns(f, t_out.dim, cols)


def dual_comodule(s: Bicomodule, basis: list[tuple] | None = None) -> Bicomodule:
    """Left ``C``-comodule ``S*``; ``basis`` optionally supplies another dual basis."""
    return DualComodule(s, basis).comodule
