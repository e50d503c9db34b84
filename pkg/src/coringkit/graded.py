"""Group-graded algebras and modules, the coring ``A (x) kX`` and graded equivalence criteria.

Gradings are basis aligned: every basis vector is homogeneous.  Bigraded
bimodules follow ``A_g . P_{x,x'} . A'_{g'} in P_{x g^-1, x' g'}``, the
convention satisfied by ``A^ = A (x) kX`` with ``_x A^`` spanned by
``a (x) y`` where ``y deg(a)^-1 = x``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .algebra import (
    AlgebraPresentation, AlgebraMap, Bimodule, tensor, right_action_map, is_projective_module,
    validate_presentation,
)
from .cohom import cohom, cohom_left_coaction, omega_from_triangle
from .comodule import Bicomodule, cotensor, right_comodule
from .coring import (
    Coring, CoringMorphism, entwining_coring, grouplike_coalgebra, opposite_coring,
)
from .equivalence import EquivalenceCertificate, verify_certificate, induction_equivalence
from .comodule import regular_right
from .linalg import Matrix, MatrixEquationSystem, kernel, kron, inverse, rank
from .verdict import Verdict, StructureError


class FiniteGroup:
    def __init__(self, table: Sequence[Sequence[int]], name: str = "G"):
        self.table = tuple(tuple(r) for r in table)
        self.order = len(self.table)
        self.name = name
        n = self.order
        ids = [e for e in range(n) if all(self.table[e][g] == g and self.table[g][e] == g for g in range(n))]
        self.identity = ids[0] if ids else None
        self.inverse = tuple(next((h for h in range(n) if self.table[g][h] == self.identity), None)
                             for g in range(n))

    def mul(self, g: int, h: int) -> int:
        return self.table[g][h]

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        return cls([[(i + j) % n for j in range(n)] for i in range(n)], name=f"C{n}")

    @classmethod
    def trivial(cls) -> "FiniteGroup":
        return cls([[0]], name="1")


class GSet:
    """Right ``G``-set: ``action[x][g] = x g``."""

    def __init__(self, group: FiniteGroup, action: Sequence[Sequence[int]], name: str = "X"):
        self.group = group
        self.action = tuple(tuple(r) for r in action)
        self.size = len(self.action)
        self.name = name

    def act(self, x: int, g: int) -> int:
        return self.action[x][g]

    @classmethod
    def regular(cls, group: FiniteGroup) -> "GSet":
        return cls(group, group.table, name=group.name)

    @classmethod
    def point(cls, group: FiniteGroup) -> "GSet":
        return cls(group, [[0] * group.order], name="pt")


@dataclass
class GradedAlgebra:
    algebra: AlgebraPresentation
    group: FiniteGroup
    degrees: tuple

    def __post_init__(self):
        self.degrees = tuple(self.degrees)

    @property
    def field(self):
        return self.algebra.field

    def component(self, g: int) -> list[int]:
        return [i for i, d in enumerate(self.degrees) if d == g]


@dataclass
class GradedModule:
    """Right ``A``-module with ``X``-degrees on its basis."""
    module: Bimodule
    algebra: GradedAlgebra
    gset: GSet
    degrees: tuple
    name: str = "M"

    def __post_init__(self):
        self.degrees = tuple(self.degrees)


@dataclass
class BigradedBimodule:
    """``A``-``A'`` bimodule with bidegrees ``(x, x')`` on its basis."""
    module: Bimodule
    left: GradedAlgebra
    right: GradedAlgebra
    left_set: GSet
    right_set: GSet
    bidegrees: tuple
    name: str = "P"

    def __post_init__(self):
        self.bidegrees = tuple(tuple(d) for d in self.bidegrees)

    def row(self, x: int) -> list[int]:
        return [i for i, (r, _) in enumerate(self.bidegrees) if r == x]

    def column(self, x: int) -> list[int]:
        return [i for i, (_, c) in enumerate(self.bidegrees) if c == x]


# ---------------------------------------------------------------------------
# validation


def _support(v) -> list[int]:
    return [i for i, x in enumerate(v) if x]


def _validate_group(g: FiniteGroup) -> Verdict:
    n = g.order
    if any(len(r) != n or any(not 0 <= x < n for x in r) for r in g.table):
        return Verdict.fail("table is not a closed n x n table")
    if g.identity is None:
        return Verdict.fail("no identity element")
    for a in range(n):
        if g.inverse[a] is None:
            return Verdict.fail("missing inverse", witnesses={"element": a})
        for b in range(n):
            for c in range(n):
                if g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)):
                    return Verdict.fail("associativity", witnesses={"triple": (a, b, c)})
    return Verdict.ok()


def _validate_gset(x: GSet) -> Verdict:
    g = x.group
    vg = _validate_group(g)
    if not vg:
        return vg
    for p in range(x.size):
        if x.act(p, g.identity) != p:
            return Verdict.fail("identity acts nontrivially", witnesses={"x": p})
        for a in range(g.order):
            for b in range(g.order):
                if x.act(x.act(p, a), b) != x.act(p, g.mul(a, b)):
                    return Verdict.fail("action is not compatible with the product",
                                        witnesses={"x": p, "g": a, "h": b})
    return Verdict.ok()


def _validate_graded_algebra(ga: GradedAlgebra) -> Verdict:
    vg = _validate_group(ga.group)
    if not vg:
        return vg
    a, grp = ga.algebra, ga.group
    for i in range(a.dim):
        for j in range(a.dim):
            want = grp.mul(ga.degrees[i], ga.degrees[j])
            for k in _support(a.basis_product(i, j)):
                if ga.degrees[k] != want:
                    return Verdict.fail("A_g A_h not in A_gh",
                                        witnesses={"g": ga.degrees[i], "h": ga.degrees[j], "basis": (i, j)})
    for k in _support(a.unit):
        if ga.degrees[k] != grp.identity:
            return Verdict.fail("unit not in A_e", witnesses={"basis": k})
    return Verdict.ok()


def _validate_graded_module(gm: GradedModule) -> Verdict:
    v = _validate_graded_algebra(gm.algebra)
    if not v:
        return v
    v = _validate_gset(gm.gset)
    if not v:
        return v
    ga, x = gm.algebra, gm.gset
    for t, r in enumerate(gm.module.R):
        g = ga.degrees[t]
        for j in range(gm.module.dim):
            want = x.act(gm.degrees[j], g)
            for k in _support(r.col(j)):
                if gm.degrees[k] != want:
                    return Verdict.fail("M_x A_g not in M_xg", witnesses={"x": gm.degrees[j], "g": g})
    return Verdict.ok()


def _validate_bigraded(p: BigradedBimodule) -> Verdict:
    for part in (p.left, p.right):
        v = _validate_graded_algebra(part)
        if not v:
            return v
    for s in (p.left_set, p.right_set):
        v = _validate_gset(s)
        if not v:
            return v
    v = validate_presentation(p.module)
    if not v:
        return v
    gl = p.left.group
    for t, lm in enumerate(p.module.L):
        g = p.left.degrees[t]
        for j, (r, c) in enumerate(p.bidegrees):
            want = (p.left_set.act(r, gl.inverse[g]), c)
            for k in _support(lm.col(j)):
                if p.bidegrees[k] != want:
                    return Verdict.fail("left action breaks the bidegree", witnesses={"g": g, "basis": j})
    for t, rm in enumerate(p.module.R):
        g = p.right.degrees[t]
        for j, (r, c) in enumerate(p.bidegrees):
            want = (r, p.right_set.act(c, g))
            for k in _support(rm.col(j)):
                if p.bidegrees[k] != want:
                    return Verdict.fail("right action breaks the bidegree", witnesses={"g": g, "basis": j})
    return Verdict.ok()


def validate_graded(obj) -> Verdict:
    if isinstance(obj, FiniteGroup):
        return _validate_group(obj)
    if isinstance(obj, GSet):
        return _validate_gset(obj)
    if isinstance(obj, GradedAlgebra):
        return _validate_graded_algebra(obj)
    if isinstance(obj, GradedModule):
        return _validate_graded_module(obj)
    if isinstance(obj, BigradedBimodule):
        return _validate_bigraded(obj)
    raise TypeError(f"cannot validate {type(obj).__name__}")


def _require(obj, what: str):
    v = validate_graded(obj)
    if not v:
        raise StructureError(f"invalid {what}: {v.reason}", v)


# ---------------------------------------------------------------------------
# the coring A (x) kX


_coring_cache: dict = {}


def graded_coring(ga: GradedAlgebra, x: GSet) -> Coring:
    """``A (x) kX`` from the entwining ``x (x) a_g -> a_g (x) x g``; basis ``a*|X| + x``."""
    key = (id(ga), id(x))
    hit = _coring_cache.get(key)
    if hit is not None and hit[0] is ga and hit[1] is x:
        return hit[2]
    _require(ga, "graded algebra")
    _require(x, "G-set")
    if x.group is not ga.group:
        raise StructureError("G-set and algebra are graded by different groups")
    a = ga.algebra
    f = a.field
    n, d = a.dim, x.size
    cols = []
    for p in range(d):
        for b in range(n):
            v = [0] * (n * d)
            v[b * d + x.act(p, ga.degrees[b])] = 1
            cols.append(v)
    psi = Matrix.from_columns(f, n * d, cols)
    c = entwining_coring(a, grouplike_coalgebra(f, d, name=f"k{x.name}"), psi,
                         name=f"{a.name}(x)k{x.name}")
    _coring_cache[key] = (ga, x, c)
    return c


def _unit_tensor(ga: GradedAlgebra, d: int, p: int) -> tuple:
    """Coordinates of ``1 (x) x_p`` in ``A (x) kX``."""
    v = [0] * (ga.algebra.dim * d)
    for i, u in enumerate(ga.algebra.unit):
        v[i * d + p] = u
    return tuple(v)


def graded_to_comodule(gm: GradedModule) -> Bicomodule:
    """``rho(m_x) = m_x (x) (1 (x) x)``."""
    _require(gm, "graded module")
    c = graded_coring(gm.algebra, gm.gset)
    mod = gm.module
    rt = tensor(mod, c.bimodule)
    d = gm.gset.size
    cols = []
    for j in range(mod.dim):
        e = tuple(1 if k == j else 0 for k in range(mod.dim))
        cols.append(rt.element(e, _unit_tensor(gm.algebra, d, gm.degrees[j])))
    rho = Matrix.from_columns(mod.field, rt.dim, cols) if cols else Matrix.zeros(mod.field, rt.dim, 0)
    return right_comodule(c, mod, rho, name=gm.name)


def _flatten_coaction(m: Bicomodule, d: int) -> Matrix:
    """``M (x)_A (A (x) kX) -> M (x) kX`` composed with ``rho``; row ``j*|X| + x``."""
    act = right_action_map(m.module)
    return kron(act, Matrix.identity(m.field, d)) @ m.rt.sigma @ m.rho


def comodule_to_graded(m: Bicomodule, ga: GradedAlgebra, x: GSet, name: str | None = None) -> GradedModule:
    """Read degrees off the coaction; fails unless each basis vector is homogeneous."""
    if m.right is not graded_coring(ga, x):
        raise StructureError("comodule is not over the graded coring")
    d = x.size
    flat = _flatten_coaction(m, d)
    degrees = []
    for j in range(m.dim):
        col = flat.col(j)
        hits = [(i // d, i % d) for i, v in enumerate(col) if v]
        if not hits or any(r != j for r, _ in hits) or len({p for _, p in hits}) != 1 \
                or any(col[i] != 1 for i, v in enumerate(col) if v):
            raise StructureError(f"coaction not diagonal on basis vector {j}: not in the image of the graded category")
        degrees.append(hits[0][1])
    gm = GradedModule(m.module, ga, x, tuple(degrees), name=name or m.name)
    _require(gm, "graded module")
    return gm


def graded_comodule_bridge(obj, ga: GradedAlgebra | None = None, x: GSet | None = None):
    """Translate a graded module into a comodule over ``A (x) kX`` or back."""
    if isinstance(obj, GradedModule):
        return graded_to_comodule(obj)
    if ga is None or x is None:
        raise ValueError("graded algebra and G-set needed for the comodule direction")
    return comodule_to_graded(obj, ga, x)


def graded_hom(m: GradedModule, n: GradedModule) -> list[Matrix]:
    """Degree preserving right ``A``-linear maps ``M -> N``."""
    f = m.module.field
    sys = MatrixEquationSystem(f, n.module.dim, m.module.dim)
    im, inn = m.module.identity(), n.module.identity()
    for x_, y_ in zip(m.module.R, n.module.R):
        sys.add([(inn, x_), (-1, y_, im)])
    for i in range(n.module.dim):
        for j in range(m.module.dim):
            if n.degrees[i] != m.degrees[j]:
                sys.add([(Matrix.unit_row(f, n.module.dim, i), Matrix.unit_column(f, m.module.dim, j))])
    return sys.solution_space()


# ---------------------------------------------------------------------------
# bigraded bimodules as bicomodules


def bigraded_to_bicomodule(p: BigradedBimodule) -> Bicomodule:
    """``lam(p) = (1 (x) x) (x) p`` on ``_x P`` and ``rho(p) = p (x) (1 (x) x')`` on ``P_x'``."""
    _require(p, "bigraded bimodule")
    c = graded_coring(p.left, p.left_set)
    d = graded_coring(p.right, p.right_set)
    mod = p.module
    lt = tensor(c.bimodule, mod)
    rt = tensor(mod, d.bimodule)
    lcols, rcols = [], []
    for j, (r, col) in enumerate(p.bidegrees):
        e = tuple(1 if k == j else 0 for k in range(mod.dim))
        lcols.append(lt.element(_unit_tensor(p.left, p.left_set.size, r), e))
        rcols.append(rt.element(e, _unit_tensor(p.right, p.right_set.size, col)))
    f = mod.field
    lam = Matrix.from_columns(f, lt.dim, lcols)
    rho = Matrix.from_columns(f, rt.dim, rcols)
    return Bicomodule(c, d, mod, lam, rho, name=p.name)


def hat_bimodule(ga: GradedAlgebra, x: GSet) -> BigradedBimodule:
    """``A^ = A (x) kX`` with ``A^_y = A (x) ky`` and ``_x A^`` as described in the module docstring."""
    c = graded_coring(ga, x)
    grp = ga.group
    bideg = []
    for a in range(ga.algebra.dim):
        for y in range(x.size):
            bideg.append((x.act(y, grp.inverse[ga.degrees[a]]), y))
    return BigradedBimodule(c.bimodule, ga, ga, x, x, tuple(bideg), name=f"{ga.algebra.name}^")


def _projection(p: BigradedBimodule, idx: list[int]) -> Matrix:
    f = p.module.field
    n = p.module.dim
    keep = set(idx)
    return Matrix(f, [[1 if (i == j and i in keep) else 0 for j in range(n)] for i in range(n)])


def _coordinates_in(basis: list[Matrix], mats: list[Matrix], n_rows: int, n_cols: int, f) -> Matrix | None:
    from .comodule import hom_basis_space
    space = hom_basis_space(basis, n_rows, n_cols, f)
    cols = []
    for m in mats:
        x = space.coordinates([v for r in m.rows for v in r])
        if x is None:
            return None
        cols.append(x)
    return Matrix.from_columns(f, len(basis), cols)


def _map_report(label: str, m: Matrix | None, source_dim: int) -> tuple[dict, dict]:
    checks, wit = {}, {}
    if m is None:
        checks[f"{label}_well_defined"] = False
        return checks, wit
    r = rank(m)
    injective = r == source_dim
    surjective = r == m.nrows
    checks[f"{label}_injective"] = injective
    checks[f"{label}_surjective"] = surjective
    if not injective:
        wit[f"{label}_kernel_vector"] = kernel(m).vectors()[0]
    return checks, wit


def graded_morita_check(p: BigradedBimodule, cross_check: bool = True) -> Verdict:
    """Inverse equivalence criterion for ``- (x)^_A P``: projective components, ``psi`` and
    ``psi'`` bijective.  Optionally cross-checked through a bicomodule certificate."""
    _require(p, "bigraded bimodule")
    mod = p.module
    f = mod.field
    n = mod.dim
    checks, wit, ledger = {}, {}, {}
    for xr in range(p.left_set.size):
        idx = p.row(xr)
        sub = _restrict_right(mod, idx)
        checks[f"row_{xr}_projective"] = bool(is_projective_module(sub, "right")) if sub else True
    for xc in range(p.right_set.size):
        idx = p.column(xc)
        sub = _restrict_left(mod, idx)
        checks[f"column_{xc}_projective"] = bool(is_projective_module(sub, "left")) if sub else True
    # HOM(P_A', P): right A'-linear, column preserving; HOM(_A P, P): left A-linear, row preserving
    end_right = _graded_endos(p, "right")
    end_left = _graded_endos(p, "left")
    d_left, d_right = p.left_set.size, p.right_set.size
    psi_imgs = []
    for a in range(p.left.algebra.dim):
        for xr in range(d_left):
            psi_imgs.append(mod.L[a] @ _projection(p, p.row(xr)))
    psi_p_imgs = []
    for a in range(p.right.algebra.dim):
        for xc in range(d_right):
            psi_p_imgs.append(mod.R[a] @ _projection(p, p.column(xc)))
    psi = _coordinates_in(end_right, psi_imgs, n, n, f)
    psi_p = _coordinates_in(end_left, psi_p_imgs, n, n, f)
    c1, w1 = _map_report("psi", psi, len(psi_imgs))
    c2, w2 = _map_report("psi_prime", psi_p, len(psi_p_imgs))
    checks.update(c1)
    checks.update(c2)
    wit.update(w1)
    wit.update(w2)
    v = Verdict.from_checks(checks, witnesses=wit, ledger=ledger)
    if cross_check:
        cv = _certificate_route(p)
        v.merge("certificate_route", cv)
        v.checks["routes_agree"] = (cv.outcome == v.outcome)
        if cv.outcome != v.outcome and v.outcome != "undecided":
            v.outcome = "undecided"
            v.reason = f"criterion and certificate routes disagree ({cv.reason or 'verified'})"
    return v


def _restrict_right(mod: Bimodule, idx: list[int]) -> Bimodule | None:
    if not idx:
        return None
    from .linalg import SubspaceBasis
    f = mod.field
    sub = SubspaceBasis.span(f, mod.dim, [tuple(1 if k == i else 0 for k in range(mod.dim)) for i in idx])
    out, _ = mod.forget_left().submodule(sub)
    return out


def _restrict_left(mod: Bimodule, idx: list[int]) -> Bimodule | None:
    if not idx:
        return None
    from .linalg import SubspaceBasis
    f = mod.field
    sub = SubspaceBasis.span(f, mod.dim, [tuple(1 if k == i else 0 for k in range(mod.dim)) for i in idx])
    out, _ = mod.forget_right().submodule(sub)
    return out


def _graded_endos(p: BigradedBimodule, side: str) -> list[Matrix]:
    mod = p.module
    f = mod.field
    n = mod.dim
    sys = MatrixEquationSystem(f, n, n)
    ident = mod.identity()
    acts = mod.R if side == "right" else mod.L
    for r in acts:
        sys.add([(ident, r), (-1, r, ident)])
    pos = 1 if side == "right" else 0
    for i in range(n):
        for j in range(n):
            if p.bidegrees[i][pos] != p.bidegrees[j][pos]:
                sys.add([(Matrix.unit_row(f, n, i), Matrix.unit_column(f, n, j))])
    return sys.solution_space()


def _certificate_route(p: BigradedBimodule) -> Verdict:
    """``P`` as a bicomodule, ``Q = h(P, A' (x) kX')`` and the maps of its comatrix context."""
    try:
        pb = bigraded_to_bicomodule(p)
        cc = cohom(pb, regular_right(pb.right), override=True)
        q = cohom_left_coaction(cc)
        qp = cotensor(q, pb)
        psi = qp.kernel.coordinate_matrix(cc.theta)
        omega = omega_from_triangle(pb, q, psi)
    except (StructureError, ValueError) as e:
        return Verdict.fail(f"no certificate: {e}")
    g = inverse(psi) if psi.nrows == psi.ncols else None
    if g is None:
        return Verdict.fail("unit of the cohom context is not invertible",
                            witnesses={"rank": rank(psi), "shape": psi.shape})
    cert = EquivalenceCertificate(pb, q, omega, g)
    v = verify_certificate(cert)
    v.ledger["cohom_base"] = "override (coring coseparable)"
    return v


# ---------------------------------------------------------------------------
# induction along graded data


@dataclass
class GradedInductionData:
    source: GradedAlgebra
    target: GradedAlgebra
    source_set: GSet
    target_set: GSet
    group_map: tuple          # f: G -> G'
    set_map: tuple            # phi: X -> X'
    alpha: Matrix             # A -> A'


def _check_induction_data(data: GradedInductionData) -> None:
    for obj, what in ((data.source, "source algebra"), (data.target, "target algebra"),
                      (data.source_set, "source G-set"), (data.target_set, "target G-set")):
        _require(obj, what)
    g, g2 = data.source.group, data.target.group
    fm, pm = data.group_map, data.set_map
    for a in range(g.order):
        for b in range(g.order):
            if fm[g.mul(a, b)] != g2.mul(fm[a], fm[b]):
                raise StructureError(f"group map is not a homomorphism at ({a}, {b})")
    for x in range(data.source_set.size):
        for a in range(g.order):
            if pm[data.source_set.act(x, a)] != data.target_set.act(pm[x], fm[a]):
                raise StructureError(f"set map is not equivariant at x={x}, g={a}")
    am = AlgebraMap(data.source.algebra, data.target.algebra, data.alpha)
    av = am.check()
    if not av:
        raise StructureError(f"alpha: {av.reason}", av)
    for i in range(data.source.algebra.dim):
        want = fm[data.source.degrees[i]]
        for k in _support(data.alpha.col(i)):
            if data.target.degrees[k] != want:
                raise StructureError(f"alpha is not degree compatible on basis vector {i}")


def graded_coring_morphism(data: GradedInductionData, left: bool = False) -> CoringMorphism:
    """``(alpha (x) gamma, alpha): A (x) kX -> A' (x) kX'``; with ``left`` the same map between
    the co-opposite corings (left comodules)."""
    _check_induction_data(data)
    c = graded_coring(data.source, data.source_set)
    d = graded_coring(data.target, data.target_set)
    f = c.field
    nx, nx2 = data.source_set.size, data.target_set.size
    gamma = Matrix(f, [[1 if data.set_map[x] == y else 0 for x in range(nx)] for y in range(nx2)])
    phi = kron(data.alpha, gamma)
    if left:
        c, d = opposite_coring(c), opposite_coring(d)
    rho = AlgebraMap(c.base, d.base, data.alpha)
    return CoringMorphism(c, d, phi, rho)


def graded_induction_check(data: GradedInductionData, left: bool = False) -> Verdict:
    v = induction_equivalence(graded_coring_morphism(data, left))
    v.ledger["side"] = "left graded modules (co-opposite corings)" if left else "right graded modules"
    return v
