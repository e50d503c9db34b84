"""Decidable equivalence criteria between comodule categories and module categories."""

from __future__ import annotations

from typing import Sequence

from .algebra import (
    Bimodule, tensor, tensor_map, associator, left_unitor, left_unitor_inv, right_unitor,
    right_unitor_inv, right_action_map, is_projective_module, faithfulness_report,
)
from .cohom import FiniteComatrix, simple_summands, tensor_comodule
from .comodule import (
    Bicomodule, DualComodule, cotensor, hom_comodules, hom_basis_space, is_colinear,
    regular_comodule, regular_right,
)
from .coring import (
    CoringMorphism, BaseChange, associator_inverse, base_change_comparison,
    check_coring_morphism, coseparability_witness, is_coring_isomorphism,
    noncoseparability_certificate,
)
from .linalg import Matrix, kron, inverse, rank, solve_many
from .verdict import Verdict, StructureError, VERIFIED, REFUTED, UNDECIDED


def _is_iso(m: Matrix) -> bool:
    return m.nrows == m.ncols and inverse(m) is not None


# ---------------------------------------------------------------------------
# bicomodule certificates


class EquivalenceCertificate:
    """``X`` (``C``-``D``), ``Lam`` (``D``-``C``) with ``f: X []_D Lam -> C`` and ``g: Lam []_C X -> D``."""

    def __init__(self, x: Bicomodule, lam: Bicomodule, f: Matrix, g: Matrix):
        if x.left is not lam.right or x.right is not lam.left:
            raise StructureError("certificate: coring mismatch between X and Lam")
        self.x, self.lam, self.f, self.g = x, lam, f, g
        self.c, self.d = x.left, x.right
        self.xl = cotensor(x, lam)
        self.lx = cotensor(lam, x)
        if f.shape != (self.c.dim, self.xl.dim) or g.shape != (self.d.dim, self.lx.dim):
            raise StructureError("certificate maps have the wrong shape")


def _lift(j: Matrix, target: Matrix) -> Matrix | None:
    return solve_many(j, target)


def certificate_squares(cert: EquivalenceCertificate) -> tuple[bool, bool]:
    x, lam, c, d = cert.x, cert.lam, cert.c, cert.d
    xl, lx = cert.xl, cert.lx
    # Lam [] X [] Lam
    t1 = cotensor(lx.bicomodule, lam)
    flat1 = tensor_map(t1.ambient, tensor(lx.ambient.module, lam.module),
                       lx.inclusion, lam.identity()) @ t1.inclusion
    moved = associator(lam.module, x.module, lam.module) @ flat1
    j = tensor_map(tensor(lam.module, xl.module), tensor(lam.module, xl.ambient.module),
                   lam.identity(), xl.inclusion)
    y = _lift(j, moved)
    if y is None:
        ok1 = False
    else:
        via_f = right_unitor(lam.module) @ \
            tensor_map(lam.rt, tensor(lam.module, c.base.regular), lam.identity(), c.eps) @ \
            tensor_map(tensor(lam.module, xl.module), lam.rt, lam.identity(), cert.f) @ y
        via_g = left_unitor(lam.module) @ \
            tensor_map(lam.lt, tensor(d.base.regular, lam.module), d.eps, lam.identity()) @ \
            tensor_map(t1.ambient, lam.lt, cert.g, lam.identity()) @ t1.inclusion
        ok1 = via_f == via_g
    # X [] Lam [] X
    t2 = cotensor(xl.bicomodule, x)
    via_f = left_unitor(x.module) @ \
        tensor_map(x.lt, tensor(c.base.regular, x.module), c.eps, x.identity()) @ \
        tensor_map(t2.ambient, x.lt, cert.f, x.identity()) @ t2.inclusion
    flat2 = tensor_map(t2.ambient, tensor(xl.ambient.module, x.module),
                       xl.inclusion, x.identity()) @ t2.inclusion
    moved = associator(x.module, lam.module, x.module) @ flat2
    j = tensor_map(tensor(x.module, lx.module), tensor(x.module, lx.ambient.module),
                   x.identity(), lx.inclusion)
    y = _lift(j, moved)
    if y is None:
        ok2 = False
    else:
        via_g = right_unitor(x.module) @ \
            tensor_map(x.rt, tensor(x.module, d.base.regular), x.identity(), d.eps) @ \
            tensor_map(tensor(x.module, lx.module), x.rt, x.identity(), cert.g) @ y
        ok2 = via_f == via_g
    return ok1, ok2


def verify_certificate(cert: EquivalenceCertificate) -> Verdict:
    """Bicolinear isomorphisms ``f``, ``g`` plus both compatibility squares."""
    sides = ("left", "right")
    checks = {
        "f_bicolinear": is_colinear(cert.f, cert.xl.bicomodule, regular_comodule(cert.c), sides),
        "g_bicolinear": is_colinear(cert.g, cert.lx.bicomodule, regular_comodule(cert.d), sides),
        "f_bijective": _is_iso(cert.f),
        "g_bijective": _is_iso(cert.g),
    }
    s1, s2 = certificate_squares(cert)
    checks["square_1"] = s1
    checks["square_2"] = s2
    ledger = {}
    if cert.c.base.is_ground and cert.d.base.is_ground:
        ledger["side_conditions"] = "automatic (field base)"
    elif coseparability_witness(cert.c) and coseparability_witness(cert.d):
        ledger["side_conditions"] = "automatic (coseparable corings)"
    else:
        ledger["side_conditions"] = "not decided"
    v = Verdict.from_checks(checks, ledger=ledger)
    if not v:
        v.reason = v.reason.replace("square_1 fails", "square 1 fails").replace("square_2 fails", "square 2 fails")
    return v


# ---------------------------------------------------------------------------
# Sigma data


class SigmaData:
    """A right ``C``-comodule ``Sigma`` with left ``B``-action, finitely generated projective over ``A``.

    ``can: Sigma* (x)_B Sigma -> C`` is ``f (x) u -> f(u0) u1``, ``phi`` sends ``b``
    to left multiplication in ``End^C(Sigma)`` and ``upsilon(b) = sum_i b e_i (x) e_i*``.
    """

    def __init__(self, sigma: Bicomodule):
        self.sigma = sigma
        c = sigma.right
        self.coring = c
        self.base = sigma.module.left
        fld = sigma.field
        self.dual = DualComodule(sigma)
        self.comatrix = FiniteComatrix(sigma.module, check=False)
        if self.comatrix.functionals != self.dual.functionals:
            raise StructureError("functional bases disagree")
        fns = self.dual.functionals
        self.functionals = fns
        a = c.base
        n = sigma.dim
        # can on the k-space Sigma* (x) Sigma
        tac = tensor(a.regular, c.bimodule)
        lift_rho = sigma.rt.sigma @ sigma.rho
        lu = left_unitor(c.bimodule)
        blocks = [lu @ tac.pi @ kron(fn, c.identity()) @ lift_rho for fn in fns]
        self.can_k = Matrix.hstack(blocks) if blocks else Matrix.zeros(fld, c.dim, 0)
        lx = self.comatrix.context.lx
        self.can = self.can_k @ lx.ambient.sigma @ lx.inclusion
        amb = lx.ambient
        defect = self.can_k - self.can_k @ amb.sigma @ amb.pi
        self.can_well_defined = defect.is_zero()
        # evaluation Sigma* (x) Sigma -> A on the k-space
        ev_cols = [fn.col(u) for fn in fns for u in range(n)]
        self.ev_k = Matrix.from_columns(fld, a.dim, ev_cols) if ev_cols else Matrix.zeros(fld, a.dim, 0)
        # phi: B -> End^C(Sigma)
        self.end_basis = hom_comodules(sigma, sigma)
        space = hom_basis_space(self.end_basis, n, n, fld)
        cols = []
        for lb in sigma.module.L:
            x = space.coordinates([v for r in lb.rows for v in r])
            if x is None:
                raise StructureError("left action is not colinear")
            cols.append(x)
        self.phi = Matrix.from_columns(fld, len(self.end_basis), cols)
        # upsilon: B -> Sigma [] Sigma*
        self.sds = cotensor(sigma, self.dual.comodule)
        self.upsilon = self._upsilon()
        self.end_to_cotensor = self._end_iso()

    def _upsilon(self) -> Matrix:
        sds = self.sds
        fld = self.sigma.field
        cols = []
        for lb in self.sigma.module.L:
            acc = [0] * sds.ambient.dim
            for e, es in self.dual.dual_basis:
                v = sds.ambient.element(lb.apply(e), self.dual.element(es))
                acc = [p + q for p, q in zip(acc, v)]
            cols.append(tuple(fld(t) for t in acc))
        amb = Matrix.from_columns(fld, sds.ambient.dim, cols)
        try:
            return sds.kernel.coordinate_matrix(amb)
        except ValueError:
            raise StructureError("upsilon does not land in Sigma [] Sigma*")

    def _end_iso(self) -> Matrix:
        """``End^C(Sigma) -> Sigma [] Sigma*``, ``h -> sum_i h(e_i) (x) e_i*``."""
        sds = self.sds
        fld = self.sigma.field
        cols = []
        for h in self.end_basis:
            acc = [0] * sds.ambient.dim
            for e, es in self.dual.dual_basis:
                v = sds.ambient.element(h.apply(e), self.dual.element(es))
                acc = [p + q for p, q in zip(acc, v)]
            cols.append(tuple(fld(t) for t in acc))
        if not cols:
            return Matrix.zeros(fld, sds.dim, 0)
        return sds.kernel.coordinate_matrix(Matrix.from_columns(fld, sds.ambient.dim, cols))

    def can_morphism(self) -> CoringMorphism:
        return CoringMorphism(self.comatrix.coring, self.coring, self.can)

    def check(self) -> Verdict:
        checks = {"can_well_defined": self.can_well_defined}
        cm = check_coring_morphism(self.can_morphism())
        checks["can_coring_morphism"] = bool(cm)
        checks["upsilon_factors_through_phi"] = self.upsilon == self.end_to_cotensor @ self.phi
        return Verdict.from_checks(checks)


def can_and_phi(sigma: Bicomodule) -> SigmaData:
    pv = is_projective_module(sigma.module.forget_left(), "right")
    if not pv:
        raise StructureError(f"{sigma.name} is not projective over {sigma.right.base.name}", pv)
    sd = SigmaData(sigma)
    v = sd.check()
    if not v:
        raise StructureError(f"Sigma data invalid: {v.reason}", v)
    return sd


# ---------------------------------------------------------------------------
# adjunction probes


def unit_probe(sd: SigmaData, n: Bimodule) -> tuple[bool, bool]:
    """Commutation of the unit diagram at ``N`` and bijectivity of ``upsilon_N``."""
    sigma, dual = sd.sigma, sd.dual
    fld = sigma.field
    ns = tensor_comodule(n, sigma)
    target = cotensor(ns, dual.comodule)
    t_ns = tensor(n, sigma.module)
    cols = []
    for j in range(n.dim):
        nj = tuple(1 if k == j else 0 for k in range(n.dim))
        acc = [0] * target.ambient.dim
        for e, es in dual.dual_basis:
            v = target.ambient.element(t_ns.element(nj, e), dual.element(es))
            acc = [p + q for p, q in zip(acc, v)]
        cols.append(tuple(fld(t) for t in acc))
    direct = Matrix.from_columns(fld, target.ambient.dim, cols) if cols \
        else Matrix.zeros(fld, target.ambient.dim, 0)
    k = sd.sds.module
    t_nk = tensor(n, k)
    composite = associator_inverse(n, sigma.module, dual.module) @ \
        tensor_map(t_nk, tensor(n, sd.sds.ambient.module), n.identity(), sd.sds.inclusion) @ \
        tensor_map(tensor(n, sd.base.regular), t_nk, n.identity(), sd.upsilon) @ \
        right_unitor_inv(n)
    commutes = direct == composite
    try:
        coords = target.kernel.coordinate_matrix(direct)
    except ValueError:
        return commutes, False
    return commutes, _is_iso(coords)


def counit_probe(sd: SigmaData, m: Bicomodule) -> tuple[bool, bool]:
    """Commutation of the counit diagram at ``M`` and bijectivity of ``zeta_M``."""
    sigma, dual = sd.sigma, sd.dual
    km = cotensor(m, dual.comodule)
    t = tensor(km.module, sigma.module)
    spread = kron(km.ambient.sigma @ km.inclusion, sigma.identity())
    zeta_k = right_action_map(m.module) @ kron(m.identity(), sd.ev_k)
    zeta = zeta_k @ spread @ t.sigma
    well_defined = (zeta_k @ spread - zeta @ t.pi).is_zero()
    via_can = m.rt.pi @ kron(m.identity(), sd.can_k) @ spread @ t.sigma
    commutes = well_defined and m.rho @ zeta == via_can
    return commutes, _is_iso(zeta)


def unit_counit_probe(sd: SigmaData) -> bool:
    """``Sigma -> B (x) Sigma -> (Sigma [] Sigma*) (x) Sigma -> Sigma [] C`` equals ``rho_Sigma``."""
    sigma = sd.sigma
    k = sd.sds.module
    t_ks = tensor(k, sigma.module)
    step = tensor_map(tensor(sd.base.regular, sigma.module), t_ks, sd.upsilon, sigma.identity()) @ \
        left_unitor_inv(sigma.module)
    spread = kron(sd.sds.ambient.sigma @ sd.sds.inclusion, sigma.identity()) @ t_ks.sigma
    path = sigma.rt.pi @ kron(sigma.identity(), sd.can_k) @ spread @ step
    return path == sigma.rho


def default_samples(sd: SigmaData) -> tuple[list[Bimodule], list[Bicomodule]]:
    b = sd.base
    ns = [b.regular.forget_left()] + simple_summands(b)
    ms = [regular_right(sd.coring), _as_plain_right(sd.sigma)]
    return ns, ms


def _as_plain_right(s: Bicomodule) -> Bicomodule:
    from .comodule import _right_linear_only
    return _right_linear_only(s)


def adjunction_spotcheck(sd: SigmaData, n_samples: Sequence[Bimodule] | None = None,
                         m_samples: Sequence[Bicomodule] | None = None) -> Verdict:
    """Unit, counit and unit-counit diagrams on sample modules and comodules.

    ``checks`` holds the diagram commutations; bijectivity of the unit and
    counit components is recorded in ``witnesses``.
    """
    dn, dm = default_samples(sd)
    ns = dn if n_samples is None else list(n_samples)
    ms = dm if m_samples is None else list(m_samples)
    checks, bij = {}, {}
    for i, n in enumerate(ns):
        ok, iso = unit_probe(sd, n)
        checks[f"unit_diagram[N{i}]"] = ok
        bij[f"unit_bijective[N{i}]"] = iso
    for i, m in enumerate(ms):
        ok, iso = counit_probe(sd, m)
        checks[f"counit_diagram[M{i}]"] = ok
        bij[f"counit_bijective[M{i}]"] = iso
    checks["unit_counit_diagram"] = unit_counit_probe(sd)
    return Verdict.from_checks(checks, witnesses=bij)


def sigma_equivalence(sd: SigmaData, branch: str = "faithfully_flat",
                      n_samples: Sequence[Bimodule] | None = None,
                      m_samples: Sequence[Bicomodule] | None = None) -> Verdict:
    """Decide whether ``- (x)_B Sigma`` is an equivalence by the chosen criterion."""
    if branch not in ("faithfully_flat", "coseparable"):
        raise ValueError(f"unknown branch {branch!r}")
    c = sd.coring
    checks, witnesses, ledger = {}, {}, {}
    bsig = sd.sigma.module.forget_right()
    fr = faithfulness_report(bsig, "left")
    if branch == "coseparable":
        cw = coseparability_witness(c)
        checks["coseparable"] = cw is not None
        lp = is_projective_module(c.bimodule.forget_right(), "left")
        checks["left_projective"] = bool(lp)
        checks["completely_faithful"] = fr.checks.get("completely_faithful")
        if cw is not None:
            witnesses["coseparability_witness"] = cw.matrix
        else:
            witnesses["coseparability_certificate"] = noncoseparability_certificate(c)
    else:
        checks["completely_faithful"] = fr.checks.get("completely_faithful")
        checks["faithfully_flat"] = fr.checks.get("faithfully_flat")
        ledger["flatness"] = "decided as projectivity (finite dimension)"
    can_iso = _is_iso(sd.can)
    checks["can_bijective"] = can_iso
    if not can_iso:
        witnesses["can_rank"] = rank(sd.can)
        witnesses["can_shape"] = sd.can.shape
    for key in ("annihilating_element", "radical_dim", "kernel_dim"):
        if key in fr.witnesses:
            witnesses[key] = fr.witnesses[key]
    if fr.outcome == UNDECIDED:
        ledger["radical"] = fr.reason
    v = Verdict.from_checks(checks, witnesses=witnesses, ledger=ledger)
    witnesses["phi_bijective"] = _is_iso(sd.phi)
    spot = adjunction_spotcheck(sd, n_samples, m_samples)
    v.merge("spotcheck", spot)
    if not spot:
        v.outcome, v.reason = REFUTED, f"adjunction diagram fails: {spot.reason}"
    elif v.outcome == VERIFIED:
        bad = [k for k, ok in spot.witnesses.items() if not ok]
        if bad or not witnesses["phi_bijective"]:
            v.outcome = REFUTED
            v.reason = f"{bad[0] if bad else 'phi_bijective'} fails despite the criterion"
    return v


# ---------------------------------------------------------------------------
# induction along a coring morphism


def induction_equivalence(mor: CoringMorphism) -> Verdict:
    """Equivalence of ``- (x)_A B`` between comodule categories along ``(phi, rho): C -> D``,
    tested with the canonical comparison ``B C B -> D``."""
    mv = check_coring_morphism(mor)
    if not mv:
        return Verdict.fail(f"not a coring morphism: {mv.reason}", checks=mv.checks,
                            witnesses=mv.witnesses)
    bc = BaseChange(mor)
    omega = base_change_comparison(bc)
    omega_mor = CoringMorphism(bc.coring, mor.target, omega)
    iso = is_coring_isomorphism(omega_mor)
    b_over_a = mor.rho.target.regular.restrict(mor.rho, None).forget_right()
    checks = {"canonical_omega_iso": bool(iso)}
    ledger = {"omega": "canonical candidate only"}
    cos = coseparability_witness(mor.source) is not None and \
        coseparability_witness(mor.target) is not None
    if cos:
        ledger["projectivity"] = "dropped (both corings coseparable)"
    else:
        checks["projective"] = bool(is_projective_module(b_over_a, "left"))
    fr = faithfulness_report(b_over_a, "left")
    checks["completely_faithful"] = fr.checks.get("completely_faithful")
    witnesses = {"bcb_dim": bc.coring.dim, "target_dim": mor.target.dim, "omega_rank": rank(omega)}
    witnesses.update({f"omega.{k}": w for k, w in iso.witnesses.items()})
    v = Verdict.from_checks(checks, witnesses=witnesses, ledger=ledger)
    if v.outcome == REFUTED and not checks["canonical_omega_iso"]:
        v.reason = f"canonical omega is not a coring isomorphism ({iso.reason}); refuted (canonical)"
    return v
