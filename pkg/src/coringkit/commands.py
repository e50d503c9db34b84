"""Command dispatch: each command maps workspace objects to a verdict and a report."""

from __future__ import annotations

from .algebra import validate_presentation
from .cohom import (CoendCoring, FiniteComatrix, NotQuasiFinite, cosplit_biconditional,
                    is_injective_comodule, rational_module)
from .comodule import check_comodule, cotensor, hom_comodules
from .coring import (check_coring, check_coring_morphism, coseparability_witness, cosplit_witness,
                     noncoseparability_certificate, noncosplit_certificate,
                     verify_coseparability_witness)
from .equivalence import can_and_phi, default_samples, sigma_equivalence, verify_certificate, \
    induction_equivalence
from .graded import (comodule_to_graded, graded_coring, graded_hom, graded_induction_check,
                     graded_morita_check, graded_to_comodule)
from .instance import InstanceError, Workspace
from .linalg import CoefficientGuardError, Matrix, kron, naive_rref
from .report import Report
from .verdict import StructureError, Verdict

# command -> kinds of its positional objects (defaults: the last declared of each kind)
SIGNATURES: dict[str, tuple[str, ...]] = {
    "validate": (),
    "cotensor": ("comodule", "comodule"),
    "comatrix": ("bimodule",),
    "coend": ("comodule",),
    "cosep": ("coring",),
    "cosplit": ("coring",),
    "injective": ("comodule",),
    "equiv-cert": ("certificate",),
    "equiv-sigma": ("comodule",),
    "equiv-induction": ("morphism",),
    "graded-build": ("graded", "gset"),
    "graded-bridge": ("graded_module",),
    "graded-morita": ("bigraded",),
    "graded-induction": ("induction",),
}
COMMANDS = tuple(SIGNATURES)


class CommandError(ValueError):
    """Unknown command, arity mismatch or bad option."""


def resolve_objects(cmd: str, names: list[str], ws: Workspace) -> list[str]:
    kinds = SIGNATURES[cmd]
    if not kinds:
        if names:
            raise CommandError(f"{cmd} takes no object names, got {len(names)}")
        return []
    if names:
        if len(names) != len(kinds):
            raise CommandError(f"{cmd} takes {len(kinds)} object name(s), got {len(names)}")
        for n, k in zip(names, kinds):
            ws.get(n, k)
        return list(names)
    out = []
    for k in dict.fromkeys(kinds):
        out += ws.last(k, kinds.count(k))
    return out


def run_command(cmd: str, names: list[str], ws: Workspace, options: dict | None = None) -> Report:
    if cmd not in SIGNATURES:
        raise CommandError(f"unknown command {cmd!r}")
    options = dict(options or {})
    objs = resolve_objects(cmd, names, ws)
    info: dict = {}
    handler = _HANDLERS[cmd]
    try:
        verdict = handler(ws, objs, options, info)
    except NotQuasiFinite as e:
        verdict = Verdict("undecided", reason=f"hypotheses not met: {e}")
    except StructureError as e:
        verdict = Verdict("undecided", reason=f"construction not available: {e}")
    except CoefficientGuardError as e:
        verdict = Verdict("undecided", reason=f"coefficient guard: {e}")
    shown = {k: v for k, v in options.items() if v is not None and k != "witness"}
    return Report(cmd, ws.source, ws.field.name, tuple(objs), verdict, info, shown)


# ---------------------------------------------------------------------------
# handlers


def _validate(ws, objs, options, info):
    checks = {}
    for name, e in ws.entries.items():
        if e.kind == "comodule":
            v = check_comodule(e.obj)
        elif e.kind == "coring":
            v = check_coring(e.obj)
        elif e.kind == "morphism":
            v = check_coring_morphism(e.obj)
        elif e.kind in ("algebra", "bimodule"):
            v = validate_presentation(e.obj)
        else:
            v = Verdict.ok()
        checks[name] = v.outcome == "verified"
        info[f"{name}.kind"] = e.kind
    info["n_objects"] = len(ws)
    return Verdict.from_checks(checks)


def _naive_cotensor_dim(m, n) -> int:
    """Kernel dimension of ``rho (x) N - M (x) lam`` on ``M (x)_k N`` by textbook elimination
    (both modules over a field base only)."""
    f = m.field
    dm, dn = m.dim, n.dim
    rho_k = m.rt.sigma @ m.rho          # M -> M (x)_k C
    lam_k = n.lt.sigma @ n.lam          # N -> C (x)_k N
    a = kron(rho_k, Matrix.identity(f, dn)) - kron(Matrix.identity(f, dm), lam_k)
    _, piv = naive_rref(a)
    return dm * dn - len(piv)


def _cotensor(ws, objs, options, info):
    m, n = (ws.get(o) for o in objs)
    if m.right is not n.left:
        raise CommandError(f"{objs[0]} and {objs[1]} are not comodules over the same coring")
    cp = cotensor(m, n)
    info["dim"] = cp.dim
    info["ambient_dim"] = cp.ambient.dim
    checks = {"bicomodule": bool(check_comodule(cp.bicomodule))}
    if m.right.base.is_ground and m.module.right.is_ground:
        naive = _naive_cotensor_dim(m, n)
        info["naive_dim"] = naive
        checks["matches_naive_elimination"] = naive == cp.dim
    return Verdict.from_checks(checks)


def _comatrix(ws, objs, options, info):
    fc = FiniteComatrix(ws.get(objs[0]), check=False)
    v = fc.comatrix.check()
    info["dim"] = fc.coring.dim
    info["functionals"] = len(fc.functionals)
    v.merge("context", fc.context.check())
    v.merge("cosplit_biconditional", cosplit_biconditional(fc.context))
    return Verdict.from_checks(v.checks, witnesses=v.witnesses, ledger=v.ledger)


def _coend(ws, objs, options, info):
    ce = CoendCoring(ws.get(objs[0]))
    v = ce.verify()
    info["dim"] = ce.coring.dim
    return v


def _cosep(ws, objs, options, info):
    c = ws.get(objs[0])
    w = coseparability_witness(c)
    if w is None:
        return Verdict.fail("no coseparability witness exists", checks={"coseparable": False},
                            witnesses={"certificate": noncoseparability_certificate(c)})
    v = verify_coseparability_witness(c, w.matrix)
    v.checks = {"coseparable": True, **{f"reverify.{k}": x for k, x in v.checks.items()}}
    v.witnesses["matrix"] = w.matrix
    return Verdict.from_checks(v.checks, witnesses=v.witnesses)


def _cosplit(ws, objs, options, info):
    c = ws.get(objs[0])
    w = cosplit_witness(c)
    if w is None:
        return Verdict.fail("counit has no bimodule section", checks={"cosplit": False},
                            witnesses={"certificate": noncosplit_certificate(c)})
    ok = (c.eps @ w.matrix).is_identity() and bool(validate_presentation(w))
    return Verdict.from_checks({"cosplit": True, "reverify": ok}, witnesses={"section": w.matrix})


def _injective(ws, objs, options, info):
    m = ws.get(objs[0])
    v = is_injective_comodule(m)
    if m.right.base.is_ground:
        info["dual_algebra_dim"] = rational_module(m).left.dim
    return v


def _equiv_cert(ws, objs, options, info):
    cert = ws.get(objs[0])
    info["dim_x_cotensor_lam"] = cert.xl.dim
    info["dim_lam_cotensor_x"] = cert.lx.dim
    return verify_certificate(cert)


def _equiv_sigma(ws, objs, options, info):
    branch = options.get("branch") or "faithfully_flat"
    if branch not in ("faithfully_flat", "coseparable"):
        raise CommandError(f"equiv-sigma branch must be faithfully_flat or coseparable, got {branch!r}")
    sd = can_and_phi(ws.get(objs[0]))
    info["endomorphism_dim"] = sd.base.dim
    ns, ms = default_samples(sd)
    k = options.get("samples")
    if k is not None:
        ns, ms = ns[:k], ms[:k]
    info["n_samples"] = len(ns) + len(ms)
    return sigma_equivalence(sd, branch, ns, ms)


def _equiv_induction(ws, objs, options, info):
    return induction_equivalence(ws.get(objs[0]))


def _graded_build(ws, objs, options, info):
    ga, x = ws.get(objs[0]), ws.get(objs[1])
    c = graded_coring(ga, x)
    info["dim"] = c.dim
    checks = {"coring": bool(check_coring(c))}
    w = coseparability_witness(c)
    checks["coseparable"] = w is not None
    witnesses = {}
    if w is not None:
        checks["witness_reverified"] = bool(verify_coseparability_witness(c, w.matrix))
        witnesses["coseparability_witness"] = w.matrix
    else:
        witnesses["certificate"] = noncoseparability_certificate(c)
    return Verdict.from_checks(checks, witnesses=witnesses)


def _graded_bridge(ws, objs, options, info):
    gm = ws.get(objs[0])
    m = graded_to_comodule(gm)
    back = comodule_to_graded(m, gm.algebra, gm.gset)
    gh, ch = graded_hom(gm, gm), hom_comodules(m, m)
    info["graded_hom_dim"] = len(gh)
    info["comodule_hom_dim"] = len(ch)
    checks = {
        "comodule_valid": bool(check_comodule(m)),
        "round_trip_degrees": back.degrees == gm.degrees,
        "round_trip_action": back.module.R == gm.module.R,
        "hom_dims_equal": len(gh) == len(ch),
    }
    return Verdict.from_checks(checks)


def _graded_morita(ws, objs, options, info):
    return graded_morita_check(ws.get(objs[0]))


def _graded_induction(ws, objs, options, info):
    side = options.get("branch") or "right"
    if side not in ("right", "left"):
        raise CommandError(f"graded-induction branch must be right or left, got {side!r}")
    try:
        return graded_induction_check(ws.get(objs[0]), left=side == "left")
    except StructureError as e:
        raise InstanceError(f"induction data {objs[0]}: {e}") from None


_HANDLERS = {
    "validate": _validate, "cotensor": _cotensor, "comatrix": _comatrix, "coend": _coend,
    "cosep": _cosep, "cosplit": _cosplit, "injective": _injective, "equiv-cert": _equiv_cert,
    "equiv-sigma": _equiv_sigma, "equiv-induction": _equiv_induction,
    "graded-build": _graded_build, "graded-bridge": _graded_bridge,
    "graded-morita": _graded_morita, "graded-induction": _graded_induction,
}
