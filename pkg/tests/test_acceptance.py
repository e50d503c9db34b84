"""The ten acceptance criteria, one test each; a pass/fail line per criterion is printed at the
end of the session (and by running this file directly)."""

import os
import random
import subprocess
import sys
from pathlib import Path

import pytest

from coringkit.cohom import CoendCoring, CohomPresentation, FiniteComatrix, cohom, delta_iso, triangle_identities
from coringkit.comodule import cotensor, hom_comodules, regular_right
from coringkit.coring import (CoringMorphism, coseparability_witness, cosplit_witness,
                              matrix_coalgebra, trivial_coring, verify_coseparability_witness)
from coringkit.equivalence import adjunction_spotcheck, can_and_phi, induction_equivalence, sigma_equivalence
from coringkit.graded import comodule_to_graded, graded_coring, graded_hom, graded_to_comodule
from coringkit.algebra import upper_triangular
from coringkit.linalg import QQ

from generators import (column_comodule, column_module, comatrix_contexts, nonfaithful_module,
                        random_c2_graded_module)
from oracles import naive_cotensor_dim, omega_section_exists, textbook_tensor_dim

RESULTS: dict[int, tuple[bool, str, str]] = {}
CRITERIA = {}
HERE = Path(__file__).resolve().parent


def criterion(number, title):
    def register(fn):
        CRITERIA[number] = (title, fn)
        return fn
    return register


@criterion(1, "comatrix corings satisfy the coring axioms")
def comatrix_axioms():
    contexts = comatrix_contexts(25)
    bad = []
    for i, (_, m) in enumerate(contexts):
        fc = FiniteComatrix(m)
        v = fc.comatrix.check()
        dim_ok = fc.coring.dim == textbook_tensor_dim(fc.lam.module, m, m.field.characteristic)
        if not (v.verified and fc.context.check().verified and dim_ok):
            bad.append(i)
    fields = sorted({name for name, _ in contexts})
    return not bad, f"{len(contexts) - len(bad)}/{len(contexts)} contexts over {', '.join(fields)}"


@criterion(2, "coendomorphism coring of k^2 over matrix(2)")
def coend_iso():
    ce = CoendCoring(column_comodule(QQ, 2))
    v = ce.verify()
    squares = all(v.checks[f"delta_isomorphism.{k}"] for k in
                  ("comultiplication_square", "counit_square", "bijective"))
    ok = v.verified and ce.coring.dim == 1 and squares
    return ok, f"dim e(Lam) = {ce.coring.dim}, delta squares and inverse: {squares}"


@criterion(3, "cotensor dimension against naive elimination")
def cotensor_oracle():
    from test_comodule import random_pair
    mismatches = 0
    for seed in range(50):
        m, n = random_pair(seed)
        if cotensor(m, n).dim != naive_cotensor_dim(m, n) or max(m.dim, n.dim) > 4:
            mismatches += 1
    return mismatches == 0, f"{50 - mismatches}/50 random pairs agree"


@criterion(4, "graded corings are coseparable")
def graded_coseparable():
    from test_graded import graded_pairs
    pairs = graded_pairs()
    good = 0
    for _, ga, x in pairs:
        c = graded_coring(ga, x)
        w = coseparability_witness(c)
        good += w is not None and verify_coseparability_witness(c, w.matrix).verified
    labels = [p[0] for p in pairs]
    return good == len(pairs) and "QC2 regular" in labels, f"{good}/{len(pairs)} pairs, witnesses re-verified"


@criterion(5, "graded bridge round trip and Hom dimensions")
def graded_bridge():
    rng = random.Random(0)
    mods = [random_c2_graded_module(rng) for _ in range(20)]
    good = 0
    for i, gm in enumerate(mods):
        m = graded_to_comodule(gm)
        back = comodule_to_graded(m, gm.algebra, gm.gset)
        other = next((x for x in mods[i + 1:] + mods[:i + 1] if x.algebra is gm.algebra), gm)
        homs = len(graded_hom(gm, other)) == len(hom_comodules(m, graded_to_comodule(other)))
        good += back.degrees == gm.degrees and back.module.R == gm.module.R and homs
    return good == 20, f"{good}/20 modules"


@criterion(6, "Morita verdicts on both branches")
def morita():
    outcomes = []
    for branch in ("faithfully_flat", "coseparable"):
        pos = sigma_equivalence(can_and_phi(column_module(QQ, 2)), branch)
        neg = sigma_equivalence(can_and_phi(nonfaithful_module(QQ)), branch)
        witness = neg.witnesses.get("annihilating_element")
        outcomes.append(pos.verified and neg.outcome == "refuted" and witness == (0, 1))
    return all(outcomes), "M2(Q) on k^2 verified, Q x Q on k refuted by (0, 1)"


@criterion(7, "induction along counits")
def induction():
    pos = induction_equivalence(CoringMorphism.counit(trivial_coring(upper_triangular(QQ, 2))))
    neg = induction_equivalence(CoringMorphism.counit(matrix_coalgebra(QQ, 2)))
    w = neg.witnesses
    ok = pos.verified and neg.outcome == "refuted" and w["bcb_dim"] == 4 and w["omega_rank"] == 1
    return ok, f"trivial -> trivial {pos.outcome}; matrix(2) -> k {neg.outcome}, dim {w['bcb_dim']} vs rank {w['omega_rank']}"


@criterion(8, "triangle identities and adjunction diagrams")
def adjunction():
    from test_cohom import cohom_fixtures
    from test_equivalence import sigma_fixtures
    built = []
    original = CohomPresentation.__init__

    def recording(self, *args, **kwargs):
        original(self, *args, **kwargs)
        built.append(self)

    CohomPresentation.__init__ = recording
    try:
        for _, lam, m, _ in cohom_fixtures():
            cohom(lam, m)
            delta_iso(m, lam)
        CoendCoring(column_comodule(QQ, 2))
        CoendCoring(regular_right(matrix_coalgebra(QQ, 2)))
    finally:
        CohomPresentation.__init__ = original
    triangles = sum(triangle_identities(cp).verified for cp in built)
    sigmas = sigma_fixtures()
    diagrams = sum(adjunction_spotcheck(can_and_phi(s)).verified for s in sigmas.values())
    ok = triangles == len(built) and diagrams == len(sigmas)
    return ok, f"triangles on {triangles}/{len(built)} cohom values, diagrams on {diagrams}/{len(sigmas)} fixtures"


@criterion(9, "cosplit comatrix coring iff omega has a section")
def cosplit():
    from test_cohom import cosplit_fixtures
    fixtures = cosplit_fixtures()
    agree, split = 0, 0
    for _, m in fixtures:
        fc = FiniteComatrix(m)
        gamma = cosplit_witness(fc.coring) is not None
        split += gamma
        agree += gamma == omega_section_exists(fc.context)
    return agree == len(fixtures), f"{agree}/{len(fixtures)} agree ({split} cosplit, {len(fixtures) - split} not)"


@criterion(10, "reports are byte-identical across runs")
def determinism():
    outputs = []
    for seed in ("1", "2"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        proc = subprocess.run([sys.executable, str(HERE / "cases.py")], capture_output=True,
                              env=env, check=True)
        outputs.append(proc.stdout)
    n = outputs[0].count(b"end coringkit-report")
    return outputs[0] == outputs[1] and n > 0, f"{n} reports, {len(outputs[0])} bytes, identical: {outputs[0] == outputs[1]}"


def summary_lines() -> list[str]:
    lines = []
    for n in sorted(RESULTS):
        ok, title, detail = RESULTS[n]
        lines.append(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
    return lines


def evaluate(number):
    title, fn = CRITERIA[number]
    try:
        ok, detail = fn()
    except Exception as e:  # a crash is a failed criterion, reported with its cause
        ok, detail = False, f"{type(e).__name__}: {e}"
    RESULTS[number] = (bool(ok), title, detail)
    return bool(ok), detail


@pytest.mark.parametrize("number", range(1, 11))
def test_criterion(number):
    ok, detail = evaluate(number)
    assert ok, detail


if __name__ == "__main__":
    sys.path.insert(0, str(HERE))
    for n in sorted(CRITERIA):
        evaluate(n)
    print("\n".join(summary_lines()))
    sys.exit(0 if all(r[0] for r in RESULTS.values()) else 1)
