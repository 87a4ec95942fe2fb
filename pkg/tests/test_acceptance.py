"""Acceptance gate: every criterion runs at its stated tolerance and prints
one pass/fail line.  Budgets (wall-clock ceilings) are asserted too."""

import time

import pytest

from rigidkit import acceptance


def _run(name, budget, seed=0, **kw):
    t0 = time.perf_counter()
    rep = acceptance.SUITES[name](seed=seed, **kw)
    elapsed = time.perf_counter() - t0
    status = "PASS" if rep["passed"] else "FAIL"
    print(f"[{status}] {name} ({elapsed:.1f}s)")
    assert rep["passed"], rep
    assert elapsed < budget, f"{name} exceeded its {budget}s budget: {elapsed:.1f}s"
    return rep


def test_criterion_1_projective_rings():
    rep = _run("ring-cpn", budget=5)
    for n in range(1, 5):
        assert rep[f"cpn{n}"]["semisimple"] == "semisimple"


def test_criterion_2_quadric():
    rep = _run("quadric", budget=5)
    assert all(rep["checks"].values())


def test_criterion_3_decorated_complexes():
    rep = _run("complex-product", budget=60)
    assert rep["product_formula"] == "200/200"
    assert rep["characteristic_exponent"] == "200/200"
    assert rep["shuffle_invariance"] == "5/5"


def test_criterion_4_index_engine():
    rep = _run("index", budget=120)
    assert rep["maslov_loops"] == [2, 4, 6, 8, 10]
    assert rep["cz_equals_doubled_ind"] == "50/50"
    assert rep["naturality"] == "50/50"
    assert rep["leray"].startswith("100/100")
    assert rep["qm_defect"]["max"] <= acceptance.C_EMP + 1


def test_criterion_5_toric():
    rep = _run("toric", budget=5)
    assert rep["pspec_cpn2"]["value"] == ["0", "0"]
    assert rep["pspec_s2xs2"]["value"] == ["0", "0"]
    assert rep["pspec_blowup"]["interior"]


def test_criterion_6_model_quasi_state():
    rep = _run("qstate", budget=30)
    assert rep["axioms"]["status"] == "ok"
    assert rep["intersection_property"] == "20/20"
    assert rep["fourier_error"] <= 1e-3
