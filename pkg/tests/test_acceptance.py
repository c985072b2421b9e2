"""The ten acceptance criteria, each checked at exact equality.

Every test prints one ``PASS``/``FAIL`` line (visible with ``pytest -s`` or in
the captured output of a failing run) and then asserts the same condition.
"""

import itertools
import time

import pytest

from affschur.combinatorics import make_field
from affschur.hecke import SIGN, TRIV, qmerge_sum, verify_hecke_relations, verify_qmerge_identities
from affschur.isomorphisms import (
    verify_chain,
    verify_gamma,
    verify_kappa,
    verify_tau,
    verify_theta_classes,
    verify_theta_ops,
)
from affschur.klr import verify_klr_relations
from affschur.polyalg import LaurentPoly, RationalExpr, verify_demazure, verify_merge_identities, verify_theta_identities
from affschur.quiver_schur import build_gl2_example, gl2_grading
from affschur.schur import verify_merge_closed_form, verify_multiplicativity

pytestmark = pytest.mark.acceptance

F35 = make_field(3, 5)
F72 = make_field(7, 2)


def _report(number: int, title: str, ok: bool, started: float, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    extra = f" ({detail})" if detail else ""
    print(f"\n[criterion {number:2d}] {status} {title}{extra} in {time.perf_counter() - started:.1f}s")
    assert ok, f"criterion {number} failed{extra}"


def test_criterion_01_hecke_relations():
    t0 = time.perf_counter()
    bad = []
    for field in (F35, F72):
        for n in (2, 3, 4):
            probes = [LaurentPoly.monomial(e, field.ell) for e in itertools.product(range(-3, 4), repeat=n)]
            for kind in (SIGN, TRIV):
                bad += [(field.ell, n, kind, r["relation"]) for r in verify_hecke_relations(field, n, kind, probes) if not r["ok"]]
    _report(1, "Hecke relations on both representations", not bad, t0, f"failures={bad[:3]}" if bad else "")


def test_criterion_02_demazure():
    t0 = time.perf_counter()
    reports = [verify_demazure(p, max_n=5, alternating_n=4, samples=100) for p in (3, 7)]
    checks = sum(len(r["records"]) for r in reports)
    _report(2, "Demazure staircase, alternating sum, reduced words", all(r["ok"] for r in reports), t0, f"{checks} checks")


def test_criterion_03_theta_and_merge_identities():
    t0 = time.perf_counter()
    parts = {}
    for field in (F35, F72):
        parts[f"theta {field.ell}"] = verify_theta_identities(field, 6)["ok"]
        parts[f"merge {field.ell}"] = verify_merge_identities(field, 5)["ok"]
    parts["q-merge"] = verify_qmerge_identities(F72, SIGN)["ok"]
    one = LaurentPoly.one(2, F72.ell)
    parts["q-merge of 1"] = qmerge_sum(F72, SIGN, (2,), (1, 1), one) == RationalExpr(LaurentPoly.const(2, F72.ell, 1 + F72.q))
    failed = [k for k, v in parts.items() if not v]
    _report(3, "theta and merge identities for both merges", not failed, t0, f"failed={failed}" if failed else "")


def test_criterion_04_schur_multiplicativity():
    t0 = time.perf_counter()
    field = make_field(5, 2)
    reps = [verify_multiplicativity(field, n, bound=1, literal_every=200) for n in (2, 3)]
    pairs = sum(r.pairs for r in reps)
    fails = [f for r in reps for f in r.failures]
    _report(4, "Schur multiplicativity and invariance", not fails, t0, f"{pairs} pairs" + (f", failures={fails[:3]}" if fails else ""))


def test_criterion_05_merge_closed_form():
    t0 = time.perf_counter()
    bad, shapes = [], 0
    for field in (F35, F72):
        for n in range(1, 5):
            for r in verify_merge_closed_form(field, n, prec=6):
                shapes += 1
                if not r["ok"]:
                    bad.append(r["shape"])
    _report(5, "merge closed form against coset sum", not bad, t0, f"{shapes} shapes" + (f", failed={bad[:3]}" if bad else ""))


def _orbit_representatives(n: int, e: int):
    return itertools.combinations_with_replacement(range(1, e + 1), n)


def test_criterion_06_klr_relations():
    t0 = time.perf_counter()
    fields = {2: F35, 3: F72, 4: make_field(5, 2)}
    bad, records = [], 0
    for e, field in fields.items():
        for n in range(1, 5):
            for i in _orbit_representatives(n, e):
                for r in verify_klr_relations(field, i, max_degree=6):
                    records += 1
                    if not r["ok"]:
                        bad.append((e, r["u"], r["relation"]))
    _report(6, "KLR relations on every orbit", not bad, t0, f"{records} checks" + (f", failed={bad[:3]}" if bad else ""))


def test_criterion_07_gamma():
    t0 = time.perf_counter()
    reps = [verify_gamma(F35, (1, 2), 6), verify_gamma(F72, (1, 2, 3), 5)]
    _report(7, "gamma intertwines the generators", all(r["ok"] for r in reps), t0, f"{sum(r['checked'] for r in reps)} checks")


def test_criterion_08_chain():
    t0 = time.perf_counter()
    parts = {}
    for field in (F35, F72):
        for n in (2, 3):
            tau = verify_tau(field, n, 6, probes=30)
            parts[f"tau e={field.e} n={n}"] = all(r["ok"] for r in tau["splits"] + tau["merges"]) and tau["round_trip"]
            parts[f"theta ops e={field.e} n={n}"] = verify_theta_ops(field, n, 30)["ok"]
            parts[f"kappa e={field.e} n={n}"] = verify_kappa(field, n, 30)["ok"]
        parts[f"theta classes e={field.e}"] = verify_theta_classes(field.e, 5, field.ell)["ok"]
    failed = [k for k, v in parts.items() if not v]
    _report(8, "tau, theta and kappa correspondences", not failed, t0, f"failed={failed}" if failed else "")


def test_criterion_09_gl2_example():
    t0 = time.perf_counter()
    rep = build_gl2_example(F35)
    chain = verify_chain(F35, 6, 30)
    dims_ok = len(rep["hom_dimensions"]) == 9 and all(
        row["operators"] == row["paths"] and len(row["operators"]) == 7 for row in rep["hom_dimensions"].values())
    ok = (rep["ok"] and all(r["ok"] for r in rep["relations"]) and rep["z_central"]
          and rep["degree0_dimension"] == 3 and dims_ok and chain["ok"])
    _report(9, "rank two example presentation and dimensions", ok, t0, f"{len(rep['relations'])} relations")


def test_criterion_10_grading():
    t0 = time.perf_counter()
    gr = gl2_grading(F35)
    degrees = {str(k): v for k, v in gr["degrees"].items()}
    loops = [v for k, v in degrees.items() if k.startswith("x")]
    arrows = [v for k, v in degrees.items() if not k.startswith("x")]
    ok = bool(loops) and bool(arrows) and set(loops) == {2} and set(arrows) == {1}
    _report(10, "grading offsets: arrows 1, loops 2", ok, t0, f"offsets={ {str(k): v for k, v in gr['offsets'].items()} }")
