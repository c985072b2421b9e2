import pytest
from hypothesis import given
from hypothesis import strategies as st

from affschur.combinatorics import make_field
from affschur.klr import KLRElem, KLRRep, KLRVector, monomial_probes, verify_klr_relations
from affschur.polyalg import LaurentPoly

from strategies import polynomials

F2 = make_field(3, 5)  # e = 2
F3 = make_field(7, 2)  # e = 3


def lin(n, p, coeffs):
    return LaurentPoly.linear(n, p, coeffs)


def test_psi_kills_units_on_equal_residues():
    rep = KLRRep(F2, (1, 1))
    assert rep.act_psi(1, rep.unit((1, 1))) == KLRVector()


def test_psi_on_an_arrow():
    rep = KLRRep(F3, (1, 2, 3))
    out = rep.act_psi(1, rep.unit((1, 2, 3)))
    assert out == rep.vec((2, 1, 3), lin(3, 7, {1: 1, 2: -1}))


def test_idempotents_are_orthogonal():
    rep = KLRRep(F3, (1, 2, 2))
    v = rep.vec((2, 1, 2), LaurentPoly.parse("X1*X3 + 1", 3, 7))
    for u in rep.orbit:
        for w in rep.orbit:
            lhs = rep.act_e(u, rep.act_e(w, v))
            assert lhs == (rep.act_e(u, v) if u == w else KLRVector())


@given(polynomials(3, 7, max_exp=3))
def test_nil_hecke_relation_on_equal_residues(g):
    rep = KLRRep(F3, (2, 2, 1))
    v = rep.vec((2, 2, 1), g)
    lhs = rep.act_psi(1, rep.act_x(2, v)) - rep.act_x(1, rep.act_psi(1, v))
    assert lhs == v


@pytest.mark.parametrize("u,coeffs", [((1, 2, 3), {2: 1, 1: -1}), ((2, 1, 3), {1: 1, 2: -1}), ((1, 3, 2), {1: 1, 2: -1})])
@given(g=polynomials(3, 7, max_exp=3))
def test_psi_squared_on_arrows(u, coeffs, g):
    rep = KLRRep(F3, (1, 2, 3))
    v = rep.vec(u, g)
    assert rep.act_psi(1, rep.act_psi(1, v)) == rep.vec(u, g * lin(3, 7, coeffs))


def test_psi_squared_for_two_vertices():
    rep = KLRRep(F2, (1, 2))
    v = rep.unit((1, 2))
    sq = rep.act_psi(1, rep.act_psi(1, v))
    expect = lin(2, 3, {2: 1, 1: -1}) * lin(2, 3, {1: 1, 2: -1})
    assert sq == rep.vec((1, 2), expect)


def test_elements_parse_and_act():
    rep = KLRRep(F2, (1, 2))
    x = KLRElem.parse("psi1*x2*e(1,2)", 3)
    y = KLRElem.parse("x1*psi1*e(1,2)", 3)
    v = rep.unit((1, 2))
    assert x.act(rep, v) == y.act(rep, v)


@pytest.mark.parametrize(
    "field,i",
    [(F2, (1, 2)), (F2, (1, 1, 2)), (F2, (1, 2, 1, 2)), (F3, (1, 2, 3)), (F3, (1, 1, 2)), (make_field(5, 2), (1, 2, 3, 4))],
)
def test_all_relations(field, i):
    recs = verify_klr_relations(field, i, max_degree=3)
    assert recs and all(r["ok"] for r in recs), [r for r in recs if not r["ok"]][:3]


def test_printed_dagger_sign_is_refuted():
    recs = verify_klr_relations(F2, (1, 2, 1), max_degree=2, literal_dagger=True)
    bad = {r["relation"] for r in recs if not r["ok"]}
    assert bad == {"braid1 (dagger)"}


def test_probe_counts():
    assert len(monomial_probes(2, 3, 2)) == 6
