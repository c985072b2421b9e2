import pytest
from hypothesis import given
from hypothesis import strategies as st

from affschur.combinatorics import Perm, make_field, segment
from affschur.hecke import SIGN, TRIV, CompletedRep, HeckeElem, act_affine_sum, act_Tsharp
from affschur.klr import monomial_probes
from affschur.polyalg import LaurentPoly, TruncSeries
from affschur.schur import (
    SchurBasisElem,
    basis_elements,
    completed_op,
    compose_and_expand,
    faithfulness_rank,
    hecke_image,
    invariant_probes,
    is_invariant,
    merge_closed_form,
    merge_direct,
    q_element,
    qmerge_bar_op,
    qmerge_op,
    rho,
    rho_bar,
    symmetrised_probes,
    two_segment_shapes,
    verify_generators,
    verify_merge_closed_form,
    verify_multiplicativity,
)

F = make_field(7, 2)
P = 7
ID2 = Perm.identity(2)
ID3 = Perm.identity(3)


def b(K, J, w=None, p=None, n=2):
    w = w or Perm.identity(n)
    return SchurBasisElem.from_label(K, J, w, p or (0,) * n)


def test_identity_acts_as_identity():
    f = LaurentPoly.parse("X1*X2 + X1 + X2", 2, P)
    for J in (set(), {1}):
        e = SchurBasisElem.identity(2, J)
        assert rho(F, e, f) == f
        assert rho_bar(F, e, f) == f


def test_merge_of_constant():
    assert rho(F, b({1}, set()), LaurentPoly.one(2, P)) == LaurentPoly.const(2, P, 1 + F.q)


def test_double_coset_sum_for_two_parabolics():
    x = b({1}, {2}, n=3)
    f = LaurentPoly.parse("X1 + X2*X3", 3, P)
    expect = HeckeElem.parse("1 + T1 + T2 + T1*T2", P).act(F, TRIV, f)
    assert act_affine_sum(F, TRIV, hecke_image(x, F), f) == expect
    g = f + f.swap(2, 3)
    assert act_affine_sum(F, TRIV, hecke_image(x, F), g) == rho(F, x, g).scale(1 + F.q)


def test_basis_element_parse_round_trip():
    for x in basis_elements(3, {1}, {2}, 1):
        assert SchurBasisElem.parse(str(x)) == x


def test_q_elements():
    assert q_element(F, 2, {1}, (0, 0)).g == LaurentPoly.one(2, P)
    central = q_element(F, 2, {1}, (1, 1))
    assert central.g == LaurentPoly.parse("X1*X2", 2, P).scale(F.q)
    lin = q_element(F, 2, {1}, (1, 0))
    assert lin.proportional and lin.orbit_sum == LaurentPoly.parse("X1 + X2", 2, P)


@given(st.integers(-2, 2), st.integers(0, 3))
def test_q_elements_are_symmetric_and_homogeneous(a, k):
    qe = q_element(F, 2, {1}, (a + k, a))
    assert qe.g == qe.g.swap(1, 2)
    assert qe.g.is_homogeneous() and qe.g.degree() == 2 * a + k
    assert qe.g.terms.get((a + k, a), 0) != 0
    assert qe.proportional == (k <= 1)


def test_composition_examples():
    K = {1}
    x = b(K, set())
    exp = compose_and_expand(F, x, SchurBasisElem.identity(2, set()))
    assert exp.ok and exp.coeffs == {x: 1}
    exp = compose_and_expand(F, b(set(), K), x)
    assert exp.ok and len(exp.coeffs) == 2 and all(c for c in exp.coeffs.values())
    chicken = compose_and_expand(F, b({1}, {2}, n=3), b({2}, {1}, n=3))
    assert chicken.ok


def test_symbolic_and_probe_expansions_agree():
    x, y = b(set(), {1}), b({1}, set(), p=(1, 0))
    sym = compose_and_expand(F, x, y)
    prb = compose_and_expand(F, x, y, degree_bound=2, method="probe")
    assert sym.ok and prb.ok and sym.coeffs == prb.coeffs


@given(st.sampled_from(basis_elements(2, {1}, set(), 1) + basis_elements(2, {1}, {1}, 1)))
def test_images_are_invariant(x):
    for f in invariant_probes(F, 2, x.J, 3):
        assert is_invariant(F, rho(F, x, f), x.K)
        assert is_invariant(F, rho_bar(F, x, f.invert_vars()), x.K, twisted=True)


@given(st.sampled_from(basis_elements(2, {1}, set(), 1) + basis_elements(2, set(), {1}, 1)))
def test_sharp_intertwines_the_two_actions(x):
    for f in invariant_probes(F, 2, x.J, 3, seed=5):
        assert rho_bar(F, x, f.invert_vars()) == rho(F, x, f).invert_vars()


@pytest.mark.parametrize("n", [2, 3])
def test_multiplicativity(n):
    rep = verify_multiplicativity(make_field(5, 2), n, bound=1 if n == 2 else 0, literal_every=10)
    assert rep.ok and rep.pairs > 0


def test_faithfulness():
    r, total = faithfulness_rank(F, 2, {1}, set(), 1)
    assert r == total


@pytest.mark.parametrize("n", [2, 3, 4])
def test_generator_recursion(n):
    recs = verify_generators(F, n, window=1, probes=3)
    assert recs and all(r["pass"] for r in recs)


def test_qmerge_bar_drops_top_term():
    f = LaurentPoly.parse("X1^2 + X2", 2, P)
    diff = qmerge_op(F, (2,), (1, 1), f) - qmerge_bar_op(F, (2,), (1, 1), f)
    assert diff == act_Tsharp(F, SIGN, 1, f)


# -- completed merges --------------------------------------------------------


@pytest.mark.parametrize("u,J", [((1, 2), set()), ((1, 1), set()), ((1, 2, 1), {2}), ((1, 1, 2), {1}), ((2, 1, 1), {2})])
def test_closed_form_matches_direct(u, J):
    field = make_field(3, 5)
    uJ = segment(u, J, field.e)
    for f in symmetrised_probes(uJ, 3, 2):
        assert merge_direct(field, uJ, f, 6) == merge_closed_form(field, uJ, f, 6)


def test_trivial_segment_merge_is_identity():
    field = make_field(3, 5)
    uJ = segment((1, 2), {1}, field.e)
    f = LaurentPoly.parse("X1^2 + X2", 2, 3)
    assert merge_closed_form(field, uJ, f, 6) == TruncSeries(f, 6)


def test_completed_identity_datum_is_projection():
    field = make_field(3, 5)
    uJ = segment((1, 2), set(), field.e)
    rep = CompletedRep(field, (1, 2), 6, SIGN)
    x = rep.from_poly(LaurentPoly.parse("X1 + X2^2", 2, 3))
    y = completed_op(field, set(), ID2, (0, 0), uJ, set(), x, 6)
    assert y.equal_mod(rep.act_e((1, 2), x))


@pytest.mark.parametrize("field", [make_field(3, 5), make_field(7, 2)])
def test_every_two_segment_shape_of_size_three(field):
    recs = verify_merge_closed_form(field, 3, prec=5, probe_degree=1)
    assert len(recs) == len(two_segment_shapes(3, field.e)) and all(r["ok"] for r in recs)


def test_shape_count():
    # J = everything: sorted sequences; J = I minus {a}: pairs of sorted pieces
    assert len(two_segment_shapes(2, 2)) == 3 + 4
