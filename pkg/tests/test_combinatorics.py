import pytest
from hypothesis import given
from hypothesis import strategies as st

from affschur.combinatorics import (
    ExtAffineElem,
    FieldError,
    Perm,
    canonical_rep,
    double_coset_decompose,
    index_pos,
    is_prime,
    j_dominant,
    make_field,
    merge_perm,
    min_coset_reps,
    min_left_coset_reps,
    parabolic_elements,
    residue_orbit,
    segment,
    segmentations,
)
from affschur.polyalg import random_reduced_word

from strategies import perms


def s(n, *word):
    return Perm.from_word(n, word)


# -- fields -----------------------------------------------------------------


def test_field_char3_q5():
    F = make_field(3, 5)
    assert (F.ell, F.q, F.e) == (3, 2, 2)


def test_field_order_of_four_mod_five():
    F = make_field(5, 4)
    assert (F.q, F.e) == (4, 2)


@pytest.mark.parametrize("ell,q", [(3, 4), (3, 1), (5, 0), (4, 3), (1, 2), (9, 2)])
def test_field_rejects(ell, q):
    with pytest.raises(FieldError):
        make_field(ell, q)


@given(st.integers(2, 200))
def test_is_prime_matches_trial_division(n):
    assert is_prime(n) == all(n % d for d in range(2, n))


# -- permutations -------------------------------------------------------------


@given(perms(n=4), perms(n=4), perms(n=4))
def test_perm_group_axioms(u, v, w):
    assert (u * v) * w == (u * v * w)
    assert u * u.inverse() == Perm.identity(4)
    assert (u * v)(1) == u(v(1))


@given(perms(max_n=6))
def test_reduced_word_has_length_many_letters(w):
    word = w.reduced_word()
    assert len(word) == w.length() == sum(1 for i in range(w.n) for j in range(i + 1, w.n) if w.images[i] > w.images[j])
    assert Perm.from_word(w.n, word) == w


@given(perms(max_n=6), st.randoms(use_true_random=False))
def test_random_reduced_words_are_reduced(w, rng):
    word = random_reduced_word(w, rng)
    assert len(word) == w.length()
    assert Perm.from_word(w.n, word) == w


# -- coset representatives ----------------------------------------------------


def test_double_coset_reps_chicken():
    assert set(min_coset_reps(3, {1}, {2})) == {Perm.identity(3), s(3, 2, 1)}


def test_coset_reps_trivial_parabolics():
    assert set(min_coset_reps(2, set(), set())) == {Perm.identity(2), s(2, 1)}


def test_coset_reps_one_sided():
    assert set(min_coset_reps(3, set(), {2})) == {Perm.identity(3), s(3, 1), s(3, 2, 1)}


@given(st.integers(2, 5), st.data())
def test_double_coset_reps_partition_the_group(n, data):
    K = data.draw(st.sets(st.integers(1, n - 1)))
    J = data.draw(st.sets(st.integers(1, n - 1)))
    reps = min_coset_reps(n, K, J)
    WK, WJ = parabolic_elements(n, K), parabolic_elements(n, J)
    seen = set()
    for d in reps:
        coset = {x * d * y for x in WK for y in WJ}
        assert min(coset, key=lambda w: w.length()) == d
        assert not coset & seen
        seen |= coset
    assert len(seen) == len(parabolic_elements(n, range(1, n)))


@given(st.integers(2, 5), st.data())
def test_left_coset_reps_are_minimal(n, data):
    K = frozenset(range(1, n))
    J = data.draw(st.sets(st.integers(1, n - 1)))
    reps = min_left_coset_reps(n, K, J)
    WJ = parabolic_elements(n, J)
    assert len(reps) * len(WJ) == len(parabolic_elements(n, K))
    for d in reps:
        assert all((d * y).length() == d.length() + y.length() for y in WJ)


def test_double_coset_decompose_examples():
    dec = double_coset_decompose(s(3, 1, 2, 1), {1}, {2})
    assert (dec.w_K, dec.d, dec.a) == (s(3, 1), s(3, 2, 1), Perm.identity(3))
    dec = double_coset_decompose(s(3, 2), {1}, {2})
    assert (dec.w_K, dec.d, dec.a) == (Perm.identity(3), Perm.identity(3), s(3, 2))
    d = s(3, 2, 1)
    dec = double_coset_decompose(d, {1}, {2})
    assert (dec.w_K, dec.d, dec.a) == (Perm.identity(3), d, Perm.identity(3))


@given(perms(n=4), st.sets(st.integers(1, 3)), st.sets(st.integers(1, 3)))
def test_double_coset_decompose_is_length_additive(w, K, J):
    dec = double_coset_decompose(w, K, J)
    assert dec.w_K * dec.d * dec.a == w
    assert dec.w_K.length() + dec.d.length() + dec.a.length() == w.length()
    assert dec.b * dec.d * dec.w_J == w
    assert dec.b.length() + dec.d.length() + dec.w_J.length() == w.length()


# -- dominance and the affine group --------------------------------------------


def test_dominance_examples():
    assert j_dominant((0, 0, 0), {1, 2})
    assert j_dominant((2, 1), {1}) and not j_dominant((1, 2), {1})
    orbit = {tuple(w.act_seq((0, 1, 2))) for w in parabolic_elements(3, {1, 2})}
    assert [p for p in orbit if j_dominant(p, {1, 2})] == [(2, 1, 0)]


@given(st.lists(st.integers(-3, 3), min_size=3, max_size=3), st.lists(st.integers(-3, 3), min_size=3, max_size=3),
       perms(n=3), perms(n=3))
def test_ext_affine_multiplication_matches_action_on_integers(p1, p2, w1, w2):
    x = ExtAffineElem.finite(w1) * ExtAffineElem.translation(p1)
    y = ExtAffineElem.finite(w2) * ExtAffineElem.translation(p2)
    for i in range(-5, 6):
        assert (x * y)(i) == x(y(i))
    assert (x * x.inverse()) == ExtAffineElem.identity(3)


@given(st.lists(st.integers(-2, 2), min_size=3, max_size=3), perms(n=3))
def test_ext_affine_reduced_word_rebuilds_element(p, w):
    x = ExtAffineElem.finite(w) * ExtAffineElem.translation(p)
    j, word = x.reduced_word()
    t = ExtAffineElem.tau(3) if j >= 0 else ExtAffineElem.tau(3).inverse()
    y = ExtAffineElem.identity(3)
    for _ in range(abs(j)):
        y = y * t
    for i in word:
        y = y * ExtAffineElem.simple(3, i)
    assert y == x
    assert len(word) == x.length()


@given(st.lists(st.integers(-2, 2), min_size=3, max_size=3), perms(n=3), perms(n=3), perms(n=3))
def test_canonical_rep_is_a_double_coset_invariant(p, w, a, b):
    K, J = {1}, {2}
    ok_a = a if a.images[2] == 3 else Perm.identity(3)  # a in W_K
    ok_b = b if b.images[0] == 1 else Perm.identity(3)  # b in W_J
    x = ExtAffineElem.finite(w) * ExtAffineElem.translation(p)
    y = ExtAffineElem.finite(ok_a) * x * ExtAffineElem.finite(ok_b)
    assert canonical_rep(x, K, J) == canonical_rep(y, K, J)


# -- segmentations --------------------------------------------------------------

U7 = (1, 2, 1, 1, 2, 1, 1)


def test_segment_example():
    uJ = segment(U7, {1, 3, 5}, 2)
    assert str(uJ) == "(1,2|1,1|1,2|1)"
    uK = segment(U7, {1, 2, 3, 5, 6}, 2)
    assert str(uK) == "(1,1,1,2|1,1,2)"
    assert uK.dim_vector() == (5, 2)
    assert uK.type_vector() == (4, 3)


def test_segment_full_is_sorted():
    assert segment((2, 1, 3, 1), {1, 2, 3}, 3).residues == (1, 1, 2, 3)


def test_merge_perm_example():
    uJ = segment(U7, {1, 3, 5}, 2)
    assert merge_perm(uJ, {1, 2, 3, 5, 6}) == s(7, 3, 2, 6)


@given(st.lists(st.integers(1, 3), min_size=1, max_size=6), st.data())
def test_merge_perm_sorts_stably(u, data):
    n = len(u)
    J = data.draw(st.sets(st.integers(1, n - 1))) if n > 1 else set()
    extra = data.draw(st.sets(st.integers(1, n - 1))) if n > 1 else set()
    K = set(J) | set(extra)
    uJ = segment(u, J, 3)
    sigma = merge_perm(uJ, K)
    assert sigma.act_seq(uJ.residues) == segment(u, K, 3).residues
    if not set(K) - set(J):
        assert sigma == Perm.identity(n)


def test_index_pos_and_parabolic():
    uJ = segment((1, 1, 2, 1, 1, 1, 2, 2, 1, 1, 2), {1, 2, 4, 5, 6, 7, 9, 10}, 2)
    assert str(uJ) == "(1,1,2|1,1,1,2,2|1,1,2)"
    assert sorted(uJ.parabolic()) == [1, 4, 5, 7, 9]
    assert index_pos(segment((1, 2), set(), 2), 1, 1) == 1
    assert index_pos(segment((2, 1), set(), 2), 1, 1) == 2


def test_segmentations_cover_the_orbit():
    segs = segmentations((1, 1, 2), {1}, 2)
    assert [str(x) for x in segs] == ["(1,1|2)", "(1,2|1)"]
    assert residue_orbit((1, 2)) == [(1, 2), (2, 1)]
