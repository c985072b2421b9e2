"""The affine Schur algebra acting on parahoric polynomial modules.

A basis element ``b^d_{K,J}`` is stored through the minimal element ``d`` of
its double coset ``W_K d W_J`` in the extended affine Weyl group.  It acts on
W_J-invariant Laurent polynomials (the component J of the representation) by

    rho(b) f = sum_{a in D^K_{0, K cap dJ}} T_a T_d f,

on the trivial representation, and by the same formula with ``T^sharp`` on
the sign representation for the twisted variant ``rho_bar``.

Products of basis elements are expanded exactly inside the Iwahori-Matsumoto
basis of the affine Hecke algebra; the representation supplies an independent
residual check.  The completed part of the module covers the action of
algebraic merges on power series around a central character.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from .combinatorics import (
    ExtAffineElem,
    Field,
    Perm,
    SegmentedSeq,
    SimpleSubset,
    blocks_of,
    canonical_rep,
    composition_subset,
    conjugate_subset,
    j_dominant,
    merge_perm,
    min_coset_reps,
    min_left_coset_reps,
    parabolic_elements,
    segment,
    simple_subset,
)
from .hecke import (
    SIGN,
    TRIV,
    CompletedElem,
    CompletedRep,
    IMElem,
    Window,
    act_affine_sum,
    win_length,
    act_T,
    act_Tsharp,
)
from .klr import monomial_probes
from .linalg import RowReducer, solve_combination
from .polyalg import LaurentPoly, TruncSeries, series_invert

__all__ = [
    "SchurBasisElem",
    "SchurRepElem",
    "basis_elements",
    "rho",
    "rho_bar",
    "is_invariant",
    "QElement",
    "q_element",
    "hecke_image",
    "Expansion",
    "compose_and_expand",
    "MultiplicativityReport",
    "verify_multiplicativity",
    "invariant_probes",
    "faithfulness_rank",
    "merge_direct",
    "merge_closed_form",
    "two_segment_shapes",
    "verify_merge_closed_form",
    "symmetrised_probes",
    "completed_op",
    "qmerge_op",
    "qmerge_bar_op",
    "verify_generators",
]


# ---------------------------------------------------------------------------
# basis elements


def _fmt_subset(S: Iterable[int]) -> str:
    return "{" + ",".join(map(str, sorted(S))) + "}"


def _periodic(w: tuple, v: int) -> int:
    n = len(w)
    r = (v - 1) % n
    return w[r] + v - r - 1


@lru_cache(maxsize=None)
def _double_coset(K: frozenset, x: Window, J: frozenset) -> frozenset:
    n = len(x)
    lefts = [u.images for u in parabolic_elements(n, K)]
    rights = [v.images for v in parabolic_elements(n, J)]
    out = set()
    for v in rights:
        xv = tuple(x[v[i] - 1] for i in range(n))
        for u in lefts:
            out.add(tuple(_periodic(u, a) for a in xv))
    return frozenset(out)


@lru_cache(maxsize=None)
def _minimal_in_coset(K: frozenset, x: Window, J: frozenset) -> Window:
    return min(_double_coset(K, x, J), key=lambda y: (win_length(y), y))


@dataclass(frozen=True)
class SchurBasisElem:
    """The basis element b^d_{K,J}; ``d`` is the minimal element of its double coset."""

    K: frozenset
    J: frozenset
    d: ExtAffineElem

    @property
    def n(self) -> int:
        return self.d.n

    @classmethod
    def from_element(cls, K: Iterable[int], J: Iterable[int], x: ExtAffineElem) -> "SchurBasisElem":
        K, J = simple_subset(K), simple_subset(J)
        return cls(K, J, ExtAffineElem.from_window(_minimal_in_coset(K, x.window(), J)))

    @classmethod
    def from_label(cls, K: Iterable[int], J: Iterable[int], w: Perm, p: Sequence[int]) -> "SchurBasisElem":
        """Build from the dominant label (w, p), meaning the double coset of w X^p."""
        return cls.from_element(K, J, ExtAffineElem(w, tuple(p)))

    @classmethod
    def identity(cls, n: int, J: Iterable[int]) -> "SchurBasisElem":
        J = simple_subset(J)
        return cls(J, J, ExtAffineElem.identity(n))

    @property
    def label(self) -> tuple[Perm, tuple[int, ...]]:
        """The dominant pair (w, p) with w in D_{K,J}."""
        return canonical_rep(self.d, self.K, self.J)

    def double_coset(self) -> frozenset:
        """The windows of all elements of W_K d W_J."""
        return _double_coset(self.K, self.d.window(), self.J)

    def meet(self) -> SimpleSubset:
        """K cap dJ: the k in K with d^-1 s_k d = s_j for some j in J."""
        n = self.n
        dinv = self.d.inverse()
        simples = {ExtAffineElem.simple(n, j): j for j in self.J}
        return simple_subset(k for k in self.K if dinv * ExtAffineElem.simple(n, k) * self.d in simples)

    def __str__(self) -> str:
        w, p = self.label
        return f"b[{tuple(w.images)},{tuple(p)}; {_fmt_subset(self.K)}; {_fmt_subset(self.J)}]"

    __repr__ = __str__

    @classmethod
    def parse(cls, text: str) -> "SchurBasisElem":
        m = re.fullmatch(r"\s*b\[\s*\(([-\d,\s]*)\)\s*,\s*\(([-\d,\s]*)\)\s*;\s*\{([\d,\s]*)\}\s*;\s*\{([\d,\s]*)\}\s*\]\s*", text)
        if not m:
            raise ValueError(f"cannot parse basis element {text!r}")
        ints = lambda s: tuple(int(t) for t in s.replace(" ", "").split(",") if t)
        w, p, K, J = (ints(g) for g in m.groups())
        if len(w) != len(p):
            raise ValueError("permutation and exponent vector differ in length")
        return cls.from_label(K, J, Perm(w), p)


def basis_elements(n: int, K: Iterable[int], J: Iterable[int], bound: int) -> list[SchurBasisElem]:
    """All b^d_{K,J} whose dominant label has exponents in [-bound, bound]."""
    K, J = simple_subset(K), simple_subset(J)
    out = []
    for w in min_coset_reps(n, K, J):
        dom = conjugate_subset(w, J, K)
        for p in product(range(-bound, bound + 1), repeat=n):
            if j_dominant(p, dom):
                out.append(SchurBasisElem.from_label(K, J, w, p))
    return out


@dataclass(frozen=True)
class SchurRepElem:
    """A vector f * v^{(K)} (trivial) or f * vbar^{(K)} (sign) of the representation."""

    K: frozenset
    payload: LaurentPoly
    variant: str = TRIV

    def is_valid(self, field: Field) -> bool:
        return is_invariant(field, self.payload, self.K, twisted=self.variant == SIGN)


# ---------------------------------------------------------------------------
# the faithful representations


@lru_cache(maxsize=None)
def _action_elem(b: SchurBasisElem, field: Field) -> IMElem:
    n = b.n
    d = b.d.window()
    terms = {tuple(_periodic(a.images, v) for v in d): 1 for a in min_left_coset_reps(n, b.K, b.meet())}
    return IMElem(n, field, windows=terms)


def rho(field: Field, b: SchurBasisElem, f: LaurentPoly) -> LaurentPoly:
    """The trivial-variant action of b on the payload f of component J."""
    return act_affine_sum(field, TRIV, _action_elem(b, field), f)


def rho_bar(field: Field, b: SchurBasisElem, f: LaurentPoly) -> LaurentPoly:
    """The sign variant, with every T replaced by T^sharp."""
    return act_affine_sum(field, SIGN, _action_elem(b, field), f, twisted=True)


def is_invariant(field: Field, f: LaurentPoly, K: Iterable[int], twisted: bool = False) -> bool:
    """W_K-invariance tested through (T_k - q) f = 0 for k in K.

    With ``twisted`` the test uses T^sharp on the sign representation, which
    is the same condition transported by f -> f^sharp.
    """
    q = field.q
    for k in K:
        if twisted:
            g = act_Tsharp(field, SIGN, k, f)
        else:
            g = act_T(field, TRIV, k, f)
        if not (g - f.scale(q)).is_zero():
            return False
    return True


@dataclass(frozen=True)
class QElement:
    """g_p = rho(b^p_{J,J})(1) together with its relation to the orbit sum of X^p."""

    J: frozenset
    p: tuple[int, ...]
    g: LaurentPoly
    orbit_sum: LaurentPoly
    scalar: int | None  # g == scalar * orbit_sum, or None if not proportional

    @property
    def proportional(self) -> bool:
        return self.scalar is not None

    def apply(self, f: LaurentPoly) -> LaurentPoly:
        return self.g * f


def q_element(field: Field, n: int, J: Iterable[int], p: Sequence[int]) -> QElement:
    J = simple_subset(J)
    p = tuple(p)
    if not j_dominant(p, J):
        raise ValueError(f"{p} is not dominant for {sorted(J)}")
    b = SchurBasisElem.from_label(J, J, Perm.identity(n), p)
    g = rho(field, b, LaurentPoly.one(n, field.ell))
    orbit = {tuple(p[w.inverse()(i) - 1] for i in range(1, n + 1)) for w in parabolic_elements(n, J)}
    osum = LaurentPoly(n, field.ell, {e: 1 for e in orbit})
    lead = next(iter(orbit))
    c = g.terms.get(lead, 0)
    scalar = c if (g - osum.scale(c)).is_zero() else None
    return QElement(J, p, g, osum, scalar)


# ---------------------------------------------------------------------------
# products of basis elements


@lru_cache(maxsize=None)
def hecke_image(b: SchurBasisElem, field: Field) -> IMElem:
    """The image of v_J under b: the sum of T_x over the double coset."""
    return IMElem(b.n, field, windows={x: 1 for x in b.double_coset()})


def _symbolic_expand(field: Field, b2: SchurBasisElem, b1: SchurBasisElem) -> dict[SchurBasisElem, int]:
    L, J = b2.K, b1.J
    P = _action_elem(b2, field) * hecke_image(b1, field)
    out: dict[SchurBasisElem, int] = {}
    while not P.is_zero():
        x = min(P.terms, key=lambda y: (win_length(y), y))
        b = SchurBasisElem(L, J, ExtAffineElem.from_window(_minimal_in_coset(L, x, J)))
        c = P.coefficient(b.d)
        if c == 0:
            raise ArithmeticError(f"product is not a combination of double coset sums near {x}")
        out[b] = c
        P = P - hecke_image(b, field).scale(c)
    return out


def invariant_probes(field: Field, n: int, J: Iterable[int], count: int, window: int = 2, seed: int = 0) -> list[LaurentPoly]:
    """1 followed by random W_J-symmetrisations of monomials in [-window, window]^n."""
    rng = random.Random(seed)
    J = simple_subset(J)
    p = field.ell
    group = parabolic_elements(n, J)
    probes = [LaurentPoly.one(n, p)]
    while len(probes) < count:
        mono = LaurentPoly.monomial([rng.randint(-window, window) for _ in range(n)], p, rng.randint(1, p - 1))
        g = LaurentPoly.zero(n, p)
        for w in group:
            g = g + mono.permute(w)
        if not g.is_zero():
            probes.append(g)
    return probes


@dataclass
class Expansion:
    """Structure constants of a product together with the probe residual check."""

    coeffs: dict
    method: str
    probes: int
    residual_zero: bool
    invariant: bool
    witness: LaurentPoly | None = None

    @property
    def ok(self) -> bool:
        return self.residual_zero and self.invariant

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*{b}" for b, c in sorted(self.coeffs.items(), key=lambda t: str(t[0])))


@lru_cache(maxsize=None)
def _probes_for(field: Field, n: int, J: frozenset, count: int) -> tuple[LaurentPoly, ...]:
    return tuple(invariant_probes(field, n, J, count, seed=17 + sum(1 << j for j in J)))


@lru_cache(maxsize=200_000)
def _rho_cached(field: Field, b: SchurBasisElem, f: LaurentPoly) -> LaurentPoly:
    return rho(field, b, f)


def _residual_operator(field: Field, b2: SchurBasisElem, b1: SchurBasisElem, coeffs: dict) -> IMElem:
    R = _action_elem(b2, field) * _action_elem(b1, field)
    for b, c in coeffs.items():
        R = R - _action_elem(b, field).scale(c)
    return R


def compose_and_expand(
    field: Field,
    b2: SchurBasisElem,
    b1: SchurBasisElem,
    degree_bound: int = 1,
    method: str = "symbolic",
    probes: Sequence[LaurentPoly] | None = None,
    literal: bool = True,
) -> Expansion:
    """Expand b2 * b1 = sum c_d b^d_{L,J} and check rho multiplicativity on probes.

    ``method="symbolic"`` reads the constants off the Iwahori-Matsumoto
    expansion; ``method="probe"`` solves for them among all basis elements
    with labels in ``[-degree_bound, degree_bound]`` using only the
    representation.  The residual rho(b2)rho(b1)f - sum c_d rho(b^d)f is then
    evaluated on every probe: literally as nested actions, or with
    ``literal=False`` as the single Hecke element A_2 A_1 - sum c_d A_d
    applied to f (the same number by the module axiom, but with every T_x f
    shared across calls).  Every image rho(b)f that occurs is also tested
    for invariance under its target parabolic.
    """
    if b2.J != b1.K:
        raise ValueError("b2 must start where b1 ends")
    n = b1.n
    if probes is None:
        probes = _probes_for(field, n, b1.J, 3)
    images = [_rho_cached(field, b1, f) for f in probes]
    invariant = all(is_invariant(field, g, b1.K) for g in images)
    lhs = [rho(field, b2, g) for g in images] if (literal or method == "probe") else None
    if method == "symbolic":
        coeffs = _symbolic_expand(field, b2, b1)
    elif method == "probe":
        cands = basis_elements(n, b2.K, b1.J, degree_bound)
        cols = {b: [dict(_rho_cached(field, b, f).terms) for f in probes] for b in cands}
        sol = solve_combination(cols, [dict(g.terms) for g in lhs], field.ell)
        if sol is None:
            return Expansion({}, method, len(probes), False, invariant, probes[0])
        coeffs = {b: c for b, c in sol.items() if c}
    else:
        raise ValueError(f"unknown method {method!r}")
    witness = None
    if lhs is not None:
        invariant = invariant and all(is_invariant(field, g, b2.K) for g in lhs)
        for f, g in zip(probes, lhs):
            rhs = LaurentPoly.zero(n, field.ell)
            for b, c in coeffs.items():
                img = _rho_cached(field, b, f)
                rhs = rhs + img.scale(c)
            if not (g - rhs).is_zero():
                witness = f
                break
    else:
        for b in coeffs:
            invariant = invariant and all(_image_invariant(field, b, f) for f in probes)
        R = _residual_operator(field, b2, b1, coeffs)
        for f in probes:
            if not act_affine_sum(field, TRIV, R, f).is_zero():
                witness = f
                break
    return Expansion(coeffs, method, len(probes), witness is None, invariant, witness)


@lru_cache(maxsize=200_000)
def _image_invariant(field: Field, b: SchurBasisElem, f: LaurentPoly) -> bool:
    return is_invariant(field, _rho_cached(field, b, f), b.K)


@dataclass
class MultiplicativityReport:
    n: int
    bound: int
    pairs: int
    literal_pairs: int
    failures: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_multiplicativity(field: Field, n: int, bound: int = 1, literal_every: int = 50) -> MultiplicativityReport:
    """compose_and_expand over every composable pair with labels in [-bound, bound].

    One pair in ``literal_every`` is additionally checked by literal nested
    evaluation of rho.
    """
    from .combinatorics import all_subsets

    subsets = all_subsets(n)
    basis = {(K, J): basis_elements(n, K, J, bound) for K in subsets for J in subsets}
    report = MultiplicativityReport(n, bound, 0, 0)
    for L in subsets:
        for K in subsets:
            for J in subsets:
                for b2 in basis[(L, K)]:
                    for b1 in basis[(K, J)]:
                        literal = literal_every > 0 and report.pairs % literal_every == 0
                        res = compose_and_expand(field, b2, b1, literal=literal)
                        report.pairs += 1
                        report.literal_pairs += literal
                        if not res.ok:
                            report.failures.append((str(b2), str(b1)))
    return report


def faithfulness_rank(field: Field, n: int, K: Iterable[int], J: Iterable[int], bound: int, probes: int = 8, seed: int = 0) -> tuple[int, int]:
    """(rank, count) of the operators rho(b), b in the window, restricted to probes.

    Full rank means the probe images already distinguish every basis element.
    """
    elems = basis_elements(n, K, J, bound)
    fs = invariant_probes(field, n, J, probes, window=bound + 1, seed=seed)
    red = RowReducer(field.ell)
    for b in elems:
        red.add({(s, e): c for s, f in enumerate(fs) for e, c in rho(field, b, f).terms.items()})
    return red.rank, len(elems)


# ---------------------------------------------------------------------------
# completed merges


def _merge_shape(uJ: SegmentedSeq) -> int:
    """The a with J = I minus {a}; 0 when J is everything."""
    n = uJ.n
    missing = set(range(1, n)) - set(uJ.J)
    if len(missing) > 1:
        raise ValueError("merge formulas need at most two segments")
    return missing.pop() if missing else 0


def _invariant_family(uJ: SegmentedSeq, f: LaurentPoly, prec: int) -> CompletedElem:
    """f e^+_{u_J}: the family with payload w(f) on each component w u_J."""
    n, p = uJ.n, f.p
    comps = {}
    for w in min_left_coset_reps(n, uJ.J, uJ.parabolic()):
        comps[w.act_seq(uJ.residues)] = TruncSeries(f.permute(w), prec)
    return CompletedElem(n, p, comps)


def merge_direct(field: Field, uJ: SegmentedSeq, f: LaurentPoly, prec: int) -> TruncSeries:
    """e_u rho_bar(b^1_{I,J}) f on the sorted component, by summing T^sharp over D^I_{0,J}."""
    n = uJ.n
    rep = CompletedRep(field, uJ.residues, prec, SIGN)
    x = _invariant_family(uJ, f, prec)
    total = CompletedElem(n, field.ell, {})
    for w in min_left_coset_reps(n, range(1, n), uJ.J):
        y = x
        for i in reversed(w.reduced_word()):
            y = rep.act_Tsharp(i, y)
        total = total + y
    out = total.component(tuple(sorted(uJ.residues)))
    return out if out is not None else TruncSeries.zero(n, field.ell, prec)


def merge_closed_form(field: Field, uJ: SegmentedSeq, f: LaurentPoly, prec: int) -> TruncSeries:
    """The same merge through theta factors, the sorting permutation and a symmetriser.

    Factors theta_{l,k} with equal residues become poles (x_k - x_l) that are
    cancelled exactly by the Vandermonde part of the symmetriser; all other
    denominators are units of the power series ring.
    """
    n, p, q = uJ.n, field.ell, field.q
    a = _merge_shape(uJ)
    res = uJ.residues
    if a == 0:
        return TruncSeries(f, prec)

    def X(j: int) -> TruncSeries:
        c = field.qpow(res[j - 1])
        return TruncSeries(LaurentPoly.linear(n, p, {j: -c}, c), None)

    num = TruncSeries(f, prec)
    poles = []
    for l in range(1, a + 1):
        for k in range(a + 1, n + 1):
            beta = X(l).scale(q) - X(k)
            if res[l - 1] == res[k - 1]:
                # X_l - X_k = q^c (x_k - x_l)
                num = num * beta.scale(field.qpow(-res[l - 1]))
                poles.append((l, k))
            else:
                num = num * series_invert((X(l) - X(k)).truncate(prec), prec)
                num = num * beta
    sigma = merge_perm(uJ, range(1, n))
    num = num.permute(sigma)
    poles = {(sigma(k), sigma(l)) for l, k in poles}
    uK = segment(sigma.act_seq(res), range(1, n), field.e)
    IK = uK.parabolic()
    vpairs = [(i, j) for s, t in blocks_of(n, IK) for i in range(s, t + 1) for j in range(i + 1, t + 1)]
    M = num
    for i, j in vpairs:
        if (i, j) in poles:
            continue
        if (j, i) in poles:
            M = -M
            continue
        M = M * TruncSeries(LaurentPoly.linear(n, p, {i: 1, j: -1}), None)
    Jp = [sigma(i) for i in uJ.parabolic()]
    S = TruncSeries.zero(n, p, prec)
    for w in min_left_coset_reps(n, IK, Jp):
        t = M.permute(w)
        S = S + (t if w.length() % 2 == 0 else -t)
    for i, j in vpairs:
        S = S.divide_linear(i, j, 1)
    return S


# ---------------------------------------------------------------------------
# completed basis operators


def two_segment_shapes(n: int, e: int) -> list[SegmentedSeq]:
    """Every u_J with residues in 1..e and at most two segments."""
    full = frozenset(range(1, n))
    out = []
    for J in [full] + [full - {a} for a in range(1, n)]:
        seen = set()
        for u in product(range(1, e + 1), repeat=n):
            uJ = segment(u, J, e)
            if uJ not in seen:
                seen.add(uJ)
                out.append(uJ)
    return out


def symmetrised_probes(uJ: SegmentedSeq, p: int, max_degree: int) -> list[LaurentPoly]:
    """Monomials of degree <= max_degree summed over the stabiliser of u_J (duplicates removed)."""
    W = parabolic_elements(uJ.n, uJ.parabolic())
    out, seen = [], set()
    for f in monomial_probes(uJ.n, p, max_degree):
        g = LaurentPoly.zero(uJ.n, p)
        for w in W:
            g = g + f.permute(w)
        if not g.is_zero() and g not in seen:
            seen.add(g)
            out.append(g)
    return out


def verify_merge_closed_form(field: Field, n: int, prec: int = 6, probe_degree: int = 2) -> list[dict]:
    """Closed formula against the direct coset sum for every two-segment u_J of size n."""
    out = []
    for uJ in two_segment_shapes(n, field.e):
        probes = symmetrised_probes(uJ, field.ell, probe_degree)
        witness = next((str(f) for f in probes if merge_direct(field, uJ, f, prec) != merge_closed_form(field, uJ, f, prec)), None)
        out.append({"shape": str(uJ), "probes": len(probes), "ok": witness is None, "witness": witness})
    return out


def completed_op(
    field: Field,
    K2: Iterable[int],
    d: Perm,
    p: Sequence[int],
    uJ: SegmentedSeq,
    K1: Iterable[int],
    x: CompletedElem,
    prec: int,
) -> CompletedElem:
    """The sign-variant action of e^+ b^1_{K2,dJ} b^d b^p e^+_{u_J} b^1_{J,K1} on x.

    ``x`` is a family over the W_{K1}-orbit of u_J; ``p`` is dominant for the
    stabiliser parabolic of u_J and enters through g_p^sharp.  Incompatible
    residue data gives the zero operator.
    """
    n = uJ.n
    K1, K2 = simple_subset(K1), simple_subset(K2)
    J = simple_subset(conjugate_subset(d, K1, K2))
    if J != uJ.J or not J <= K1:
        return CompletedElem(n, field.ell, {})
    rep = CompletedRep(field, uJ.residues, prec, SIGN)
    I = uJ.parabolic()
    # project to the W_J-orbit of u_J; the split b^1_{J,K1} is an inclusion
    orbit = {w.act_seq(uJ.residues): w for w in min_left_coset_reps(n, J, I)}
    y = CompletedElem(n, field.ell, {u: s for u, s in x.comps.items() if u in orbit})
    if any(p):
        g = q_element(field, n, I, p).g.invert_vars()
        y = CompletedElem(n, field.ell, {u: s * rep.local_series(u, g.permute(orbit[u])) for u, s in y.comps.items()})
    for i in reversed(d.reduced_word()):
        y = rep.act_Tsharp(i, y)
    dJ = conjugate_subset(d.inverse(), K2, J)
    total = CompletedElem(n, field.ell, {})
    for a in min_left_coset_reps(n, K2, dJ):
        z = y
        for i in reversed(a.reduced_word()):
            z = rep.act_Tsharp(i, z)
        total = total + z
    target = {w.act_seq(d.act_seq(uJ.residues)) for w in parabolic_elements(n, K2)}
    return CompletedElem(n, field.ell, {u: s for u, s in total.comps.items() if u in target})


# ---------------------------------------------------------------------------
# the generating set: recursion for merges with the top term removed


def _composition(parts: Sequence[int]) -> SimpleSubset:
    return composition_subset([c for c in parts if c > 0])


def qmerge_op(field: Field, K: Sequence[int], J: Sequence[int], f: LaurentPoly) -> LaurentPoly:
    """q-merge for compositions K, J: the sum of T^sharp_w over D^K_{0,J} on the sign representation."""
    n = f.nvars
    total = LaurentPoly.zero(n, field.ell)
    for w in min_left_coset_reps(n, _composition(K), _composition(J)):
        g = f
        for i in reversed(w.reduced_word()):
            g = act_Tsharp(field, SIGN, i, g)
        total = total + g
    return total


def _longest_rep(n: int, K: Sequence[int], J: Sequence[int]) -> Perm:
    return max(min_left_coset_reps(n, _composition(K), _composition(J)), key=lambda w: w.length())


def _act_word(field: Field, w: Perm, f: LaurentPoly) -> LaurentPoly:
    for i in reversed(w.reduced_word()):
        f = act_Tsharp(field, SIGN, i, f)
    return f


def qmerge_bar_op(field: Field, K: Sequence[int], J: Sequence[int], f: LaurentPoly) -> LaurentPoly:
    """The q-merge with its longest term T^sharp_{d} removed."""
    n = f.nvars
    return qmerge_op(field, K, J, f) - _act_word(field, _longest_rep(n, K, J), f)


def verify_generators(field: Field, n: int, window: int = 2, probes: int = 6, seed: int = 0) -> list[dict]:
    """Check the truncated merge recursion for every split n = a + b as operators on probes.

    For a, b >= 1 the recursion reads

        bar(M^{a+b}_{a,b}) = M^{1,n-1}_{1,a,b-1} bar(M^{a+1,b-1}_{a,1,b-1})
                           + bar(M^{1,n-1}_{1,a,b-1}) M^{a+1,b-1}_{a,1,b-1}
                           - bar(M^{1,n-1}_{1,a,b-1}) bar(M^{a+1,b-1}_{a,1,b-1})
                           - M^{1,n-1}_{1,a-1,b} M^{a,b}_{a,1,b-1}
                           + M^{1,n-1}_{1,a-1,b}

    with M the q-merge.  Together with the factorisation of the top term
    T^sharp_d into top terms of smaller merges this expresses every
    T^sharp_d, d a longest shuffle, through merges and splits.
    """
    rng = random.Random(seed)
    p = field.ell
    fs = [LaurentPoly(n, p, {tuple(rng.randint(-window, window) for _ in range(n)): rng.randint(1, p - 1) for _ in range(3)}) for _ in range(probes)]
    reports = []
    M, B = qmerge_op, qmerge_bar_op
    for a in range(1, n):
        b = n - a
        big, bigJ = (1, n - 1), (1, a, b - 1)
        small, smallJ = (a + 1, b - 1), (a, 1, b - 1)
        witness = None
        for f in fs:
            lhs = B(field, (n,), (a, b), f)
            rhs = (
                M(field, big, bigJ, B(field, small, smallJ, f))
                + B(field, big, bigJ, M(field, small, smallJ, f))
                - B(field, big, bigJ, B(field, small, smallJ, f))
                - M(field, big, (1, a - 1, b), M(field, (a, b), smallJ, f))
                + M(field, big, (1, a - 1, b), f)
            )
            if not (lhs - rhs).is_zero():
                witness = str(f)
                break
        d = _longest_rep(n, (n,), (a, b))
        d1 = _longest_rep(n, big, bigJ)
        d2 = _longest_rep(n, small, smallJ)
        factorises = d1 * d2 == d and d1.length() + d2.length() == d.length()
        reports.append(
            {
                "identity": f"merge recursion a={a} b={b}",
                "n": n,
                "probes": len(fs),
                "pass": witness is None and factorises,
                "factorises": factorises,
                "witness": witness,
            }
        )
    return reports
