"""Quiver Schur algebras of the cyclic quiver as operators on invariant polynomials.

A vector is a family ``{u_J: f}`` where ``f`` is a polynomial (or truncated
series) in positional variables ``x_1..x_n``.  The variable at position ``p``
of ``u_J`` carries the label ``(i, a)`` when ``p`` holds the ``a``-th
occurrence of residue ``i``; printed, it is ``y(i,a)`` for the modified
algebra and ``z(i,a)`` for the ordinary and shifted ones.  Payloads are
invariant under the stabiliser parabolic ``I_{u_J}``.

Three flavours share one set of idempotents and polynomial operators:

* ``C`` (modified): splits include, merges are ``Delta(E^K_J f)``;
* ``A`` (ordinary): splits multiply by the ring class, merges are ``Delta(f)``;
* ``B`` (shifted): splits include, merges are ``Delta(ring class * f)``.

Here ``Delta(g)`` is the symmetrisation of ``g / S^K_J`` over minimal coset
representatives; it is always evaluated as a single Demazure operator, which
keeps outputs polynomial by construction.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import product
from typing import Callable, Iterable, Mapping, Sequence

from .combinatorics import (
    Field,
    Perm,
    SegmentedSeq,
    blocks_of,
    merge_perm,
    min_left_coset_reps,
    segment,
    segmentations,
    simple_subset,
)
from .linalg import RowReducer
from .polyalg import LaurentPoly, RationalExpr, demazure_word, merge_sum

__all__ = [
    "FLAVORS",
    "succ",
    "labels",
    "label_name",
    "poly_text",
    "is_component_invariant",
    "EulerClasses",
    "euler_classes",
    "total_E",
    "total_ring_E",
    "total_S",
    "coarsen",
    "merge_coset_longest",
    "QSVector",
    "QSOperator",
    "idempotent_op",
    "poly_op",
    "split_op",
    "merge_op",
    "merge_rational",
    "GradingError",
    "grading_check",
    "Relation",
    "gl2_generators",
    "gl2_relations",
    "check_relation",
    "path_dimensions",
    "operator_dimensions",
    "build_gl2_example",
]

FLAVORS = ("A", "B", "C")


def succ(i: int, e: int) -> int:
    """The residue after i on the cyclic quiver with vertices 1..e."""
    return i % e + 1


# ---------------------------------------------------------------------------
# labels and components


def labels(uJ: SegmentedSeq) -> list[tuple[int, int]]:
    """Position p -> (residue, occurrence) for every position of u_J."""
    seen: dict[int, int] = {}
    out = []
    for r in uJ.residues:
        seen[r] = seen.get(r, 0) + 1
        out.append((r, seen[r]))
    return out


def label_name(uJ: SegmentedSeq, family: str = "y") -> Callable[[int], str]:
    lab = labels(uJ)
    return lambda p: f"{family}({lab[p - 1][0]},{lab[p - 1][1]})"


def poly_text(uJ: SegmentedSeq, f: LaurentPoly, family: str = "y") -> str:
    return f.to_str(label_name(uJ, family))


def _segment_index(uJ: SegmentedSeq) -> list[int]:
    out = []
    for s, (a, b) in enumerate(uJ.blocks):
        out.extend([s] * (b - a + 1))
    return out


def is_component_invariant(uJ: SegmentedSeq, f) -> bool:
    """Invariance under the generator transpositions of the stabiliser of u_J."""
    return all(f.swap(i, i + 1) == f for i in uJ.parabolic())


def coarsen(uJ: SegmentedSeq, K: Iterable[int]) -> tuple[SegmentedSeq, Perm]:
    """u_K together with the stable sort sigma taking u_J to it."""
    K = simple_subset(K)
    if not uJ.J <= K:
        raise ValueError("J must be contained in K")
    return segment(uJ.residues, K, uJ.e), merge_perm(uJ, K)


# ---------------------------------------------------------------------------
# Euler classes and symmetrisers

_Rel = Callable[[int, int, int], bool]
_REL_E: _Rel = lambda a, b, e: b == succ(a, e)  # noqa: E731  (y_{i} - y_{i+1})
_REL_RING: _Rel = lambda a, b, e: a == succ(b, e)  # noqa: E731  (z_{i+1} - z_{i})
_REL_S: _Rel = lambda a, b, e: a == b  # noqa: E731


def _pair_factors(uJ: SegmentedSeq, rel: _Rel, K: frozenset | None) -> list[tuple[int, int]]:
    """Pairs p < p' in different J-segments (inside one K-segment if K is given)."""
    seg = _segment_index(uJ)
    kseg = _segment_index(segment(uJ.residues, K, uJ.e)) if K is not None else None
    res, e = uJ.residues, uJ.e
    out = []
    for p in range(1, uJ.n + 1):
        for pp in range(p + 1, uJ.n + 1):
            if seg[p - 1] == seg[pp - 1]:
                continue
            if kseg is not None and kseg[p - 1] != kseg[pp - 1]:
                continue
            if rel(res[p - 1], res[pp - 1], e):
                out.append((p, pp))
    return out


def _product(n: int, p: int, pairs: Sequence[tuple[int, int]]) -> LaurentPoly:
    out = LaurentPoly.one(n, p)
    for a, b in pairs:
        out = out * LaurentPoly.linear(n, p, {a: 1, b: -1})
    return out


def total_E(uJ: SegmentedSeq, p: int) -> LaurentPoly:
    """The total reversed Euler class in the y variables of u_J."""
    return _product(uJ.n, p, _pair_factors(uJ, _REL_E, None))


def total_ring_E(uJ: SegmentedSeq, p: int) -> LaurentPoly:
    """The total ring Euler class in the z variables of u_J."""
    return _product(uJ.n, p, _pair_factors(uJ, _REL_RING, None))


def total_S(uJ: SegmentedSeq, p: int) -> LaurentPoly:
    """The total symmetriser (same formula in y or z)."""
    return _product(uJ.n, p, _pair_factors(uJ, _REL_S, None))


def _exact_quotient(num: LaurentPoly, den_pairs: Sequence[tuple[int, int]]) -> LaurentPoly:
    for a, b in den_pairs:
        num = num.divide_linear(a, b, 1)  # DivisionError if not exact
    return num


@dataclass(frozen=True)
class EulerClasses:
    """Total and relative classes of u_J inside u_K, in the positional chart of u_J."""

    uJ: SegmentedSeq
    uK: SegmentedSeq
    E: LaurentPoly
    E_ring: LaurentPoly
    S: LaurentPoly
    E_rel: LaurentPoly
    E_ring_rel: LaurentPoly
    S_rel: LaurentPoly
    S_rel_pairs: tuple[tuple[int, int], ...]


def euler_classes(uJ: SegmentedSeq, K: Iterable[int], p: int) -> EulerClasses:
    """All classes for the pair J in K.

    Relative classes are obtained as exact quotients of the total class of
    u_J by the total class of u_K moved into the chart of u_J; the result is
    compared with the direct product over pairs glued by K.
    """
    uK, sigma = coarsen(uJ, K)
    back = sigma.inverse()
    out = {}
    for name, rel in (("E", _REL_E), ("E_ring", _REL_RING), ("S", _REL_S)):
        total = _product(uJ.n, p, _pair_factors(uJ, rel, None))
        outer = [tuple(sorted((back(a), back(b)))) for a, b in _pair_factors(uK, rel, None)]
        rel_q = _exact_quotient(total, outer)
        direct = _product(uJ.n, p, _pair_factors(uJ, rel, uK.J))
        if rel_q != direct:
            raise ArithmeticError(f"relative {name} class disagrees with its direct product")
        out[name] = (total, rel_q)
    return EulerClasses(
        uJ,
        uK,
        out["E"][0],
        out["E_ring"][0],
        out["S"][0],
        out["E"][1],
        out["E_ring"][1],
        out["S"][1],
        tuple(_pair_factors(uJ, _REL_S, uK.J)),
    )


# ---------------------------------------------------------------------------
# vectors and operators


class QSVector:
    """A finite family {u_J: payload}; zero payloads are dropped."""

    __slots__ = ("comps",)

    def __init__(self, comps: Mapping[SegmentedSeq, object] | None = None):
        self.comps = {u: f for u, f in (comps or {}).items() if not f.is_zero()}

    @classmethod
    def single(cls, uJ: SegmentedSeq, f) -> "QSVector":
        return cls({uJ: f})

    def __add__(self, other: "QSVector") -> "QSVector":
        d = dict(self.comps)
        for u, f in other.comps.items():
            d[u] = d[u] + f if u in d else f
        return QSVector(d)

    def __neg__(self) -> "QSVector":
        return QSVector({u: -f for u, f in self.comps.items()})

    def __sub__(self, other: "QSVector") -> "QSVector":
        return self + (-other)

    def scale(self, c: int) -> "QSVector":
        return QSVector({u: f.scale(c) for u, f in self.comps.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSVector):
            return NotImplemented
        return not (self - other).comps

    __hash__ = None  # type: ignore[assignment]

    def get(self, uJ: SegmentedSeq):
        return self.comps.get(uJ)

    def __str__(self) -> str:
        if not self.comps:
            return "0"
        return " + ".join(f"[{f}]e{u}" for u, f in sorted(self.comps.items(), key=lambda t: (t[0].residues, sorted(t[0].J))))

    __repr__ = __str__


@dataclass(frozen=True)
class QSOperator:
    """A homogeneous operator mapping component ``source`` to ``target``.

    ``shift`` is the change of polynomial degree; composites carry the sum of
    shifts and the list of their factors' names.
    """

    kind: str
    flavor: str
    source: SegmentedSeq
    target: SegmentedSeq
    shift: int
    name: str
    fn: Callable = dc_field(compare=False, repr=False)

    def apply(self, v: QSVector) -> QSVector:
        f = v.get(self.source)
        if f is None:
            return QSVector()
        return QSVector.single(self.target, self.fn(f))

    def __call__(self, v: QSVector) -> QSVector:
        return self.apply(v)

    def __mul__(self, other: "QSOperator") -> "QSOperator":
        """self after other; mismatched components give a zero operator."""
        if other.target != self.source:
            return QSOperator("zero", self.flavor, other.source, self.target, self.shift + other.shift, "0", lambda f: f.scale(0))
        f1, f2 = self.fn, other.fn
        return QSOperator("composite", self.flavor, other.source, self.target, self.shift + other.shift, f"{self.name}*{other.name}", lambda f: f1(f2(f)))


def idempotent_op(uJ: SegmentedSeq, flavor: str = "A") -> QSOperator:
    return QSOperator("idempotent", flavor, uJ, uJ, 0, f"e{uJ}", lambda f: f)


def poly_op(uJ: SegmentedSeq, g: LaurentPoly, flavor: str = "A", name: str | None = None) -> QSOperator:
    """Multiplication by an I_{u_J}-invariant polynomial g."""
    if not is_component_invariant(uJ, g):
        raise ValueError("multiplier must be invariant under the stabiliser of u_J")
    if not g.is_homogeneous():
        raise ValueError("multiplier must be homogeneous")
    return QSOperator("polynomial", flavor, uJ, uJ, g.degree() or 0, name or f"({g})e{uJ}", lambda f: f * g)


def _check_flavor(flavor: str) -> None:
    if flavor not in FLAVORS:
        raise ValueError(f"unknown flavour {flavor!r}")


def split_op(flavor: str, uJ: SegmentedSeq, K: Iterable[int], p: int) -> QSOperator:
    """The split from u_K (the coarsening of u_J by K) to u_J."""
    _check_flavor(flavor)
    cls = euler_classes(uJ, K, p)
    back = merge_perm(uJ, cls.uK.J).inverse()
    if flavor == "A":
        mult = cls.E_ring_rel
        fn = lambda f: f.permute(back) * mult  # noqa: E731
        shift = mult.degree() or 0
    else:
        fn = lambda f: f.permute(back)  # noqa: E731
        shift = 0
    return QSOperator("split", flavor, cls.uK, uJ, shift, f"split{cls.uK}->{uJ}", fn)


@lru_cache(maxsize=None)
def merge_coset_longest(n: int, IK: frozenset, IJ: frozenset) -> Perm:
    """The longest minimal representative of W_{IK} / W_{IJ}."""
    return max(min_left_coset_reps(n, IK, IJ), key=lambda w: (w.length(), w.images))


def merge_op(flavor: str, uJ: SegmentedSeq, K: Iterable[int], p: int) -> QSOperator:
    """The merge from u_J to its coarsening u_K.

    After multiplying by the flavour's relative class (if any) and moving to
    the chart of u_K, the symmetrisation of g / S^K_J over minimal coset
    representatives is the single Demazure operator of the longest one.
    """
    _check_flavor(flavor)
    cls = euler_classes(uJ, K, p)
    sigma = merge_perm(uJ, cls.uK.J)
    IJ = frozenset(sigma(i) for i in uJ.parabolic())
    d = merge_coset_longest(uJ.n, frozenset(cls.uK.parabolic()), IJ)
    word = d.reduced_word()
    mult = {"A": None, "B": cls.E_ring_rel, "C": cls.E_rel}[flavor]

    def fn(f):
        g = f * mult if mult is not None else f
        return demazure_word(word, g.permute(sigma))

    shift = (mult.degree() if mult is not None else 0) - len(word)
    return QSOperator("merge", flavor, uJ, cls.uK, shift, f"merge{uJ}->{cls.uK}", fn)


def merge_rational(flavor: str, uJ: SegmentedSeq, K: Iterable[int], f: LaurentPoly) -> RationalExpr:
    """The defining rational symmetrisation, kept as an oracle for merge_op."""
    _check_flavor(flavor)
    p = f.p
    cls = euler_classes(uJ, K, p)
    sigma = merge_perm(uJ, cls.uK.J)
    mult = {"A": None, "B": cls.E_ring_rel, "C": cls.E_rel}[flavor]
    g = (f * mult if mult is not None else f).permute(sigma)
    expr = RationalExpr(g)
    for a, b in cls.S_rel_pairs:
        expr = expr * RationalExpr.over_linear(LaurentPoly.one(uJ.n, p), sigma(a), sigma(b), 1)
    IJ = [sigma(i) for i in uJ.parabolic()]
    return merge_sum(cls.uK.parabolic(), IJ, expr, uJ.n)


# ---------------------------------------------------------------------------
# grading


class GradingError(ValueError):
    """Raised when no per-component offsets reproduce the declared degrees."""

    def __init__(self, message: str, cycle: list[str]):
        super().__init__(message)
        self.cycle = cycle


def _homogeneous_on(op: QSOperator, probes: Sequence[LaurentPoly]) -> bool:
    for f in probes:
        g = op.fn(f)
        if g.is_zero():
            continue
        if not g.is_homogeneous() or g.degree() != (f.degree() or 0) + op.shift:
            return False
    return True


def grading_check(
    ops: Sequence[QSOperator],
    declared: Mapping[str, int],
    probes: Callable[[SegmentedSeq], Sequence[LaurentPoly]],
) -> dict:
    """Solve deg(op) = 2 shift + o(target) - o(source) for offsets o.

    Every operator must be homogeneous on the supplied homogeneous probes.
    Offsets are normalised to have minimum 0.  Inconsistent data raises
    GradingError carrying the closing cycle of operator names.
    """
    for op in ops:
        if not _homogeneous_on(op, probes(op.source)):
            raise GradingError(f"{op.name} is not homogeneous", [op.name])
    adj: dict[SegmentedSeq, list[tuple[SegmentedSeq, int, str]]] = {}
    for op in ops:
        w = declared[op.name] - 2 * op.shift
        adj.setdefault(op.source, []).append((op.target, w, op.name))
        adj.setdefault(op.target, []).append((op.source, -w, op.name))
    offsets: dict[SegmentedSeq, int] = {}
    via: dict[SegmentedSeq, tuple[SegmentedSeq | None, str | None]] = {}
    for root in adj:
        if root in offsets:
            continue
        offsets[root] = 0
        via[root] = (None, None)
        todo = deque([root])
        while todo:
            v = todo.popleft()
            for t, w, name in adj[v]:
                want = offsets[v] + w
                if t not in offsets:
                    offsets[t] = want
                    via[t] = (v, name)
                    todo.append(t)
                elif offsets[t] != want:
                    raise GradingError(f"inconsistent degrees around {name}", _path(via, v) + [name] + _path(via, t)[::-1])
    lo = min(offsets.values()) if offsets else 0
    offsets = {u: o - lo for u, o in offsets.items()}
    degrees = {op.name: 2 * op.shift + offsets[op.target] - offsets[op.source] for op in ops}
    return {"offsets": offsets, "degrees": degrees}


def _path(via: dict, v) -> list[str]:
    out = []
    while via[v][0] is not None:
        out.append(via[v][1])
        v = via[v][0]
    return out[::-1]


# ---------------------------------------------------------------------------
# relations and the rank-two example


@dataclass(frozen=True)
class Relation:
    """sum_k c_k word_k = rhs_poly * e(vertex); words are generator names, rightmost first applied."""

    name: str
    vertex_in: SegmentedSeq
    vertex_out: SegmentedSeq
    lhs: tuple[tuple[int, tuple[str, ...]], ...]
    rhs: LaurentPoly | None = None


def _label_poly(uJ: SegmentedSeq, p: int, coeffs: Mapping[tuple[int, int], int]) -> LaurentPoly:
    pos = {lab: k for k, lab in enumerate(labels(uJ), 1)}
    return LaurentPoly.linear(uJ.n, p, {pos[lab]: c for lab, c in coeffs.items()})


def gl2_vertices(e: int = 2) -> dict[str, SegmentedSeq]:
    return {
        "(1|2)": segment((1, 2), (), e),
        "(2|1)": segment((2, 1), (), e),
        "(1,2)": segment((1, 2), (1,), e),
    }


def gl2_generators(field: Field, flavor: str = "A") -> dict[str, QSOperator]:
    """Named generators: idempotents, the loops x_{i,1} e, simple merges and splits."""
    if field.e != 2:
        raise ValueError("the rank-two example needs e = 2")
    p = field.ell
    V = gl2_vertices(field.e)
    gens: dict[str, QSOperator] = {}
    for key, u in V.items():
        gens[f"e{key}"] = idempotent_op(u, flavor)
        for i in (1, 2):
            g = _label_poly(u, p, {(i, 1): 1})
            gens[f"x{i}{key}"] = poly_op(u, g, flavor, name=f"x{i}{key}")
    for key in ("(1|2)", "(2|1)"):
        m = merge_op(flavor, V[key], (1,), p)
        s = split_op(flavor, V[key], (1,), p)
        gens[f"merge{key}"] = QSOperator(m.kind, flavor, m.source, m.target, m.shift, f"merge{key}", m.fn)
        gens[f"split{key}"] = QSOperator(s.kind, flavor, s.source, s.target, s.shift, f"split{key}", s.fn)
    return gens


def gl2_relations(field: Field, literal: bool = False) -> list[Relation]:
    """The defining relations of the rank-two path algebra.

    With ``literal=True`` the first two relations carry the signs in which
    they are usually printed; those are inconsistent with the third relation
    and the commutation relations, and fail on the faithful representation.
    """
    p = field.ell
    V = gl2_vertices(field.e)
    sgn = -1 if literal else 1
    rels = [
        Relation("split∘merge on (1|2)", V["(1|2)"], V["(1|2)"], ((1, ("split(1|2)", "merge(1|2)")),), _label_poly(V["(1|2)"], p, {(1, 1): sgn, (2, 1): -sgn})),
        Relation("split∘merge on (2|1)", V["(2|1)"], V["(2|1)"], ((1, ("split(2|1)", "merge(2|1)")),), _label_poly(V["(2|1)"], p, {(1, 1): -sgn, (2, 1): sgn})),
        Relation("merge∘split via (1|2) on (1,2)", V["(1,2)"], V["(1,2)"], ((1, ("merge(1|2)", "split(1|2)")),), _label_poly(V["(1,2)"], p, {(1, 1): 1, (2, 1): -1})),
        Relation("merge∘split via (2|1) on (1,2)", V["(1,2)"], V["(1,2)"], ((-1, ("merge(2|1)", "split(2|1)")),), _label_poly(V["(1,2)"], p, {(1, 1): 1, (2, 1): -1})),
    ]
    for key in ("(1|2)", "(2|1)"):
        for i in (1, 2):
            rels.append(Relation(f"x{i} commutes with split{key}", V["(1,2)"], V[key], ((1, (f"x{i}{key}", f"split{key}")), (-1, (f"split{key}", f"x{i}(1,2)"))), None))
            rels.append(Relation(f"x{i} commutes with merge{key}", V[key], V["(1,2)"], ((1, (f"x{i}(1,2)", f"merge{key}")), (-1, (f"merge{key}", f"x{i}{key}"))), None))
    return rels


def _eval_words(gens: Mapping[str, Callable], words, f):
    total = None
    for c, word in words:
        g = f
        for name in reversed(word):
            g = gens[name](g)
        g = g.scale(c % g.p)
        total = g if total is None else total + g
    return total


def check_relation(rel: Relation, gens: Mapping[str, Callable], probes: Sequence) -> tuple[bool, object]:
    """Evaluate both sides on payload probes; returns (ok, first witness or None).

    ``gens`` maps generator names to payload functions (source chart to
    target chart), so the same relation list can be checked on any
    realisation.
    """
    for f in probes:
        lhs = _eval_words(gens, rel.lhs, f)
        rhs = f.scale(0) if rel.rhs is None else f * rel.rhs
        if lhs != rhs:
            return False, f
    return True, None


# path algebra side -------------------------------------------------------

_ARROWS = {
    # name: (source, target, degree)
    "merge(1|2)": ("(1|2)", "(1,2)", 1),
    "merge(2|1)": ("(2|1)", "(1,2)", 1),
    "split(1|2)": ("(1,2)", "(1|2)", 1),
    "split(2|1)": ("(1,2)", "(2|1)", 1),
}


def _quiver_edges() -> dict[str, tuple[str, str, int]]:
    edges = dict(_ARROWS)
    for v in ("(1|2)", "(2|1)", "(1,2)"):
        for i in (1, 2):
            edges[f"x{i}{v}"] = (v, v, 2)
    return edges


def _paths(start: str, degree: int, edges) -> list[tuple[str, tuple[str, ...]]]:
    """All paths from ``start`` of exact degree; words are stored rightmost-first-applied."""
    out = []

    def walk(v: str, word: tuple[str, ...], d: int):
        if d == degree:
            out.append((v, word))
            return
        for name, (s, t, k) in edges.items():
            if s == v and d + k <= degree:
                walk(t, (name,) + word, d + k)

    walk(start, (), 0)
    return out


def _relation_words(field: Field) -> list[tuple[str, str, int, list[tuple[int, tuple[str, ...]]]]]:
    """Relations as (source, target, degree, linear combination of paths)."""
    out = []
    p = field.ell
    for v, split, merge, sgn in (("(1|2)", "split(1|2)", "merge(1|2)", 1), ("(2|1)", "split(2|1)", "merge(2|1)", -1)):
        # split merge = sgn (x1 - x2) e
        out.append((v, v, 2, [(1, (split, merge)), (-sgn % p, (f"x1{v}",)), (sgn % p, (f"x2{v}",))]))
    out.append(("(1,2)", "(1,2)", 2, [(1, ("merge(1|2)", "split(1|2)")), (-1 % p, ("x1(1,2)",)), (1, ("x2(1,2)",))]))
    out.append(("(1,2)", "(1,2)", 2, [(1, ("merge(1|2)", "split(1|2)")), (1, ("merge(2|1)", "split(2|1)"))]))
    for key in ("(1|2)", "(2|1)"):
        for i in (1, 2):
            out.append(("(1,2)", key, 3, [(1, (f"x{i}{key}", f"split{key}")), (-1 % p, (f"split{key}", f"x{i}(1,2)"))]))
            out.append((key, "(1,2)", 3, [(1, (f"x{i}(1,2)", f"merge{key}")), (-1 % p, (f"merge{key}", f"x{i}{key}"))]))
    return out


def path_dimensions(field: Field, max_degree: int) -> dict[tuple[str, str], list[int]]:
    """dim e' B_d e of the path algebra modulo the relations, by brute force.

    In each degree the two-sided ideal is spanned by a*r*b with a, b paths
    and r a relation; its rank is subtracted from the number of paths.
    """
    p = field.ell
    edges = _quiver_edges()
    verts = ("(1|2)", "(2|1)", "(1,2)")
    rels = _relation_words(field)
    all_paths = {(v, d): _paths(v, d, edges) for v in verts for d in range(max_degree + 1)}
    out: dict[tuple[str, str], list[int]] = {(s, t): [] for s in verts for t in verts}
    for d in range(max_degree + 1):
        for s in verts:
            for t in verts:
                count = sum(1 for end, _ in all_paths[(s, d)] if end == t)
                red = RowReducer(p)
                for rs, rt, rd, comb in rels:
                    for d1 in range(d - rd + 1):
                        d2 = d - rd - d1
                        pre = [w for end, w in all_paths[(s, d1)] if end == rs]
                        post = [w for end, w in all_paths[(rt, d2)] if end == t]
                        for a, b in product(pre, post):
                            vec: dict = {}
                            for c, w in comb:
                                key = b + w + a
                                vec[key] = (vec.get(key, 0) + c) % p
                            red.add(vec)
                out[(s, t)].append(count - red.rank)
    return out


def operator_dimensions(field: Field, max_degree: int, flavor: str = "A") -> dict[tuple[str, str], list[int]]:
    """dim e' A_d e as the rank of all path operators of degree d, acting on 1."""
    p = field.ell
    gens = gl2_generators(field, flavor)
    V = gl2_vertices(field.e)
    edges = _quiver_edges()
    verts = tuple(V)
    out: dict[tuple[str, str], list[int]] = {(s, t): [] for s in verts for t in verts}
    one = LaurentPoly.one(2, p)
    for d in range(max_degree + 1):
        for s in verts:
            ends: dict[str, RowReducer] = {t: RowReducer(p) for t in verts}
            for end, word in _paths(s, d, edges):
                f = one
                for name in reversed(word):
                    f = gens[name].fn(f)
                ends[end].add(f.terms)
            for t in verts:
                out[(s, t)].append(ends[t].rank)
    return out


def build_gl2_example(field: Field, max_degree: int = 6, flavor: str = "A") -> dict:
    """Verify the rank-two presentation on the faithful representation.

    Checks every relation on monomial probes, centrality of z = x_{1,1} +
    x_{2,1}, the degree-zero dimension and the graded dimensions of all nine
    Hom-spaces against the path algebra modulo its relations.
    """
    p = field.ell
    gens = gl2_generators(field, flavor)
    fns = {k: g.fn for k, g in gens.items()}
    probes = [LaurentPoly.monomial((a, b), p) for a in range(3) for b in range(3)]
    relations = []
    for rel in gl2_relations(field):
        ok, wit = check_relation(rel, fns, probes)
        relations.append({"name": rel.name, "ok": ok, "witness": None if wit is None else str(wit)})
    z_ok = True
    for g in gens.values():
        zs = _label_poly(g.source, p, {(1, 1): 1, (2, 1): 1})
        zt = _label_poly(g.target, p, {(1, 1): 1, (2, 1): 1})
        for f in probes:
            if g.fn(f * zs) != g.fn(f) * zt:
                z_ok = False
    pdim = path_dimensions(field, max_degree)
    odim = operator_dimensions(field, max_degree, flavor)
    deg0 = sum(odim[(v, v)][0] for v in gl2_vertices(field.e))
    hom = {f"{t}<-{s}": {"operators": odim[(s, t)], "paths": pdim[(s, t)]} for (s, t) in pdim}
    ok = all(r["ok"] for r in relations) and z_ok and deg0 == 3 and pdim == odim
    return {
        "field": {"ell": field.ell, "q": field.q, "e": field.e},
        "flavor": flavor,
        "vertices": list(gl2_vertices(field.e)),
        "arrows": {k: {"source": s, "target": t, "degree": d} for k, (s, t, d) in _quiver_edges().items()},
        "relations": relations,
        "z_central": z_ok,
        "degree0_dimension": deg0,
        "hom_dimensions": hom,
        "ok": ok,
    }


def gl2_grading(field: Field, flavor: str = "A") -> dict:
    """Calibrate offsets so that arrows have degree 1 and loops degree 2."""
    gens = gl2_generators(field, flavor)
    ops = [g for k, g in gens.items() if not k.startswith("e")]
    declared = {g.name: (2 if g.kind == "polynomial" else 1) for g in ops}
    p = field.ell

    def probes(u):
        return [LaurentPoly.monomial((a, b), p) for a in range(3) for b in range(3)]

    return grading_check(ops, declared, probes)


__all__ += ["gl2_vertices", "gl2_grading"]
