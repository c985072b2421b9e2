"""Group-theoretic and indexing combinatorics.

This module holds everything that is purely combinatorial: the prime field
with its distinguished unit ``q``, permutations of ``{1..n}``, elements of the
extended affine Weyl group written as ``w * X^p``, parabolic subgroups and
their minimal (double) coset representatives, dominant exponent vectors, and
residue sequences cut into segments.

Conventions used throughout the package:

* permutations compose right to left, ``(u*v)(i) == u(v(i))``;
* a permutation acts on positions of a sequence by ``(w.u)[w(i)] = u[i]``
  and on functions by substituting ``X_i -> X_{w(i)}``; both are left actions;
* residues are the integers ``1..e`` ordered naturally;
* simple reflections are indexed ``1..n-1``; a subset of them is a plain
  ``frozenset`` of indices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations, product
from typing import Iterable, Iterator, NewType, Sequence

__all__ = [
    "Field",
    "make_field",
    "FieldError",
    "Perm",
    "ExtAffineElem",
    "SimpleSubset",
    "simple_subset",
    "composition_subset",
    "blocks_of",
    "parabolic_elements",
    "longest_element",
    "min_coset_reps",
    "min_left_coset_reps",
    "segment_coset_reps",
    "DoubleCosetDecomposition",
    "double_coset_decompose",
    "conjugate_subset",
    "j_dominant",
    "j_antidominant",
    "canonical_rep",
    "SegmentedSeq",
    "segment",
    "merge_perm",
    "index_pos",
    "residue_orbit",
    "segmentations",
    "is_prime",
]


# ---------------------------------------------------------------------------
# the field


class FieldError(ValueError):
    """Raised for parameters violating the standing assumptions on (ell, q)."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class Field:
    """The prime field F_ell together with the unit q and its order e."""

    ell: int
    q: int
    e: int

    def __call__(self, a: int) -> int:
        return a % self.ell

    def inv(self, a: int) -> int:
        a %= self.ell
        if a == 0:
            raise ZeroDivisionError("0 is not invertible")
        return pow(a, -1, self.ell)

    def qpow(self, k: int) -> int:
        """q**k for any integer k (negative powers use the inverse)."""
        return pow(self.q, k, self.ell)


def make_field(ell: int, q_int: int) -> Field:
    """Build the field F_ell with q = q_int mod ell; q must not be 0 or 1."""
    if not is_prime(ell):
        raise FieldError(f"ell={ell} is not prime")
    q = q_int % ell
    if q == 0:
        raise FieldError(f"q={q_int} is divisible by ell={ell}")
    if q == 1:
        raise FieldError(f"q={q_int} is congruent to 1 mod ell={ell}")
    e, acc = 1, q
    while acc != 1:
        acc = acc * q % ell
        e += 1
    return Field(ell, q, e)


# ---------------------------------------------------------------------------
# finite permutations


@dataclass(frozen=True, order=True)
class Perm:
    """A permutation of {1..n} in one-line image notation."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"not a permutation: {self.images}")

    @property
    def n(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def simple(cls, n: int, i: int) -> "Perm":
        if not 1 <= i < n:
            raise ValueError(f"s_{i} does not exist for n={n}")
        im = list(range(1, n + 1))
        im[i - 1], im[i] = im[i], im[i - 1]
        return cls(tuple(im))

    @classmethod
    def from_word(cls, n: int, word: Iterable[int]) -> "Perm":
        """The product s_{w[0]} s_{w[1]} ... of simple reflections."""
        w = cls.identity(n)
        for i in word:
            w = w * cls.simple(n, i)
        return w

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Perm") -> "Perm":
        return Perm(tuple(self.images[j - 1] for j in other.images))

    def inverse(self) -> "Perm":
        inv = [0] * self.n
        for i, j in enumerate(self.images, 1):
            inv[j - 1] = i
        return Perm(tuple(inv))

    def length(self) -> int:
        im = self.images
        return sum(1 for a in range(len(im)) for b in range(a + 1, len(im)) if im[a] > im[b])

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.images, 1))

    def right_descents(self) -> set[int]:
        im = self.images
        return {i for i in range(1, self.n) if im[i - 1] > im[i]}

    def left_descents(self) -> set[int]:
        return self.inverse().right_descents()

    def reduced_word(self) -> tuple[int, ...]:
        """A reduced word (i1, ..., ik) with self = s_i1 ... s_ik."""
        word: list[int] = []
        w = self
        while True:
            desc = w.right_descents()
            if not desc:
                break
            i = min(desc)
            word.append(i)
            w = w * Perm.simple(self.n, i)
        return tuple(reversed(word))

    def act_seq(self, seq: Sequence) -> tuple:
        """Position action: the entry at position i moves to position w(i)."""
        out = [None] * self.n
        for i, v in enumerate(seq, 1):
            out[self.images[i - 1] - 1] = v
        return tuple(out)

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.images)) + "]"


# ---------------------------------------------------------------------------
# simple subsets and parabolic subgroups

SimpleSubset = NewType("SimpleSubset", frozenset)


def simple_subset(indices: Iterable[int] = ()) -> SimpleSubset:
    return SimpleSubset(frozenset(indices))


def composition_subset(comp: Sequence[int]) -> SimpleSubset:
    """Simple reflections inside the blocks of a composition (zero parts ignored)."""
    out, start = [], 1
    for c in comp:
        out.extend(range(start, start + c - 1))
        start += c
    return simple_subset(out)


def blocks_of(n: int, J: Iterable[int]) -> list[tuple[int, int]]:
    """The maximal runs [a, b] of positions glued together by J."""
    J = set(J)
    blocks, start = [], 1
    for i in range(1, n + 1):
        if i not in J:
            blocks.append((start, i))
            start = i + 1
    return blocks


@lru_cache(maxsize=None)
def _parabolic(n: int, J: frozenset) -> tuple[Perm, ...]:
    gens = [Perm.simple(n, i) for i in sorted(J)]
    seen = {Perm.identity(n)}
    frontier = [Perm.identity(n)]
    while frontier:
        nxt = []
        for w in frontier:
            for s in gens:
                v = w * s
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    return tuple(sorted(seen, key=lambda w: (w.length(), w.images)))


def parabolic_elements(n: int, J: Iterable[int]) -> tuple[Perm, ...]:
    """All elements of W_J, sorted by length."""
    return _parabolic(n, frozenset(J))


def longest_element(n: int, J: Iterable[int] = None) -> Perm:
    J = range(1, n) if J is None else J
    return parabolic_elements(n, J)[-1]


@lru_cache(maxsize=None)
def _min_reps(n: int, K: frozenset, J: frozenset, ambient: frozenset | None) -> tuple[Perm, ...]:
    pool = _parabolic(n, ambient) if ambient is not None else _parabolic(n, frozenset(range(1, n)))
    out = []
    for w in pool:
        if w.right_descents() & J:
            continue
        if w.left_descents() & K:
            continue
        out.append(w)
    return tuple(out)


def min_coset_reps(n: int, K: Iterable[int], J: Iterable[int], ambient: Iterable[int] | None = None) -> tuple[Perm, ...]:
    """Minimal length representatives of W_K \\ W / W_J.

    With ``ambient`` given the representatives are taken inside W_ambient
    instead of the whole symmetric group (the relative variant).
    """
    amb = frozenset(ambient) if ambient is not None else None
    return _min_reps(n, frozenset(K), frozenset(J), amb)


def min_left_coset_reps(n: int, K: Iterable[int], J: Iterable[int]) -> tuple[Perm, ...]:
    """D^K_{0,J}: minimal representatives of W_K / W_J (requires J inside K)."""
    return min_coset_reps(n, (), J, ambient=K)


def segment_coset_reps(n: int, a: int) -> list[Perm]:
    """D_{0,J} for J = I minus {a}, built as products of descending segments.

    Each element is (s_{c_b}..s_{n-1}) ... (s_{c_2}..s_{a+1})(s_{c_1}..s_a)
    for 1 <= c_1 < ... < c_b, where b = n - a and empty segments are 1.
    """
    b = n - a
    out = []
    for cs in _increasing(b, 1, n):
        word: list[int] = []
        for k in range(b, 0, -1):
            word.extend(range(cs[k - 1], a + k))
        out.append(Perm.from_word(n, word))
    return out


def _increasing(length: int, lo: int, hi: int) -> Iterator[tuple[int, ...]]:
    if length == 0:
        yield ()
        return
    for c in range(lo, hi + 1):
        for rest in _increasing(length - 1, c + 1, hi):
            yield (c,) + rest


def conjugate_subset(d: Perm, J: Iterable[int], K: Iterable[int]) -> SimpleSubset:
    """{j in J : d s_j d^-1 is a simple reflection s_k with k in K}."""
    n = d.n
    K = set(K)
    dinv = d.inverse()
    out = []
    for j in J:
        c = d * Perm.simple(n, j) * dinv
        moved = [i for i in range(1, n + 1) if c(i) != i]
        if len(moved) == 2 and moved[1] == moved[0] + 1 and moved[0] in K:
            out.append(j)
    return simple_subset(out)


@dataclass(frozen=True)
class DoubleCosetDecomposition:
    """w = w_K * d * a = b * d * w_J with lengths adding up in both forms."""

    w_K: Perm
    d: Perm
    a: Perm
    b: Perm
    w_J: Perm


def double_coset_decompose(w: Perm, K: Iterable[int], J: Iterable[int]) -> DoubleCosetDecomposition:
    n = w.n
    K, J = frozenset(K), frozenset(J)
    WK, WJ = parabolic_elements(n, K), parabolic_elements(n, J)
    coset = {x * w * y for x in WK for y in WJ}
    d = min(coset, key=lambda v: (v.length(), v.images))
    dinv = d.inverse()
    L = w.length()
    left = conjugate_subset(d, J, K)  # J cap d^-1 K d
    found_a = None
    for x in WK:
        a = dinv * x.inverse() * w
        if a.length() + x.length() + d.length() != L:
            continue
        if set(a.images) and (a.left_descents() & left):
            continue
        if not _in_parabolic(a, J):
            continue
        found_a = (x, a)
        break
    right = conjugate_subset(dinv, K, J)  # K cap d J d^-1
    found_b = None
    for y in WJ:
        b = w * y.inverse() * dinv
        if b.length() + y.length() + d.length() != L:
            continue
        if b.right_descents() & right:
            continue
        if not _in_parabolic(b, K):
            continue
        found_b = (b, y)
        break
    if found_a is None or found_b is None:
        raise RuntimeError("double coset decomposition failed")
    return DoubleCosetDecomposition(found_a[0], d, found_a[1], found_b[0], found_b[1])


def _in_parabolic(w: Perm, J: frozenset) -> bool:
    return w in set(parabolic_elements(w.n, J))


# ---------------------------------------------------------------------------
# extended affine Weyl group


@dataclass(frozen=True)
class ExtAffineElem:
    """The element w * X^p of the extended affine Weyl group.

    Products follow ``(w1,p1)(w2,p2) = (w1 w2, p1 o w2 + p2)`` where
    ``(p o w)_i = p_{w(i)}``; this encodes ``w X^a w^-1 = X^{a o w^-1}``.
    The element is realised as the periodic bijection of Z given on the
    window 1..n by ``i -> w(i) - n p_i``.
    """

    w: Perm
    p: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.w.n

    @classmethod
    def identity(cls, n: int) -> "ExtAffineElem":
        return cls(Perm.identity(n), (0,) * n)

    @classmethod
    def translation(cls, p: Sequence[int]) -> "ExtAffineElem":
        return cls(Perm.identity(len(p)), tuple(p))

    @classmethod
    def finite(cls, w: Perm) -> "ExtAffineElem":
        return cls(w, (0,) * w.n)

    @classmethod
    def simple(cls, n: int, i: int) -> "ExtAffineElem":
        """s_i for 1 <= i < n and the affine reflection s_0 = (1 n) X_1 X_n^-1."""
        if i == 0:
            im = list(range(1, n + 1))
            im[0], im[-1] = n, 1
            p = [0] * n
            p[0], p[-1] = 1, -1
            return cls(Perm(tuple(im)), tuple(p))
        return cls.finite(Perm.simple(n, i))

    @classmethod
    def tau(cls, n: int) -> "ExtAffineElem":
        """tau = s_{n-1} ... s_1 X_1, acting on Z as i -> i - 1."""
        return cls.from_window(tuple(range(0, n)))

    @classmethod
    def from_window(cls, window: Sequence[int]) -> "ExtAffineElem":
        n = len(window)
        w = tuple((v - 1) % n + 1 for v in window)
        p = tuple((w[i] - window[i]) // n for i in range(n))
        return cls(Perm(w), p)

    def window(self) -> tuple[int, ...]:
        n = self.n
        return tuple(self.w(i) - n * self.p[i - 1] for i in range(1, n + 1))

    def __call__(self, i: int) -> int:
        n = self.n
        r = (i - 1) % n + 1
        return self.window()[r - 1] + (i - r)

    def __mul__(self, other: "ExtAffineElem") -> "ExtAffineElem":
        w2 = other.w
        p = tuple(self.p[w2(i) - 1] + other.p[i - 1] for i in range(1, self.n + 1))
        return ExtAffineElem(self.w * w2, p)

    def inverse(self) -> "ExtAffineElem":
        winv = self.w.inverse()
        p = tuple(-self.p[winv(i) - 1] for i in range(1, self.n + 1))
        return ExtAffineElem(winv, p)

    def length(self) -> int:
        f = self.window()
        n = self.n
        return sum(abs((f[j] - f[i]) // n) for i in range(n) for j in range(i + 1, n))

    def tau_degree(self) -> int:
        f = self.window()
        return -sum(f[i] - (i + 1) for i in range(self.n)) // self.n

    def right_descents(self) -> list[int]:
        f = self.window()
        n = self.n
        out = [i for i in range(1, n) if f[i - 1] > f[i]]
        if f[-1] - n > f[0]:
            out.insert(0, 0)
        return out

    def reduced_word(self) -> tuple[int, tuple[int, ...]]:
        """(j, word) with self = tau^j s_word[0] ... s_word[-1], word reduced."""
        word: list[int] = []
        f = self
        while True:
            desc = f.right_descents()
            if not desc:
                break
            i = desc[0]
            word.append(i)
            f = f * ExtAffineElem.simple(self.n, i)
        return f.tau_degree(), tuple(reversed(word))

    def __str__(self) -> str:
        return f"({self.w}, {list(self.p)})"


# ---------------------------------------------------------------------------
# dominance


def j_dominant(p: Sequence[int], J: Iterable[int]) -> bool:
    """a_i >= a_{i+1} whenever s_i lies in J."""
    return all(p[i - 1] >= p[i] for i in J)


def j_antidominant(p: Sequence[int], J: Iterable[int]) -> bool:
    return all(p[i - 1] <= p[i] for i in J)


def canonical_rep(x: ExtAffineElem, K: Iterable[int], J: Iterable[int]) -> tuple[Perm, tuple[int, ...]]:
    """The pair (d, p) labelling the double coset W_K x W_J.

    d is a minimal double coset representative of the finite parts and p is
    dominant for J cap d^-1 K d; the pair is unique.
    """
    n = x.n
    K, J = frozenset(K), frozenset(J)
    reps = set(min_coset_reps(n, K, J))
    hits = set()
    for u in parabolic_elements(n, K):
        for v in parabolic_elements(n, J):
            y = ExtAffineElem.finite(u) * x * ExtAffineElem.finite(v)
            if y.w in reps and j_dominant(y.p, conjugate_subset(y.w, J, K)):
                hits.add((y.w, y.p))
    if len(hits) != 1:
        raise RuntimeError(f"expected a unique canonical representative, got {len(hits)}")
    return hits.pop()


# ---------------------------------------------------------------------------
# segmented residue sequences


@dataclass(frozen=True)
class SegmentedSeq:
    """A residue sequence cut into segments by J, sorted inside each segment."""

    residues: tuple[int, ...]
    J: frozenset
    e: int
    blocks: tuple[tuple[int, int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "blocks", tuple(blocks_of(len(self.residues), self.J)))
        for a, b in self.blocks:
            seg = self.residues[a - 1 : b]
            if list(seg) != sorted(seg):
                raise ValueError("residues must ascend inside each segment")

    @property
    def n(self) -> int:
        return len(self.residues)

    def segments(self) -> list[tuple[int, ...]]:
        return [self.residues[a - 1 : b] for a, b in self.blocks]

    def dim_matrix(self) -> list[list[int]]:
        """d[i-1][j-1] = number of residue i in segment j."""
        segs = self.segments()
        return [[seg.count(i) for seg in segs] for i in range(1, self.e + 1)]

    def dim_vector(self) -> tuple[int, ...]:
        return tuple(self.residues.count(i) for i in range(1, self.e + 1))

    def type_vector(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.segments())

    def parabolic(self) -> SimpleSubset:
        """I_{u_J}: positions p in J whose neighbours carry equal residues."""
        return simple_subset(i for i in self.J if self.residues[i - 1] == self.residues[i])

    def cumulative(self, i: int, s: int) -> int:
        """c(s)_i: occurrences of residue i in the first s segments."""
        if not 1 <= i <= self.e:
            i = (i - 1) % self.e + 1
        return sum(self.dim_matrix()[i - 1][:s])

    def __str__(self) -> str:
        return "(" + "|".join(",".join(map(str, s)) for s in self.segments()) + ")"


def segment(u: Sequence[int], J: Iterable[int], e: int) -> SegmentedSeq:
    """Sort u inside the segments cut out by J."""
    J = frozenset(J)
    u = tuple(u)
    out: list[int] = []
    for a, b in blocks_of(len(u), J):
        out.extend(sorted(u[a - 1 : b]))
    return SegmentedSeq(tuple(out), J, e)


def merge_perm(uJ: SegmentedSeq, K: Iterable[int]) -> Perm:
    """sigma with sigma . u_J = u_K, from a stable sort inside K-segments."""
    K = frozenset(K)
    if not uJ.J <= K:
        raise ValueError("J must be contained in K")
    images = [0] * uJ.n
    for a, b in blocks_of(uJ.n, K):
        pos = list(range(a, b + 1))
        order = sorted(pos, key=lambda p: uJ.residues[p - 1])
        for new, old in enumerate(order, a):
            images[old - 1] = new
    return Perm(tuple(images))


def index_pos(uJ: SegmentedSeq, i: int, a: int) -> int:
    """Position (1-based) of the a-th occurrence of residue i in u_J."""
    count = 0
    for pos, r in enumerate(uJ.residues, 1):
        if r == i:
            count += 1
            if count == a:
                return pos
    raise IndexError(f"residue {i} occurs fewer than {a} times in {uJ}")


def residue_orbit(i: Sequence[int]) -> list[tuple[int, ...]]:
    """All distinct rearrangements of i, sorted."""
    return sorted(set(permutations(tuple(i))))


def segmentations(i: Sequence[int], J: Iterable[int], e: int) -> list[SegmentedSeq]:
    """U_J: all canonical u_J for u in the orbit of i."""
    J = frozenset(J)
    return sorted({segment(u, J, e) for u in residue_orbit(i)}, key=lambda s: s.residues)


def all_subsets(n: int) -> list[SimpleSubset]:
    idx = list(range(1, n))
    return [simple_subset(i for i, keep in zip(idx, bits) if keep) for bits in product((0, 1), repeat=len(idx))]


__all__.append("all_subsets")
