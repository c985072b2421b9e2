"""The affine Hecke algebra of GL_n in its Bernstein presentation.

Elements are formal linear combinations of words in the letters
``T_i^{+-1}``, ``X_j^k``, ``e(u)`` and ``Phi_r``; they are evaluated
through two faithful polynomial representations:

* the *sign* representation on ``F[X^{+-1}] vbar`` where ``(T_i + 1) vbar = 0``;
* the *trivial* representation on ``F[X^{+-1}] v`` where ``(T_i - q) v = 0``.

Both exist in a completed form, where a vector is a family of truncated
power series indexed by residue sequences ``u`` in the orbit of a fixed
``i``.  On component ``u`` the generator ``X_j`` acts as
``q^{u_j} (1 - x_j)`` in the local coordinates ``x``.

A symbolic normal form in the basis ``T_w X^a`` is also provided.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

from .combinatorics import (
    ExtAffineElem,
    Field,
    Perm,
    composition_subset,
    min_left_coset_reps,
    parabolic_elements,
    residue_orbit,
)
from .polyalg import (
    LaurentPoly,
    RationalExpr,
    TruncSeries,
    series_invert,
    verify_merge_identities,
    verify_theta_identities,
)

__all__ = [
    "SIGN",
    "TRIV",
    "PrecisionError",
    "Letter",
    "HeckeElem",
    "act_T",
    "act_Tinv",
    "act_Tsharp",
    "act_bar",
    "act_v",
    "sharp",
    "normal_form",
    "NormalForm",
    "parahoric",
    "CompletedElem",
    "CompletedRep",
    "hecke_relations",
    "verify_hecke_relations",
    "act_Tsharp_word",
    "qmerge_sum",
    "verify_qmerge_identities",
]

SIGN = "sign"
TRIV = "triv"

Letter = tuple  # ("T", i, +-1) | ("X", j, k) | ("e", u) | ("Phi", r)


class PrecisionError(ArithmeticError):
    """A completed computation ran out of series precision."""


# ---------------------------------------------------------------------------
# the uncompleted faithful representations


@lru_cache(maxsize=200_000)
def _T_on_monomial(kind: str, p: int, q: int, i: int, exp: tuple[int, ...]) -> tuple:
    n = len(exp)
    f = LaurentPoly(n, p, {exp: 1}, _clean=True)
    sf = f.swap(i, i + 1)
    if sf == f:
        out = f.scale(q if kind == TRIV else -1)
        return tuple(out.terms.items())
    if kind == SIGN:
        d = (f - sf).divide_linear(i + 1, i, 1)
        out = -f + LaurentPoly.linear(n, p, {i + 1: q, i: -1}) * d
    else:
        d = (f - sf).divide_linear(i, i + 1, 1)
        out = f.scale(q) - LaurentPoly.linear(n, p, {i: q, i + 1: -1}) * d
    return tuple(out.terms.items())


def act_T(field: Field, kind: str, i: int, f):
    """T_i on a Laurent polynomial or rational expression."""
    if isinstance(f, RationalExpr):
        return _act_T_rational(field, kind, i, f)
    p, q = field.ell, field.q
    acc: dict = {}
    for e, c in f.terms.items():
        for e2, c2 in _T_on_monomial(kind, p, q, i, e):
            acc[e2] = (acc.get(e2, 0) + c * c2) % p
    return LaurentPoly(f.nvars, p, {e: c for e, c in acc.items() if c}, _clean=True)


def _act_T_rational(field: Field, kind: str, i: int, f: RationalExpr) -> RationalExpr:
    n, p, q = f.nvars, field.ell, field.q
    diff = f - f.swap(i, i + 1)
    if kind == SIGN:
        h = RationalExpr.over_linear(LaurentPoly.linear(n, p, {i + 1: q, i: -1}), i + 1, i, 1)
        return (-f + h * diff).simplify()
    h = RationalExpr.over_linear(LaurentPoly.linear(n, p, {i: q, i + 1: -1}), i, i + 1, 1)
    return (f.scale(q) - h * diff).simplify()


def act_Tinv(field: Field, kind: str, i: int, f):
    """T_i^{-1} = q^{-1} T_i + (q^{-1} - 1)."""
    qi = field.inv(field.q)
    return act_T(field, kind, i, f).scale(qi) + f.scale(qi - 1)


def act_Tsharp(field: Field, kind: str, i: int, f):
    """T_i^sharp = q - 1 - T_i."""
    return f.scale(field.q - 1) - act_T(field, kind, i, f)


def act_bar(field: Field, letter: Letter, f):
    """A single generator acting on the sign representation."""
    return _act_letter(field, SIGN, letter, f)


def act_v(field: Field, letter: Letter, f):
    """A single generator acting on the trivial representation."""
    return _act_letter(field, TRIV, letter, f)


def _act_letter(field: Field, kind: str, letter: Letter, f):
    tag = letter[0]
    if tag == "T":
        return act_T(field, kind, letter[1], f) if letter[2] == 1 else act_Tinv(field, kind, letter[1], f)
    if tag == "X":
        n = f.nvars
        mono = LaurentPoly.var(n, field.ell, letter[1], letter[2])
        return f * mono
    raise ValueError(f"letter {letter} needs the completed representation")


# ---------------------------------------------------------------------------
# words and linear combinations


def _letter_str(letter: Letter) -> str:
    tag = letter[0]
    if tag == "T":
        return f"T{letter[1]}" + ("^-1" if letter[2] == -1 else "")
    if tag == "X":
        return f"X{letter[1]}" + (f"^{letter[2]}" if letter[2] != 1 else "")
    if tag == "e":
        return "e(" + ",".join(map(str, letter[1])) + ")"
    return f"Phi{letter[1]}"


_LETTER_RE = re.compile(r"^(?:(T)(\d+)(?:\^(-?1))?|(X)(\d+)(?:\^(-?\d+))?|e\(([\d,\s]+)\)|(Phi)(\d+))$")


def _parse_letter(tok: str) -> Letter:
    m = _LETTER_RE.match(tok.strip())
    if not m:
        raise ValueError(f"cannot parse generator {tok!r}")
    if m.group(1):
        return ("T", int(m.group(2)), int(m.group(3) or 1))
    if m.group(4):
        k = int(m.group(6) or 1)
        if k == 0:
            raise ValueError("X^0 is not a generator")
        return ("X", int(m.group(5)), k)
    if m.group(7):
        return ("e", tuple(int(x) for x in m.group(7).split(",")))
    return ("Phi", int(m.group(9)))


@dataclass(frozen=True)
class HeckeElem:
    """A linear combination of generator words with coefficients in F_p."""

    p: int
    terms: tuple  # sorted tuple of (word, coeff), word a tuple of letters

    @classmethod
    def from_dict(cls, p: int, d: Mapping[tuple, int]) -> "HeckeElem":
        items = {}
        for w, c in d.items():
            c %= p
            if c:
                items[w] = (items.get(w, 0) + c) % p
        return cls(p, tuple(sorted(((w, c) for w, c in items.items() if c), key=lambda t: (len(t[0]), repr(t[0])))))

    @classmethod
    def word(cls, p: int, letters: Sequence[Letter], c: int = 1) -> "HeckeElem":
        return cls.from_dict(p, {tuple(letters): c})

    @classmethod
    def scalar(cls, p: int, c: int) -> "HeckeElem":
        return cls.from_dict(p, {(): c})

    @classmethod
    def T(cls, p: int, i: int, k: int = 1) -> "HeckeElem":
        return cls.word(p, [("T", i, k)])

    @classmethod
    def X(cls, p: int, j: int, k: int = 1) -> "HeckeElem":
        return cls.word(p, [("X", j, k)])

    def as_dict(self) -> dict:
        return dict(self.terms)

    def __add__(self, other: "HeckeElem") -> "HeckeElem":
        d = self.as_dict()
        for w, c in other.terms:
            d[w] = d.get(w, 0) + c
        return HeckeElem.from_dict(self.p, d)

    def __neg__(self) -> "HeckeElem":
        return HeckeElem.from_dict(self.p, {w: -c for w, c in self.terms})

    def __sub__(self, other: "HeckeElem") -> "HeckeElem":
        return self + (-other)

    def __mul__(self, other) -> "HeckeElem":
        if isinstance(other, int):
            return HeckeElem.from_dict(self.p, {w: c * other for w, c in self.terms})
        d: dict = {}
        for w1, c1 in self.terms:
            for w2, c2 in other.terms:
                w = w1 + w2
                d[w] = d.get(w, 0) + c1 * c2
        return HeckeElem.from_dict(self.p, d)

    def __rmul__(self, other: int) -> "HeckeElem":
        return self * other

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.terms:
            body = "*".join(_letter_str(x) for x in w)
            if not body:
                parts.append(str(c))
            else:
                parts.append(body if c == 1 else f"{c}*{body}")
        return " + ".join(parts)

    @classmethod
    def parse(cls, text: str, p: int) -> "HeckeElem":
        text = text.strip()
        if text == "0":
            return cls.from_dict(p, {})
        d: dict = {}
        for chunk in _split_top(text, "+"):
            coeff = 1
            letters = []
            for tok in _split_top(chunk, "*"):
                tok = tok.strip()
                if re.fullmatch(r"-?\d+", tok):
                    coeff *= int(tok)
                else:
                    letters.append(_parse_letter(tok))
            w = tuple(letters)
            d[w] = d.get(w, 0) + coeff
        return cls.from_dict(p, d)

    # evaluation --------------------------------------------------------
    def act(self, field: Field, kind: str, f):
        """Evaluate on an uncompleted representation vector (letters right to left)."""
        total = f.scale(0)
        for w, c in self.terms:
            g = f
            for letter in reversed(w):
                g = _act_letter(field, kind, letter, g)
            total = total + g.scale(c)
        return total

    def act_completed(self, rep: "CompletedRep", x: "CompletedElem") -> "CompletedElem":
        total = x.scale(0)
        for w, c in self.terms:
            g = x
            for letter in reversed(w):
                g = rep.act_letter(letter, g)
            total = total + g.scale(c)
        return total


def _split_top(text: str, sep: str) -> list[str]:
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


def sharp(x: HeckeElem, q: int, e: int | None = None) -> HeckeElem:
    """The automorphism T_i -> q - 1 - T_i, X_j -> X_j^{-1}, e(u) -> e(-u).

    Idempotents need the order ``e`` of q to read ``-u`` back in 1..e.
    """
    p = x.p
    total = HeckeElem.from_dict(p, {})
    for w, c in x.terms:
        acc = HeckeElem.scalar(p, c)
        for letter in w:
            tag = letter[0]
            if tag == "T":
                if letter[2] == 1:
                    img = HeckeElem.scalar(p, q - 1) - HeckeElem.T(p, letter[1])
                else:  # (T^sharp)^{-1} = -q^{-1} T
                    img = HeckeElem.T(p, letter[1]) * (-pow(q, -1, p))
            elif tag == "X":
                img = HeckeElem.X(p, letter[1], -letter[2])
            elif tag == "e" and e is not None:
                img = HeckeElem.word(p, [("e", sharp_residues(letter[1], e))])
            else:
                raise ValueError(f"sharp is not available for {_letter_str(letter)}")
            acc = acc * img
        total = total + acc
    return total


def sharp_residues(u: Sequence[int], e: int) -> tuple[int, ...]:
    """Residue sequence of the twisted idempotent: u -> -u read in 1..e."""
    return tuple((-x - 1) % e + 1 for x in u)


__all__.append("sharp_residues")


# ---------------------------------------------------------------------------
# symbolic normal form in the basis T_w X^a


class NormalForm:
    """Linear combination of basis elements T_w X^a stored as {(w, a): c}."""

    __slots__ = ("n", "field", "coeffs")

    def __init__(self, n: int, field: Field, coeffs: Mapping[tuple[Perm, tuple[int, ...]], int] | None = None):
        self.n = n
        self.field = field
        p = field.ell
        self.coeffs = {k: c % p for k, c in (coeffs or {}).items() if c % p}

    @classmethod
    def one(cls, n: int, field: Field) -> "NormalForm":
        return cls(n, field, {(Perm.identity(n), (0,) * n): 1})

    def __add__(self, other: "NormalForm") -> "NormalForm":
        d = dict(self.coeffs)
        for k, c in other.coeffs.items():
            d[k] = d.get(k, 0) + c
        return NormalForm(self.n, self.field, d)

    def scale(self, c: int) -> "NormalForm":
        return NormalForm(self.n, self.field, {k: v * c for k, v in self.coeffs.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, NormalForm) and self.coeffs == other.coeffs

    __hash__ = None  # type: ignore[assignment]

    def left_T(self, i: int, power: int = 1) -> "NormalForm":
        """T_i^{+-1} times self."""
        q, p = self.field.q, self.field.ell
        if power == -1:
            qi = pow(q, -1, p)
            return self.left_T(i).scale(qi) + self.scale(qi - 1)
        s = Perm.simple(self.n, i)
        d: dict = {}
        for (w, a), c in self.coeffs.items():
            sw = s * w
            if sw.length() > w.length():
                d[(sw, a)] = d.get((sw, a), 0) + c
            else:
                d[(w, a)] = d.get((w, a), 0) + c * (q - 1)
                d[(sw, a)] = d.get((sw, a), 0) + c * q
        return NormalForm(self.n, self.field, d)

    def left_poly(self, f: LaurentPoly) -> "NormalForm":
        """f times self, moving f to the right of every T_w."""
        total = NormalForm(self.n, self.field)
        for (w, a), c in self.coeffs.items():
            total = total + _poly_times_basis(self.n, self.field, f.scale(c), w, a)
        return total

    def left_letter(self, letter: Letter) -> "NormalForm":
        if letter[0] == "T":
            return self.left_T(letter[1], letter[2])
        if letter[0] == "X":
            return self.left_poly(LaurentPoly.var(self.n, self.field.ell, letter[1], letter[2]))
        raise ValueError("normal forms only cover the uncompleted algebra")

    def to_elem(self) -> HeckeElem:
        d = {}
        for (w, a), c in self.coeffs.items():
            word = tuple(("T", i, 1) for i in w.reduced_word())
            word += tuple(("X", j, k) for j, k in enumerate(a, 1) if k)
            d[word] = c
        return HeckeElem.from_dict(self.field.ell, d)

    def __str__(self) -> str:
        return str(self.to_elem())


def _poly_times_basis(n: int, field: Field, f: LaurentPoly, w: Perm, a: tuple[int, ...]) -> NormalForm:
    """Normal form of f * T_w X^a via X^b T_i = T_i X^{s_i b} + (q-1) X_{i+1}(X^b - X^{s_i b})/(X_{i+1} - X_i)."""
    p, q = field.ell, field.q
    if f.is_zero():
        return NormalForm(n, field)
    if w.is_identity():
        d = {}
        for e, c in f.terms.items():
            key = (w, tuple(x + y for x, y in zip(e, a)))
            d[key] = d.get(key, 0) + c
        return NormalForm(n, field, d)
    i = w.reduced_word()[0]
    rest = Perm.simple(n, i) * w
    sf = f.swap(i, i + 1)
    head = _poly_times_basis(n, field, sf, rest, a).left_T(i)
    corr = (LaurentPoly.var(n, p, i + 1) * (f - sf)).divide_linear(i + 1, i, 1)
    tail = _poly_times_basis(n, field, corr.scale(q - 1), rest, a)
    return head + tail


def normal_form(x: HeckeElem, n: int, field: Field) -> NormalForm:
    """Rewrite an uncompleted Hecke element in the basis T_w X^a."""
    total = NormalForm(n, field)
    for w, c in x.terms:
        nf = NormalForm.one(n, field)
        for letter in reversed(w):
            nf = nf.left_letter(letter)
        total = total + nf.scale(c)
    return total


def parahoric(n: int, J: Iterable[int], kind: str, field: Field) -> HeckeElem:
    """v_J = sum T_w (trivial) or vbar_J = sum (-q)^{-l(w)} T_w (sign) over W_J."""
    p = field.ell
    d = {}
    mq_inv = pow(-field.q % p, -1, p)
    for w in parabolic_elements(n, J):
        word = tuple(("T", i, 1) for i in w.reduced_word())
        d[word] = 1 if kind == TRIV else pow(mq_inv, w.length(), p)
    return HeckeElem.from_dict(p, d)


# ---------------------------------------------------------------------------
# relation checks on the uncompleted representations


def hecke_relations(n: int, p: int, q: int) -> list[tuple[str, HeckeElem, HeckeElem]]:
    """The defining relations as (name, lhs, rhs) pairs of Hecke elements."""
    T = lambda i, k=1: HeckeElem.T(p, i, k)
    X = lambda j, k=1: HeckeElem.X(p, j, k)
    one = HeckeElem.scalar(p, 1)
    rels = []
    for i in range(1, n):
        rels.append((f"H-1 i={i}", (T(i) - one * q) * (T(i) + one), HeckeElem.from_dict(p, {})))
    for i in range(1, n):
        for j in range(i + 2, n):
            rels.append((f"H-2 i={i} j={j}", T(i) * T(j), T(j) * T(i)))
    for i in range(1, n - 1):
        rels.append((f"H-3 i={i}", T(i) * T(i + 1) * T(i), T(i + 1) * T(i) * T(i + 1)))
    for i in range(1, n + 1):
        rels.append((f"H-4 i={i}", X(i) * X(i, -1), one))
        rels.append((f"H-4' i={i}", X(i, -1) * X(i), one))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            rels.append((f"H-5 i={i} j={j}", X(i) * X(j), X(j) * X(i)))
    for i in range(1, n):
        for j in range(1, n + 1):
            if j not in (i, i + 1):
                rels.append((f"H-6 i={i} j={j}", T(i) * X(j), X(j) * T(i)))
    for i in range(1, n):
        rels.append((f"H-7 i={i}", T(i) * X(i) * T(i), X(i + 1) * q))
    return rels


def verify_hecke_relations(field: Field, n: int, kind: str, probes: Iterable[LaurentPoly]) -> list[dict]:
    """Evaluate every relation on every probe; return one record per relation."""
    probes = list(probes)
    out = []
    for name, lhs, rhs in hecke_relations(n, field.ell, field.q):
        witness = None
        for f in probes:
            if lhs.act(field, kind, f) != rhs.act(field, kind, f):
                witness = str(f)
                break
        out.append({"relation": name, "rep": kind, "probes": len(probes), "ok": witness is None, "witness": witness})
    return out


# ---------------------------------------------------------------------------
# the completed representations


class CompletedElem:
    """A vector sum_u f_u e_u in a completed representation."""

    __slots__ = ("n", "p", "comps")

    def __init__(self, n: int, p: int, comps: Mapping[tuple[int, ...], TruncSeries] | None = None):
        self.n = n
        self.p = p
        self.comps = {u: s for u, s in (comps or {}).items() if not s.is_zero()}

    def __add__(self, other: "CompletedElem") -> "CompletedElem":
        d = dict(self.comps)
        for u, s in other.comps.items():
            d[u] = d[u] + s if u in d else s
        return CompletedElem(self.n, self.p, d)

    def __neg__(self) -> "CompletedElem":
        return CompletedElem(self.n, self.p, {u: -s for u, s in self.comps.items()})

    def __sub__(self, other: "CompletedElem") -> "CompletedElem":
        return self + (-other)

    def scale(self, c: int) -> "CompletedElem":
        return CompletedElem(self.n, self.p, {u: s.scale(c) for u, s in self.comps.items()})

    def component(self, u: Sequence[int]) -> TruncSeries | None:
        return self.comps.get(tuple(u))

    def project(self, u: Sequence[int]) -> "CompletedElem":
        u = tuple(u)
        return CompletedElem(self.n, self.p, {u: self.comps[u]} if u in self.comps else {})

    def prec(self) -> int | None:
        ps = [s.prec for s in self.comps.values() if s.prec is not None]
        return min(ps) if ps else None

    def equal_mod(self, other: "CompletedElem", prec: int | None = None) -> bool:
        keys = set(self.comps) | set(other.comps)
        for u in keys:
            a = self.comps.get(u)
            b = other.comps.get(u)
            a = a if a is not None else TruncSeries.zero(self.n, self.p, None)
            b = b if b is not None else TruncSeries.zero(self.n, self.p, None)
            diff = a - b
            if prec is not None:
                diff = diff.truncate(prec)
            if not diff.is_zero():
                return False
        return True

    def __str__(self) -> str:
        if not self.comps:
            return "0"
        return " + ".join(f"[{s}]e({','.join(map(str, u))})" for u, s in sorted(self.comps.items()))

    __repr__ = __str__


class CompletedRep:
    """Completed sign or trivial representation around the central character of ``i``."""

    def __init__(self, field: Field, i: Sequence[int], prec: int, kind: str = SIGN):
        self.field = field
        self.i = tuple(i)
        self.n = len(self.i)
        self.prec = prec
        self.kind = kind
        self.orbit = residue_orbit(self.i)
        self._cache: dict = {}

    @property
    def p(self) -> int:
        return self.field.ell

    # basic vectors --------------------------------------------------------
    def series(self, poly: LaurentPoly) -> TruncSeries:
        return TruncSeries(poly, self.prec)

    def elem(self, u: Sequence[int], payload: TruncSeries | LaurentPoly | int = 1) -> CompletedElem:
        if isinstance(payload, int):
            payload = TruncSeries.const(self.n, self.p, payload, self.prec)
        elif isinstance(payload, LaurentPoly):
            payload = TruncSeries(payload, self.prec)
        return CompletedElem(self.n, self.p, {tuple(u): payload})

    def X_series(self, u: Sequence[int], j: int, k: int = 1) -> TruncSeries:
        """X_j^k on component u, i.e. (q^{u_j}(1 - x_j))^k."""
        key = ("X", tuple(u), j, k)
        if key not in self._cache:
            n, p = self.n, self.p
            base = TruncSeries(LaurentPoly.linear(n, p, {j: -self.field.qpow(u[j - 1])}, self.field.qpow(u[j - 1])), None)
            if k < 0:
                base = series_invert(base, self.prec)
                k = -k
            out = TruncSeries.const(n, p, 1, None)
            for _ in range(k):
                out = out * base
            self._cache[key] = out.truncate(self.prec)
        return self._cache[key]

    def local_series(self, u: Sequence[int], f: LaurentPoly) -> TruncSeries:
        """A Laurent polynomial in the X's rewritten on component u."""
        total = TruncSeries.zero(self.n, self.p, self.prec)
        for e, c in f.terms.items():
            term = TruncSeries.const(self.n, self.p, c, self.prec)
            for j, k in enumerate(e, 1):
                if k:
                    term = term * self.X_series(u, j, k)
            total = total + term
        return total

    def from_poly(self, f: LaurentPoly) -> CompletedElem:
        """Image of f * vbar (or f * v): the family of its local expansions."""
        return CompletedElem(self.n, self.p, {u: self.local_series(u, f) for u in self.orbit})

    def _h(self, u: tuple[int, ...], r: int) -> TruncSeries:
        """The unit series of the distinct-residue case on component u."""
        key = ("h", self.kind, u, r)
        if key not in self._cache:
            Xr, Xs = self.X_series(u, r), self.X_series(u, r + 1)
            q = self.field.q
            if self.kind == SIGN:
                num, den = Xs.scale(q) - Xr, Xs - Xr  # (q X_{r+1} - X_r)/(X_{r+1} - X_r)
            else:
                num, den = Xr.scale(q) - Xs, Xr - Xs  # (q X_r - X_{r+1})/(X_r - X_{r+1})
            if den.constant_term() == 0:
                raise ZeroDivisionError("denominator is not a unit on this component")
            self._cache[key] = (num * series_invert(den, self.prec)).truncate(self.prec)
        return self._cache[key]

    def _check(self, s: TruncSeries) -> TruncSeries:
        if s.prec is not None and s.prec <= 0:
            raise PrecisionError("series precision exhausted; raise the cutoff N")
        return s

    # generators --------------------------------------------------------
    def act_T(self, r: int, x: CompletedElem) -> CompletedElem:
        q = self.field.q
        out: dict = {}

        def put(u, s):
            out[u] = out[u] + s if u in out else s

        for u, f in x.comps.items():
            su = Perm.simple(self.n, r).act_seq(u)
            sf = f.swap(r, r + 1)
            if u[r - 1] != u[r]:
                h_u, h_su = self._h(u, r), self._h(su, r)
                if self.kind == SIGN:
                    put(u, (h_u - 1) * f)
                    put(su, -(h_su * sf))
                else:
                    put(u, (q - h_u) * f)
                    put(su, h_su * sf)
            else:
                # X_{r+1} - X_r = q^{u_r}(x_r - x_{r+1}) on this component
                cinv = self.field.qpow(-u[r - 1])
                d = self._check((f - sf).divide_linear(r, r + 1, 1)).scale(cinv)
                Xr, Xs = self.X_series(u, r), self.X_series(u, r + 1)
                if self.kind == SIGN:
                    put(u, -f + (Xs.scale(q) - Xr) * d)
                else:
                    # (q X_r - X_{r+1})(f - s f)/(X_r - X_{r+1}) with X_r - X_{r+1} = -(X_{r+1} - X_r)
                    put(u, f.scale(q) + (Xr.scale(q) - Xs) * d)
        return CompletedElem(self.n, self.p, {u: self._check(s) for u, s in out.items()})

    def act_Tinv(self, r: int, x: CompletedElem) -> CompletedElem:
        qi = self.field.inv(self.field.q)
        return self.act_T(r, x).scale(qi) + x.scale(qi - 1)

    def act_Tsharp(self, r: int, x: CompletedElem) -> CompletedElem:
        return x.scale(self.field.q - 1) - self.act_T(r, x)

    def act_X(self, j: int, k: int, x: CompletedElem) -> CompletedElem:
        return CompletedElem(self.n, self.p, {u: f * self.X_series(u, j, k) for u, f in x.comps.items()})

    def act_poly(self, g: LaurentPoly, x: CompletedElem) -> CompletedElem:
        return CompletedElem(self.n, self.p, {u: f * self.local_series(u, g) for u, f in x.comps.items()})

    def act_e(self, u: Sequence[int], x: CompletedElem) -> CompletedElem:
        return x.project(u)

    def phi_correction(self, u: tuple[int, ...], r: int) -> TruncSeries:
        """(1-q)/(1 - X_r X_{r+1}^{-1}) for distinct residues, 1 for equal ones."""
        key = ("phi", u, r)
        if key not in self._cache:
            if u[r - 1] == u[r]:
                val = TruncSeries.const(self.n, self.p, 1, self.prec)
            else:
                ratio = self.X_series(u, r) * self.X_series(u, r + 1, -1)
                den = TruncSeries.const(self.n, self.p, 1, None) - ratio
                if den.constant_term() == 0:
                    raise ZeroDivisionError("1 - X_r/X_{r+1} is not a unit")
                val = series_invert(den, self.prec).scale(1 - self.field.q)
            self._cache[key] = val
        return self._cache[key]

    def act_Phi(self, r: int, x: CompletedElem) -> CompletedElem:
        base = self.act_T(r, x)
        corr = CompletedElem(self.n, self.p, {u: f * self.phi_correction(u, r) for u, f in x.comps.items()})
        return base + corr

    def act_letter(self, letter: Letter, x: CompletedElem) -> CompletedElem:
        tag = letter[0]
        if tag == "T":
            return self.act_T(letter[1], x) if letter[2] == 1 else self.act_Tinv(letter[1], x)
        if tag == "X":
            return self.act_X(letter[1], letter[2], x)
        if tag == "e":
            return self.act_e(letter[1], x)
        if tag == "Phi":
            return self.act_Phi(letter[1], x)
        raise ValueError(f"unknown letter {letter}")


# ---------------------------------------------------------------------------
# the Iwahori-Matsumoto basis T_x, x in the extended affine Weyl group
#
# T_tau is realised as T_{n-1} ... T_1 X_1 without a normalising scalar; the
# structure constants in the T_x basis do not see this choice because every
# product preserves the tau-degree.
#
# Internally elements are windows (x(1), ..., x(n)) of periodic bijections of
# Z; all group operations below are a few tuple manipulations.

Window = tuple


@lru_cache(maxsize=None)
def win_length(f: Window) -> int:
    n = len(f)
    return sum(abs((f[j] - f[i]) // n) for i in range(n) for j in range(i + 1, n))


def _win_right_s(f: Window, i: int) -> Window:
    if i == 0:
        n = len(f)
        return (f[-1] - n,) + f[1:-1] + (f[0] + n,)
    return f[: i - 1] + (f[i], f[i - 1]) + f[i + 1 :]


def _win_left_s(f: Window, i: int) -> Window:
    n = len(f)
    out = []
    for v in f:
        r = v % n
        if r == i:
            v += 1
        elif r == (i + 1) % n:
            v -= 1
        out.append(v)
    return tuple(out)


def _win_right_tau(f: Window, j: int) -> Window:
    n = len(f)
    for _ in range(j):
        f = (f[-1] - n,) + f[:-1]
    for _ in range(-j):
        f = f[1:] + (f[0] + n,)
    return f


def _win_left_tau(f: Window, j: int) -> Window:
    return tuple(v - j for v in f)


@lru_cache(maxsize=None)
def win_reduced_word(f: Window) -> tuple[int, tuple[int, ...]]:
    """(j, word) with f = tau^j s_word[0] ... s_word[-1]."""
    n = len(f)
    word = []
    while True:
        if f[-1] - n > f[0]:
            i = 0
        else:
            i = next((k for k in range(1, n) if f[k - 1] > f[k]), None)
            if i is None:
                break
        word.append(i)
        f = _win_right_s(f, i)
    j = -sum(f[k] - (k + 1) for k in range(n)) // n
    return j, tuple(reversed(word))


class IMElem:
    """A finite combination sum c_x T_x over the extended affine Weyl group."""

    __slots__ = ("n", "field", "terms")

    def __init__(self, n: int, field: Field, coeffs: Mapping[ExtAffineElem, int] | None = None, *, windows: Mapping[Window, int] | None = None):
        p = field.ell
        self.n = n
        self.field = field
        if windows is None:
            windows = {x.window(): c for x, c in (coeffs or {}).items()}
        self.terms = {w: c % p for w, c in windows.items() if c % p}

    @classmethod
    def basis(cls, x: ExtAffineElem, field: Field, c: int = 1) -> "IMElem":
        return cls(x.n, field, {x: c})

    @classmethod
    def coset_sum(cls, xs: Iterable[ExtAffineElem], n: int, field: Field) -> "IMElem":
        return cls(n, field, {x: 1 for x in xs})

    def _new(self, windows: dict) -> "IMElem":
        return IMElem(self.n, self.field, windows=windows)

    @property
    def coeffs(self) -> dict:
        return {ExtAffineElem.from_window(w): c for w, c in self.terms.items()}

    def __add__(self, other: "IMElem") -> "IMElem":
        d = dict(self.terms)
        for x, c in other.terms.items():
            d[x] = d.get(x, 0) + c
        return self._new(d)

    def __sub__(self, other: "IMElem") -> "IMElem":
        return self + other.scale(-1)

    def scale(self, c: int) -> "IMElem":
        return self._new({x: v * c for x, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, IMElem) and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, x: ExtAffineElem) -> int:
        return self.terms.get(x.window(), 0)

    def _mul_simple(self, i: int, left: bool) -> "IMElem":
        q = self.field.q
        step = _win_left_s if left else _win_right_s
        d: dict = {}
        for x, c in self.terms.items():
            sx = step(x, i)
            if win_length(sx) > win_length(x):
                d[sx] = d.get(sx, 0) + c
            else:
                d[x] = d.get(x, 0) + (q - 1) * c
                d[sx] = d.get(sx, 0) + q * c
        return self._new(d)

    def left_simple(self, i: int) -> "IMElem":
        """T_{s_i} * self, for 0 <= i < n."""
        return self._mul_simple(i, True)

    def right_simple(self, i: int) -> "IMElem":
        """self * T_{s_i}."""
        return self._mul_simple(i, False)

    def left_tau(self, j: int) -> "IMElem":
        return self._new({_win_left_tau(x, j): c for x, c in self.terms.items()})

    def right_tau(self, j: int) -> "IMElem":
        return self._new({_win_right_tau(x, j): c for x, c in self.terms.items()})

    def left_basis(self, y: ExtAffineElem) -> "IMElem":
        """T_y * self."""
        j, word = win_reduced_word(y.window())
        out = self
        for i in reversed(word):
            out = out.left_simple(i)
        return out.left_tau(j)

    def __mul__(self, other: "IMElem") -> "IMElem":
        acc: dict = {}
        p = self.field.ell
        for y, c in other.terms.items():
            j, word = win_reduced_word(y)
            part = self.right_tau(j)
            for i in word:
                part = part.right_simple(i)
            for x, v in part.terms.items():
                acc[x] = (acc.get(x, 0) + v * c) % p
        return self._new(acc)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda t: (win_length(t[0]), t[0]))
        return " + ".join(f"{c}*T{list(x)}" for x, c in items)

    __repr__ = __str__


# ---------------------------------------------------------------------------
# the basis elements T_x acting on the polynomial representations


def _affine_letter(field: Field, kind: str, twisted: bool, letter: tuple, f):
    """Apply one of T_i (0 < i < n), T_0, tau^{+-1}, possibly sharp-twisted."""
    tag = letter[0]
    n = f.nvars
    if tag == "T":
        i = letter[1]
        if i == 0:
            g = _affine_letter(field, kind, twisted, ("tau", -1), f)
            g = _affine_letter(field, kind, twisted, ("T", 1), g)
            return _affine_letter(field, kind, twisted, ("tau", 1), g)
        return act_Tsharp(field, kind, i, f) if twisted else act_T(field, kind, i, f)
    if tag == "Tinv":
        i = letter[1]
        if twisted:  # (T_i^sharp)^{-1} = -q^{-1} T_i
            return act_T(field, kind, i, f).scale(-field.inv(field.q))
        return act_Tinv(field, kind, i, f)
    # tau = T_{n-1} ... T_1 X_1, sharp-twisted: X_1 -> X_1^{-1}
    x1 = LaurentPoly.var(n, field.ell, 1, -1 if twisted else 1)
    if letter[1] == 1:
        g = f * x1
        for i in range(1, n):
            g = _affine_letter(field, kind, twisted, ("T", i), g)
        return g
    g = f
    for i in range(n - 1, 0, -1):
        g = _affine_letter(field, kind, twisted, ("Tinv", i), g)
    return g * LaurentPoly.var(n, field.ell, 1, 1 if twisted else -1)


@lru_cache(maxsize=1_000_000)
def _affine_on_window(field: Field, kind: str, twisted: bool, x: Window, f: LaurentPoly) -> LaurentPoly:
    """T_x f, computed as T_s (T_{sx} f) along a left descent so that prefixes are shared."""
    n = len(x)
    for i in range(n):
        y = _win_left_s(x, i)
        if win_length(y) < win_length(x):
            return _affine_letter(field, kind, twisted, ("T", i), _affine_on_window(field, kind, twisted, y, f))
    j = -sum(x[k] - (k + 1) for k in range(n)) // n
    step = ("tau", 1 if j > 0 else -1)
    for _ in range(abs(j)):
        f = _affine_letter(field, kind, twisted, step, f)
    return f


def _monomial(n: int, p: int, e: tuple) -> LaurentPoly:
    return LaurentPoly(n, p, {e: 1}, _clean=True)


def act_affine(field: Field, kind: str, x: ExtAffineElem, f: LaurentPoly, twisted: bool = False) -> LaurentPoly:
    """T_x (or T_x^sharp when ``twisted``) on the sign or trivial representation."""
    return act_window(field, kind, x.window(), f, twisted)


def act_window(field: Field, kind: str, x: Window, f: LaurentPoly, twisted: bool = False) -> LaurentPoly:
    acc: dict = {}
    p = field.ell
    n = f.nvars
    for e, c in f.terms.items():
        g = _affine_on_window(field, kind, twisted, x, _monomial(n, p, e))
        for e2, c2 in g.terms.items():
            acc[e2] = (acc.get(e2, 0) + c * c2) % p
    return LaurentPoly(n, p, {e: c for e, c in acc.items() if c}, _clean=True)


def act_affine_sum(field: Field, kind: str, elem: IMElem, f: LaurentPoly, twisted: bool = False) -> LaurentPoly:
    acc: dict = {}
    p = field.ell
    for x, c in elem.terms.items():
        for e2, c2 in act_window(field, kind, x, f, twisted).terms.items():
            acc[e2] = (acc.get(e2, 0) + c * c2) % p
    return LaurentPoly(f.nvars, p, {e: c for e, c in acc.items() if c}, _clean=True)


__all__ += ["IMElem", "act_affine", "act_affine_sum", "act_window", "win_length", "win_reduced_word"]


# ---------------------------------------------------------------------------
# q-merges on rational functions


def act_Tsharp_word(field: Field, kind: str, word: Sequence[int], f):
    """T^sharp_{w1} ... T^sharp_{wk} applied to f, rightmost letter first."""
    for i in reversed(tuple(word)):
        f = act_Tsharp(field, kind, i, f)
    return f


def qmerge_sum(field: Field, kind: str, K: Sequence[int], J: Sequence[int], f) -> RationalExpr:
    """Sum of T^sharp_w over the minimal coset representatives, for compositions K and J."""
    if isinstance(f, LaurentPoly):
        f = RationalExpr(f)
    n = sum(K)
    Ks = composition_subset([c for c in K if c > 0])
    Js = composition_subset([c for c in J if c > 0])
    total = RationalExpr(LaurentPoly.zero(f.nvars, f.p))
    for w in min_left_coset_reps(n, Ks, Js):
        total = total + act_Tsharp_word(field, kind, w.reduced_word(), f)
    return total.simplify()


def verify_qmerge_identities(field: Field, kind: str = SIGN, max_theta: int = 6, max_merge: int = 5,
                             probes: int = 4, seed: int = 0) -> dict:
    """The theta-product formulas and the merge recursions for q-merges.

    q-merges carry the theta weights themselves, so the theta formulas are
    checked in their weighted form.  The weighted formulas need the sign
    representation; the recursions hold in either.
    """
    merge = lambda K, J, f: qmerge_sum(field, kind, K, J, f)  # noqa: E731
    word = lambda w, f: act_Tsharp_word(field, kind, w, f)  # noqa: E731
    th = verify_theta_identities(field, max_theta, merge, weighted=True)
    mg = verify_merge_identities(field, max_merge, probes, merge, word, seed)
    return {"kind": kind, "theta": th, "merge": mg, "ok": th["ok"] and mg["ok"]}
