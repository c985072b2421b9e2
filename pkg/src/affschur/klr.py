"""The quiver Hecke (KLR) algebra of the cyclic quiver with e vertices.

A vector of the faithful representation is a family ``{u: g_u}`` of
polynomials (or truncated series) in ``x_1..x_n`` indexed by residue
sequences ``u`` in the orbit of ``i``.  On the summand ``g e(u)``:

* ``x_j`` multiplies and ``e(u')`` projects;
* ``psi_r`` sends ``g e(u)`` to ``(s_r g - g)/(x_r - x_{r+1}) e(u)`` when
  ``u_r == u_{r+1}``, to ``s_r(g) (x_r - x_{r+1}) e(s_r u)`` when
  ``u_{r+1} == u_r + 1`` and to ``s_r(g) e(s_r u)`` otherwise.

With ``e == 2`` the conditions ``u_{r+1} == u_r + 1`` and
``u_{r+1} == u_r - 1`` coincide; the relation list has a separate branch
for this case which is selected structurally in :func:`klr_relations`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from .combinatorics import Field, Perm, residue_orbit
from .polyalg import LaurentPoly, TruncSeries

__all__ = [
    "KLRElem",
    "KLRVector",
    "KLRRep",
    "klr_relations",
    "verify_klr_relations",
    "monomial_probes",
]


def _succ(a: int, e: int) -> int:
    return a % e + 1


def _pred(a: int, e: int) -> int:
    return (a - 2) % e + 1


class KLRVector:
    """sum_u g_u e(u) with payloads LaurentPoly or TruncSeries."""

    __slots__ = ("comps",)

    def __init__(self, comps: Mapping[tuple[int, ...], object] | None = None):
        self.comps = {tuple(u): g for u, g in (comps or {}).items() if not g.is_zero()}

    def __add__(self, other: "KLRVector") -> "KLRVector":
        d = dict(self.comps)
        for u, g in other.comps.items():
            d[u] = d[u] + g if u in d else g
        return KLRVector(d)

    def __neg__(self) -> "KLRVector":
        return KLRVector({u: -g for u, g in self.comps.items()})

    def __sub__(self, other: "KLRVector") -> "KLRVector":
        return self + (-other)

    def scale(self, c: int) -> "KLRVector":
        return KLRVector({u: g.scale(c) for u, g in self.comps.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, KLRVector):
            return NotImplemented
        a, b = self.comps, other.comps
        if a.keys() == b.keys() and all(a[u] == b[u] for u in a):
            return True
        return not (self - other).comps

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        if not self.comps:
            return "0"
        return " + ".join(f"[{g}]e({','.join(map(str, u))})" for u, g in sorted(self.comps.items()))

    __repr__ = __str__


class KLRRep:
    """The faithful polynomial representation for a fixed residue sequence i."""

    def __init__(self, field: Field, i: Sequence[int]):
        self.field = field
        self.e = field.e
        self.i = tuple(i)
        self.n = len(self.i)
        self.orbit = residue_orbit(self.i)

    def vec(self, u: Sequence[int], g) -> KLRVector:
        return KLRVector({tuple(u): g})

    def unit(self, u: Sequence[int]) -> KLRVector:
        return self.vec(u, LaurentPoly.one(self.n, self.field.ell))

    def connecting(self, u: Sequence[int], r: int):
        """The factor attached to psi_r e(u) on the summand 1 e(u); None if u_r == u_{r+1}."""
        a, b = u[r - 1], u[r]
        if a == b:
            return None
        if b == _succ(a, self.e):
            return LaurentPoly.linear(self.n, self.field.ell, {r: 1, r + 1: -1})
        return LaurentPoly.one(self.n, self.field.ell)

    def act_psi(self, r: int, v: KLRVector) -> KLRVector:
        out: dict = {}
        for u, g in v.comps.items():
            sg = g.swap(r, r + 1)
            if u[r - 1] == u[r]:
                img, tgt = (sg - g).divide_linear(r, r + 1, 1), u
            else:
                tgt = Perm.simple(self.n, r).act_seq(u)
                fac = self.connecting(u, r)
                img = sg if fac.is_constant() else sg * fac
            out[tgt] = out[tgt] + img if tgt in out else img
        return KLRVector(out)

    def act_x(self, j: int, v: KLRVector) -> KLRVector:
        x = LaurentPoly.var(self.n, self.field.ell, j)
        step = tuple(int(k == j) for k in range(1, self.n + 1))
        return KLRVector({u: g.shift(step) if isinstance(g, LaurentPoly) else g * x for u, g in v.comps.items()})

    def act_e(self, u: Sequence[int], v: KLRVector) -> KLRVector:
        u = tuple(u)
        return KLRVector({u: v.comps[u]} if u in v.comps else {})

    def act_letter(self, letter: tuple, v: KLRVector) -> KLRVector:
        tag = letter[0]
        if tag == "psi":
            return self.act_psi(letter[1], v)
        if tag == "x":
            return self.act_x(letter[1], v)
        if tag == "e":
            return self.act_e(letter[1], v)
        raise ValueError(f"unknown KLR generator {letter}")


# ---------------------------------------------------------------------------
# words


_KLR_LETTER = re.compile(r"^(?:e\(([\d,\s]+)\)|psi(\d+)|x(\d+))$")


def _klr_letter_str(letter: tuple) -> str:
    if letter[0] == "e":
        return "e(" + ",".join(map(str, letter[1])) + ")"
    return f"{letter[0]}{letter[1]}"


def _act_word(rep: KLRRep, w: tuple, v: KLRVector, cache: dict | None) -> KLRVector:
    if cache is None:
        for letter in reversed(w):
            v = rep.act_letter(letter, v)
        return v
    k = next((j for j in range(len(w)) if w[j:] in cache), len(w))
    g = cache[w[k:]] if k < len(w) else v
    for j in range(k - 1, -1, -1):
        g = rep.act_letter(w[j], g)
        cache[w[j:]] = g
    return g


@dataclass(frozen=True)
class KLRElem:
    """A linear combination of words in e(u), psi_r, x_j."""

    p: int
    terms: tuple

    @classmethod
    def from_dict(cls, p: int, d: Mapping[tuple, int]) -> "KLRElem":
        items: dict = {}
        for w, c in d.items():
            items[w] = (items.get(w, 0) + c) % p
        return cls(p, tuple(sorted(((w, c) for w, c in items.items() if c), key=lambda t: (len(t[0]), repr(t[0])))))

    @classmethod
    def word(cls, p: int, letters: Sequence[tuple], c: int = 1) -> "KLRElem":
        return cls.from_dict(p, {tuple(letters): c})

    @classmethod
    def scalar(cls, p: int, c: int) -> "KLRElem":
        return cls.from_dict(p, {(): c})

    def __add__(self, other: "KLRElem") -> "KLRElem":
        d = dict(self.terms)
        for w, c in other.terms:
            d[w] = d.get(w, 0) + c
        return KLRElem.from_dict(self.p, d)

    def __neg__(self) -> "KLRElem":
        return KLRElem.from_dict(self.p, {w: -c for w, c in self.terms})

    def __sub__(self, other: "KLRElem") -> "KLRElem":
        return self + (-other)

    def __mul__(self, other) -> "KLRElem":
        if isinstance(other, int):
            return KLRElem.from_dict(self.p, {w: c * other for w, c in self.terms})
        d: dict = {}
        for w1, c1 in self.terms:
            for w2, c2 in other.terms:
                d[w1 + w2] = d.get(w1 + w2, 0) + c1 * c2
        return KLRElem.from_dict(self.p, d)

    def act(self, rep: KLRRep, v: KLRVector, cache: dict | None = None) -> KLRVector:
        """Apply to v; ``cache`` maps word suffixes to their images of this same v."""
        if len(self.terms) == 1 and self.terms[0][1] == 1:
            return _act_word(rep, self.terms[0][0], v, cache)
        total = KLRVector()
        for w, c in self.terms:
            g = _act_word(rep, w, v, cache)
            total = total + (g if c == 1 else g.scale(c))
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.terms:
            body = "*".join(_klr_letter_str(x) for x in w)
            parts.append(str(c) if not body else (body if c == 1 else f"{c}*{body}"))
        return " + ".join(parts)

    @classmethod
    def parse(cls, text: str, p: int) -> "KLRElem":
        text = text.strip()
        if text == "0":
            return cls.from_dict(p, {})
        d: dict = {}
        for chunk in _split(text, "+"):
            coeff, letters = 1, []
            for tok in _split(chunk, "*"):
                tok = tok.strip()
                if re.fullmatch(r"-?\d+", tok):
                    coeff *= int(tok)
                    continue
                m = _KLR_LETTER.match(tok)
                if not m:
                    raise ValueError(f"cannot parse KLR generator {tok!r}")
                if m.group(1):
                    letters.append(("e", tuple(int(x) for x in m.group(1).split(","))))
                elif m.group(2):
                    letters.append(("psi", int(m.group(2))))
                else:
                    letters.append(("x", int(m.group(3))))
            d[tuple(letters)] = d.get(tuple(letters), 0) + coeff
        return cls.from_dict(p, d)


def _split(text: str, sep: str) -> list[str]:
    out, depth, cur = [], 0, []
    for ch in text:
        depth += (ch == "(") - (ch == ")")
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


# ---------------------------------------------------------------------------
# defining relations


def klr_relations(
    n: int, e: int, p: int, u: Sequence[int], literal_dagger: bool = False
) -> list[tuple[str, KLRElem, KLRElem]]:
    """Relations as (name, lhs, rhs) to be evaluated on vectors g e(u).

    For e == 2 and u_r == u_{r+2} != u_{r+1} the braid correction that holds
    in the faithful representation is ``+ x_r + x_{r+2} - 2 x_{r+1}``;
    ``literal_dagger=True`` selects the opposite sign instead, which the
    representation refutes.
    """
    u = tuple(u)
    psi = lambda r: KLRElem.word(p, [("psi", r)])
    x = lambda j: KLRElem.word(p, [("x", j)])
    eu = lambda v: KLRElem.word(p, [("e", tuple(v))])
    one = KLRElem.scalar(p, 1)
    zero = KLRElem.from_dict(p, {})
    rels: list[tuple[str, KLRElem, KLRElem]] = []
    rels.append(("idempotent", eu(u) * eu(u), one))
    for v in residue_orbit(u):
        if v != u:
            rels.append((f"orthogonal e({','.join(map(str, v))})", eu(v), zero))
    for r in range(1, n + 1):
        rels.append((f"x{r} e = e x{r}", x(r) * eu(u), eu(u) * x(r)))
        for s in range(r + 1, n + 1):
            rels.append((f"x{r} x{s} commute", x(r) * x(s), x(s) * x(r)))
    for r in range(1, n):
        su = Perm.simple(n, r).act_seq(u)
        d = 1 if u[r - 1] == u[r] else 0
        rels.append((f"psi{r} e(u) = e(s u) psi{r}", psi(r) * eu(u), eu(su) * psi(r)))
        rels.append((f"psi{r} x{r + 1}", psi(r) * x(r + 1), x(r) * psi(r) + one * d))
        rels.append((f"x{r + 1} psi{r}", x(r + 1) * psi(r), psi(r) * x(r) + one * d))
        for s in range(1, n + 1):
            if s not in (r, r + 1):
                rels.append((f"psi{r} x{s} commute", psi(r) * x(s), x(s) * psi(r)))
        for s in range(r + 2, n):
            rels.append((f"psi{r} psi{s} commute", psi(r) * psi(s), psi(s) * psi(r)))
        rels.append((f"psi{r}^2", psi(r) * psi(r), _psi_square(n, e, p, u, r)))
    for r in range(1, n - 1):
        lhs = psi(r) * psi(r + 1) * psi(r)
        base = psi(r + 1) * psi(r) * psi(r + 1)
        a, b, c = u[r - 1], u[r], u[r + 1]
        if e == 2 and a == c and b != a:
            corr = x(r) + x(r + 2) - x(r + 1) * 2
            rhs = base - corr if literal_dagger else base + corr
            name = f"braid{r} (dagger)"
        elif e != 2 and a == c and a == _pred(b, e):
            rhs, name = base + one, f"braid{r} +1"
        elif e != 2 and a == c and a == _succ(b, e):
            rhs, name = base - one, f"braid{r} -1"
        else:
            rhs, name = base, f"braid{r}"
        rels.append((name, lhs, rhs))
    return rels


def _psi_square(n: int, e: int, p: int, u: tuple[int, ...], r: int) -> KLRElem:
    x = lambda j: KLRElem.word(p, [("x", j)])
    a, b = u[r - 1], u[r]
    if a == b:
        return KLRElem.from_dict(p, {})
    if e == 2:
        return (x(r + 1) - x(r)) * (x(r) - x(r + 1))
    if b == _succ(a, e):
        return x(r + 1) - x(r)
    if b == _pred(a, e):
        return x(r) - x(r + 1)
    return KLRElem.scalar(p, 1)


def monomial_probes(n: int, p: int, max_degree: int) -> list[LaurentPoly]:
    """All monomials in x_1..x_n of total degree at most max_degree."""
    out = []
    for d in range(max_degree + 1):
        for combo in combinations_with_replacement(range(n), d):
            exp = [0] * n
            for k in combo:
                exp[k] += 1
            out.append(LaurentPoly.monomial(tuple(exp), p))
    return out


def verify_klr_relations(
    field: Field,
    i: Sequence[int],
    max_degree: int = 6,
    probes: Iterable[LaurentPoly] | None = None,
    literal_dagger: bool = False,
) -> list[dict]:
    """Evaluate every defining relation on g e(u) for all u in the orbit of i."""
    rep = KLRRep(field, i)
    n, p = rep.n, field.ell
    probes = list(probes) if probes is not None else monomial_probes(n, p, max_degree)
    records = []
    for u in rep.orbit:
        rels = klr_relations(n, field.e, p, u, literal_dagger)
        witnesses: list = [None] * len(rels)
        for g in probes:
            v, cache = rep.vec(u, g), {}
            for k, (_, lhs, rhs) in enumerate(rels):
                if witnesses[k] is None and lhs.act(rep, v, cache) != rhs.act(rep, v, cache):
                    witnesses[k] = str(g)
        for (name, _, _), witness in zip(rels, witnesses):
            records.append({"relation": name, "u": list(u), "probes": len(probes), "ok": witness is None, "witness": witness})
    return records
