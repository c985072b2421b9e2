"""Exact linear algebra over a prime field on sparse row vectors.

Vectors are dictionaries ``{key: coefficient}`` with arbitrary hashable keys,
which lets polynomials be fed in directly through their term dictionaries.
"""
from __future__ import annotations

from typing import Hashable, Mapping, Sequence

__all__ = ["RowReducer", "rank", "solve_combination"]

Vector = Mapping[Hashable, int]


class RowReducer:
    """Incremental Gaussian elimination keeping an echelon basis.

    Each stored row remembers which input combination produced it, so that
    membership tests can also return the coefficients.
    """

    def __init__(self, p: int):
        self.p = p
        self.rows: list[tuple[Hashable, dict, dict]] = []  # (pivot, row, combination)
        self._pivots: dict[Hashable, int] = {}

    def _reduce(self, vec: dict, comb: dict) -> tuple[dict, dict]:
        p = self.p
        vec = dict(vec)
        changed = True
        while changed:
            changed = False
            for key in list(vec):
                idx = self._pivots.get(key)
                if idx is None or key not in vec:
                    continue
                _, row, rcomb = self.rows[idx]
                c = vec[key]
                for k, v in row.items():
                    nv = (vec.get(k, 0) - c * v) % p
                    if nv:
                        vec[k] = nv
                    else:
                        vec.pop(k, None)
                for k, v in rcomb.items():
                    nv = (comb.get(k, 0) - c * v) % p
                    if nv:
                        comb[k] = nv
                    else:
                        comb.pop(k, None)
                changed = True
        return vec, comb

    def add(self, vec: Vector, label: Hashable | None = None) -> bool:
        """Insert a vector; returns False when it was already in the span."""
        p = self.p
        comb = {label: 1} if label is not None else {}
        vec = {k: v % p for k, v in vec.items() if v % p}
        vec, comb = self._reduce(vec, comb)
        if not vec:
            return False
        pivot = min(vec, key=repr)
        inv = pow(vec[pivot], -1, p)
        vec = {k: v * inv % p for k, v in vec.items()}
        comb = {k: v * inv % p for k, v in comb.items()}
        # keep the basis fully reduced on pivots
        for idx, (pv, row, rcomb) in enumerate(self.rows):
            c = row.get(pivot)
            if c:
                for k, v in vec.items():
                    nv = (row.get(k, 0) - c * v) % p
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
                for k, v in comb.items():
                    nv = (rcomb.get(k, 0) - c * v) % p
                    if nv:
                        rcomb[k] = nv
                    else:
                        rcomb.pop(k, None)
        self._pivots[pivot] = len(self.rows)
        self.rows.append((pivot, vec, comb))
        return True

    def express(self, vec: Vector) -> dict | None:
        """Coefficients {label: c} writing vec in the inserted labels, or None."""
        p = self.p
        vec = {k: v % p for k, v in vec.items() if v % p}
        rest, comb = self._reduce(vec, {})
        if rest:
            return None
        return {k: (-v) % p for k, v in comb.items() if v % p}

    @property
    def rank(self) -> int:
        return len(self.rows)


def rank(vectors: Sequence[Vector], p: int) -> int:
    r = RowReducer(p)
    for v in vectors:
        r.add(v)
    return r.rank


def solve_combination(columns: Mapping[Hashable, Sequence[Vector]], target: Sequence[Vector], p: int) -> dict | None:
    """Find c with sum_k c_k columns[k][s] == target[s] for every sample s.

    Each column is a list of vectors (one per sample); the samples are
    concatenated into a single long vector keyed by (sample, key).
    """
    red = RowReducer(p)
    for label, vecs in columns.items():
        flat = {(s, k): v for s, vec in enumerate(vecs) for k, v in vec.items()}
        red.add(flat, label)
    flat_t = {(s, k): v for s, vec in enumerate(target) for k, v in vec.items()}
    sol = red.express(flat_t)
    return sol
