"""Pure-Python fallback for the sparse multiplication kernel.

Both kernels work on packed monomials: every exponent vector is encoded as a
single non-negative integer such that packing is additive, so the key of a
product monomial is the sum of the keys of its factors.
"""
from __future__ import annotations

from typing import Sequence

__all__ = ["mul_packed", "BACKEND"]

BACKEND = "python"


def mul_packed(
    ka: Sequence[int],
    ca: Sequence[int],
    da: Sequence[int],
    kb: Sequence[int],
    cb: Sequence[int],
    db: Sequence[int],
    p: int,
    maxdeg: int,
) -> tuple[list[int], list[int]]:
    """Multiply two packed term lists mod p.

    ``da``/``db`` hold total degrees; when ``maxdeg >= 0`` products of total
    degree ``>= maxdeg`` are dropped.
    """
    acc: dict[int, int] = {}
    get = acc.get
    nb = len(kb)
    trunc = maxdeg >= 0
    for x in range(len(ka)):
        k1, c1, d1 = ka[x], ca[x], da[x]
        if trunc:
            lim = maxdeg - d1
            for y in range(nb):
                if db[y] < lim:
                    k = k1 + kb[y]
                    acc[k] = get(k, 0) + c1 * cb[y]
        else:
            for y in range(nb):
                k = k1 + kb[y]
                acc[k] = get(k, 0) + c1 * cb[y]
    keys, coefs = [], []
    for k, v in acc.items():
        v %= p
        if v:
            keys.append(k)
            coefs.append(v)
    return keys, coefs
