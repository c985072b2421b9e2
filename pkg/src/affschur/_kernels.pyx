# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sparse multiplication kernel (dense accumulator over packed keys)."""
from libc.stdlib cimport calloc, free

BACKEND = "cython"

DEF DENSE_LIMIT = 1 << 24


def mul_packed(const long long[:] ka, const long long[:] ca, const long long[:] da,
               const long long[:] kb, const long long[:] cb, const long long[:] db,
               long long p, long long maxdeg):
    cdef Py_ssize_t na = ka.shape[0], nb = kb.shape[0], x, y, ntouched = 0
    cdef long long k1, c1, d1, lim, span = 0, k, v, maxa = 0, maxb = 0
    cdef long long *acc
    cdef long long *touched
    cdef unsigned char *seen
    if na == 0 or nb == 0:
        return [], []
    for x in range(na):
        if ka[x] > maxa:
            maxa = ka[x]
    for y in range(nb):
        if kb[y] > maxb:
            maxb = kb[y]
    span = maxa + maxb + 1
    if span > DENSE_LIMIT or span > <long long>na * nb * 64:
        return _mul_sparse(ka, ca, da, kb, cb, db, p, maxdeg)
    acc = <long long *> calloc(span, sizeof(long long))
    seen = <unsigned char *> calloc(span, sizeof(unsigned char))
    touched = <long long *> calloc(na * nb if na * nb < span else span, sizeof(long long))
    if acc == NULL or seen == NULL or touched == NULL:
        free(acc); free(seen); free(touched)
        raise MemoryError()
    try:
        for x in range(na):
            k1 = ka[x]
            c1 = ca[x]
            d1 = da[x]
            lim = maxdeg - d1
            for y in range(nb):
                if maxdeg >= 0 and db[y] >= lim:
                    continue
                k = k1 + kb[y]
                acc[k] = (acc[k] + c1 * cb[y]) % p
                if not seen[k]:
                    seen[k] = 1
                    touched[ntouched] = k
                    ntouched += 1
        keys = []
        coefs = []
        for x in range(ntouched):
            k = touched[x]
            v = acc[k]
            if v:
                keys.append(k)
                coefs.append(v)
        return keys, coefs
    finally:
        free(acc)
        free(seen)
        free(touched)


def _mul_sparse(const long long[:] ka, const long long[:] ca, const long long[:] da,
                const long long[:] kb, const long long[:] cb, const long long[:] db,
                long long p, long long maxdeg):
    cdef Py_ssize_t na = ka.shape[0], nb = kb.shape[0], x, y
    cdef long long k1, c1, d1, k
    cdef dict acc = {}
    for x in range(na):
        k1 = ka[x]
        c1 = ca[x]
        d1 = da[x]
        for y in range(nb):
            if maxdeg >= 0 and d1 + db[y] >= maxdeg:
                continue
            k = k1 + kb[y]
            acc[k] = (acc.get(k, 0) + c1 * cb[y]) % p
    keys = []
    coefs = []
    for k, v in acc.items():
        if v:
            keys.append(k)
            coefs.append(v)
    return keys, coefs
