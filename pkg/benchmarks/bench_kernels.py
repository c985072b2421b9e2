"""Compare the compiled and pure-Python sparse multiplication kernels.

Run with ``python3 benchmarks/bench_kernels.py``.  Two measurements are taken
for each backend: the raw packed-key kernel, and full ``LaurentPoly``
products with the kernel swapped in.  Results are checked for agreement
before any timing is reported.
"""
from __future__ import annotations

import argparse
import random
import timeit
from array import array

from affschur import polyalg
from affschur import _kernels_py
from affschur.polyalg import LaurentPoly

try:
    from affschur import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None


def packed_operands(terms: int, span: int, p: int, seed: int):
    rng = random.Random(seed)

    def one():
        keys = rng.sample(range(span), terms)
        return array("q", keys), array("q", (rng.randrange(1, p) for _ in keys)), array("q", (k % 17 for k in keys))

    return one() + one()


def random_poly(nvars: int, terms: int, degree: int, p: int, rng: random.Random) -> LaurentPoly:
    exps = {tuple(rng.randint(-degree, degree) for _ in range(nvars)) for _ in range(terms)}
    return LaurentPoly(nvars, p, {e: rng.randrange(1, p) for e in exps})


def bench(label: str, stmt, repeat: int) -> float:
    best = min(timeit.repeat(stmt, number=1, repeat=repeat))
    print(f"  {label:<28s} {best * 1e3:9.2f} ms")
    return best


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--terms", type=int, default=400)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--p", type=int, default=7)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    backends = {"python": _kernels_py}
    if _compiled is not None:
        backends["cython"] = _compiled
    else:
        print("compiled kernel not available; timing the fallback only")

    ops = packed_operands(args.terms, 40 * args.terms, args.p, args.seed)
    results = {name: mod.mul_packed(*ops, args.p, -1) for name, mod in backends.items()}
    canon = {name: sorted(zip(*r)) for name, r in results.items()}
    assert len({tuple(v) for v in canon.values()}) == 1, "kernels disagree"

    rng = random.Random(args.seed)
    f = random_poly(3, args.terms // 4, 6, args.p, rng)
    g = random_poly(3, args.terms // 4, 6, args.p, rng)

    timings = {}
    print(f"packed kernel, {args.terms} x {args.terms} terms mod {args.p}")
    for name, mod in backends.items():
        timings[("kernel", name)] = bench(name, lambda m=mod: m.mul_packed(*ops, args.p, -1), args.repeat)

    print(f"LaurentPoly product, {len(f.terms)} x {len(g.terms)} terms in 3 variables")
    saved = polyalg._kern
    products = {}
    try:
        for name, mod in backends.items():
            polyalg._kern = mod
            products[name] = f * g
            timings[("poly", name)] = bench(name, lambda: f * g, args.repeat)
    finally:
        polyalg._kern = saved
    assert len({str(h) for h in products.values()}) == 1, "products disagree"

    if "cython" in backends:
        for what in ("kernel", "poly"):
            print(f"speed-up ({what}): {timings[(what, 'python')] / timings[(what, 'cython')]:.1f}x")


if __name__ == "__main__":
    main()
