"""Command-line entry point: verification suites, basis dumps and the GL2 example.

Every subcommand builds a report of the form::

    {"suite": ..., "config": {...}, "seed": ..., "ok": bool, "checks": [...]}

where each check is a flat dictionary with at least ``name`` and ``ok``.
Failed checks carry a ``witness`` when one is available.  The exit code is
0 when every check passes, 1 when some check fails, and 2 for usage errors
(including field parameters rejected by :func:`make_field`).

Defaults may be overridden through environment variables named
``AFFSCHUR_<FLAG>`` (for instance ``AFFSCHUR_ELL=7``); explicit flags win.
"""
from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from dataclasses import asdict, dataclass
from typing import Any, Callable, Sequence

from .combinatorics import Field, FieldError, all_subsets, make_field

__all__ = ["RunConfig", "ENV_PREFIX", "SUBCOMMANDS", "env_var", "build_parser", "parse_config", "run_suite", "run", "main"]

ENV_PREFIX = "AFFSCHUR_"

SUBCOMMANDS = (
    "verify-hecke",
    "verify-klr",
    "verify-schur",
    "verify-merge",
    "verify-demazure",
    "verify-iso",
    "example-gl2",
    "dump-basis",
)


class UsageError(ValueError):
    """Raised for configurations that no suite can run with."""


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    ell: int = 3
    q: int = 5
    n: int | None = None
    i: tuple[int, ...] = (1, 2)
    N: int = 6
    window: int = 2
    budget: int = 30
    seed: int = 0
    output: str | None = None
    format: str = "json"

    def size(self, default: int) -> int:
        return self.n if self.n is not None else default


# ---------------------------------------------------------------------------
# argument parsing


def _comma_ints(text: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(t) for t in text.replace(" ", "").split(",") if t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma separated list of integers, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty residue list")
    return vals


_FLAGS: list[tuple[str, Callable, Any, str]] = [
    ("ell", int, 3, "characteristic of the coefficient field (prime)"),
    ("q", int, 5, "the parameter q, reduced mod ell"),
    ("n", int, None, "rank or size bound; each suite picks its own default"),
    ("i", _comma_ints, (1, 2), "residue sequence, comma separated"),
    ("N", int, 6, "truncation degree for power series and probe degrees"),
    ("window", int, 2, "exponent window [-W, W] for Laurent probes"),
    ("budget", int, 30, "number of random probes or samples"),
    ("seed", int, 0, "seed for every randomized choice"),
    ("output", str, None, "write the report here instead of stdout"),
    ("format", str, "json", "report format: json or text"),
]


# --n and --N would collide after upper-casing
_ENV_NAMES = {"N": "PREC"}


def env_var(name: str) -> str:
    """The environment variable that supplies the default for ``--name``."""
    return ENV_PREFIX + _ENV_NAMES.get(name, name.upper())


def _env_default(name: str, conv: Callable, default: Any, env: dict) -> Any:
    var = env_var(name)
    raw = env.get(var)
    if raw is None:
        return default
    try:
        return conv(raw)
    except (ValueError, argparse.ArgumentTypeError) as exc:
        raise UsageError(f"bad value for {var}: {raw!r} ({exc})")


def build_parser(env: dict | None = None) -> argparse.ArgumentParser:
    env = os.environ if env is None else env
    common = argparse.ArgumentParser(add_help=False)
    for name, conv, default, help_text in _FLAGS:
        kwargs = {"type": conv, "default": _env_default(name, conv, default, env), "help": help_text}
        if name == "format":
            kwargs["choices"] = ("json", "text")
        common.add_argument(f"--{name}", **kwargs)
    parser = argparse.ArgumentParser(prog="affschur", description="Exact verification suites for affine Hecke and Schur algebras.")
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")
    for name in SUBCOMMANDS:
        sub.add_parser(name, parents=[common], help=_SUITES[name][1])
    return parser


def parse_config(argv: Sequence[str], env: dict | None = None) -> RunConfig:
    """Parse argv into a validated RunConfig; raises UsageError or SystemExit."""
    ns = build_parser(env).parse_args(list(argv))
    cfg = RunConfig(**{k: getattr(ns, k) for k in RunConfig.__dataclass_fields__})
    if cfg.n is not None and cfg.n < 1:
        raise UsageError("--n must be positive")
    if cfg.N < 0 or cfg.window < 0 or cfg.budget < 0:
        raise UsageError("--N, --window and --budget must be non-negative")
    return cfg


def _field(cfg: RunConfig) -> Field:
    return make_field(cfg.ell, cfg.q)


def _residues(cfg: RunConfig, field: Field) -> tuple[int, ...]:
    if any(not 1 <= r <= field.e for r in cfg.i):
        raise UsageError(f"residues must lie in 1..{field.e} for e={field.e}")
    return cfg.i


# ---------------------------------------------------------------------------
# suites


def _check(name: str, ok: bool, **extra) -> dict:
    return {"name": name, "ok": bool(ok), **extra}


def _suite_hecke(cfg: RunConfig) -> list[dict]:
    from .hecke import SIGN, TRIV, verify_hecke_relations
    from .polyalg import LaurentPoly

    field = _field(cfg)
    n = cfg.size(len(cfg.i))
    W = cfg.window
    probes = [LaurentPoly.monomial(e, field.ell) for e in itertools.product(range(-W, W + 1), repeat=n)]
    out = []
    for kind in (SIGN, TRIV):
        for r in verify_hecke_relations(field, n, kind, probes):
            out.append(_check(f"{r['relation']} [{kind}]", r["ok"], probes=r["probes"], witness=r["witness"]))
    return out


def _suite_klr(cfg: RunConfig) -> list[dict]:
    from .klr import verify_klr_relations

    field = _field(cfg)
    i = _residues(cfg, field)
    out = []
    for r in verify_klr_relations(field, i, max_degree=cfg.N):
        u = ",".join(map(str, r["u"]))
        out.append(_check(f"{r['relation']} e({u})", r["ok"], probes=r["probes"], witness=r["witness"]))
    return out


def _suite_schur(cfg: RunConfig) -> list[dict]:
    from .schur import verify_generators, verify_merge_closed_form, verify_multiplicativity

    field = _field(cfg)
    n = cfg.size(len(cfg.i))
    out = []
    rep = verify_multiplicativity(field, n, bound=1, literal_every=max(cfg.budget, 1))
    out.append(_check(f"multiplicativity n={n}", rep.ok, pairs=rep.pairs, literal_pairs=rep.literal_pairs,
                      witness=rep.failures[:3] or None))
    for r in verify_generators(field, n, window=cfg.window, seed=cfg.seed):
        out.append(_check(r["identity"], r["pass"], probes=r["probes"], witness=r["witness"]))
    for r in verify_merge_closed_form(field, n, cfg.N):
        out.append(_check(f"merge closed form {r['shape']}", r["ok"], probes=r["probes"], witness=r["witness"]))
    return out


def _suite_merge(cfg: RunConfig) -> list[dict]:
    from .hecke import SIGN, verify_qmerge_identities
    from .polyalg import verify_merge_identities, verify_theta_identities

    field = _field(cfg)
    bound = cfg.size(5)
    out = []
    for r in verify_theta_identities(field, bound + 1)["records"]:
        out.append(_check(_identity_name("merge", r), r["ok"]))
    for r in verify_merge_identities(field, bound, seed=cfg.seed)["records"]:
        out.append(_check(_identity_name("merge", r), r["ok"]))
    q = verify_qmerge_identities(field, SIGN, bound + 1, bound, seed=cfg.seed)
    for r in q["theta"]["records"] + q["merge"]["records"]:
        out.append(_check(_identity_name("q-merge", r), r["ok"]))
    return out


def _identity_name(prefix: str, r: dict) -> str:
    params = " ".join(f"{k}={r[k]}" for k in ("a", "b", "c") if k in r)
    return f"{prefix} {r['identity']} {params}".rstrip()


def _suite_demazure(cfg: RunConfig) -> list[dict]:
    from .polyalg import verify_demazure

    field = _field(cfg)
    max_n = cfg.size(5)
    rep = verify_demazure(field.ell, max_n=max_n, alternating_n=min(4, max_n), samples=max(cfg.budget, 1) * 100 // 30, seed=cfg.seed)
    return [_check(f"{r['check']}" + (f" n={r['n']}" if "n" in r else ""), r["ok"],
                   **{k: v for k, v in r.items() if k not in ("check", "ok", "n")}) for r in rep["records"]]


def _suite_iso(cfg: RunConfig) -> list[dict]:
    from .isomorphisms import (
        verify_chain,
        verify_gamma,
        verify_kappa,
        verify_tau,
        verify_theta_classes,
        verify_theta_ops,
    )

    field = _field(cfg)
    i = _residues(cfg, field)
    n = cfg.size(len(i))
    out = []
    g = verify_gamma(field, i, cfg.N)
    out.append(_check("gamma intertwines generators", g["ok"], checked=g["checked"], witness=g["failures"][:3] or None))
    t = verify_tau(field, n, cfg.N, probes=cfg.budget, seed=cfg.seed)
    for kind in ("splits", "merges"):
        for r in t[kind]:
            out.append(_check(f"tau {kind[:-1]} {r['shape']}", r["ok"], probes=r["probes"]))
    c = verify_theta_classes(field.e, max_n=min(n + 2, 5), p=field.ell)
    out.append(_check("theta sends Euler classes to ring classes", c["ok"], checked=c["checked"], witness=c["failures"][:3] or None))
    for label, fn in (("theta intertwines flavours", verify_theta_ops), ("kappa squares commute", verify_kappa)):
        r = fn(field, n, cfg.budget, cfg.seed)
        out.append(_check(label, r["ok"], checked=r["checked"], witness=r["failures"][:3] or None))
    if field.e == 2 and n == 2:
        ch = verify_chain(field, cfg.N, cfg.budget, cfg.seed)
        for r in ch["relations"]:
            out.append(_check(f"chain: {r['relation']}", r["ok"], vertex=r["vertex"], probes=r["probes"], witness=r["witness"]))
    return out


def _suite_gl2(cfg: RunConfig) -> list[dict]:
    from .quiver_schur import GradingError, build_gl2_example, gl2_grading

    field = _field(cfg)
    if field.e != 2:
        raise UsageError(f"the GL2 example needs e = 2, got e = {field.e}")
    rep = build_gl2_example(field, max_degree=cfg.N)
    out = [_check(f"relation {r['name']}", r["ok"], witness=r["witness"]) for r in rep["relations"]]
    out.append(_check("z is central", rep["z_central"]))
    out.append(_check("degree-0 dimension is 3", rep["degree0_dimension"] == 3, value=rep["degree0_dimension"]))
    for key, row in rep["hom_dimensions"].items():
        out.append(_check(f"graded dimension {key}", row["operators"] == row["paths"], operators=row["operators"], paths=row["paths"]))
    try:
        gr = gl2_grading(field)
        out.append(_check("grading offsets solvable", True, offsets={str(k): v for k, v in gr["offsets"].items()},
                          degrees={str(k): v for k, v in gr["degrees"].items()}))
    except GradingError as exc:
        out.append(_check("grading offsets solvable", False, witness=str(exc)))
    return out


def _suite_basis(cfg: RunConfig) -> list[dict]:
    from .schur import basis_elements

    n = cfg.size(len(cfg.i))
    _field(cfg)
    out = []
    for K in all_subsets(n):
        for J in all_subsets(n):
            elems = basis_elements(n, K, J, cfg.window)
            out.append(_check(f"basis K={sorted(K)} J={sorted(J)}", True, count=len(elems), elements=[str(b) for b in elems]))
    return out


_SUITES: dict[str, tuple[Callable[[RunConfig], list[dict]], str]] = {
    "verify-hecke": (_suite_hecke, "defining relations on both polynomial representations"),
    "verify-klr": (_suite_klr, "KLR relations on the polynomial representation"),
    "verify-schur": (_suite_schur, "Schur multiplicativity, generator recursion and merge closed form"),
    "verify-merge": (_suite_merge, "theta identities and merge recursions for plain and q-merges"),
    "verify-demazure": (_suite_demazure, "divided difference identities"),
    "verify-iso": (_suite_iso, "the isomorphism chain between the completed algebras"),
    "example-gl2": (_suite_gl2, "the rank two example: presentation and graded dimensions"),
    "dump-basis": (_suite_basis, "list Schur basis elements in a translation window"),
}


# ---------------------------------------------------------------------------
# reports


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj, key=repr) if isinstance(obj, (set, frozenset)) else obj
        return [_jsonable(v) for v in items]
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    return str(obj)


def run_suite(cfg: RunConfig) -> dict:
    """Run the configured suite and return the report dictionary."""
    checks = _SUITES[cfg.subcommand][0](cfg)
    return _jsonable({
        "suite": cfg.subcommand,
        "config": asdict(cfg),
        "seed": cfg.seed,
        "ok": all(c["ok"] for c in checks),
        "passed": sum(c["ok"] for c in checks),
        "total": len(checks),
        "checks": checks,
    })


def format_text(report: dict) -> str:
    lines = [f"suite {report['suite']}: {'PASS' if report['ok'] else 'FAIL'} ({report['passed']}/{report['total']}) seed={report['seed']}"]
    for c in report["checks"]:
        line = f"{'PASS' if c['ok'] else 'FAIL'}  {c['name']}"
        if not c["ok"] and c.get("witness") is not None:
            line += f"  witness={json.dumps(c['witness'])}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def run(argv: Sequence[str], env: dict | None = None) -> tuple[int, dict | None]:
    """Parse, run and write the report; returns (exit code, report)."""
    try:
        cfg = parse_config(argv, env)
        report = run_suite(cfg)
    except SystemExit as exc:  # argparse already printed its message
        return (exc.code if isinstance(exc.code, int) else 2), None
    except (FieldError, UsageError) as exc:
        print(f"affschur: error: {exc}", file=sys.stderr)
        return 2, None
    text = format_text(report) if cfg.format == "text" else json.dumps(report, indent=2) + "\n"
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return (0 if report["ok"] else 1), report


def main(argv: Sequence[str] | None = None) -> int:
    code, _ = run(sys.argv[1:] if argv is None else argv)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
