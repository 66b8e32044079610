"""``qdouble`` command line.

Exit codes: 0 when everything checked passes, 2 for input errors, 3 when a
verification fails or a numerical routine breaks down.
"""

from __future__ import annotations

import argparse
import os
import sys
import warnings
from dataclasses import dataclass, fields
from typing import Any, Sequence

from . import io
from .compact import sl2r, su2
from .double import tensor_decompose, verify_hopf, verify_quasitriangular, verify_star
from .dpr import verify_dpr
from .errors import InputError, MathFailure
from .groups import FiniteGroup
from .reps import all_irreps, find_irrep, verify_tga
from .tga import GAction, conjugation_action, natural_action, regular_action

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_MATH = 3

SUITES = ("hopf", "quasitriangular", "star", "dpr", "tga")
DEFAULT_TOL = {"hopf": 1e-12, "quasitriangular": 1e-12, "star": 1e-12, "dpr": 1e-12, "tga": 1e-10, "su2": 1e-8}


@dataclass
class RunConfig:
    """Everything a run depends on. Values come from ``--config`` then the command line;
    ``QDOUBLE_SEED`` overrides the seed."""

    command: str = ""
    group: str | None = None
    group_file: str | None = None
    action: str = "conjugation"
    action_file: str | None = None
    suite: str = "all"
    mode: str = "auto"
    samples: int = 100
    output: str | None = None
    format: str = "json"
    seed: int = 0
    tol: float | None = None
    matrices: bool = False
    first: str | None = None
    second: str | None = None
    n: int | None = None
    L: str | None = None
    order: int | None = None
    theta: float = 1.0
    band: str = "1"
    matrix: str | None = None

    @classmethod
    def field_names(cls) -> set[str]:
        return {f.name for f in fields(cls)}


def _config_from_file(path: str) -> dict:
    data = io.read_json(path)
    if not isinstance(data, dict):
        raise InputError("config file must hold a JSON object")
    unknown = set(data) - RunConfig.field_names()
    if unknown:
        raise InputError(f"unknown config fields {sorted(unknown)}")
    return data


def build_config(args: argparse.Namespace, env: dict | None = None) -> RunConfig:
    env = os.environ if env is None else env
    values: dict[str, Any] = {}
    if getattr(args, "config", None):
        values.update(_config_from_file(args.config))
    for name in RunConfig.field_names():
        v = getattr(args, name, None)
        if v is not None:
            values[name] = v
    values["command"] = args.command_path
    if env.get("QDOUBLE_SEED") not in (None, ""):
        try:
            values["seed"] = int(env["QDOUBLE_SEED"])
        except ValueError as exc:
            raise InputError(f"QDOUBLE_SEED must be an integer, got {env['QDOUBLE_SEED']!r}") from exc
    cfg = RunConfig(**values)
    if cfg.format not in ("json", "text"):
        raise InputError(f"unknown format {cfg.format!r}")
    if cfg.suite not in SUITES + ("all",):
        raise InputError(f"unknown suite {cfg.suite!r}")
    return cfg


# ---------------------------------------------------------------------------
# group and action resolution

def _group(cfg: RunConfig) -> FiniteGroup:
    if cfg.group is None and cfg.group_file is None:
        raise InputError("a group is required (--group NAME or --group-file PATH)")
    return io.resolve_group(cfg.group, cfg.group_file)


def _action(cfg: RunConfig, G: FiniteGroup) -> GAction:
    if cfg.action_file is not None:
        return io.action_from_json(G, io.read_json(cfg.action_file))
    makers = {"conjugation": conjugation_action, "natural": natural_action, "regular": regular_action}
    if cfg.action not in makers:
        raise InputError(f"unknown action {cfg.action!r}; use one of {sorted(makers)} or --action-file")
    return makers[cfg.action](G)


# ---------------------------------------------------------------------------
# commands; each returns (payload, passed)

def cmd_irreps(cfg: RunConfig) -> tuple[dict, bool]:
    action = _action(cfg, _group(cfg))
    table = io.irrep_table(action, all_irreps(action, cfg.seed), cfg.matrices)
    return table, table["pass"]


def cmd_verify(cfg: RunConfig) -> tuple[dict, bool]:
    G = _group(cfg)
    action = _action(cfg, G)
    if cfg.suite == "all":
        suites = list(SUITES) if action.is_conjugation else ["tga"]
    else:
        suites = [cfg.suite]
    if not action.is_conjugation and any(s != "tga" for s in suites):
        raise InputError("Hopf, quasitriangular, star and dpr suites need the conjugation action")
    reports = []
    for s in suites:
        tol = cfg.tol if cfg.tol is not None else DEFAULT_TOL[s]
        if s == "hopf":
            r = verify_hopf(G, mode=cfg.mode, tol=tol, seed=cfg.seed)
        elif s == "quasitriangular":
            r = verify_quasitriangular(G, mode=cfg.mode, tol=tol, seed=cfg.seed)
        elif s == "star":
            r = verify_star(G, mode=cfg.mode, tol=tol, seed=cfg.seed)
        elif s == "dpr":
            r = verify_dpr(G, tol=tol, seed=cfg.seed)
        else:
            r = verify_tga(action, tol=tol, seed=cfg.seed, samples=cfg.samples)
        reports.append(r.to_dict())
    passed = all(r["pass"] for r in reports)
    return {"group": G.name, "action": action.name, "seed": cfg.seed, "pass": passed, "reports": reports}, passed


def cmd_tensor(cfg: RunConfig) -> tuple[dict, bool]:
    if cfg.first is None or cfg.second is None:
        raise InputError("tensor needs --first and --second irrep labels")
    G = _group(cfg)
    action = conjugation_action(G)
    irr = all_irreps(action, cfg.seed)
    r1 = find_irrep(irr, io.parse_label(cfg.first))
    r2 = find_irrep(irr, io.parse_label(cfg.second))
    dims = {r.label: r.dimension for r in irr}
    parts = tensor_decompose(r1, r2, irr)
    total = sum(k * dims[l] for l, k in parts)
    payload = {
        "group": G.name,
        "first": list(r1.label),
        "second": list(r2.label),
        "components": [{"label": list(l), "multiplicity": k, "dimension": dims[l]} for l, k in parts],
        "dimensions": {"product": r1.dimension * r2.dimension, "sum": total},
    }
    return payload, total == r1.dimension * r2.dimension


def cmd_su2_verify(cfg: RunConfig) -> tuple[dict, bool]:
    if cfg.n is None or cfg.L is None:
        raise InputError("su2-verify needs --n and --L")
    L = su2.two_spin(_half_integer(cfg.L)) / 2
    band = su2.two_spin(_half_integer(cfg.band)) / 2
    order = cfg.order if cfg.order is not None else su2.required_su2_order(cfg.n, L, band, cfg.seed)
    tol = cfg.tol if cfg.tol is not None else DEFAULT_TOL["su2"]
    report = su2.su2_report(cfg.n, L, order, seed=cfg.seed, band=band, theta=cfg.theta, tol=tol)
    return report, report["pass"]


def _half_integer(text) -> float:
    text = str(text)
    try:
        if "/" in text:
            num, den = text.split("/")
            return int(num) / int(den)
        return float(text)
    except ValueError as exc:
        raise InputError(f"expected a half-integer, got {text!r}") from exc


def cmd_sl2r_classify(cfg: RunConfig) -> tuple[dict, bool]:
    if cfg.matrix is None:
        raise InputError("sl2r-classify needs --matrix a,b,c,d")
    g = sl2r.SL2Matrix(*io.parse_floats(cfg.matrix, 4))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        label = sl2r.classify_sl2r(g)
    payload = {"matrix": [g.a, g.b, g.c, g.d], "trace": g.trace, "label": label.to_dict(),
               "warnings": [str(w.message) for w in caught]}
    return payload, True


COMMANDS = {
    "irreps": cmd_irreps,
    "verify": cmd_verify,
    "tensor": cmd_tensor,
    "compact su2-verify": cmd_su2_verify,
    "compact sl2r-classify": cmd_sl2r_classify,
}


# ---------------------------------------------------------------------------
# text rendering

def _text(command: str, payload: dict) -> str:
    lines = []
    if command == "irreps":
        lines.append(f"group {payload['group']} acting on {payload['setSize']} points")
        lines.append("label      orbit  centralizer  alpha  dim")
        for r in payload["irreps"]:
            lines.append(f"{r['label'][0]:>3},{r['label'][1]:<5} {r['orbitSize']:>6} {r['centralizerOrder']:>12}"
                         f" {r['alphaDegree']:>6} {r['dimension']:>4}")
        lines.append(f"sum of squares {payload['sumOfSquares']} (expected {payload['expected']})")
    elif command == "verify":
        for rep in payload["reports"]:
            for c in rep["checks"]:
                lines.append(f"{rep['suite']:<16} {c['id']:<28} {c['maxDeviation']:.3e} {'PASS' if c['pass'] else 'FAIL'}")
    elif command == "tensor":
        parts = " + ".join(f"{c['multiplicity']}x({c['label'][0]},{c['label'][1]})" for c in payload["components"])
        lines.append(f"{tuple(payload['first'])} (x) {tuple(payload['second'])} = {parts}")
        lines.append(f"dimension {payload['dimensions']['product']} = {payload['dimensions']['sum']}")
    elif command == "compact su2-verify":
        for c in payload["checks"]:
            lines.append(f"{c['id']:<14} {c['maxDeviation']:.3e} {'PASS' if c['pass'] else 'FAIL'}")
    else:
        lab = payload["label"]
        lines.append(f"{lab['family']} parameter={lab['parameter']} orientation={lab['orientation']} "
                     f"centralizer={lab['centralizer']}")
        lines += [f"warning: {w}" for w in payload["warnings"]]
    lines.append("PASS" if payload.get("pass", True) else "FAIL")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# argument parsing

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _common(p: argparse.ArgumentParser, group_opts: bool = True) -> None:
    if group_opts:
        p.add_argument("--group", help="built-in group: Zn, Dn, Sn, Q8, trivial, products like Z2xS3")
        p.add_argument("--group-file", dest="group_file", help="group JSON file")
        p.add_argument("--action", help="conjugation (default), natural or regular")
        p.add_argument("--action-file", dest="action_file", help="action table JSON file")
    p.add_argument("--seed", type=int)
    p.add_argument("--output", help="write to this file instead of stdout")
    p.add_argument("--format", choices=("json", "text"))
    p.add_argument("--tol", type=float, help="override the suite tolerance")
    p.add_argument("--config", help="JSON file with run settings")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qdouble", description="Representations of transformation group algebras and quantum doubles")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("irreps", help="list all irreducible representations")
    _common(p)
    p.add_argument("--matrices", action="store_true", default=None, help="include all basis matrices")

    p = sub.add_parser("verify", help="run verification suites")
    _common(p)
    p.add_argument("--suite", choices=SUITES + ("all",))
    p.add_argument("--mode", choices=("auto", "exhaustive", "randomized"))
    p.add_argument("--samples", type=int)

    p = sub.add_parser("tensor", help="decompose a tensor product of two irreps of D(G)")
    _common(p)
    p.add_argument("--first", help="label 'xi,alpha'")
    p.add_argument("--second", help="label 'xi,alpha'")

    p = sub.add_parser("compact", help="SU(2) and SL(2,R) examples")
    csub = p.add_subparsers(dest="compact_command", required=True, parser_class=_Parser)
    q = csub.add_parser("su2-verify", help="truncated representations of D(SU(2))")
    _common(q, group_opts=False)
    q.add_argument("--n", type=int)
    q.add_argument("--L", help="carrier cutoff spin, e.g. 2 or 3/2")
    q.add_argument("--order", type=int, help="quadrature order in spin units (default: smallest exact order)")
    q.add_argument("--theta", type=float)
    q.add_argument("--band", help="spin band of the random test functions")
    q = csub.add_parser("sl2r-classify", help="conjugacy class of an SL(2,R) matrix")
    _common(q, group_opts=False)
    q.add_argument("--matrix", help="entries a,b,c,d of [[a,b],[c,d]]")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        args.command_path = args.command if args.command != "compact" else f"compact {args.compact_command}"
        cfg = build_config(args)
        payload, passed = COMMANDS[cfg.command](cfg)
        text = io.dumps(payload) if cfg.format == "json" else _text(cfg.command, payload)
        if cfg.output:
            with open(cfg.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK if passed else EXIT_MATH
    except InputError as exc:
        print(f"qdouble: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except MathFailure as exc:
        print(f"qdouble: numerical failure: {exc}", file=sys.stderr)
        return EXIT_MATH
    except OSError as exc:
        print(f"qdouble: {exc}", file=sys.stderr)
        return EXIT_INPUT
