"""Command-line driver: ``quivermod <command> ...``.

Exit status is 0 on success, 1 when the input is rejected (or a bound check
fails), and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Optional

from .classification import (
    analyze_fundamental, classify_graph, find_constant_a4, in_fundamental_set,
    root_type,
)
from .errors import QuiverError
from .io import dumps, emit_dot, load_pair, load_table, pair_to_dict, table_to_string
from .quiver import cartan_with_unit, tits_form
from .reductions import apply_sigma, apply_tau, parse_op
from .search import (
    ClassPredicate, enumerate_affine, enumerate_fundamental, is_tau_sigma_minimal,
    verify_bounds,
)
from .stability import moduli_dimension, stability_verdict


class UsageError(Exception):
    pass


@dataclass
class CommandConfig:
    subcommand: str
    inputs: list = field(default_factory=list)
    theta: Optional[str] = None
    limits: dict = field(default_factory=dict)
    output_format: Optional[str] = None
    force: bool = False


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"{text!r} must be positive")
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "dot", "text"),
                        help="output format (default: csv for enumerate, json otherwise)")
    common.add_argument("--force", action="store_true",
                        help="skip complexity guards (also QUIVERMOD_FORCE=1)")

    p = _Parser(prog="quivermod", description="Quiver dimension-vector reductions.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", parents=[common], help="graph type and fundamental-set data")
    c.add_argument("file")

    r = sub.add_parser("reduce", parents=[common], help="apply tau or sigma at a vertex")
    r.add_argument("file")
    r.add_argument("--op", required=True, help="tau:<vertex> or sigma:<vertex>")
    r.add_argument("--emit", choices=("dot",))

    s = sub.add_parser("stable", parents=[common], help="stability verdict for a weight")
    s.add_argument("file")
    s.add_argument("--theta", help="'v1=-2,v2=1,...' or values in vertex order '-2,1,1'")

    m = sub.add_parser("minimal", parents=[common], help="bounded tau/sigma-minimality search")
    m.add_argument("file")
    m.add_argument("--class", dest="cls", default="all",
                   help="fundamental | all | dim2 | constant:<n>")
    m.add_argument("--max-depth", type=_positive, default=8)
    m.add_argument("--max-total-dim", type=_positive)

    e = sub.add_parser("enumerate", parents=[common], help="enumerate pairs with given d")
    e.add_argument("--d", type=_positive, required=True)
    e.add_argument("--max-vertices", type=_positive, default=3)
    e.add_argument("--max-arrows", type=_positive, default=5)
    e.add_argument("--max-entry", type=_positive, default=3)
    e.add_argument("--max-depth", type=_positive, default=8)
    e.add_argument("--max-total-dim", type=_positive)
    e.add_argument("--affine", action="store_true")
    e.add_argument("--out")
    e.add_argument("--jobs", type=_positive, default=1)

    v = sub.add_parser("verify-bounds", parents=[common], help="check bounds on a CSV table")
    v.add_argument("table")
    return p


def _config(args) -> CommandConfig:
    inputs = [x for x in (getattr(args, "file", None), getattr(args, "table", None)) if x]
    limits = {k: getattr(args, k) for k in ("d", "max_vertices", "max_arrows", "max_entry",
                                            "max_depth", "max_total_dim", "jobs")
              if getattr(args, k, None) is not None}
    force = args.force or os.environ.get("QUIVERMOD_FORCE") == "1"
    return CommandConfig(args.command, inputs, getattr(args, "theta", None), limits,
                         args.format, force)


def _require_format(cfg, allowed):
    """Resolve the output format; the first allowed one is the default."""
    if cfg.output_format is None:
        cfg.output_format = allowed[0]
    if cfg.output_format not in allowed:
        raise UsageError(f"--format {cfg.output_format} is not available for {cfg.subcommand}")


def parse_theta(text: str, vertices) -> dict:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    try:
        if parts and all("=" in p for p in parts):
            theta = {}
            for p in parts:
                k, _, v = p.partition("=")
                theta[k.strip()] = int(v)
            return theta
        vals = [int(p) for p in parts]
    except ValueError:
        raise UsageError(f"cannot parse --theta {text!r}") from None
    if len(vals) != len(vertices):
        raise UsageError(f"--theta has {len(vals)} values for {len(vertices)} vertices")
    return dict(zip(vertices, vals))


# -- commands ----------------------------------------------------------------

def cmd_classify(cfg, args, out):
    _require_format(cfg, ("json", "dot", "text"))
    pair, theta = load_pair(args.file)
    if cfg.output_format == "dot":
        out.write(emit_dot(pair, theta))
        return 0
    q = pair.quiver
    report = {
        "graph_class": classify_graph(q).name,
        "in_fundamental_set": in_fundamental_set(pair),
        "tits_form": tits_form(q, pair.alpha),
        "root_type": root_type(pair),
        "cartan_with_units": {v: cartan_with_unit(q, pair.alpha, v) for v in q.vertices},
        "constant_a4": find_constant_a4(pair),
    }
    try:
        report["analysis"] = analyze_fundamental(pair).summary()
    except QuiverError as e:
        report["analysis"] = None
        report["analysis_unavailable"] = str(e)
    if report["constant_a4"] is not None:
        report["constant_a4"] = list(report["constant_a4"])
    if cfg.output_format == "text":
        for k, v in report.items():
            out.write(f"{k}: {json.dumps(v)}\n")
    else:
        out.write(dumps(report))
    return 0


def cmd_reduce(cfg, args, out):
    _require_format(cfg, ("json", "dot"))
    pair, theta = load_pair(args.file)
    try:
        op, v = parse_op(args.op)
    except ValueError as e:
        raise UsageError(str(e)) from None
    res = (apply_tau if op == "tau" else apply_sigma)(pair, v, theta)
    if cfg.output_format == "dot":
        out.write(emit_dot(res.pair, res.weight))
        return 0
    out.write(dumps({
        "step": res.step.to_dict(),
        "pair": pair_to_dict(res.pair, res.weight),
        "weight": res.weight,
        "degenerate_weight": res.degenerate_weight,
    }))
    if args.emit == "dot":
        out.write(emit_dot(res.pair, res.weight))
    return 0


def cmd_stable(cfg, args, out):
    _require_format(cfg, ("json", "text"))
    pair, theta = load_pair(args.file)
    if cfg.theta is not None:
        theta = parse_theta(cfg.theta, pair.vertices)
    if theta is None:
        raise UsageError("no weight: add \"theta\" to the file or pass --theta")
    verdict = stability_verdict(pair, theta, force=cfg.force)
    report = {"verdict": verdict.tag}
    if verdict.witness is not None:
        report["witness"] = verdict.witness
    if verdict.is_stable:
        report["moduli_dimension"] = moduli_dimension(pair, theta, force=cfg.force)
    if cfg.output_format == "text":
        out.write(" ".join(f"{k}={json.dumps(v)}" for k, v in report.items()) + "\n")
    else:
        out.write(dumps(report))
    return 0


def _class_from_text(text):
    if text == "fundamental":
        return ClassPredicate.fundamental_wild_sincere()
    if text == "all":
        return ClassPredicate.all_sincere()
    if text == "dim2":
        return ClassPredicate.dim2_bounded()
    if text.startswith("constant:"):
        try:
            n = int(text.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad class {text!r}") from None
        return ClassPredicate.constant_n(n)
    raise UsageError(f"unknown class {text!r}; use fundamental, all, dim2 or constant:<n>")


def cmd_minimal(cfg, args, out):
    _require_format(cfg, ("json", "text"))
    pair, _ = load_pair(args.file)
    rep = is_tau_sigma_minimal(pair, _class_from_text(args.cls), max_depth=args.max_depth,
                               max_total_dim=args.max_total_dim)
    if cfg.output_format == "text":
        steps = " ".join(str(s) for s in rep.witness) or "-"
        out.write(f"{rep.verdict} witness={steps} explored={rep.explored}\n")
    else:
        out.write(dumps(rep.to_dict()))
    return 0


def cmd_enumerate(cfg, args, out):
    _require_format(cfg, ("csv", "json"))
    if args.affine:
        rows = enumerate_affine(args.d, max_vertices=args.max_vertices,
                                max_arrows=args.max_arrows, force=cfg.force)
    else:
        rows = enumerate_fundamental(args.d, args.max_vertices, args.max_arrows,
                                     args.max_entry, max_depth=args.max_depth,
                                     max_total_dim=args.max_total_dim, jobs=args.jobs,
                                     force=cfg.force)
    text = table_to_string(rows)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
        out.write(dumps({"rows": len(rows), "out": args.out}))
    elif cfg.output_format == "csv":
        out.write(text)
    else:
        out.write(dumps([{"pair": pair_to_dict(r.pair), "d": r.d,
                          "minimal_verdict": r.minimal_verdict} for r in rows]))
    return 0


def cmd_verify_bounds(cfg, args, out):
    _require_format(cfg, ("json", "text"))
    rep = verify_bounds(load_table(args.table))
    if cfg.output_format == "text":
        out.write(f"{'PASS' if rep.passed else 'FAIL'}: {rep.checked} rows, "
                  f"{rep.minimal_checked} minimal\n")
        for p, msg in rep.violations:
            out.write(f"  {p!r}: {msg}\n")
    else:
        out.write(dumps(rep.to_dict()))
    return 0 if rep.passed else 1


COMMANDS = {
    "classify": cmd_classify,
    "reduce": cmd_reduce,
    "stable": cmd_stable,
    "minimal": cmd_minimal,
    "enumerate": cmd_enumerate,
    "verify-bounds": cmd_verify_bounds,
}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        cfg = _config(args)
        return COMMANDS[cfg.subcommand](cfg, args, out)
    except UsageError as e:
        err.write(f"{e}\n")
        return 2
    except SystemExit as e:       # --help
        return int(e.code or 0)
    except QuiverError as e:
        err.write(f"error: {e}\n")
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
