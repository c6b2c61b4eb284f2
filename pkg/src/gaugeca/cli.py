"""Command line: ``gaugeca {simulate,transform,invariants,solve,check,render}``.

Exit codes: 0 success (or check holds), 1 check failed or no gauge
transformation exists, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .dynamics import MatterRule, SRule, is_valid
from .lattice import JointDiagram
from .render import render_svg, render_text
from .scenario import (ScenarioError, format_diagram, format_field, load_scenario, parse_diagram)
from .symmetry import GaugeObstruction, compute_F, compute_J, gauge_joint, gauge_psi, parity_chains, solve_gauge
from .verify import CHECKS, InstanceTooLarge, PreconditionError, Verdict

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gaugeca", description="Z2 gauge theory on a reversible partitioned CA")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def output_flags(p):
        p.add_argument("--render", choices=("text", "svg", "diag"), default="text")
        p.add_argument("--layer", choices=("matter", "gauge", "J"), default="matter",
                       help="layer drawn by --render svg")

    p = sub.add_parser("simulate", help="run a scenario and print its diagram")
    p.add_argument("scenario")
    output_flags(p)

    p = sub.add_parser("transform", help="apply the scenario's phi field to its diagram")
    p.add_argument("scenario")
    output_flags(p)

    p = sub.add_parser("invariants", help="print the J and/or F fields of a scenario run")
    p.add_argument("scenario")
    p.add_argument("--field", choices=("J", "F", "both"), default="both")

    p = sub.add_parser("solve", help="find phi relating two gauge diagrams")
    p.add_argument("a", help="DIAG file, kind=gauge or joint")
    p.add_argument("a_prime", help="DIAG file, kind=gauge or joint")
    p.add_argument("--seed", default=None, help="free initial bits, one per parity chain")

    p = sub.add_parser("check", help="run a named verification check")
    p.add_argument("name", choices=sorted(CHECKS) + ["all"])
    p.add_argument("--n", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--mode", choices=("exhaustive", "random"))
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--s1", choices=[r.value for r in SRule if r is not SRule.NONE])
    p.add_argument("--s2", choices=[r.value for r in SRule if r is not SRule.NONE])
    p.add_argument("--spec", help="theory for admissible-phi, e.g. R, RA+none, RA+advect")
    p.add_argument("--phi-mode", choices=("space_dependent", "constant", "zero"))
    p.add_argument("--drop", help="term dropped from the transformation law (local-covariance)")
    p.add_argument("--json", action="store_true")
    p.add_argument("--timing", action="store_true", help="include elapsed time (not deterministic)")

    p = sub.add_parser("render", help="draw a serialised diagram")
    p.add_argument("diagram", help="DIAG file")
    p.add_argument("--format", choices=("text", "svg"), default="text")
    p.add_argument("--layer", choices=("matter", "gauge", "J"), default="matter")
    return parser


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _scenario(path: str):
    _read(path)  # turns a missing file into a usage error
    return load_scenario(path)


def _emit(diagram, args, out):
    if args.render == "diag":
        out.write(format_diagram(diagram))
    elif args.render == "svg":
        out.write(render_svg(diagram, layer=args.layer))
    else:
        out.write(render_text(diagram, j_field=args.layer == "J"))


def _matter_only(sc, diagram):
    # the free theory carries no gauge field, so only the matter layer is shown
    if sc.spec.matter_rule is MatterRule.FREE_R:
        return diagram.psi
    return diagram


def _cmd_simulate(args, out):
    sc = _scenario(args.scenario)
    _emit(_matter_only(sc, sc.run()), args, out)
    return EXIT_OK


def _cmd_transform(args, out):
    sc = _scenario(args.scenario)
    if sc.phi is None:
        raise UsageError("transform needs a phi= entry in the scenario")
    c = sc.run()
    if sc.spec.matter_rule is MatterRule.FREE_R:
        # no dynamical gauge field to absorb the change: only matter moves
        moved = gauge_psi(c.psi, sc.phi)
    else:
        moved = gauge_joint(c, sc.phi)
    _emit(moved, args, out)
    verdict = is_valid(sc.spec, moved)
    where = "" if verdict.ok else f" first violation x={verdict.x} t={verdict.t} ({verdict.layer})"
    out.write(f"# valid under {sc.spec.name}: {'yes' if verdict.ok else 'no'}{where}\n")
    return EXIT_OK


def _cmd_invariants(args, out):
    c = _scenario(args.scenario).run()
    if args.field in ("J", "both"):
        out.write(format_field("J", compute_J(c.psi)))
    if args.field in ("F", "both"):
        if c.horizon < 1:
            raise UsageError("F needs a scenario with T >= 1")
        out.write(format_field("F", compute_F(c.gauge)))
    return EXIT_OK


def _gauge_from(path: str) -> np.ndarray:
    kind, d = parse_diagram(_read(path))
    if kind == "joint":
        return d.gauge
    if kind != "gauge":
        raise UsageError(f"{path}: expected a gauge or joint diagram, got kind={kind}")
    return d


def _cmd_solve(args, out):
    a, a_prime = _gauge_from(args.a), _gauge_from(args.a_prime)
    if a.shape != a_prime.shape:
        raise UsageError(f"diagram shapes differ: {a.shape} vs {a_prime.shape}")
    seed = args.seed
    if seed is not None:
        chains = len(parity_chains(a.shape[1]))
        if len(seed) != chains or set(seed) - {"0", "1"}:
            raise UsageError(f"--seed expects {chains} bit(s) for width {a.shape[1]}")
    try:
        phi = solve_gauge(a, a_prime, seed)
    except GaugeObstruction as exc:
        x, t = exc.location
        loc = f"x={x} t={t}" if x is not None else f"t={t}"
        out.write(f"OBSTRUCTION kind={exc.kind.value} {loc}\n")
        return EXIT_FAILED
    out.write(format_field("phi", phi))
    return EXIT_OK


_CHECK_FLAGS = {
    "local-covariance": ("drop",),
    "r-gauge-invariance": ("n", "t", "phi_mode"),
    "remark1": ("n", "t", "mode", "samples", "seed"),
    "f-invariance": ("n", "t"),
    "s-rule-curvature": ("n", "t"),
    "gauge-fixing": ("s1", "s2", "n", "t", "mode", "samples", "seed"),
    "equivalence-classes": ("n", "t"),
    "admissible-phi": ("spec", "n", "t"),
    "reversibility": (),
    "global-symmetry": ("n", "t"),
}


def _check_kwargs(name: str, args) -> dict:
    allowed = _CHECK_FLAGS[name]
    kwargs = {}
    for flag in ("n", "t", "mode", "samples", "seed", "s1", "s2", "spec", "phi_mode", "drop"):
        value = getattr(args, flag)
        if value is None:
            continue
        if flag not in allowed:
            if args.name == "all":
                continue
            raise UsageError(f"check {name} does not take --{flag.replace('_', '-')}")
        kwargs[flag] = SRule(value) if flag in ("s1", "s2") else value
    return kwargs


def _cmd_check(args, out):
    names = sorted(CHECKS) if args.name == "all" else [args.name]
    status = EXIT_OK
    reports = []
    for name in names:
        try:
            report = CHECKS[name](**_check_kwargs(name, args))
        except (InstanceTooLarge, PreconditionError) as exc:
            raise UsageError(f"check {name}: {exc}") from exc
        except ValueError as exc:
            raise UsageError(f"check {name}: {exc}") from exc
        reports.append(report)
        if report.verdict is Verdict.FAILS:
            status = EXIT_FAILED
    if args.json:
        payload = [r.to_dict(timing=args.timing) for r in reports]
        out.write(json.dumps(payload if len(payload) > 1 else payload[0], sort_keys=True, indent=2) + "\n")
    else:
        out.write("\n".join(r.format(timing=args.timing) for r in reports))
    return status


def _cmd_render(args, out):
    kind, d = parse_diagram(_read(args.diagram))
    if args.format == "svg":
        layer = args.layer
        if kind == "gauge" and layer == "matter":
            layer = "gauge"
            d = JointDiagram(np.zeros_like(d), d)
        out.write(render_svg(d, layer=layer))
    else:
        out.write(render_text(d, j_field=args.layer == "J"))
    return EXIT_OK


COMMANDS = {
    "simulate": _cmd_simulate,
    "transform": _cmd_transform,
    "invariants": _cmd_invariants,
    "solve": _cmd_solve,
    "check": _cmd_check,
    "render": _cmd_render,
}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out)
    except (UsageError, ScenarioError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
