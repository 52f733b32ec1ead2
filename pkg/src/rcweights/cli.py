"""Command-line driver: derive, classify, estimate, experiment, render,
selftest.

Every invocation is a pure function of its input files and flags; no
environment variables are consulted.  Exit codes: 0 success, 1 input or
configuration error, 2 derivation search exhausted (a negative result,
distinct from a broken input).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import diagram
from .engine import classify_log, derive
from .exponents import ExponentError
from .facts import FactFileError, parse_fact_file, parse_goal
from .numlab import (
    EstimateReport, estimate_constant, load_job_file, run_experiment,
    weak_estimate,
)
from .numlab.config import ConfigError
from .numlab.experiments import EXPERIMENT_NAMES
from .suite import ALL_CHECKS, run_checks
from .wexpr import WeightSyntaxError, parse_weight

OK, INPUT_ERROR, EXHAUSTED = 0, 1, 2


def _fail(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return INPUT_ERROR


def _write(text: str, target) -> None:
    if target in (None, "-"):
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(target).write_text(text, encoding="utf-8")


def _parse_thetas(spec: str):
    out = []
    for part in spec.split(","):
        part = part.strip()
        if part:
            out.append(Fraction(part))
    return out


def _load_fact_file(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FactFileError(0, f"cannot read {path}: {exc}") from exc
    return parse_fact_file(text)


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------

def cmd_derive(args) -> int:
    try:
        ff = _load_fact_file(args.factfile)
        goal = parse_goal(args.goal) if args.goal else None
        theta_extra = _parse_thetas(args.theta_extra)
    except (FactFileError, ExponentError, WeightSyntaxError, ValueError) as exc:
        return _fail(str(exc))
    if goal is None:
        if not ff.goals:
            return _fail(f"{args.factfile} has no goal line and no --goal given")
        goal = ff.goals[0]
    d = derive(ff.base, goal, budget=args.budget, theta_extra=theta_extra)
    if d is None:
        print(f"search exhausted: no derivation of '{goal.render()}' "
              f"within budget {args.budget}", file=sys.stderr)
        return EXHAUSTED
    wrote = False
    if args.json is not None:
        _write(json.dumps(d.to_dict(), indent=2), args.json)
        wrote = True
    if args.diagram is not None:
        _write(diagram.render_derivation(d), args.diagram)
        wrote = True
    if args.trace is not None or not wrote:
        _write(d.render_text(), args.trace)
    return OK


def cmd_classify(args) -> int:
    try:
        ff = _load_fact_file(args.factfile)
        subject = parse_weight(args.subject)
    except (FactFileError, WeightSyntaxError) as exc:
        return _fail(str(exc))
    classes = classify_log(ff.base, subject, budget=args.budget)
    ordered = [c for c in ("BLO", "BUO", "BMO", "Harnack") if c in classes]
    if args.json is not None:
        _write(json.dumps({"schema": "rcweights.classify/1",
                           "subject": subject.render(),
                           "classes": ordered}, indent=2), args.json)
    else:
        print(" ".join(ordered) if ordered else "(none)")
    return OK


def cmd_estimate(args) -> int:
    try:
        job = load_job_file(args.config)
    except ConfigError as exc:
        return _fail(str(exc))
    resolution = args.resolution if args.resolution else job.resolution
    fn = estimate_constant if job.mode == "strong" else weak_estimate
    report: EstimateReport = fn(job.weight, job.family, job.r, job.s,
                                resolution=resolution, method=job.method)
    _write(json.dumps(report.to_dict(), indent=2), args.out)
    return OK


def cmd_experiment(args) -> int:
    try:
        report = run_experiment(args.name, resolution=args.resolution)
    except ValueError as exc:
        return _fail(str(exc))
    _write(json.dumps(report, indent=2), args.out)
    return OK


def cmd_render(args) -> int:
    try:
        ff = _load_fact_file(args.factfile)
    except (FactFileError, WeightSyntaxError) as exc:
        return _fail(str(exc))
    if args.goal or ff.goals:
        try:
            goal = parse_goal(args.goal) if args.goal else ff.goals[0]
        except (ExponentError, WeightSyntaxError) as exc:
            return _fail(str(exc))
        d = derive(ff.base, goal, budget=args.budget)
        if d is None:
            print("search exhausted: nothing to render", file=sys.stderr)
            return EXHAUSTED
        if args.split_panels:
            docs = diagram.render_derivation(d, split=True)
            outdir = Path(args.split_panels)
            outdir.mkdir(parents=True, exist_ok=True)
            for i, doc in enumerate(docs, start=1):
                (outdir / f"panel_{i:02d}.svg").write_text(doc, encoding="utf-8")
            print(f"wrote {len(docs)} panels to {outdir}")
        else:
            _write(diagram.render_derivation(d), args.out)
        return OK
    facts = list(ff.base.facts())
    if not facts:
        return _fail("nothing to render: the fact file has no facts")
    _write(diagram.render_svg(diagram.layout(facts)), args.out)
    return OK


def cmd_selftest(args) -> int:
    results = run_checks(ALL_CHECKS)
    width = max(len(r.name) for r in results)
    for r in results:
        mark = "ok  " if r.ok else "FAIL"
        print(f"{mark} {r.name:<{width}}  {r.details}")
    bad = [r for r in results if not r.ok]
    print(f"{len(results) - len(bad)}/{len(results)} checks passed")
    return OK if not bad else INPUT_ERROR


# --------------------------------------------------------------------------
# Parser
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rcweights",
        description="Reverse-class calculus: symbolic derivations with "
                    "constant tracking, numerical p-mean estimates, and "
                    "arrow diagrams.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("derive", help="derive a goal arrow from a fact file")
    p.add_argument("factfile")
    p.add_argument("--goal", help="goal clause, e.g. 'w^(-1/2) in A(1.5)' "
                                  "(defaults to the file's first goal line)")
    p.add_argument("--budget", type=int, default=8, help="search depth budget")
    p.add_argument("--theta-extra", default="",
                   help="comma-separated extra scaling powers, e.g. '3,1/3'")
    p.add_argument("--json", metavar="OUT", help="write the serialized trace ('-' stdout)")
    p.add_argument("--trace", metavar="OUT", help="write the readable trace ('-' stdout)")
    p.add_argument("--diagram", metavar="OUT", help="write the step-panel SVG")
    p.set_defaults(fn=cmd_derive)

    p = sub.add_parser("classify", help="oscillation classes of log(subject)")
    p.add_argument("factfile")
    p.add_argument("subject", help="weight expression to classify")
    p.add_argument("--budget", type=int, default=8)
    p.add_argument("--json", metavar="OUT", nargs="?", const="-")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("estimate", help="empirical reversal-constant estimate")
    p.add_argument("config", help="JSON job description")
    p.add_argument("--resolution", type=int, help="override the config resolution")
    p.add_argument("--out", default="-", metavar="OUT")
    p.set_defaults(fn=cmd_estimate)

    p = sub.add_parser("experiment", help="run a packaged experiment")
    p.add_argument("name", choices=EXPERIMENT_NAMES)
    p.add_argument("--resolution", type=int, default=4000)
    p.add_argument("--out", default="-", metavar="OUT")
    p.set_defaults(fn=cmd_experiment)

    p = sub.add_parser("render", help="render facts or a derivation as SVG")
    p.add_argument("factfile")
    p.add_argument("--goal", help="derive this goal and render the proof panels")
    p.add_argument("--budget", type=int, default=8)
    p.add_argument("--out", default="-", metavar="OUT")
    p.add_argument("--split-panels", metavar="DIR",
                   help="write numbered per-step files instead of one document")
    p.set_defaults(fn=cmd_render)

    p = sub.add_parser("selftest", help="run the built-in verification suite")
    p.set_defaults(fn=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
