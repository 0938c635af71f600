"""Command line interface: run simulations, validate pathway files,
list compiled rules and serve the HTTP laboratory."""

from __future__ import annotations

import argparse
import sys

from .data import BUNDLED_NAME, bundled_mapk
from .engine import World
from .errors import CellulatError, IoError, PathwaySyntaxError, SchemaError
from .experiments import EXPORT_FORMATS, Experiment, export, run_experiment
from .pathway import Dose, parse_pathway, validate
from .rules import dump_rules

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2


def _load_pathway(ref):
    """A pathway file path, or the bundled model's name."""
    if ref == BUNDLED_NAME:
        return bundled_mapk()
    try:
        with open(ref, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise IoError("cannot read %s: %s" % (ref, exc)) from exc
    return parse_pathway(text)


def _parse_dose(text):
    """LIGAND=MAGNITUDE@TICK, e.g. EGF=10@0."""
    try:
        ligand, rest = text.split("=", 1)
        magnitude, tick = rest.split("@", 1)
        return Dose(tick=int(tick), ligand=ligand, magnitude=float(magnitude))
    except ValueError:
        raise argparse.ArgumentTypeError(
            "dose must look like LIGAND=MAGNITUDE@TICK, got %r" % text)


def _parse_knockouts(values):
    out = []
    for chunk in values:
        out.extend(name for name in chunk.split(",") if name)
    return out


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cellulat",
        description="agent-based cell-signalling simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a simulation and export results")
    p_run.add_argument("--pathway", default=BUNDLED_NAME,
                       help="pathway JSON file, or %r" % BUNDLED_NAME)
    p_run.add_argument("--steps", type=int, default=200)
    p_run.add_argument("--dose", type=_parse_dose, action="append", default=[],
                       metavar="LIGAND=MAG@TICK")
    p_run.add_argument("--knockout", action="append", default=[],
                       metavar="NAME[,NAME...]")
    p_run.add_argument("--k-base", type=float, default=None)
    p_run.add_argument("--k-deact", type=float, default=None)
    p_run.add_argument("--out-curves", metavar="FILE")
    p_run.add_argument("--out-activity", metavar="FILE")
    p_run.add_argument("--out-trace", metavar="FILE")

    p_val = sub.add_parser("validate", help="validate a pathway file")
    p_val.add_argument("pathway", help="pathway JSON file, or %r" % BUNDLED_NAME)

    p_rules = sub.add_parser("rules", help="print the compiled production rules")
    p_rules.add_argument("--pathway", default=BUNDLED_NAME)

    p_serve = sub.add_parser("serve", help="start the HTTP laboratory service")
    p_serve.add_argument("--pathway", default=BUNDLED_NAME)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    return parser


def cmd_run(args):
    pdef = _load_pathway(args.pathway)
    kinetics = {}
    if args.k_base is not None:
        kinetics["k_base"] = args.k_base
    if args.k_deact is not None:
        kinetics["k_deact"] = args.k_deact
    exp = Experiment(
        pathway=pdef,
        knockouts=_parse_knockouts(args.knockout),
        doses=list(args.dose),
        n_ticks=args.steps,
        kinetics=kinetics,
    )
    results = run_experiment(exp)
    for destination, fmt in (
        (args.out_curves, "curves-csv"),
        (args.out_activity, "activity-csv"),
        (args.out_trace, "trace-jsonl"),
    ):
        if destination:
            export(results, destination, fmt)
            print("wrote %s (%s)" % (destination, fmt))
    active = sorted(results.ever_active())
    print("simulated %d ticks; %d agents became active" % (args.steps, len(active)))
    if active:
        print("active:", ", ".join(active))
    return EXIT_OK


def cmd_validate(args):
    pdef = _load_pathway(args.pathway)
    report = validate(pdef)
    for item in report.errors:
        print("error:", item)
    for item in report.warnings:
        print("warning:", item)
    if report.errors:
        print("%s: invalid (%d errors, %d warnings)"
              % (args.pathway, len(report.errors), len(report.warnings)))
        return EXIT_INVALID
    print("%s: ok (%d agents, %d warnings)"
          % (args.pathway, len(pdef.agents), len(report.warnings)))
    return EXIT_OK


def cmd_rules(args):
    pdef = _load_pathway(args.pathway)
    world = World.from_pathway(pdef)
    print(dump_rules(world.rules.values()))
    return EXIT_OK


def cmd_serve(args):
    import uvicorn

    from .service import create_app

    app = create_app()
    # pre-validate the configured pathway so misconfiguration fails fast
    pdef = _load_pathway(args.pathway)
    report = validate(pdef)
    if report.errors:
        for item in report.errors:
            print("error:", item)
        return EXIT_INVALID
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {
        "run": cmd_run,
        "validate": cmd_validate,
        "rules": cmd_rules,
        "serve": cmd_serve,
    }[args.command]
    try:
        return handler(args)
    except IoError as exc:
        print("i/o error:", exc, file=sys.stderr)
        return EXIT_IO
    except (PathwaySyntaxError, SchemaError, CellulatError, ValueError) as exc:
        print("error:", exc, file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
