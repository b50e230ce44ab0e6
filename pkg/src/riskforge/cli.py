"""Command-line front end: validate, propagate, analyze, synergy, simulate, export."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import analysis, dsl, oracle, synergy
from .calculus import CalculusError, propagate
from .model import RiskModel, validate

EXIT_OK = 0
EXIT_MODEL_ERROR = 1
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3


def _load(path: str, coras: bool) -> RiskModel:
    text = Path(path).read_text(encoding="utf-8")
    if path.endswith(".json") or text.lstrip().startswith("{"):
        return dsl.from_json(text, coras=coras)
    return dsl.parse(text, coras=coras)


def _threads_cap() -> int:
    # 0 means "auto"; the library evaluates sequentially, so this is only a cap.
    try:
        return max(0, int(os.environ.get("RISKFORGE_THREADS", "0")))
    except ValueError:
        return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="riskforge",
        description="Countermeasure selection over annotated risk models.",
    )
    parser.add_argument(
        "--coras", action="store_true", help="treat likelihoods above 1 as errors"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a model file")
    p.add_argument("file")

    p = sub.add_parser("propagate", help="residual frequencies under an alternative")
    p.add_argument("file")
    p.add_argument("--with", dest="with_cms", default="", metavar="CM1,CM2,...")
    p.add_argument("--format", choices=("json", "table"), default="table")

    p = sub.add_parser("analyze", help="per-risk states and decision diagram")
    p.add_argument("file")
    p.add_argument("--risk", required=True)
    p.add_argument("--format", choices=("csv", "dot", "json"), default="csv")
    p.add_argument("--out", default=None)

    p = sub.add_parser("synergy", help="rank global alternatives and recommend")
    p.add_argument("file")
    p.add_argument("--budget", type=float, default=None)
    p.add_argument("--pessimistic", action="store_true")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("simulate", help="validate a calculus rule by simulation")
    p.add_argument("file")
    p.add_argument("--rule", required=True, choices=oracle.RULES)
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--horizon", type=float, default=10000.0)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("export", help="re-emit the model as JSON or canonical DSL")
    p.add_argument("file")
    p.add_argument("--to", required=True, choices=("json", "dsl"))
    return parser


def _interval_json(iv) -> object:
    return iv.lo if iv.is_point else [iv.lo, iv.hi]


def _cmd_validate(model_file: str, coras: bool) -> int:
    model = _load(model_file, coras)
    diags = validate(model, coras=coras)
    for d in diags:
        print(d, file=sys.stderr)
    return EXIT_MODEL_ERROR if any(d.is_error for d in diags) else EXIT_OK


def _cmd_propagate(args, coras: bool) -> int:
    model = _load(args.file, coras)
    alternative = frozenset(c for c in args.with_cms.split(",") if c)
    results = propagate(model, alternative)
    if args.format == "json":
        doc = {
            vid: {
                "frequency": _interval_json(r.frequency),
                "consequence": _interval_json(r.consequence),
            }
            for vid, r in results.items()
        }
        print(json.dumps(doc, indent=2))
    else:
        period = model.base_period
        rows = [("vertex", f"freq [/{period}]", "consequence")]
        rows += [(vid, str(r.frequency), str(r.consequence)) for vid, r in results.items()]
        widths = [max(len(row[i]) for row in rows) for i in range(3)]
        for row in rows:
            print("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return EXIT_OK


def _cmd_analyze(args, coras: bool) -> int:
    model = _load(args.file, coras)
    states = analysis.enumerate_states(model, args.risk)
    if args.format == "csv":
        out = analysis.export_csv(states)
    elif args.format == "dot":
        out = analysis.export_dot(analysis.build_decision_diagram(states))
    else:
        out = (
            json.dumps(
                [
                    {
                        "state": f"S{s.index}",
                        "alternative": sorted(s.alternative),
                        "frequency": _interval_json(s.frequency),
                        "consequence": _interval_json(s.consequence),
                    }
                    for s in states
                ],
                indent=2,
            )
            + "\n"
        )
    if args.out:
        Path(args.out).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return EXIT_OK


def _cmd_synergy(args, coras: bool) -> int:
    model = _load(args.file, coras)
    rec = synergy.recommend(model, budget=args.budget, pessimistic=args.pessimistic)
    ranked = synergy.find_alternatives(model, pessimistic=args.pessimistic)
    if args.format == "csv":
        sys.stdout.write(synergy.export_ranking_csv(ranked))
    else:
        doc = {
            "outcome": rec.outcome,
            "budget": rec.budget,
            "best": None
            if rec.best is None
            else {
                "countermeasures": sorted(rec.best.countermeasures),
                "overall_cost": rec.best.overall_cost,
            },
            "ranking": [
                {
                    "countermeasures": sorted(g.countermeasures),
                    "overall_cost": g.overall_cost,
                }
                for g in ranked
            ],
            "report": [
                {
                    "risk": g.risk,
                    "best_frequency": g.best_frequency,
                    "best_risk_cost": g.best_risk_cost,
                    "max_frequency": g.max_frequency,
                    "max_risk_cost": g.max_risk_cost,
                }
                for g in rec.report
            ],
        }
        print(json.dumps(doc, indent=2))
    if rec.outcome != "recommended":
        print(f"outcome: {rec.outcome}", file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


def _cmd_simulate(args, coras: bool) -> int:
    model = _load(args.file, coras)
    verdict = oracle.check_rule(
        args.rule, model, runs=args.runs, horizon=args.horizon, seed=args.seed
    )
    print(json.dumps(verdict.to_json(), indent=2))
    return EXIT_OK


def _cmd_export(args, coras: bool) -> int:
    model = _load(args.file, coras)
    sys.stdout.write(dsl.to_json(model) if args.to == "json" else dsl.serialize(model))
    return EXIT_OK


def run(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    _threads_cap()
    try:
        if args.command == "validate":
            return _cmd_validate(args.file, args.coras)
        if args.command == "propagate":
            return _cmd_propagate(args, args.coras)
        if args.command == "analyze":
            return _cmd_analyze(args, args.coras)
        if args.command == "synergy":
            return _cmd_synergy(args, args.coras)
        if args.command == "simulate":
            return _cmd_simulate(args, args.coras)
        if args.command == "export":
            return _cmd_export(args, args.coras)
    except (
        dsl.DslError,
        CalculusError,
        analysis.AnalysisError,
        synergy.SynergyError,
        oracle.OracleError,
        OSError,
        KeyError,
    ) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_MODEL_ERROR
    return EXIT_USAGE


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
