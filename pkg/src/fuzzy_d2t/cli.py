"""Command-line entry point: ``fuzzy-d2t --input data.csv``.

Exit codes: 0 success, 1 usage error, 2 invalid input, knowledge base or
configuration, 3 internal invariant breach.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import replace
from pathlib import Path
from typing import Sequence

from .errors import D2TError, InvariantError, ValidationError
from .ingestion import load_observations
from .knowledge_base import default_kb, load_kb_file
from .pipeline import AGGREGATION_MODES, PipelineConfig, load_config, run_pipeline, stage, trace, validate_config
from .protoform import enumerate_candidates, select_statements

EXIT_USAGE, EXIT_INVALID, EXIT_INTERNAL = 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fuzzy-d2t", description="Generate a weather report from daily observations.")
    p.add_argument("--input", help="observation CSV with header date,temperature,precipitation,humidity")
    p.add_argument("--kb", help="knowledge base TOML (default: the shipped knowledge base)")
    p.add_argument("--config", help="pipeline configuration TOML")
    p.add_argument("--out", help="write the report here instead of standard output")
    p.add_argument("--format", choices=("text", "html"), default=None)
    p.add_argument("--aggregation", choices=AGGREGATION_MODES, default=None)
    p.add_argument("--mode", choices=("coverage", "specificity", "default"), default=None,
                   help="how two statements about one term are voiced")
    p.add_argument("--side-file", help="where --aggregation both writes its comparison record (JSON)")
    p.add_argument("--dump-candidates", action="store_true", help="print the candidate statement table instead of a report")
    p.add_argument("--trace", action="store_true", help="print intermediate representations to standard error")
    p.add_argument("--seed", type=int, help="accepted for reproducibility scripts; the pipeline is deterministic")
    return p


def _config(args) -> PipelineConfig:
    config = load_config(args.config) if args.config else PipelineConfig()
    overrides = {}
    if args.format:
        overrides["fmt"] = args.format
    if args.aggregation:
        overrides["aggregation"] = args.aggregation
    if args.mode:
        overrides["mode"] = args.mode
    return replace(config, **overrides) if overrides else config


def candidate_table(kb, table, config: PipelineConfig) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["variable", "quantifier", "term", "fd", "coverage", "selected"])
    for v in config.content.trend_variables:
        cands = enumerate_candidates(kb, v, table.series(v))
        chosen = {(s.quantifier.name, s.term) for s in select_statements(cands, config.content.criteria)}
        for s in cands:
            selected = (s.quantifier.name, s.term) in chosen
            writer.writerow([v, s.quantifier.name, s.term, f"{s.fd:.6f}", f"{s.coverage:.6f}", "yes" if selected else "no"])
    return buf.getvalue()


def _write(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def run(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if not args.input:
            raise UsageError("the following arguments are required: --input")
    except UsageError as exc:
        sys.stderr.write(f"fuzzy-d2t: usage error: {exc}\n")
        build_parser().print_usage(sys.stderr)
        return EXIT_USAGE

    try:
        with stage("configuration"):
            config = _config(args)
        with stage("knowledge base"):
            kb = load_kb_file(args.kb) if args.kb else default_kb()
        with stage("ingestion"):
            validate_config(kb, config)
            table = load_observations(args.input, kb, config.content.required_variables())

        if args.dump_candidates:
            with stage("content determination"):
                _write(candidate_table(kb, table, config), args.out)
            return 0

        result = run_pipeline(kb, table, config)
        if args.trace:
            sys.stderr.write(trace(result) + "\n")
        _write(result.report, args.out)
        if result.comparison is not None:
            record = json.dumps(result.comparison.record(), indent=2) + "\n"
            side = args.side_file or (f"{args.out}.aggregation.json" if args.out else None)
            if side:
                Path(side).write_text(record, encoding="utf-8")
            else:
                sys.stderr.write(record)
        return 0
    except ValidationError as exc:
        sys.stderr.write(f"fuzzy-d2t: error in {getattr(exc, 'stage', 'input')}: {exc}\n")
        return EXIT_INVALID
    except (InvariantError, D2TError) as exc:
        sys.stderr.write(f"fuzzy-d2t: internal error in {getattr(exc, 'stage', 'pipeline')}: {exc}\n")
        return EXIT_INTERNAL


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
