"""tlx command line: workload analytics over exported study CSVs."""

from __future__ import annotations

import argparse
import json
import sys

from .tlx import (
    CONDITIONS,
    DIMENSIONS,
    TlxError,
    composite_workload,
    condition_summary,
    friedman_test,
    ingest_tlx_csv,
    paired_scores,
    pearson_matrix,
    scores_matrix,
    wilcoxon_signed_rank,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tlx", description="NASA-TLX workload analytics"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--input", required=True, metavar="PATH", help="TLX responses CSV")
        p.add_argument("--format", choices=["table", "json"], default="table")
        p.add_argument(
            "--scale-max", type=float, default=10.0,
            help="top of the score scale (10, 20, or 100 variants)",
        )

    summarize = sub.add_parser("summarize", help="per-condition means and sds")
    common(summarize)

    correlate = sub.add_parser("correlate", help="Pearson r between dimensions")
    common(correlate)

    friedman = sub.add_parser("friedman", help="within-subject test across conditions")
    common(friedman)
    friedman.add_argument("--dimension", required=True, choices=DIMENSIONS)
    friedman.add_argument(
        "--conditions", default=",".join(CONDITIONS),
        help="comma-separated condition labels (default: all four)",
    )

    wilcoxon = sub.add_parser("wilcoxon", help="paired test between two conditions")
    common(wilcoxon)
    wilcoxon.add_argument("--dimension", required=True, choices=DIMENSIONS)
    wilcoxon.add_argument(
        "--conditions", required=True, metavar="A,B", help="exactly two condition labels"
    )

    return parser


def _table(rows: list[list[str]]) -> str:
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    return "\n".join(
        "  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip()
        for row in rows
    )


def _fmt_stat(mean: float, sd: float | None) -> str:
    if sd is None:
        return f"{mean:.2f}"
    return f"{mean:.2f} ± {sd:.2f}"


def cmd_summarize(records, args) -> int:
    summary = condition_summary(records)
    composites: dict[str, list[float]] = {}
    for record in records:
        composites.setdefault(record.condition, []).append(composite_workload(record))

    if args.format == "json":
        payload = {
            condition: {
                "n": stats["mental"].n,
                "dimensions": {
                    dim: {"mean": s.mean, "sd": s.sd} for dim, s in stats.items()
                },
                "composite_mean": sum(composites[condition]) / len(composites[condition]),
            }
            for condition, stats in summary.items()
        }
        print(json.dumps(payload, indent=2))
        return 0

    header = ["condition", "n", *DIMENSIONS, "composite"]
    rows = [header]
    for condition, stats in summary.items():
        values = composites[condition]
        rows.append(
            [
                condition,
                str(stats["mental"].n),
                *[_fmt_stat(stats[d].mean, stats[d].sd) for d in DIMENSIONS],
                f"{sum(values) / len(values):.2f}",
            ]
        )
    print(_table(rows))
    return 0


def cmd_correlate(records, args) -> int:
    matrix = pearson_matrix(records)
    if args.format == "json":
        print(json.dumps(matrix.to_dict(), indent=2))
        return 0
    rows = [["", *matrix.dimensions]]
    for dim, values in zip(matrix.dimensions, matrix.values):
        rows.append([dim, *[f"{v:.2f}" for v in values]])
    print(_table(rows))
    return 0


def _print_result(result, args, extra: dict) -> None:
    payload = {**result.to_dict(), **extra}
    if args.format == "json":
        print(json.dumps(payload, indent=2))
        return
    rows = [[key, str(value)] for key, value in payload.items()]
    print(_table(rows))


def cmd_friedman(records, args) -> int:
    conditions = tuple(c.strip() for c in args.conditions.split(",") if c.strip())
    matrix, participants = scores_matrix(records, args.dimension, conditions)
    result = friedman_test(matrix, participants)
    _print_result(
        result,
        args,
        {
            "dimension": args.dimension,
            "conditions": list(conditions),
            "participants": len(participants),
        },
    )
    return 0


def cmd_wilcoxon(records, args) -> int:
    conditions = [c.strip() for c in args.conditions.split(",") if c.strip()]
    if len(conditions) != 2:
        print("wilcoxon needs exactly two conditions, e.g. --conditions excel,ec1",
              file=sys.stderr)
        return 2
    a, b, participants = paired_scores(records, args.dimension, conditions[0], conditions[1])
    if not participants:
        print("no participants present in both conditions", file=sys.stderr)
        return 2
    result = wilcoxon_signed_rank(a, b)
    _print_result(
        result,
        args,
        {
            "dimension": args.dimension,
            "conditions": conditions,
            "pairs": len(participants),
        },
    )
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.input, encoding="utf-8") as handle:
            records = ingest_tlx_csv(handle.read(), scale_max=args.scale_max)
    except OSError as exc:
        print(f"cannot read {args.input}: {exc}", file=sys.stderr)
        return 1
    except TlxError as exc:
        print(f"bad input: {exc}", file=sys.stderr)
        return 2

    handlers = {
        "summarize": cmd_summarize,
        "correlate": cmd_correlate,
        "friedman": cmd_friedman,
        "wilcoxon": cmd_wilcoxon,
    }
    try:
        return handlers[args.command](records, args)
    except TlxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
