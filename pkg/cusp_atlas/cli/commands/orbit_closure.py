import argparse

from cusp_atlas.cli.documents import emit, parse_label
from cusp_atlas.core.catalog import family_chart
from cusp_atlas.core.errors import BadParams
from cusp_atlas.core.orbits import closure_signature, compare_closure_table
from cusp_atlas.schemas.report import OrbitClosureReport


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("orbit-closure", help="orbit-closure signature and table comparison")
    parser.add_argument("label")
    parser.set_defaults(run=run)


def run(args: argparse.Namespace) -> int:
    label = parse_label(args.label)
    if label.is_cusp:
        raise BadParams(f"orbit-closure tables cover the fifteen families, not {label}")
    report = OrbitClosureReport(
        family=str(label),
        signature=closure_signature(family_chart(label)),
        table=compare_closure_table(label),
    )
    emit(report)
    return 0 if report.passed else 1
