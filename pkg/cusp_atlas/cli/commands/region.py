import argparse

from cusp_atlas.cli.documents import emit
from cusp_atlas.core.curvature import region_grid
from cusp_atlas.core.errors import BadParams
from cusp_atlas.schemas.report import RegionReport
from cusp_atlas.services.export_service import ExportService

BOUND = 3.0


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("region", help="the convex region of C planes [r:s:1]")
    parser.add_argument("--resolution", type=int, default=200)
    parser.add_argument("--csv", help="write the grid as CSV")
    parser.add_argument("--svg", help="write a plot of the grid as SVG")
    parser.set_defaults(run=run)


def run(args: argparse.Namespace) -> int:
    if args.resolution < 16:
        raise BadParams(f"region resolution must be at least 16, got {args.resolution}")
    r, s, grid = region_grid(args.resolution, BOUND)
    exporter = ExportService()
    if args.csv:
        exporter.write_region_csv(r, s, grid, args.csv)
    if args.svg:
        exporter.write_region_svg(r, s, grid, args.svg)
    emit(
        RegionReport(
            resolution=args.resolution,
            bound=BOUND,
            convex_count=int(grid.sum()),
            total=int(grid.size),
            csv=args.csv,
            svg=args.svg,
        )
    )
    return 0
