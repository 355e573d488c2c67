import argparse

from cusp_atlas.cli.documents import cusp_mesh_chart, emit, parse_label
from cusp_atlas.core.catalog import FamilyLabel
from cusp_atlas.core.curvature import expected_leaf_height, horosphere_sample, patch_curvatures
from cusp_atlas.schemas.report import MeshReport
from cusp_atlas.services.export_service import ExportService


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("mesh", help="sample a horosphere leaf of a cusp group")
    parser.add_argument("label", help="cusp label")
    parser.add_argument("params", nargs="*", type=float)
    parser.add_argument("--k", type=float, required=True, help="leaf through k(1,1,1)")
    parser.add_argument("--grid", type=int, default=9)
    parser.add_argument("--obj")
    parser.add_argument("--csv")
    parser.set_defaults(run=run)


def run(args: argparse.Namespace) -> int:
    label = parse_label(args.label)
    chart = cusp_mesh_chart(label, args.params)
    mesh = horosphere_sample(chart, args.k, args.grid)
    curvatures = patch_curvatures(chart, mesh)

    exporter = ExportService()
    if args.obj:
        exporter.write_obj(mesh, args.obj)
    if args.csv:
        exporter.write_mesh_csv(mesh, args.csv)

    expected = None
    if label == FamilyLabel.CUSP_E:
        expected = expected_leaf_height(1.0, chart.params.s, args.k)
    emit(
        MeshReport(
            family=str(label),
            params=chart.params,
            k=args.k,
            vertices=len(mesh.vertices),
            quads=len(mesh.quads),
            height=mesh.height,
            expected_height=expected,
            min_curvature=min(curvatures),
            obj=args.obj,
            csv=args.csv,
        )
    )
    return 0
