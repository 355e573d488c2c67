import argparse

import numpy as np

from cusp_atlas.cli.documents import emit, parse_label, surface_chart
from cusp_atlas.core.curvature import OrbitSurface, classify_sign, closed_form_detII, second_form_with_error
from cusp_atlas.schemas.report import CurvatureReport


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("curvature", help="curvature of a 2-dim orbit at a point")
    parser.add_argument("label", help="family or cusp label")
    parser.add_argument("params", nargs="*", type=float)
    parser.add_argument("--point", nargs=3, type=float, default=[1.0, 1.0, 1.0], metavar=("X", "Y", "Z"))
    parser.set_defaults(run=run)


def run(args: argparse.Namespace) -> int:
    label = parse_label(args.label)
    chart, row, row_params = surface_chart(label, args.params)
    point = np.append(np.asarray(args.point, dtype=np.float64), 1.0)
    det, error = second_form_with_error(OrbitSurface.from_chart(chart, point))
    emit(
        CurvatureReport(
            family=str(label),
            params=chart.params,
            point=list(args.point),
            det_numeric=det,
            det_closed=closed_form_detII(row, row_params, point),
            error_estimate=error,
            verdict=classify_sign(det).value,
        )
    )
    return 0
