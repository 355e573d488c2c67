import argparse

from cusp_atlas.cli.documents import emit
from cusp_atlas.core.errors import BadParams
from cusp_atlas.core.normalform import normalize_C, normalize_E, normalize_F
from cusp_atlas.schemas.report import NormalFormReport


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("normalize", help="canonical parameters of a cusp plane, with certificate")
    parser.add_argument("family", choices=["C", "E", "F"])
    parser.add_argument("params", nargs="+", type=float, help="C: r s t; E and F: r s")
    parser.add_argument("--samples", type=int, default=8, help="samples for the certificate check")
    parser.set_defaults(run=run)


def run(args: argparse.Namespace) -> int:
    values = list(args.params)
    expected = 3 if args.family == "C" else 2
    if len(values) != expected:
        raise BadParams(f"normalize {args.family} takes {expected} parameters, got {len(values)}")

    if args.family == "C":
        canonical, cert = normalize_C(values)
        canonical_params = list(canonical)
    elif args.family == "E":
        s, cert = normalize_E(*values)
        canonical_params = [s]
    else:
        cert = normalize_F(*values)
        canonical_params = [1.0, 0.0]

    certificate = cert.to_report(n_samples=args.samples)
    emit(
        NormalFormReport(
            family=f"Cusp:{args.family}",
            input_params=values,
            canonical_params=canonical_params,
            certificate=certificate,
        )
    )
    return 0 if certificate.passed else 1
