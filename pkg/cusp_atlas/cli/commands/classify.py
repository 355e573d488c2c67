import argparse
import logging

from cusp_atlas.cli.documents import emit, read_basis_document
from cusp_atlas.core.classify import classify15, classify_cusp
from cusp_atlas.core.mat4core import AlgebraBasis

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("classify", help="classify a 2- or 3-dim abelian algebra given as JSON")
    parser.add_argument("file", help="basis document path, or - for stdin")
    parser.set_defaults(run=run)


def run(args: argparse.Namespace) -> int:
    document = read_basis_document(args.file)
    if document.label:
        logger.info(f"ignoring label hint {document.label!r}")
    basis = AlgebraBasis(document.matrices)
    report = classify15(basis) if basis.dim == 3 else classify_cusp(basis)
    emit(report)
    return 0
