import argparse
import logging
from pathlib import Path

from cusp_atlas.cli.documents import emit
from cusp_atlas.core.config import settings
from cusp_atlas.services.verification_service import SUITES, VerificationService

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("verify", help="run verification suites")
    parser.add_argument("suite", choices=SUITES + ["all"])
    parser.add_argument("--samples", type=int, default=100)
    parser.add_argument("--jsonl", help="write one record per line")
    parser.set_defaults(run=run)


def run(args: argparse.Namespace) -> int:
    service = VerificationService(seed=settings.SEED, samples=args.samples)
    report = service.run([args.suite])

    if args.jsonl:
        path = Path(args.jsonl)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="\n") as f:
            for record in report.records:
                f.write(record.model_dump_json() + "\n")
        logger.info(f"wrote {len(report.records)} records to {path}")

    emit(report, exclude={"records"})
    for record in report.records:
        if not record.passed:
            logger.error(f"{record.check_id}: expected {record.expected}, observed {record.observed}")
    return 0 if report.ok else 1
