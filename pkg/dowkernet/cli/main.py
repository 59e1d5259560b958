"""
Command-line entry point for Dowkernet.

This module assembles the subcommands into one parser. Each command lives in
its own file and exposes ``register(subparsers, parents)`` plus a ``run``
handler taking a RunConfig:

  transform   - flow network to effective distances
  centrality  - one measure or all of them (compare is the wide-table alias)
  persistence - diagrams of the Dowker sink filtration
  bottleneck  - distance between two diagram files
  dendrogram  - topological-impact hierarchy

Exit codes: 0 ok, 1 usage, 2 parse or IO, 3 domain, 4 convergence.
"""
import argparse
import sys
import time
from typing import List, Optional

from pydantic import ValidationError

from dowkernet import __version__
from dowkernet.cli import bottleneck, centrality, dendrogram, persistence, transform
from dowkernet.cli.models import OUTPUT_FORMATS, RunConfig
from dowkernet.errors import DowkerError, UsageError
from dowkernet.ingest import FORMATS
from dowkernet.logger import dowker_logger

COMMANDS = (transform, centrality, persistence, bottleneck, dendrogram)


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad flags; usage errors here are 1."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _common_flags() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--input", "-i", help="network file (or first diagram file for bottleneck)")
    common.add_argument("--format", dest="input_format", choices=FORMATS,
                        help="input format (default: from the file extension)")
    common.add_argument("--epsilon", type=float, help="smallest flow fraction; sentinel = 1 - ln(epsilon)")
    common.add_argument("--normalization", choices=["out", "in"],
                        help="divide by the source's outgoing (default) or the target's incoming weight")
    common.add_argument("--max-dim", dest="max_dim", type=int, help="largest simplex dimension")
    common.add_argument("--homology-dims", dest="homology_dims", type=int,
                        help="highest homology dimension")
    common.add_argument("--reduced", action="store_true",
                        help="skip simplices valued at the sentinel")
    common.add_argument("--cap", help="death of essential classes: sentinel (default), inf or a number")
    common.add_argument("--threads", type=int, help="worker threads (default: DOWKER_THREADS or all cores)")
    common.add_argument("--output", "-o", help="output file (directory for dendrogram); default stdout")
    common.add_argument("--output-format", dest="output_format", choices=OUTPUT_FORMATS)
    common.add_argument("--seed", type=int, help="recorded in output metadata")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="dowkernet",
        description="Topological centrality and impact hierarchies for directed weighted networks.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="command")
    parents = [_common_flags()]
    for module in COMMANDS:
        module.register(subparsers, parents)
    return parser


def _config_from(args: argparse.Namespace) -> RunConfig:
    values = {
        key: value for key, value in vars(args).items()
        if key in RunConfig.model_fields and value is not None
    }
    try:
        return RunConfig(**values)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(part) for part in first["loc"]) or "config"
        raise UsageError(f"{where}: {first['msg']}") from None


def main(argv: Optional[List[str]] = None) -> int:
    try:
        sys.stdout.reconfigure(encoding="utf-8", errors="replace")
        sys.stderr.reconfigure(encoding="utf-8", errors="replace")
    except Exception:
        pass  # streams swapped out (pytest capture, service wrappers)

    command = "dowkernet"
    try:
        args = build_parser().parse_args(argv)
        command = args.command
        config = _config_from(args)

        start = time.perf_counter()
        result = args.handler(config)
        dowker_logger.log_run_complete(command, result.nodes, time.perf_counter() - start,
                                       list(result.outputs))
    except DowkerError as e:
        dowker_logger.log_command_error(command, e)
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code

    for path in result.outputs:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
