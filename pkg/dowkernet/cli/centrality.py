"""
centrality / compare: node scores under quasi-centrality and the classical measures.
"""
from typing import List

from dowkernet.centrality import (
    CentralityReport,
    Measure,
    compare,
    degree_centrality,
    hits,
    katz,
    pagerank,
    quasi_centrality,
    reports_to_wide_csv,
)
from dowkernet.cli.models import RunConfig
from dowkernet.cli.output import CommandResult, emit, load_network, with_config
from dowkernet.config import resolve_threads
from dowkernet.errors import UsageError

MEASURES = [m.value for m in Measure] + ["all"]


def register(subparsers, parents):
    parser = subparsers.add_parser(
        "centrality", parents=parents,
        help="score nodes with one measure, or all of them",
    )
    parser.add_argument("--measure", choices=MEASURES, default="quasi")
    _add_measure_flags(parser)
    parser.set_defaults(handler=run)

    parser = subparsers.add_parser(
        "compare", parents=parents,
        help="every measure side by side (same as centrality --measure all)",
    )
    _add_table_flags(parser)
    parser.set_defaults(handler=run, measure="all")


def _add_measure_flags(parser):
    parser.add_argument("--alpha", type=float, help="Katz or PageRank alpha")
    parser.add_argument("--beta", type=float, help="Katz or PageRank beta")
    parser.add_argument("--reversed", action="store_true", help="PageRank on the edge-reversed network")
    _add_table_flags(parser)


def _add_table_flags(parser):
    parser.add_argument("--hits-norm", dest="hits_norm", choices=["l1", "l2"])
    parser.add_argument("--katz-alpha", dest="katz_alpha", type=float,
                        help="Katz alpha in the all-measures table")
    parser.add_argument("--pagerank-alpha", dest="pagerank_alpha", type=float,
                        help="PageRank alpha in the all-measures table")


def _single(g, config: RunConfig, threads: int) -> CentralityReport:
    measure = Measure(config.measure)
    if config.katz_alpha is not None or config.pagerank_alpha is not None:
        raise UsageError("--katz-alpha and --pagerank-alpha apply to the all-measures table; use --alpha")
    if config.reversed and measure not in (Measure.PAGERANK, Measure.PAGERANK_REVERSED):
        raise UsageError("--reversed applies to pagerank only")
    if (config.alpha is not None or config.beta is not None) and measure not in (
            Measure.KATZ, Measure.PAGERANK, Measure.PAGERANK_REVERSED):
        raise UsageError(f"--alpha/--beta do not apply to {measure.value}")

    if measure is Measure.QUASI:
        return quasi_centrality(g, config.epsilon, config.normalization, config.cap_value, threads)
    if measure in (Measure.IN_DEGREE, Measure.OUT_DEGREE):
        in_degree, out_degree = degree_centrality(g)
        return in_degree if measure is Measure.IN_DEGREE else out_degree
    if measure is Measure.KATZ:
        return katz(g, config.alpha, config.beta)
    if measure in (Measure.PAGERANK, Measure.PAGERANK_REVERSED):
        return pagerank(g, config.alpha, config.beta,
                        reversed=config.reversed or measure is Measure.PAGERANK_REVERSED)
    hubs, authorities = hits(g, normalization=config.hits_norm)
    return hubs if measure is Measure.HITS_HUB else authorities


def run(config: RunConfig) -> CommandResult:
    g = load_network(config)
    threads = resolve_threads(config.threads)

    if config.measure == "all":
        if config.alpha is not None or config.beta is not None or config.reversed:
            raise UsageError("--alpha, --beta and --reversed need a single --measure")
        reports: List[CentralityReport] = compare(
            g, config.epsilon, config.normalization,
            katz_alpha=config.katz_alpha, pagerank_alpha=config.pagerank_alpha, threads=threads,
            hits_normalization=config.hits_norm, cap=config.cap_value,
        )
    else:
        reports = [_single(g, config, threads)]

    fmt = config.output_format or "csv"
    if fmt == "csv":
        if len(reports) == 1:
            text = reports[0].to_csv(config.header_lines())
        else:
            text = reports_to_wide_csv(reports, config.header_lines())
    elif fmt == "json":
        text = with_config({"reports": [r.model_dump(mode="json") for r in reports]},
                           config.metadata())
    else:
        raise UsageError(f"centrality writes csv or json, not {fmt}")
    written = emit(text, config.output)
    return CommandResult(g.n, (written,) if written else ())
