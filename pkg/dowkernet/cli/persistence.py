"""persistence: barcodes and diagrams of the Dowker sink filtration."""
from dowkernet.cli.models import RunConfig
from dowkernet.cli.output import CommandResult, emit, load_network
from dowkernet.dowker import build_filtration
from dowkernet.errors import UsageError
from dowkernet.network import NetworkKind, default_cap, effective_distance
from dowkernet.persistence import (
    PersistenceDiagram,
    barcodes_to_csv,
    compute_barcodes,
    diagrams_to_json,
)
from dowkernet.render import render_barcode_svg


def register(subparsers, parents):
    parser = subparsers.add_parser(
        "persistence", parents=parents,
        help="persistence diagrams of gamma(G) (json, csv barcodes or svg)",
    )
    parser.set_defaults(handler=run)


def run(config: RunConfig) -> CommandResult:
    g = load_network(config)
    gamma = effective_distance(g, config.epsilon, config.normalization) if g.kind is NetworkKind.FLOW else g

    f = build_filtration(gamma, config.max_dim, reduced=config.reduced)
    cap = default_cap(gamma) if config.cap_value is None else config.cap_value
    bars = [b for b in compute_barcodes(f, config.homology_dims, cap) if not b.zero]
    diagrams = [PersistenceDiagram.from_barcodes(bars, k, cap) for k in range(config.homology_dims + 1)]

    fmt = config.output_format or "json"
    if fmt == "json":
        text = diagrams_to_json(diagrams, config.metadata())
    elif fmt == "csv":
        text = barcodes_to_csv(bars, config.header_lines())
    elif fmt == "svg":
        text = render_barcode_svg(bars, cap, range(config.homology_dims + 1),
                                  metadata=config.header_lines())
    else:
        raise UsageError(f"persistence writes json, csv or svg, not {fmt}")
    written = emit(text, config.output)
    return CommandResult(g.n, (written,) if written else ())
