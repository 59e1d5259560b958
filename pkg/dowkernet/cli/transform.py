"""transform: flow network to effective-distance network."""
from dowkernet.cli.models import RunConfig
from dowkernet.cli.output import CommandResult, emit, load_network
from dowkernet.errors import UsageError
from dowkernet.ingest import network_to_json, write_adjacency_csv
from dowkernet.network import effective_distance


def register(subparsers, parents):
    parser = subparsers.add_parser(
        "transform", parents=parents,
        help="write the effective-distance network gamma(G)",
    )
    parser.set_defaults(handler=run)


def run(config: RunConfig) -> CommandResult:
    g = load_network(config)
    gamma = effective_distance(g, config.epsilon, config.normalization)

    fmt = config.output_format or "json"
    if fmt == "json":
        text = network_to_json(gamma, config.metadata())
    elif fmt == "csv":
        text = "\n".join(config.header_lines()) + "\n" + write_adjacency_csv(gamma)
    else:
        raise UsageError(f"transform writes json or csv, not {fmt}")
    written = emit(text, config.output)
    return CommandResult(g.n, (written,) if written else ())
