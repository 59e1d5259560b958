"""bottleneck: distance between two diagram files."""
from dowkernet.bottleneck import diagram_distance
from dowkernet.cli.models import RunConfig
from dowkernet.cli.output import CommandResult, emit, load_diagrams, with_config
from dowkernet.errors import UsageError


def register(subparsers, parents):
    parser = subparsers.add_parser(
        "bottleneck", parents=parents,
        help="bottleneck distance between two diagram JSON files",
    )
    parser.add_argument("other", help="second diagram JSON file (the first is --input)")
    parser.add_argument("--dims", type=int, nargs="+",
                        help="dimensions to compare (default: every dimension present)")
    parser.set_defaults(handler=run)


def run(config: RunConfig) -> CommandResult:
    if not config.input:
        raise UsageError("bottleneck needs --input")
    first, second = load_diagrams(config.input), load_diagrams(config.other)
    dims = config.dims or sorted({d.dimension for d in first} | {d.dimension for d in second})

    per_dim = {k: diagram_distance(first, second, (k,)) for k in dims}
    distance = max(per_dim.values(), default=0.0)

    fmt = config.output_format or "csv"
    if fmt == "csv":
        text = f"{distance:.6g}\n"
    elif fmt == "json":
        text = with_config(
            {"distance": distance, "per_dimension": {str(k): v for k, v in per_dim.items()}},
            config.metadata(),
        )
    else:
        raise UsageError(f"bottleneck writes csv or json, not {fmt}")
    written = emit(text, config.output)
    return CommandResult(0, (written,) if written else ())
