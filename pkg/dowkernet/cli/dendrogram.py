"""
dendrogram: topological-impact hierarchy of the nodes.

Writes into the --output directory:
  dendrogram.nwk   Newick tree
  dendrogram.json  leaves and merges
  dendrogram.svg   horizontal rendering
  join_times.csv   node,t sorted by descending join time
  distances.csv    bottleneck distances over the object set
"""
from pathlib import Path

from dowkernet.bottleneck import distance_matrix_to_csv
from dowkernet.cli.models import RunConfig
from dowkernet.cli.output import CommandResult, load_network, newick_comment, with_config, write_file
from dowkernet.config import resolve_threads
from dowkernet.hierarchy import build_hierarchy, impact_to_csv, topological_impact
from dowkernet.render import render_dendrogram_svg


def register(subparsers, parents):
    parser = subparsers.add_parser(
        "dendrogram", parents=parents,
        help="single-linkage hierarchy of node-deleted diagrams (writes a directory)",
    )
    parser.set_defaults(handler=run)


def run(config: RunConfig) -> CommandResult:
    g = load_network(config)
    h = build_hierarchy(
        g, config.epsilon, config.normalization, config.max_dim, config.homology_dims,
        config.cap_value, config.reduced, resolve_threads(config.threads),
    )
    d = h.dendrogram
    header = config.header_lines()
    out = Path(config.output or ".")

    outputs = (
        write_file(out / "dendrogram.nwk", newick_comment(header) + d.to_newick() + "\n"),
        write_file(out / "dendrogram.json", with_config(d.to_dict(), config.metadata())),
        write_file(out / "dendrogram.svg", render_dendrogram_svg(d, metadata=header)),
        write_file(out / "join_times.csv", impact_to_csv(topological_impact(d), header)),
        write_file(out / "distances.csv", distance_matrix_to_csv(h.distances, h.objects.labels, "long", header)),
    )
    return CommandResult(g.n, outputs)
