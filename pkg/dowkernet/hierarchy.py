"""
Node hierarchy by topological impact.

The object set holds one diagram set per deleted node plus the diagram set of
the whole network (labeled STANDARD). Objects are compared by bottleneck
distance and clustered by single linkage; a node's join time, the height at
which it first shares a block with STANDARD, is its topological impact.
"""
import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from dowkernet.bottleneck import pairwise_distances
from dowkernet.config import settings
from dowkernet.dowker import build_filtration
from dowkernet.errors import DomainError, NodeLookupError
from dowkernet.network import DirectedNetwork, NetworkKind, default_cap, delete_node, effective_distance
from dowkernet.persistence import PersistenceDiagram, check_reduced_cap, compute_persistence
from dowkernet.unionfind import UnionFind

STANDARD = "STANDARD"


@dataclass(frozen=True)
class LabeledObjectSet:
    """S_G: node labels plus STANDARD, each mapped to its diagrams in dims 0..max_hom_dim."""
    labels: Tuple[str, ...]
    diagrams: Dict[str, Tuple[PersistenceDiagram, ...]]
    cap: float

    def __len__(self) -> int:
        return len(self.labels)


def build_object_set(g: DirectedNetwork, epsilon: Optional[float] = None,
                     normalization: Optional[str] = None, max_dim: Optional[int] = None,
                     max_hom_dim: Optional[int] = None, cap: Optional[float] = None,
                     reduced: bool = False, threads: int = 1) -> LabeledObjectSet:
    """Diagrams of gamma(G) and of every node-deleted network, with one cap throughout."""
    if g.n < 2:
        raise DomainError("the object set needs at least 2 nodes")
    max_dim = settings.max_dim if max_dim is None else max_dim
    max_hom_dim = settings.homology_dims if max_hom_dim is None else max_hom_dim
    gamma = effective_distance(g, epsilon, normalization) if g.kind is NetworkKind.FLOW else g
    if cap is None:
        cap = default_cap(gamma)
    check_reduced_cap(reduced and gamma.sentinel is not None, cap, gamma.sentinel)

    def diagrams_of(network: DirectedNetwork) -> Tuple[PersistenceDiagram, ...]:
        f = build_filtration(network, max_dim, reduced=reduced)
        return tuple(compute_persistence(f, max_hom_dim, cap))

    networks = [gamma] + [delete_node(gamma, i) for i in range(gamma.n)]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(pool.map(diagrams_of, networks))

    labels = gamma.nodes + (STANDARD,)
    diagrams = {label: results[i + 1] for i, label in enumerate(gamma.nodes)}
    diagrams[STANDARD] = results[0]
    return LabeledObjectSet(labels, diagrams, cap)


def object_distances(objects: LabeledObjectSet, dims: Optional[Sequence[int]] = None,
                     threads: int = 1) -> np.ndarray:
    """Bottleneck distance matrix over the object set, in label order."""
    if dims is None:
        dims = range(len(objects.diagrams[STANDARD]))
    return pairwise_distances([objects.diagrams[label] for label in objects.labels],
                              tuple(dims), threads)


# ---------------------------------------------------------------------------
# Dendrograms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Merge:
    """Clusters ``left`` and ``right`` join at ``height``.

    Cluster ids follow SciPy's linkage layout: leaves are 0..n-1 and the k-th
    merge creates cluster n + k.
    """
    left: int
    right: int
    height: float
    size: int


@dataclass(frozen=True)
class Dendrogram:
    leaves: Tuple[str, ...]
    merges: Tuple[Merge, ...]

    @property
    def final_height(self) -> float:
        return self.merges[-1].height if self.merges else 0.0

    def _index(self, label: str) -> int:
        try:
            return self.leaves.index(label)
        except ValueError:
            raise NodeLookupError(f"unknown label '{label}'") from None

    def members(self, cluster: int) -> List[int]:
        """Leaf indices under ``cluster``."""
        return sorted(_leaves_of(cluster, self.merges, len(self.leaves)))

    def partition(self, t: float) -> List[frozenset]:
        """Blocks at parameter t; merges at height <= t are applied."""
        uf = UnionFind(range(len(self.leaves)))
        for m in self.merges:
            if m.height > t:
                break
            uf.union(self.members(m.left)[0], self.members(m.right)[0])
        return [frozenset(self.leaves[i] for i in group) for group in uf.groups()]

    def to_dict(self) -> dict:
        return {
            "leaves": list(self.leaves),
            "merges": [[m.left, m.right, m.height] for m in self.merges],
        }

    def to_json(self, config: Optional[dict] = None) -> str:
        payload = {"config": config} if config is not None else {}
        payload.update(self.to_dict())
        return json.dumps(payload, indent=2) + "\n"

    def linkage_matrix(self) -> np.ndarray:
        """(n-1) x 4 array [left, right, height, size] as used by scipy.cluster.hierarchy."""
        return np.array([[m.left, m.right, m.height, m.size] for m in self.merges], dtype=float).reshape(-1, 4)

    def to_newick(self) -> str:
        """Newick text; branch lengths are height differences."""
        n = len(self.leaves)
        if not self.merges:
            return "".join(_newick_label(x) for x in self.leaves[:1]) + ";"

        def height_of(c: int) -> float:
            return 0.0 if c < n else self.merges[c - n].height

        def render(c: int) -> str:
            if c < n:
                return _newick_label(self.leaves[c])
            m = self.merges[c - n]
            parts = [
                f"{render(child)}:{m.height - height_of(child):.6g}"
                for child in (m.left, m.right)
            ]
            return f"({','.join(parts)})"

        return render(n + len(self.merges) - 1) + ";"


def _newick_label(label: str) -> str:
    if any(ch in label for ch in "()[]':;, \t"):
        return "'" + label.replace("'", "''") + "'"
    return label


def single_linkage(dist, labels: Sequence[str]) -> Dendrogram:
    """Single-linkage dendrogram (Kruskal order); ties go to the lexicographically smallest label pair."""
    d = np.asarray(dist, dtype=float)
    labels = tuple(str(x) for x in labels)
    n = len(labels)
    if d.shape != (n, n):
        raise DomainError(f"distance matrix shape {d.shape} does not match {n} labels")
    if len(set(labels)) != n:
        raise DomainError("labels must be unique")
    if np.isnan(d).any() or (d < 0).any():
        raise DomainError("distances must be nonnegative")
    if not np.array_equal(d, d.T):
        raise DomainError("distance matrix must be symmetric")
    if np.any(np.diag(d) != 0):
        raise DomainError("distance matrix must have a zero diagonal")

    edges = sorted(
        (d[i, j], min(labels[i], labels[j]), max(labels[i], labels[j]), i, j)
        for i in range(n) for j in range(i + 1, n)
    )
    uf = UnionFind(range(n))
    cluster_of = {i: i for i in range(n)}  # union-find root -> current cluster id
    size_of = {i: 1 for i in range(n)}
    merges: List[Merge] = []
    for value, _, _, i, j in edges:
        ri, rj = uf.find(i), uf.find(j)
        if ri == rj:
            continue
        ci, cj = cluster_of.pop(ri), cluster_of.pop(rj)
        left, right = sorted((ci, cj), key=lambda c: min(labels[k] for k in _leaves_of(c, merges, n)))
        size = size_of.pop(ci) + size_of.pop(cj)
        merges.append(Merge(left, right, float(value), size))
        uf.union(i, j)
        new_id = n + len(merges) - 1
        cluster_of[uf.find(i)] = new_id
        size_of[new_id] = size
        if len(merges) == n - 1:
            break
    return Dendrogram(labels, tuple(merges))


def _leaves_of(cluster: int, merges: Sequence[Merge], n: int) -> List[int]:
    stack, out = [cluster], []
    while stack:
        c = stack.pop()
        if c < n:
            out.append(c)
        else:
            m = merges[c - n]
            stack.extend((m.left, m.right))
    return out


def block_containing(d: Dendrogram, label: str, t: float) -> frozenset:
    """Block of the partition at t that holds ``label``."""
    d._index(label)
    if t < 0:
        raise DomainError("t must be nonnegative")
    for block in d.partition(t):
        if label in block:
            return block
    raise NodeLookupError(f"unknown label '{label}'")


def join_time(d: Dendrogram, label: str, reference: str = STANDARD) -> float:
    """Smallest t at which ``label`` shares a block with ``reference``."""
    i, r = d._index(label), d._index(reference)
    if i == r:
        return 0.0
    n = len(d.leaves)
    uf = UnionFind(range(n))
    for m in d.merges:
        uf.union(_leaves_of(m.left, d.merges, n)[0], _leaves_of(m.right, d.merges, n)[0])
        if uf.find(i) == uf.find(r):
            return m.height
    raise DomainError("dendrogram never joins the two labels")


def topological_impact(d: Dendrogram, reference: str = STANDARD) -> List[Tuple[str, float]]:
    """(label, join time) for every leaf but the reference, highest impact first."""
    rows = [(label, join_time(d, label, reference)) for label in d.leaves if label != reference]
    return sorted(rows, key=lambda row: (-row[1], row[0]))


def impact_to_csv(rows: Sequence[Tuple[str, float]], header: Sequence[str] = ()) -> str:
    buf = io.StringIO()
    for line in header:
        buf.write(line + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["node", "t"])
    for label, t in rows:
        writer.writerow([label, f"{t:.6g}"])
    return buf.getvalue()


@dataclass(frozen=True)
class Hierarchy:
    objects: LabeledObjectSet
    distances: np.ndarray
    dendrogram: Dendrogram


def build_hierarchy(g: DirectedNetwork, epsilon: Optional[float] = None,
                    normalization: Optional[str] = None, max_dim: Optional[int] = None,
                    max_hom_dim: Optional[int] = None, cap: Optional[float] = None,
                    reduced: bool = False, threads: int = 1) -> Hierarchy:
    """Network to object set, bottleneck distances and single-linkage dendrogram."""
    if cap is not None and not math.isfinite(cap):
        raise DomainError("bottleneck comparison needs a finite cap")
    objects = build_object_set(g, epsilon, normalization, max_dim, max_hom_dim, cap, reduced, threads)
    dist = object_distances(objects, threads=threads)
    return Hierarchy(objects, dist, single_linkage(dist, objects.labels))
