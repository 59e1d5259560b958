"""
Bottleneck distance between persistence diagrams.

A matching pairs every off-diagonal point of one diagram with a point of the
other or with its own diagonal projection. Its cost is the largest L-infinity
displacement; a point sent to the diagonal costs half its persistence. The
distance is the cheapest cost over all matchings.

bottleneck_distance searches the finite set of candidate costs and tests each
threshold with a maximum bipartite matching (Hopcroft-Karp, from SciPy).
bottleneck_oracle enumerates every matching of small diagrams.
"""
import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from dowkernet.errors import DomainError, SizeError
from dowkernet.persistence import Point, PersistenceDiagram

ORACLE_LIMIT = 8

# None stands for the diagonal
Assignment = Tuple[Optional[Point], Optional[Point]]


@dataclass(frozen=True)
class Matching:
    pairs: Tuple[Assignment, ...]
    cost: float


def _linf(p: Point, q: Point) -> float:
    return max(abs(p[0] - q[0]), abs(p[1] - q[1]))


def _half(p: Point) -> float:
    return (p[1] - p[0]) / 2.0


def _check(d1: PersistenceDiagram, d2: PersistenceDiagram):
    if d1.dimension != d2.dimension:
        raise DomainError(f"diagram dimensions differ: {d1.dimension} vs {d2.dimension}")
    for d in (d1, d2):
        for b, de in d.points:
            if not (math.isfinite(b) and math.isfinite(de)):
                raise DomainError("diagram has an uncapped infinite coordinate; cap essential bars first")


def _off_diagonal(d: PersistenceDiagram):
    return [p for p in d.points if p[1] > p[0]]


def _costs(a, b):
    """L-infinity costs between a and b, and half-persistences of each."""
    pa = np.asarray(a, dtype=float).reshape(-1, 2)
    pb = np.asarray(b, dtype=float).reshape(-1, 2)
    cross = np.abs(pa[:, None, :] - pb[None, :, :]).max(axis=2)
    return cross, (pa[:, 1] - pa[:, 0]) / 2.0, (pb[:, 1] - pb[:, 0]) / 2.0


def _feasible(cross, half_a, half_b, r: float):
    """Perfect matching of the augmented bipartite graph at threshold r, or None.

    Left = points of a, then diagonal copies of b's points; right = points of
    b, then diagonal copies of a's points. Diagonal copies always match each other.
    """
    na, nb = len(half_a), len(half_b)
    graph = np.block([
        [cross <= r, np.diag(half_a <= r)],
        [np.diag(half_b <= r), np.ones((nb, na), dtype=bool)],
    ])
    match = maximum_bipartite_matching(csr_matrix(graph.astype(np.int8)), perm_type="column")
    if (match < 0).any():
        return None
    return match


def _candidates(cross, half_a, half_b):
    return np.unique(np.concatenate([half_a, half_b, cross.ravel()])).tolist()


def bottleneck_matching(d1: PersistenceDiagram, d2: PersistenceDiagram) -> Matching:
    """Optimal matching between two diagrams of the same dimension."""
    _check(d1, d2)
    a, b = _off_diagonal(d1), _off_diagonal(d2)
    if not a and not b:
        return Matching((), 0.0)

    cross, half_a, half_b = _costs(a, b)
    candidates = _candidates(cross, half_a, half_b)
    lo, hi = 0, len(candidates) - 1
    best = _feasible(cross, half_a, half_b, candidates[hi])
    while lo < hi:
        mid = (lo + hi) // 2
        match = _feasible(cross, half_a, half_b, candidates[mid])
        if match is None:
            lo = mid + 1
        else:
            hi, best = mid, match

    na, nb = len(a), len(b)
    pairs = []
    for i, j in enumerate(best[:na]):
        pairs.append((a[i], b[j] if j < nb else None))
    for j in best[na:]:
        if j < nb:
            pairs.append((None, b[j]))
    return Matching(tuple(pairs), candidates[hi])


def bottleneck_distance(d1: PersistenceDiagram, d2: PersistenceDiagram) -> float:
    return bottleneck_matching(d1, d2).cost


def bottleneck_oracle(d1: PersistenceDiagram, d2: PersistenceDiagram) -> float:
    """Exact bottleneck distance by enumerating every matching (at most 8 points in total)."""
    _check(d1, d2)
    a, b = _off_diagonal(d1), _off_diagonal(d2)
    if len(a) + len(b) > ORACLE_LIMIT:
        raise SizeError(f"oracle handles at most {ORACLE_LIMIT} points, got {len(a) + len(b)}")

    best = math.inf

    def search(i: int, used: frozenset, cost: float):
        nonlocal best
        if cost >= best:
            return
        if i == len(a):
            rest = [_half(q) for j, q in enumerate(b) if j not in used]
            best = min(best, max([cost] + rest))
            return
        search(i + 1, used, max(cost, _half(a[i])))
        for j, q in enumerate(b):
            if j not in used:
                search(i + 1, used | {j}, max(cost, _linf(a[i], q)))

    search(0, frozenset(), 0.0)
    return best


DiagramSet = Union[Sequence[PersistenceDiagram], Mapping[int, PersistenceDiagram]]


def _by_dim(diagrams: DiagramSet):
    if isinstance(diagrams, Mapping):
        return dict(diagrams)
    return {d.dimension: d for d in diagrams}


def diagram_distance(a: DiagramSet, b: DiagramSet, dims: Sequence[int] = (0, 1)) -> float:
    """Largest per-dimension bottleneck distance; a missing dimension counts as empty."""
    da, db = _by_dim(a), _by_dim(b)
    caps = {d.cap for d in list(da.values()) + list(db.values())}
    if len(caps) > 1:
        raise DomainError(f"diagram sets use different caps: {sorted(caps)}")
    cap = caps.pop() if caps else math.inf
    worst = 0.0
    for k in dims:
        empty = PersistenceDiagram(k, (), cap)
        worst = max(worst, bottleneck_distance(da.get(k, empty), db.get(k, empty)))
    return worst


def pairwise_distances(objects: Sequence[DiagramSet], dims: Sequence[int] = (0, 1),
                       threads: int = 1) -> np.ndarray:
    """Symmetric matrix of diagram_distance over every pair of diagram sets."""
    n = len(objects)
    pairs = list(combinations(range(n), 2))
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        values = list(pool.map(lambda ij: diagram_distance(objects[ij[0]], objects[ij[1]], dims), pairs))
    dist = np.zeros((n, n))
    for (i, j), v in zip(pairs, values):
        dist[i, j] = dist[j, i] = v
    return dist


def distance_matrix_to_csv(dist: np.ndarray, labels: Sequence[str], layout: str = "long",
                           header: Sequence[str] = ()) -> str:
    """``long``: label_row,label_col,distance rows; ``wide``: square table."""
    buf = io.StringIO()
    for line in header:
        buf.write(line + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    if layout == "long":
        writer.writerow(["label_row", "label_col", "distance"])
        for i, row_label in enumerate(labels):
            for j, col_label in enumerate(labels):
                writer.writerow([row_label, col_label, f"{dist[i, j]:.6g}"])
    elif layout == "wide":
        writer.writerow([""] + list(labels))
        for i, row_label in enumerate(labels):
            writer.writerow([row_label] + [f"{v:.6g}" for v in dist[i]])
    else:
        raise DomainError(f"unknown distance layout '{layout}'")
    return buf.getvalue()
