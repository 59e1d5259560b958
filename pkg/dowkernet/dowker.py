"""
Dowker sink filtration of a dissimilarity network.

A vertex set sigma enters the sink complex at scale delta once some node p
(the sink, possibly a member of sigma) lies within distance delta of every
member: value(sigma) = min over p of max over x in sigma of m(x, p).
Every subset eventually appears, so the filtration enumerates all subsets of
size <= max_dim + 1.
"""
import csv
import io
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from dowkernet.config import settings
from dowkernet.errors import DomainError
from dowkernet.network import DirectedNetwork, NetworkKind, NodeRef, default_cap


@dataclass(frozen=True)
class Simplex:
    vertices: Tuple[int, ...]
    value: float

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def faces(self) -> List[Tuple[int, ...]]:
        """Codimension-one faces, as sorted vertex tuples."""
        if self.dim == 0:
            return []
        return [self.vertices[:k] + self.vertices[k + 1:] for k in range(len(self.vertices))]

    def sort_key(self):
        return (self.value, self.dim, self.vertices)


@dataclass(frozen=True)
class FilteredComplex:
    """Simplices in filtration order over the labels of the source network."""
    simplices: Tuple[Simplex, ...]
    max_dim: int
    labels: Tuple[str, ...]
    sentinel: Optional[float] = None
    default_cap: Optional[float] = None
    # simplices at or above the sentinel were left out
    reduced: bool = False

    def __len__(self) -> int:
        return len(self.simplices)

    def of_dim(self, dim: int) -> List[Simplex]:
        return [s for s in self.simplices if s.dim == dim]

    def values(self) -> List[float]:
        """Distinct filtration values in ascending order."""
        return sorted({s.value for s in self.simplices})

    @property
    def cap(self) -> float:
        """Death assigned to essential classes by default."""
        if self.default_cap is not None:
            return self.default_cap
        if self.sentinel is not None:
            return self.sentinel
        return max((s.value for s in self.simplices), default=0.0)


def _require_dissimilarity(g: DirectedNetwork):
    if g.kind is not NetworkKind.DISSIMILARITY:
        raise DomainError("the Dowker filtration expects a dissimilarity network")


def _vertex_indices(g: DirectedNetwork, verts: Iterable[NodeRef]) -> Tuple[int, ...]:
    idx = tuple(sorted({g.index(v) for v in verts}))
    if not idx:
        raise DomainError("a simplex needs at least one vertex")
    return idx


def simplex_value(g: DirectedNetwork, verts: Iterable[NodeRef]) -> float:
    """Smallest delta at which ``verts`` share a sink."""
    _require_dissimilarity(g)
    idx = _vertex_indices(g, verts)
    return float(g.weights[list(idx), :].max(axis=0).min())


def sink_of(g: DirectedNetwork, verts: Iterable[NodeRef]) -> str:
    """Label of a sink realizing ``simplex_value`` (lowest index on ties)."""
    _require_dissimilarity(g)
    idx = _vertex_indices(g, verts)
    return g.nodes[int(np.argmin(g.weights[list(idx), :].max(axis=0)))]


_CHUNK = 20_000


def _values_for(m: np.ndarray, combos: np.ndarray) -> np.ndarray:
    # (T, k+1, n) -> max over members -> min over sinks, chunked to bound memory
    out = np.empty(len(combos))
    for start in range(0, len(combos), _CHUNK):
        block = combos[start:start + _CHUNK]
        out[start:start + len(block)] = m[block].max(axis=1).min(axis=1)
    return out


def build_filtration(g: DirectedNetwork, max_dim: Optional[int] = None,
                     reduced: bool = False) -> FilteredComplex:
    """All simplices of dimension <= max_dim with their sink values, in filtration order.

    ``reduced`` drops simplices valued at or above the sentinel; vertices are
    always kept.
    """
    _require_dissimilarity(g)
    max_dim = settings.max_dim if max_dim is None else max_dim
    if max_dim < 0:
        raise DomainError(f"max_dim must be nonnegative, got {max_dim}")

    m = np.asarray(g.weights, dtype=float)
    n = g.n
    simplices: List[Simplex] = [Simplex((i,), 0.0) for i in range(n)]
    cutoff = g.sentinel if reduced else None

    for k in range(1, max_dim + 1):
        if n < k + 1:
            break
        combos = np.array(list(combinations(range(n), k + 1)), dtype=np.intp)
        values = _values_for(m, combos)
        for verts, value in zip(combos.tolist(), values.tolist()):
            if cutoff is not None and value >= cutoff:
                continue
            simplices.append(Simplex(tuple(verts), value))

    simplices.sort(key=Simplex.sort_key)
    return FilteredComplex(tuple(simplices), max_dim, g.nodes, g.sentinel,
                           default_cap=default_cap(g), reduced=cutoff is not None)


def edge_values(g: DirectedNetwork) -> List[Tuple[float, int, int]]:
    """Dowker values of every vertex pair, ascending with (i, j) tie-break."""
    _require_dissimilarity(g)
    if g.n < 2:
        return []
    combos = np.array(list(combinations(range(g.n), 2)), dtype=np.intp)
    values = _values_for(np.asarray(g.weights, dtype=float), combos)
    return sorted(zip(values.tolist(), combos[:, 0].tolist(), combos[:, 1].tolist()))


def filtration_to_csv(f: FilteredComplex, header: Sequence[str] = ()) -> str:
    """``dim,vertices,value`` rows; vertices are ';'-joined labels."""
    buf = io.StringIO()
    for line in header:
        buf.write(line + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["dim", "vertices", "value"])
    for s in f.simplices:
        writer.writerow([s.dim, ";".join(f.labels[v] for v in s.vertices), f"{s.value:.6g}"])
    return buf.getvalue()
