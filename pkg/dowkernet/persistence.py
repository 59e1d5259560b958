"""
Persistent homology of a filtered complex over the two-element field.

compute_barcodes runs the standard column reduction of the boundary matrix in
filtration order. Columns are sets of row indices; adding two columns is a
symmetric difference. Classes that never die are essential and receive the
cap as their death (the sentinel by default, or math.inf).

h0_deaths_unionfind is the fast path for dimension 0: Kruskal over Dowker edge
values. betti_oracle recomputes Betti numbers from full boundary-matrix ranks
and exists to check the reduction.
"""
import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from dowkernet.config import settings
from dowkernet.dowker import FilteredComplex, edge_values
from dowkernet.errors import DimensionError, DomainError, EmptyNetworkError, ParseError
from dowkernet.network import DirectedNetwork, default_cap
from dowkernet.unionfind import UnionFind

Point = Tuple[float, float]


@dataclass(frozen=True)
class Barcode:
    dimension: int
    birth: float
    death: float
    essential: bool = False

    @property
    def persistence(self) -> float:
        return self.death - self.birth

    @property
    def zero(self) -> bool:
        return self.death == self.birth


@dataclass(frozen=True)
class PersistenceDiagram:
    """Multiset of (birth, death) points of one dimension; the diagonal is implicit."""
    dimension: int
    points: Tuple[Point, ...]
    cap: float

    def __post_init__(self):
        points = tuple(sorted((float(b), float(d)) for b, d in self.points))
        for b, d in points:
            if d < b:
                raise DimensionError(f"point ({b}, {d}) lies below the diagonal")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "cap", float(self.cap))

    def __len__(self) -> int:
        return len(self.points)

    def deaths(self) -> List[float]:
        return [d for _, d in self.points]

    @classmethod
    def from_barcodes(cls, bars: Sequence[Barcode], dimension: int, cap: float,
                      keep_zero: bool = False) -> "PersistenceDiagram":
        return cls(
            dimension,
            tuple((b.birth, b.death) for b in bars
                  if b.dimension == dimension and (keep_zero or not b.zero)),
            cap,
        )


# ---------------------------------------------------------------------------
# Column reduction
# ---------------------------------------------------------------------------

def _boundary_columns(f: FilteredComplex) -> List[Set[int]]:
    index_of = {s.vertices: i for i, s in enumerate(f.simplices)}
    columns = []
    for s in f.simplices:
        col = set()
        for face in s.faces():
            row = index_of.get(face)
            if row is None:
                raise DimensionError(f"filtration is missing face {face} of {s.vertices}")
            col.add(row)
        columns.append(col)
    return columns


def reduce_boundary(f: FilteredComplex) -> Dict[int, int]:
    """Persistence pairing as {birth simplex index: death simplex index}."""
    columns = _boundary_columns(f)
    owner: Dict[int, int] = {}  # lowest row -> reduced column holding it
    pairs: Dict[int, int] = {}
    for j, col in enumerate(columns):
        while col:
            low = max(col)
            k = owner.get(low)
            if k is None:
                owner[low] = j
                pairs[low] = j
                break
            col ^= columns[k]
        columns[j] = col
    return pairs


def check_reduced_cap(reduced: bool, cap: float, sentinel: Optional[float]):
    """A reduced filtration only reproduces the full diagrams when classes die at the sentinel."""
    if reduced and cap != sentinel:
        raise DomainError(
            f"a reduced filtration needs the sentinel cap ({sentinel}), got {cap}; "
            "drop the reduction or the explicit cap"
        )


def compute_barcodes(f: FilteredComplex, max_hom_dim: Optional[int] = None,
                     cap: Optional[float] = None) -> List[Barcode]:
    """All bars in dimensions 0..max_hom_dim, zero-persistence bars included."""
    max_hom_dim = settings.homology_dims if max_hom_dim is None else max_hom_dim
    if max_hom_dim < 0 or f.max_dim < max_hom_dim + 1:
        raise DimensionError(
            f"homology up to dimension {max_hom_dim} needs max_dim >= {max_hom_dim + 1}, "
            f"complex has {f.max_dim}"
        )
    cap = f.cap if cap is None else float(cap)
    check_reduced_cap(f.reduced, cap, f.sentinel)

    pairs = reduce_boundary(f)
    killed = set(pairs.values())
    bars: List[Barcode] = []
    for i, s in enumerate(f.simplices):
        if s.dim > max_hom_dim:
            continue
        if i in pairs:
            bars.append(Barcode(s.dim, s.value, f.simplices[pairs[i]].value))
        elif i not in killed:
            bars.append(Barcode(s.dim, s.value, max(cap, s.value), essential=True))
    bars.sort(key=lambda b: (b.dimension, b.birth, b.death, b.essential))
    return bars


def compute_persistence(f: FilteredComplex, max_hom_dim: Optional[int] = None,
                        cap: Optional[float] = None,
                        keep_zero: bool = False) -> List[PersistenceDiagram]:
    """One diagram per dimension 0..max_hom_dim; zero-persistence points dropped unless keep_zero."""
    max_hom_dim = settings.homology_dims if max_hom_dim is None else max_hom_dim
    cap = f.cap if cap is None else float(cap)
    bars = compute_barcodes(f, max_hom_dim, cap)
    return [PersistenceDiagram.from_barcodes(bars, k, cap, keep_zero) for k in range(max_hom_dim + 1)]


def h0_deaths_unionfind(g: DirectedNetwork, cap: Optional[float] = None) -> List[float]:
    """Dimension-0 deaths of the Dowker filtration of ``g``: one per node, ascending."""
    if g.n == 0:
        raise EmptyNetworkError("network has no nodes")
    if cap is None:
        cap = default_cap(g)
    uf = UnionFind(range(g.n))
    deaths = []
    for value, i, j in edge_values(g):
        if uf.union(i, j):
            deaths.append(value)
            if uf.components == 1:
                break
    deaths.extend([float(cap)] * uf.components)
    return sorted(deaths)


def total_persistence(d: PersistenceDiagram) -> float:
    """Sum of death - birth; points with an infinite death are left out."""
    return math.fsum(b_d[1] - b_d[0] for b_d in d.points if math.isfinite(b_d[1]))


# ---------------------------------------------------------------------------
# Betti numbers and the rank oracle
# ---------------------------------------------------------------------------

def betti_numbers(bars: Sequence[Barcode], t: float, dim: int) -> int:
    """Bars of ``dim`` alive at ``t`` (essential bars never die)."""
    return sum(
        1 for b in bars
        if b.dimension == dim and b.birth <= t and (b.essential or t < b.death)
    )


def rank_gf2(matrix: np.ndarray) -> int:
    """Rank over the two-element field by Gaussian elimination."""
    m = (np.asarray(matrix) % 2).astype(bool)
    rows, cols = m.shape
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        hits = np.flatnonzero(m[rank:, c])
        if hits.size == 0:
            continue
        pivot = rank + hits[0]
        if pivot != rank:
            m[[rank, pivot]] = m[[pivot, rank]]
        below = np.flatnonzero(m[:, c])
        below = below[below != rank]
        m[below] ^= m[rank]
        rank += 1
    return rank


def _boundary_matrix(lower, upper) -> np.ndarray:
    index_of = {s.vertices: i for i, s in enumerate(lower)}
    mat = np.zeros((len(lower), len(upper)), dtype=np.uint8)
    for j, s in enumerate(upper):
        for face in s.faces():
            mat[index_of[face], j] = 1
    return mat


def betti_oracle(f: FilteredComplex, t: float, dim: int) -> int:
    """Betti number of the sub-complex at scale ``t`` from boundary-matrix ranks."""
    if f.max_dim < dim + 1:
        raise DimensionError(f"Betti number in dimension {dim} needs max_dim >= {dim + 1}")
    by_dim = {k: [s for s in f.simplices if s.dim == k and s.value <= t] for k in (dim - 1, dim, dim + 1)}
    n_k = len(by_dim[dim])
    rank_k = rank_gf2(_boundary_matrix(by_dim[dim - 1], by_dim[dim])) if dim > 0 and n_k else 0
    rank_up = rank_gf2(_boundary_matrix(by_dim[dim], by_dim[dim + 1])) if by_dim[dim + 1] else 0
    return n_k - rank_k - rank_up


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def _finite_or_none(x: float):
    return x if math.isfinite(x) else None


def diagram_to_dict(d: PersistenceDiagram) -> dict:
    return {
        "dimension": d.dimension,
        "cap": _finite_or_none(d.cap),
        "points": [[b, _finite_or_none(de)] for b, de in d.points],
    }


def diagram_from_dict(data: dict) -> PersistenceDiagram:
    try:
        cap = math.inf if data.get("cap") is None else float(data["cap"])
        points = tuple(
            (float(b), math.inf if de is None else float(de)) for b, de in data["points"]
        )
        return PersistenceDiagram(int(data["dimension"]), points, cap)
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"invalid diagram document: {e}") from None


def diagrams_to_json(diagrams: Sequence[PersistenceDiagram], config: Optional[dict] = None) -> str:
    payload = {}
    if config is not None:
        payload["config"] = config
    payload["diagrams"] = [diagram_to_dict(d) for d in diagrams]
    return json.dumps(payload, indent=2) + "\n"


def diagrams_from_json(text: str) -> List[PersistenceDiagram]:
    """Accepts a single diagram object, a list of them, or {"diagrams": [...]}."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", line=e.lineno) from None
    if isinstance(data, dict) and "diagrams" in data:
        data = data["diagrams"]
    if isinstance(data, dict):
        data = [data]
    if not isinstance(data, list):
        raise ParseError("expected a diagram or a list of diagrams")
    return [diagram_from_dict(item) for item in data]


def barcodes_to_csv(bars: Sequence[Barcode], header: Sequence[str] = ()) -> str:
    buf = io.StringIO()
    for line in header:
        buf.write(line + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["dim", "birth", "death", "essential"])
    for b in bars:
        writer.writerow([b.dimension, f"{b.birth:.6g}", f"{b.death:.6g}", str(b.essential).lower()])
    return buf.getvalue()
