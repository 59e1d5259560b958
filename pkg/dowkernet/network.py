"""
Directed network data model for Dowkernet.

A network is an ordered tuple of node labels plus an n x n weight matrix where
``weights[i, j]`` is the weight of the edge ``nodes[i] -> nodes[j]``. Two kinds
exist: raw *flow* networks (trade volume, 0 = no edge) and *dissimilarity*
networks (distances, strictly positive off the diagonal, absent relations
carried by a sentinel). ``effective_distance`` maps the first kind to the second.

All objects are immutable; every transform returns a new network.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from dowkernet.config import settings
from dowkernet.errors import DomainError, EmptyNetworkError, NodeLookupError
from dowkernet.logger import dowker_logger


class NetworkKind(str, Enum):
    FLOW = "flow"
    DISSIMILARITY = "dissimilarity"


NodeRef = Union[str, int]


@dataclass(frozen=True, eq=False)
class DirectedNetwork:
    """Node-labeled directed weighted graph."""

    nodes: Tuple[str, ...]
    weights: np.ndarray
    kind: NetworkKind = NetworkKind.FLOW
    sentinel: Optional[float] = None

    def __post_init__(self):
        nodes = tuple(str(x) for x in self.nodes)
        weights = np.array(self.weights, dtype=float, copy=True)
        if weights.ndim != 2 or weights.shape != (len(nodes), len(nodes)):
            raise DomainError(
                f"weight matrix shape {weights.shape} does not match {len(nodes)} nodes"
            )
        if len(set(nodes)) != len(nodes):
            raise DomainError("node labels must be unique")
        if np.isnan(weights).any():
            raise DomainError("weights must not contain NaN")
        if (weights < 0).any():
            raise DomainError("weights must be nonnegative")
        if np.any(np.diag(weights) != 0):
            raise DomainError("diagonal weights must be 0 (no self-loops)")
        kind = NetworkKind(self.kind)
        if kind is NetworkKind.DISSIMILARITY:
            off = ~np.eye(len(nodes), dtype=bool)
            if (weights[off] <= 0).any():
                raise DomainError("dissimilarity weights must be positive off the diagonal")
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "kind", kind)
        if self.sentinel is not None:
            object.__setattr__(self, "sentinel", float(self.sentinel))

    # ---- Lookup ----

    @property
    def n(self) -> int:
        return len(self.nodes)

    def index(self, node: NodeRef) -> int:
        """Position of a node given its label (or an in-range index)."""
        if isinstance(node, (int, np.integer)) and not isinstance(node, bool):
            if 0 <= node < self.n:
                return int(node)
            raise NodeLookupError(f"node index {node} out of range for {self.n} nodes")
        try:
            return self.nodes.index(str(node))
        except ValueError:
            raise NodeLookupError(f"unknown node '{node}'") from None

    def weight(self, source: NodeRef, target: NodeRef) -> float:
        return float(self.weights[self.index(source), self.index(target)])

    def edge_count(self) -> int:
        """Number of real (non-absent) directed edges."""
        return int(self.real_edges().sum())

    def real_edges(self) -> np.ndarray:
        """Boolean mask of real edges: positive flow, or distance below the sentinel."""
        off = ~np.eye(self.n, dtype=bool)
        if self.kind is NetworkKind.FLOW:
            return (self.weights > 0) & off
        if self.sentinel is None:
            return off
        return (self.weights < self.sentinel) & off

    # ---- Derived networks ----

    def transpose(self) -> "DirectedNetwork":
        """Same network with every edge reversed."""
        return self._derive(self.nodes, self.weights.T)

    def _derive(self, nodes: Sequence[str], weights: np.ndarray) -> "DirectedNetwork":
        return type(self)(tuple(nodes), weights, self.kind, self.sentinel)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DirectedNetwork):
            return NotImplemented
        return (
            self.nodes == other.nodes
            and self.kind is other.kind
            and self.sentinel == other.sentinel
            and np.array_equal(self.weights, other.weights)
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, kind={self.kind.value}, sentinel={self.sentinel})"


class EffectiveDistanceNetwork(DirectedNetwork):
    """Dissimilarity network produced by ``effective_distance``; absent edges carry the sentinel."""

    def __init__(self, nodes, weights, kind=NetworkKind.DISSIMILARITY, sentinel=None):
        if sentinel is None:
            raise DomainError("an effective-distance network needs a sentinel")
        super().__init__(nodes, weights, NetworkKind.DISSIMILARITY, sentinel)

    def __post_init__(self):
        super().__post_init__()
        if self.sentinel <= 0:
            raise DomainError("sentinel must be positive")
        if self.n and self.weights.max() > self.sentinel:
            raise DomainError("sentinel must be at least every real distance")


# ---------------------------------------------------------------------------
# Transforms
# ---------------------------------------------------------------------------

def sentinel_for(epsilon: float) -> float:
    """Distance imputed for absent edges: 1 - ln(epsilon)."""
    if not 0.0 < epsilon < 1.0:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon}")
    return 1.0 - float(np.log(epsilon))


def effective_distance(g: DirectedNetwork, epsilon: Optional[float] = None,
                       normalization: Optional[str] = None) -> EffectiveDistanceNetwork:
    """Map a flow network to effective distances ``1 - ln(flow fraction)``.

    With ``normalization="out"`` (default) the fraction is taken over the
    source's total outgoing weight; ``"in"`` divides by the target's total
    incoming weight instead. Absent edges get the sentinel ``1 - ln(epsilon)``.
    """
    if g.kind is not NetworkKind.FLOW:
        raise DomainError("effective distance expects a flow network")
    epsilon = settings.epsilon if epsilon is None else epsilon
    normalization = normalization or settings.normalization
    sentinel = sentinel_for(epsilon)

    w = np.array(g.weights, dtype=float)
    if normalization == "out":
        totals = w.sum(axis=1, keepdims=True)
    elif normalization == "in":
        totals = w.sum(axis=0, keepdims=True)
    else:
        raise DomainError(f"unknown normalization '{normalization}'")

    m = np.full_like(w, sentinel)
    present = w > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        fractions = np.where(present, w / np.where(totals > 0, totals, 1.0), 1.0)
    m[present] = 1.0 - np.log(fractions[present])
    np.fill_diagonal(m, 0.0)
    # A tiny fraction below epsilon would land past the sentinel
    np.minimum(m, sentinel, out=m)

    dowker_logger.log_transform(g.n, sentinel, normalization)
    return EffectiveDistanceNetwork(g.nodes, m, sentinel=sentinel)


def flow_fractions(g: DirectedNetwork) -> np.ndarray:
    """Weighted adjacency for the classical centralities.

    Flow networks use their weights as given. Dissimilarity networks recover
    the flow fraction ``exp(1 - m)`` on real edges and 0 elsewhere.
    """
    if g.kind is NetworkKind.FLOW:
        return np.array(g.weights, dtype=float)
    return np.where(g.real_edges(), np.exp(1.0 - g.weights), 0.0)


def delete_node(g: DirectedNetwork, x: NodeRef) -> DirectedNetwork:
    """Sub-network induced by deleting ``x`` and every edge incident to it."""
    i = g.index(x)
    if g.n == 1:
        raise EmptyNetworkError("cannot delete the only node of a network")
    keep = [k for k in range(g.n) if k != i]
    return g._derive([g.nodes[k] for k in keep], g.weights[np.ix_(keep, keep)])


def delete_nodes(g: DirectedNetwork, xs: Iterable[NodeRef]) -> DirectedNetwork:
    for x in xs:
        g = delete_node(g, x)
    return g


def min_incident_distance(g: DirectedNetwork, x: NodeRef) -> float:
    """mu(x): smallest distance from or to ``x`` over every other node."""
    if g.kind is not NetworkKind.DISSIMILARITY:
        raise DomainError("min_incident_distance expects a dissimilarity network")
    i = g.index(x)
    if g.n < 2:
        raise EmptyNetworkError("min incident distance is undefined on a single node")
    mask = np.arange(g.n) != i
    return float(min(g.weights[i, mask].min(), g.weights[mask, i].min()))


def default_cap(g: DirectedNetwork) -> float:
    """Death of essential classes when no cap is given: the sentinel, else the largest distance."""
    if g.sentinel is not None:
        return float(g.sentinel)
    return float(np.max(g.weights)) if g.n else 0.0
