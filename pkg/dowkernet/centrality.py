"""
Node centralities for directed weighted networks.

Quasi-centrality scores a node by how much deleting it stretches the
dimension-0 barcode of the Dowker filtration:

    C(x) = total persistence of P0(f(gamma(G), x))
         - total persistence of P0(gamma(G))
         + mu(x)

The classical measures (degree, Katz, PageRank, HITS) are provided for
comparison. Their adjacency convention is *incoming*: A[i, j] collects what j
sends into i, so A = W.T for a weight matrix W[source, target].
"""
import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
from pydantic import BaseModel, ConfigDict

from dowkernet.config import settings
from dowkernet.errors import ConvergenceError, DomainError
from dowkernet.logger import dowker_logger
from dowkernet.network import (
    DirectedNetwork,
    NetworkKind,
    default_cap,
    delete_node,
    effective_distance,
    flow_fractions,
    min_incident_distance,
)
from dowkernet.persistence import h0_deaths_unionfind


class Measure(str, Enum):
    QUASI = "quasi"
    IN_DEGREE = "in_degree"
    OUT_DEGREE = "out_degree"
    KATZ = "katz"
    PAGERANK = "pagerank"
    PAGERANK_REVERSED = "pagerank_reversed"
    HITS_HUB = "hits_hub"
    HITS_AUTHORITY = "hits_authority"


class CentralityReport(BaseModel):
    """Scores for every node under one measure, with the parameters that produced them."""
    model_config = ConfigDict(frozen=True)

    measure: Measure
    scores: Dict[str, float]
    params: Dict[str, Any] = {}

    def ranking(self) -> List[str]:
        """Labels by descending score; ties keep node order."""
        order = {label: k for k, label in enumerate(self.scores)}
        return sorted(self.scores, key=lambda label: (-self.scores[label], order[label]))

    def to_csv(self, header: Sequence[str] = ()) -> str:
        buf = io.StringIO()
        for line in header:
            buf.write(line + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["node", "score"])
        for label, score in self.scores.items():
            writer.writerow([label, f"{score:.6g}"])
        return buf.getvalue()


def _report(measure: Measure, g: DirectedNetwork, values, **params) -> CentralityReport:
    return CentralityReport(
        measure=measure,
        scores={label: float(v) for label, v in zip(g.nodes, values)},
        params=params,
    )


# ---------------------------------------------------------------------------
# Quasi-centrality
# ---------------------------------------------------------------------------

def quasi_centrality(g: DirectedNetwork, epsilon: Optional[float] = None,
                     normalization: Optional[str] = None, cap: Optional[float] = None,
                     threads: int = 1) -> CentralityReport:
    """Quasi-centrality of every node.

    Flow networks go through ``effective_distance`` first; dissimilarity
    networks are used as given. The cap defaults to the sentinel.
    """
    if g.n < 2:
        raise DomainError("quasi-centrality needs at least 2 nodes")
    if g.kind is NetworkKind.FLOW:
        gamma = effective_distance(g, epsilon, normalization)
    else:
        gamma = g
    if cap is None:
        cap = default_cap(gamma)

    baseline = [-d for d in h0_deaths_unionfind(gamma, cap) if math.isfinite(d)]

    def score(i: int) -> float:
        deaths = h0_deaths_unionfind(delete_node(gamma, i), cap)
        terms = [d for d in deaths if math.isfinite(d)]
        # one exactly-rounded sum, so identical bars cancel to exactly 0
        return math.fsum(terms + baseline + [min_incident_distance(gamma, i)])

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        values = list(pool.map(score, range(gamma.n)))

    return _report(
        Measure.QUASI, gamma, values,
        epsilon=settings.epsilon if epsilon is None else epsilon,
        normalization=normalization or settings.normalization,
        sentinel=gamma.sentinel,
        cap=cap if math.isfinite(cap) else "inf",
        input_kind=g.kind.value,
    )


# ---------------------------------------------------------------------------
# Classical centralities
# ---------------------------------------------------------------------------

def degree_centrality(g: DirectedNetwork) -> Tuple[CentralityReport, CentralityReport]:
    """(in-degree, out-degree) counts of real edges."""
    mask = g.real_edges()
    return (
        _report(Measure.IN_DEGREE, g, mask.sum(axis=0)),
        _report(Measure.OUT_DEGREE, g, mask.sum(axis=1)),
    )


def _spectral_radius(a: np.ndarray) -> float:
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(a))))


def katz(g: DirectedNetwork, alpha: Optional[float] = None, beta: Optional[float] = None,
         binary: bool = True) -> CentralityReport:
    """Solve x = alpha * A x + beta with incoming adjacency A; L2-normalized."""
    alpha = settings.katz_alpha if alpha is None else alpha
    beta = settings.katz_beta if beta is None else beta
    if beta <= 0:
        raise DomainError("Katz beta must be positive")
    if g.n == 0:
        raise DomainError("network has no nodes")

    w = flow_fractions(g)
    a = (w > 0).astype(float).T if binary else w.T
    rho = _spectral_radius(a)
    if rho > 1e-12 and alpha * rho >= 1.0:
        raise ConvergenceError(
            f"Katz alpha {alpha} is not below 1/spectral radius {1.0 / rho:.6g}",
            residual=alpha * rho,
        )
    x = scipy.linalg.solve(np.eye(g.n) - alpha * a, np.full(g.n, beta))
    x = x / np.linalg.norm(x)
    return _report(Measure.KATZ, g, x, alpha=alpha, beta=beta, binary=binary,
                   normalization="l2")


def pagerank(g: DirectedNetwork, alpha: Optional[float] = None, beta: Optional[float] = None,
             reversed: bool = False, tol: Optional[float] = None,
             max_iter: Optional[int] = None) -> CentralityReport:
    """Power iteration on x = alpha * sum_j A[i, j] x_j / k_j_out + beta; L1-normalized.

    Dangling nodes spread their score uniformly. ``reversed`` runs on the
    edge-reversed network.
    """
    alpha = settings.pagerank_alpha if alpha is None else alpha
    tol = settings.tolerance if tol is None else tol
    max_iter = settings.max_iterations if max_iter is None else max_iter
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"PageRank alpha must lie in (0, 1), got {alpha}")
    n = g.n
    if n == 0:
        raise DomainError("network has no nodes")
    beta = (1.0 - alpha) / n if beta is None else beta

    w = flow_fractions(g)
    if reversed:
        w = w.T
    out = w.sum(axis=1)
    transition = np.full((n, n), 1.0 / n)
    live = out > 0
    transition[:, live] = (w[live] / out[live, None]).T

    x = np.full(n, 1.0 / n)
    residual = math.inf
    for iteration in range(1, max_iter + 1):
        x_new = alpha * (transition @ x) + beta
        residual = float(np.abs(x_new - x).sum())
        x = x_new
        if residual < tol:
            break
    else:
        measure = "PageRank (reversed)" if reversed else "PageRank"
        dowker_logger.log_convergence_failure(measure, max_iter, residual)
        raise ConvergenceError(f"{measure} did not converge", residual=residual, iterations=max_iter)

    x = x / x.sum()
    measure = Measure.PAGERANK_REVERSED if reversed else Measure.PAGERANK
    return _report(measure, g, x, alpha=alpha, beta=beta, tolerance=tol,
                   iterations=iteration, normalization="l1")


def _normalize(v: np.ndarray, norm: str) -> np.ndarray:
    total = v.sum() if norm == "l1" else np.linalg.norm(v)
    return v / total if total > 0 else v


def hits(g: DirectedNetwork, tol: Optional[float] = None, max_iter: Optional[int] = None,
         normalization: str = "l2") -> Tuple[CentralityReport, CentralityReport]:
    """(hubs, authorities) by alternating power iteration on the weighted adjacency.

    An authority sums the hubs pointing at it; a hub sums the authorities it
    points at. Vectors are L2-normalized every half-step; ``normalization``
    picks the norm of the reported scores ("l2" or "l1").
    """
    tol = settings.tolerance if tol is None else tol
    max_iter = settings.max_iterations if max_iter is None else max_iter
    if normalization not in ("l1", "l2"):
        raise DomainError(f"unknown HITS normalization '{normalization}'")
    w = flow_fractions(g)
    if not w.any():
        raise DomainError("HITS needs at least one edge")

    hubs = np.ones(g.n) / math.sqrt(g.n)
    residual = math.inf
    for iteration in range(1, max_iter + 1):
        auths = _normalize(w.T @ hubs, "l2")
        new_hubs = _normalize(w @ auths, "l2")
        residual = float(np.abs(new_hubs - hubs).sum())
        hubs = new_hubs
        if residual < tol:
            break
    else:
        dowker_logger.log_convergence_failure("HITS", max_iter, residual)
        raise ConvergenceError("HITS did not converge", residual=residual, iterations=max_iter)

    auths = _normalize(w.T @ hubs, "l2")
    params = dict(tolerance=tol, iterations=iteration, normalization=normalization)
    return (
        _report(Measure.HITS_HUB, g, _normalize(hubs, normalization), **params),
        _report(Measure.HITS_AUTHORITY, g, _normalize(auths, normalization), **params),
    )


# ---------------------------------------------------------------------------
# Comparison table
# ---------------------------------------------------------------------------

def compare(g: DirectedNetwork, epsilon: Optional[float] = None,
            normalization: Optional[str] = None, katz_alpha: Optional[float] = None,
            katz_beta: Optional[float] = None, pagerank_alpha: Optional[float] = None,
            threads: int = 1, hits_normalization: str = "l2",
            cap: Optional[float] = None) -> List[CentralityReport]:
    """Every measure, in Measure order."""
    quasi = quasi_centrality(g, epsilon, normalization, cap=cap, threads=threads)
    in_degree, out_degree = degree_centrality(g)
    hubs, authorities = hits(g, normalization=hits_normalization)
    return [
        quasi,
        in_degree,
        out_degree,
        katz(g, alpha=katz_alpha, beta=katz_beta),
        pagerank(g, alpha=pagerank_alpha),
        pagerank(g, alpha=pagerank_alpha, reversed=True),
        hubs,
        authorities,
    ]


def reports_to_wide_csv(reports: Sequence[CentralityReport], header: Sequence[str] = ()) -> str:
    """One row per node, one column per measure."""
    if not reports:
        return ""
    buf = io.StringIO()
    for line in header:
        buf.write(line + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["node"] + [r.measure.value for r in reports])
    for label in reports[0].scores:
        writer.writerow([label] + [f"{r.scores[label]:.6g}" for r in reports])
    return buf.getvalue()
