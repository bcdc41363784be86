"""Dense baseline learners that optimize over all edge weights at once.

Both problems are parameterized by the upper-triangle edge-weight vector,
scanned row-major: (0,1), (0,2), ..., (n-2, n-1).

* :func:`dong_learn` minimizes signal smoothness plus a squared-Frobenius
  penalty over valid Laplacians with trace n. Under the Laplacian
  structure constraints that feasible set is exactly the scaled simplex
  {w >= 0, sum(w) = n / 2}, so the solve reuses the simplex projection.
* :func:`kalofolias_learn` minimizes the weighted-distance cost with a
  log-degree barrier and a squared-Frobenius penalty over nonnegative
  symmetric hollow matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .graph_core import Laplacian, WeightedAdjacency, build_laplacian
from .simplex_opt import SolverConfig
from .synth import DistanceMatrix, SignalMatrix, pairwise_distances


@dataclass(frozen=True, eq=False)
class EdgeWeightVector:
    """Upper-triangle edge weights of an n-node graph, row-major order."""

    w: np.ndarray
    n: int

    def __post_init__(self):
        w = np.asarray(self.w, dtype=np.float64)
        if w.ndim != 1 or w.size != self.n * (self.n - 1) // 2:
            raise ValueError(
                f"expected {self.n * (self.n - 1) // 2} edge weights for n={self.n}"
            )
        if not np.all(np.isfinite(w)):
            raise ValueError("edge weights must be finite")
        if np.any(w < 0.0):
            raise ValueError("edge weights must be nonnegative")
        w = w.copy()
        w.setflags(write=False)
        object.__setattr__(self, "w", w)

    def to_adjacency(self) -> WeightedAdjacency:
        mat = np.zeros((self.n, self.n))
        iu, ju = edge_pairs(self.n)
        mat[iu, ju] = self.w
        return WeightedAdjacency(mat)


@dataclass(frozen=True, eq=False)
class FitReport:
    """Solver diagnostics attached to a baseline fit."""

    weights: EdgeWeightVector
    objective: float
    iterations: int
    converged: bool
    kkt_residual: float


def edge_pairs(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Endpoint index arrays of the row-major upper-triangle edge order."""
    iu, ju = np.triu_indices(n, 1)
    return iu.astype(np.int64), ju.astype(np.int64)


def dong_learn(signals: SignalMatrix, alpha: float,
               cfg: SolverConfig | None = None) -> tuple[Laplacian, FitReport]:
    """Learn a trace-n Laplacian from smooth signals.

    Minimizes Tr(X^T L X) + alpha * ||L||_F^2 over symmetric Laplacians
    with nonpositive off-diagonals, zero row sums, and trace n. Returns the
    learned Laplacian and a :class:`FitReport`; on non-convergence the best
    feasible iterate is returned with ``converged=False``.
    """
    n = signals.n
    if n < 2:
        raise ValueError("need at least two nodes")
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    cfg = cfg or SolverConfig()
    ei, ej = edge_pairs(n)
    z = pairwise_distances(signals).entries[ei, ej]
    total = n / 2.0
    w0 = np.full(z.size, total / z.size)
    w, value, iters, converged, kkt = kernels.solve_edge_qp(
        np.ascontiguousarray(z), ei, ej, n, total, float(alpha), w0,
        cfg.max_iters, cfg.grad_tol, cfg.step_init, cfg.step_shrink,
        cfg.sufficient_decrease)
    edge = EdgeWeightVector(w, n)
    report = FitReport(edge, float(value), int(iters), bool(converged), float(kkt))
    return build_laplacian(edge.to_adjacency()), report


def kalofolias_learn(dist: DistanceMatrix, alpha: float, beta: float,
                     cfg: SolverConfig | None = None) -> tuple[WeightedAdjacency, FitReport]:
    """Learn a weighted adjacency matrix from pairwise signal distances.

    Minimizes ||W o Z||_{1,1} - alpha * 1' log(W 1) + (beta / 2) ||W||_F^2
    over symmetric hollow nonnegative W. The log barrier keeps every degree
    strictly positive.
    """
    n = dist.n
    if n < 2:
        raise ValueError("need at least two nodes")
    if alpha <= 0.0 or beta <= 0.0:
        raise ValueError("alpha and beta must be positive")
    cfg = cfg or SolverConfig()
    ei, ej = edge_pairs(n)
    z = dist.entries[ei, ej]
    # uniform start at the scale where a uniform graph is stationary
    zbar = float(z.mean())
    scale = (-zbar + np.sqrt(zbar * zbar + 4.0 * alpha * beta / (n - 1))) / (2.0 * beta)
    w0 = np.full(z.size, scale)
    w, value, iters, converged, kkt = kernels.solve_edge_log(
        np.ascontiguousarray(2.0 * z), ei, ej, n, float(alpha), float(beta), w0,
        cfg.max_iters, cfg.grad_tol, cfg.step_init, cfg.step_shrink,
        cfg.sufficient_decrease)
    edge = EdgeWeightVector(w, n)
    adjacency = edge.to_adjacency()
    if np.min(adjacency.degrees()) <= 0.0:
        raise RuntimeError("log-degree solve left a node with zero degree")
    report = FitReport(edge, float(value), int(iters), bool(converged), float(kkt))
    return adjacency, report
