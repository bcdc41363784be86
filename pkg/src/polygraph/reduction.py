"""Reduction of the full matrix-valued objectives to p-dimensional data.

Substituting the polytope parameterization into the dense objectives
collapses them to small convex programs over the simplex:

* Laplacian flavor: a quadratic ``theta @ u + alpha * theta @ Phi @ theta``
  where ``u`` collects per-basis signal smoothness and ``Phi`` is the Gram
  matrix of the basis (plus the basis traces for the trace constraint).
* Adjacency flavor: ``theta @ v - alpha * sum(log(D @ theta))
  + (beta / 2) * theta @ Psi @ theta`` where ``v`` collects weighted
  distance costs and the columns of ``D`` are per-basis degree vectors.
  The elementwise-1,1 norm collapses to the linear term because every
  basis matrix and the distance matrix are entrywise nonnegative.

Evaluation helpers accept any real vector (not only simplex members), so
finite-difference checks can probe off-simplex points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph_core import ADJACENCY, LAPLACIAN, PolytopeBasis
from .synth import DistanceMatrix, SignalMatrix

_GRAM_SYM_TOL = 1e-12
_PSD_REL_TOL = 1e-9


class DomainError(ValueError):
    """Evaluation requested outside the objective's domain."""


def _check_gram(gram, label):
    g = np.asarray(gram, dtype=np.float64)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError(f"{label} must be square")
    if np.max(np.abs(g - g.T), initial=0.0) > _GRAM_SYM_TOL:
        raise ValueError(f"{label} must be symmetric")
    scale = float(np.sqrt(np.sum(g * g)))
    if float(np.linalg.eigvalsh(g)[0]) < -_PSD_REL_TOL * max(scale, 1e-300):
        raise ValueError(f"{label} must be positive semidefinite")
    return g


@dataclass(frozen=True, eq=False)
class ReducedQP:
    """Data of the reduced trace-constrained quadratic program.

    ``smoothness[i]`` is the signal smoothness on basis element i,
    ``gram`` the basis Gram matrix, ``traces`` the basis traces (all
    positive), ``alpha`` the regularization weight, ``n`` the node count
    (also the trace target).
    """

    smoothness: np.ndarray
    gram: np.ndarray
    traces: np.ndarray
    alpha: float
    n: int

    def __post_init__(self):
        u = np.asarray(self.smoothness, dtype=np.float64)
        ell = np.asarray(self.traces, dtype=np.float64)
        g = _check_gram(self.gram, "gram matrix")
        if u.ndim != 1 or u.size != g.shape[0] or ell.shape != u.shape:
            raise ValueError("inconsistent reduced-QP dimensions")
        if not np.all(np.isfinite(u)):
            raise ValueError("smoothness terms must be finite")
        if np.any(ell <= 0.0):
            raise ValueError("basis traces must be positive")
        if self.alpha <= 0.0:
            raise ValueError("alpha must be positive")
        if self.n < 1:
            raise ValueError("node count must be positive")
        object.__setattr__(self, "smoothness", u)
        object.__setattr__(self, "gram", g)
        object.__setattr__(self, "traces", ell)

    @property
    def p(self) -> int:
        return self.smoothness.size


@dataclass(frozen=True, eq=False)
class ReducedLog:
    """Data of the reduced log-degree program.

    ``distance_cost[i]`` is the weighted distance cost of basis element i,
    ``degrees`` stacks per-basis degree vectors as columns (n x p),
    ``gram`` the basis Gram matrix.
    """

    distance_cost: np.ndarray
    degrees: np.ndarray
    gram: np.ndarray
    alpha: float
    beta: float

    def __post_init__(self):
        v = np.asarray(self.distance_cost, dtype=np.float64)
        d = np.asarray(self.degrees, dtype=np.float64)
        g = _check_gram(self.gram, "gram matrix")
        if v.ndim != 1 or v.size != g.shape[0]:
            raise ValueError("inconsistent reduced-log dimensions")
        if d.ndim != 2 or d.shape[1] != v.size:
            raise ValueError("degree matrix must have one column per basis element")
        if np.any(v < 0.0) or not np.all(np.isfinite(v)):
            raise ValueError("distance costs must be finite and nonnegative")
        if np.any(d < 0.0) or not np.all(np.isfinite(d)):
            raise ValueError("degrees must be finite and nonnegative")
        if self.alpha <= 0.0 or self.beta <= 0.0:
            raise ValueError("alpha and beta must be positive")
        object.__setattr__(self, "distance_cost", v)
        object.__setattr__(self, "degrees", d)
        object.__setattr__(self, "gram", g)

    @property
    def p(self) -> int:
        return self.distance_cost.size

    @property
    def n(self) -> int:
        return self.degrees.shape[0]


def _basis_gram(arrays):
    p = len(arrays)
    gram = np.empty((p, p))
    for i in range(p):
        for j in range(i, p):
            gram[i, j] = gram[j, i] = float(np.sum(arrays[i] * arrays[j]))
    return gram


def reduce_laplacian_model(basis: PolytopeBasis, signals: SignalMatrix,
                           alpha: float) -> ReducedQP:
    """Precompute the reduced QP data from a Laplacian basis and signals."""
    if basis.flavor != LAPLACIAN:
        raise ValueError("reduce_laplacian_model needs a laplacian-flavor basis")
    if basis.n != signals.n:
        raise ValueError(
            f"basis is on {basis.n} nodes but signals are on {signals.n}"
        )
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    arrays = basis.arrays()
    x = signals.data
    # Tr(X^T L X) via the n-by-m intermediate L @ X; cheaper than X^T L X
    smoothness = np.array([float(np.sum((lap @ x) * x)) for lap in arrays])
    traces = np.array([float(np.trace(lap)) for lap in arrays])
    return ReducedQP(smoothness, _basis_gram(arrays), traces, float(alpha), basis.n)


def reduce_adjacency_model(basis: PolytopeBasis, dist: DistanceMatrix,
                           alpha: float, beta: float) -> ReducedLog:
    """Precompute the reduced log-degree data from an adjacency basis."""
    if basis.flavor != ADJACENCY:
        raise ValueError("reduce_adjacency_model needs an adjacency-flavor basis")
    if basis.n != dist.n:
        raise ValueError(
            f"basis is on {basis.n} nodes but distances are on {dist.n}"
        )
    if alpha <= 0.0 or beta <= 0.0:
        raise ValueError("alpha and beta must be positive")
    arrays = basis.arrays()
    z = dist.entries
    cost = np.array([float(np.sum(w * z)) for w in arrays])
    degrees = np.column_stack([w.sum(axis=1) for w in arrays])
    dead = np.nonzero(degrees.max(axis=1) <= 0.0)[0]
    if dead.size:
        raise DomainError(
            f"node {int(dead[0])} has zero degree in every basis matrix; "
            "the log-degree objective is undefined on the whole simplex"
        )
    return ReducedLog(cost, degrees, _basis_gram(arrays), float(alpha), float(beta))


def eval_qp(model: ReducedQP, theta) -> tuple[float, np.ndarray]:
    """Value and gradient of the reduced quadratic objective at ``theta``."""
    th = np.asarray(theta, dtype=np.float64)
    gth = model.gram @ th
    value = float(th @ model.smoothness + model.alpha * (th @ gth))
    grad = model.smoothness + 2.0 * model.alpha * gth
    return value, grad


def eval_log(model: ReducedLog, theta) -> tuple[float, np.ndarray]:
    """Value and gradient of the reduced log-degree objective at ``theta``.

    Raises :class:`DomainError` when any combined degree is nonpositive.
    """
    th = np.asarray(theta, dtype=np.float64)
    d = model.degrees @ th
    if np.min(d) <= 0.0:
        raise DomainError("combined degree vector has a nonpositive entry")
    gth = model.gram @ th
    value = float(th @ model.distance_cost - model.alpha * np.log(d).sum()
                  + 0.5 * model.beta * (th @ gth))
    grad = (model.distance_cost - model.alpha * (model.degrees.T @ (1.0 / d))
            + model.beta * gth)
    return value, grad
