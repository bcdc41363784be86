"""Graph data types, Laplacian construction, and polytope combination.

Matrices are dense float64 arrays; the design point is a few hundred nodes
at most. All types are immutable after construction (arrays are marked
read-only), so values can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-9

_SYM_TOL = 1e-12
_OFFDIAG_TOL = 1e-12
_ROWSUM_TOL = 1e-9
_DIAG_TOL = 1e-12
_SIMPLEX_SUM_TOL = 1e-12

LAPLACIAN = "laplacian"
ADJACENCY = "adjacency"


def _freeze(a):
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class WeightedAdjacency:
    """Symmetric nonnegative edge-weight matrix with zero diagonal.

    The strict upper triangle of the input is authoritative: the stored
    matrix is mirrored from it, so symmetry and the zero diagonal hold
    exactly rather than up to rounding. Entries must be finite and
    nonnegative.
    """

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError("adjacency weights must form a square matrix")
        if not np.all(np.isfinite(w)):
            raise ValueError("adjacency weights must be finite")
        upper = np.triu(w, 1)
        if np.any(upper < 0.0):
            raise ValueError("edge weights must be nonnegative")
        object.__setattr__(self, "weights", _freeze(upper + upper.T))

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    def degrees(self) -> np.ndarray:
        return self.weights.sum(axis=1)


@dataclass(frozen=True, eq=False)
class Laplacian:
    """Combinatorial graph Laplacian: diag(W 1) - W for some valid W.

    Validated invariants (absolute tolerances): symmetry within 1e-12,
    off-diagonal entries <= 1e-12, row sums within 1e-9 of zero, diagonal
    entries >= -1e-12.
    """

    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("Laplacian must be a square matrix")
        if not np.all(np.isfinite(m)):
            raise ValueError("Laplacian entries must be finite")
        if np.max(np.abs(m - m.T), initial=0.0) > _SYM_TOL:
            raise ValueError("Laplacian is not symmetric within 1e-12")
        off = m - np.diag(np.diag(m))
        if np.max(off, initial=0.0) > _OFFDIAG_TOL:
            raise ValueError("Laplacian has a positive off-diagonal entry")
        if np.max(np.abs(m.sum(axis=1)), initial=0.0) > _ROWSUM_TOL:
            raise ValueError("Laplacian row sums exceed 1e-9")
        if m.shape[0] and np.min(np.diag(m)) < -_DIAG_TOL:
            raise ValueError("Laplacian has a negative diagonal entry")
        object.__setattr__(self, "entries", _freeze(m.copy()))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.entries))


@dataclass(frozen=True, eq=False)
class PolytopeBasis:
    """Ordered vertex matrices spanning a polytope of graphs.

    ``flavor`` is ``"laplacian"`` or ``"adjacency"``; every element must be
    the matching type and all must share the node count.
    """

    flavor: str
    matrices: tuple

    def __post_init__(self):
        if self.flavor not in (LAPLACIAN, ADJACENCY):
            raise ValueError(f"unknown basis flavor {self.flavor!r}")
        mats = tuple(self.matrices)
        if len(mats) < 1:
            raise ValueError("a polytope basis needs at least one matrix")
        expected = Laplacian if self.flavor == LAPLACIAN else WeightedAdjacency
        for m in mats:
            if not isinstance(m, expected):
                raise ValueError(
                    f"{self.flavor} basis holds a {type(m).__name__}"
                )
        n = mats[0].n
        if any(m.n != n for m in mats):
            raise ValueError("all basis matrices must share the node count")
        object.__setattr__(self, "matrices", mats)

    @property
    def p(self) -> int:
        return len(self.matrices)

    @property
    def n(self) -> int:
        return self.matrices[0].n

    def arrays(self) -> tuple:
        """Raw matrices, in basis order."""
        if self.flavor == LAPLACIAN:
            return tuple(m.entries for m in self.matrices)
        return tuple(m.weights for m in self.matrices)


@dataclass(frozen=True, eq=False)
class SimplexPoint:
    """Convex weights: nonnegative entries summing to one (within 1e-12)."""

    theta: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.theta, dtype=np.float64)
        if t.ndim != 1 or t.size < 1:
            raise ValueError("simplex point must be a nonempty vector")
        if not np.all(np.isfinite(t)):
            raise ValueError("simplex point entries must be finite")
        if np.any(t < 0.0):
            raise ValueError("simplex point entries must be nonnegative")
        if abs(float(t.sum()) - 1.0) > _SIMPLEX_SUM_TOL:
            raise ValueError("simplex point entries must sum to one")
        object.__setattr__(self, "theta", _freeze(t.copy()))

    @property
    def p(self) -> int:
        return self.theta.size

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.theta
        return self.theta.astype(dtype)

    @classmethod
    def barycenter(cls, p: int) -> "SimplexPoint":
        return cls(np.full(p, 1.0 / p))


def build_laplacian(adjacency: WeightedAdjacency) -> Laplacian:
    """diag(W 1) - W. Off-diagonal equals -W entrywise, exactly."""
    w = adjacency.weights
    return Laplacian(np.diag(w.sum(axis=1)) - w)


def combine(basis: PolytopeBasis, point: SimplexPoint):
    """Convex combination of the basis matrices at the given weights.

    Returns a :class:`Laplacian` or :class:`WeightedAdjacency` per the basis
    flavor; the result is validated against that flavor's invariants.
    """
    theta = np.asarray(point, dtype=np.float64)
    if theta.size != basis.p:
        raise ValueError(
            f"weight vector has {theta.size} entries for a basis of size {basis.p}"
        )
    arrays = basis.arrays()
    acc = np.zeros_like(arrays[0])
    for coef, mat in zip(theta, arrays):
        acc += coef * mat
    if basis.flavor == LAPLACIAN:
        return Laplacian(acc)
    return WeightedAdjacency(acc)


def validate_laplacian(matrix, tol: float = DEFAULT_TOL) -> bool:
    """Check the Laplacian predicate on a raw square matrix.

    True iff the matrix is symmetric within ``tol``, has off-diagonal
    entries <= ``tol``, and row sums within ``tol`` of zero.
    """
    m = np.asarray(matrix, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix")
    if not np.all(np.isfinite(m)):
        return False
    if np.max(np.abs(m - m.T), initial=0.0) > tol:
        return False
    off = m - np.diag(np.diag(m))
    if np.max(off, initial=0.0) > tol:
        return False
    return bool(np.max(np.abs(m.sum(axis=1)), initial=0.0) <= tol)


def normalize_trace(lap: Laplacian, target: float) -> Laplacian:
    """Rescale a Laplacian so its trace equals ``target``.

    Requires a strictly positive current trace (an empty graph cannot be
    rescaled) and a positive target.
    """
    if target <= 0.0:
        raise ValueError("target trace must be positive")
    tr = lap.trace()
    if tr <= 0.0:
        raise ValueError("cannot normalize the trace of an empty graph")
    return Laplacian(lap.entries * (target / tr))


def write_matrix_csv(path, matrix, fmt: str = "%.12g") -> None:
    """Write a matrix as plain-text CSV, one row per line."""
    np.savetxt(path, np.atleast_2d(np.asarray(matrix, dtype=np.float64)),
               delimiter=",", fmt=fmt)


def read_matrix_csv(path) -> np.ndarray:
    """Read a matrix from the plain-text CSV format of :func:`write_matrix_csv`."""
    return np.loadtxt(path, delimiter=",", ndmin=2)
