"""Solvers for the two reduced convex programs over the probability simplex.

Both use projected gradient descent with a backtracking line search, with
feasibility kept by Euclidean projection after every trial step: plain
sort-and-threshold projection for the simplex, and Dykstra's alternating
projections when the trace hyperplane is active. A brute-force simplex
lattice search is provided as an independent reference for tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .graph_core import SimplexPoint
from .reduction import DomainError, ReducedLog, ReducedQP

# the trace constraint is dropped when every basis trace already matches
REDUNDANT_TOL = 1e-9
_FEAS_SLACK = 1e-12
_PROJ_ITERS = 50000
_PROJ_TOL = 1e-9
_SOLVER_PROJ_TOL = 1e-12
_LATTICE_LIMIT = 20_000_000


class InfeasibleError(ValueError):
    """The constraint set is empty."""


@dataclass(frozen=True)
class SolverConfig:
    """Projected-gradient settings shared by all solvers."""

    max_iters: int = 10000
    grad_tol: float = 1e-9
    step_init: float = 1.0
    step_shrink: float = 0.5
    sufficient_decrease: float = 1e-4

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")
        if self.grad_tol <= 0.0 or self.step_init <= 0.0:
            raise ValueError("grad_tol and step_init must be positive")
        if not (0.0 < self.step_shrink < 1.0):
            raise ValueError("step_shrink must lie in (0, 1)")
        if self.sufficient_decrease <= 0.0:
            raise ValueError("sufficient_decrease must be positive")


@dataclass(frozen=True, eq=False)
class SolveReport:
    """Outcome of a simplex solve.

    ``kkt_residual`` is the norm of the unit-step projected gradient at the
    returned point; ``converged`` means it reached the gradient tolerance.
    """

    theta: SimplexPoint
    objective: float
    iterations: int
    converged: bool
    kkt_residual: float

    def __post_init__(self):
        if self.converged and not math.isfinite(self.objective):
            raise ValueError("a converged solve must report a finite objective")


def project_simplex(y) -> SimplexPoint:
    """Euclidean projection onto the probability simplex."""
    v = np.ascontiguousarray(y, dtype=np.float64)
    if v.ndim != 1 or not np.all(np.isfinite(v)):
        raise ValueError("expected a finite vector")
    return SimplexPoint(kernels.project_scaled_simplex(v, 1.0))


def _check_affine_feasible(ell, target):
    lo = float(np.min(ell))
    hi = float(np.max(ell))
    slack = _FEAS_SLACK * max(1.0, abs(target))
    if lo > target + slack:
        raise InfeasibleError(
            f"target {target} is below the smallest achievable value {lo}"
        )
    if hi < target - slack:
        raise InfeasibleError(
            f"target {target} is above the largest achievable value {hi}"
        )


def project_simplex_with_affine(y, ell, target: float) -> SimplexPoint:
    """Euclidean projection onto the simplex sliced by ``theta @ ell = target``.

    Feasibility requires min(ell) <= target <= max(ell). When every entry
    of ``ell`` already equals the target the hyperplane is redundant and
    the plain simplex projection is returned; otherwise Dykstra's
    alternating projections run until the hyperplane residual is below
    1e-9 * max(1, |target|) (the returned point sits exactly on the
    simplex).
    """
    v = np.ascontiguousarray(y, dtype=np.float64)
    lv = np.ascontiguousarray(ell, dtype=np.float64)
    if v.shape != lv.shape or v.ndim != 1:
        raise ValueError("y and ell must be vectors of equal length")
    if not (np.all(np.isfinite(v)) and np.all(np.isfinite(lv))):
        raise ValueError("expected finite vectors")
    _check_affine_feasible(lv, target)
    if np.max(np.abs(lv - target), initial=0.0) <= REDUNDANT_TOL:
        return project_simplex(v)
    theta, _ = kernels.dykstra_simplex_hyperplane(v, lv, float(target),
                                                  _PROJ_ITERS, _PROJ_TOL)
    return SimplexPoint(theta)


def solve_reduced_qp(model: ReducedQP, cfg: SolverConfig | None = None) -> SolveReport:
    """Minimize the reduced quadratic objective over the feasible simplex slice.

    The trace constraint ``theta @ traces = n`` is detected as redundant
    when all basis traces equal n; otherwise every projection goes through
    Dykstra's method.
    """
    cfg = cfg or SolverConfig()
    target = float(model.n)
    _check_affine_feasible(model.traces, target)
    use_affine = bool(np.max(np.abs(model.traces - target), initial=0.0) > REDUNDANT_TOL)
    q = np.ascontiguousarray(model.alpha * model.gram)
    theta0 = np.full(model.p, 1.0 / model.p)
    theta, value, iters, converged, kkt = kernels.solve_qp_simplex(
        np.ascontiguousarray(model.smoothness), q,
        np.ascontiguousarray(model.traces), target, use_affine, theta0,
        cfg.max_iters, cfg.grad_tol, cfg.step_init, cfg.step_shrink,
        cfg.sufficient_decrease, _PROJ_ITERS,
        _SOLVER_PROJ_TOL)
    return SolveReport(SimplexPoint(theta), value, iters, bool(converged), float(kkt))


def solve_reduced_log(model: ReducedLog, cfg: SolverConfig | None = None) -> SolveReport:
    """Minimize the reduced log-degree objective over the simplex.

    Starts from the barycenter (interior, hence in the log domain whenever
    any simplex point is); the line search rejects steps whose combined
    degrees fall below the domain floor.
    """
    cfg = cfg or SolverConfig()
    theta0 = np.full(model.p, 1.0 / model.p)
    if float(np.min(model.degrees @ theta0)) <= kernels.DEGREE_FLOOR:
        raise DomainError(
            "some node has zero degree in every basis matrix; the "
            "log-degree objective is undefined on the whole simplex"
        )
    theta, value, iters, converged, kkt = kernels.solve_log_simplex(
        np.ascontiguousarray(model.distance_cost),
        np.ascontiguousarray(model.degrees),
        np.ascontiguousarray(0.5 * model.beta * model.gram),
        float(model.alpha), theta0,
        cfg.max_iters, cfg.grad_tol, cfg.step_init, cfg.step_shrink,
        cfg.sufficient_decrease)
    return SolveReport(SimplexPoint(theta), value, iters, bool(converged), float(kkt))


def _lattice_count(n_steps: int, p: int) -> int:
    return math.comb(n_steps + p - 1, p - 1)


def simplex_lattice(p: int, resolution: float) -> np.ndarray:
    """All simplex points with coordinates on a grid of the given resolution.

    Returns a (count, p) array of the points k / N with k nonnegative
    integers summing to N = round(1 / resolution). Limited to p <= 4 and a
    lattice of at most twenty million points.
    """
    if not 1 <= p <= 4:
        raise ValueError("lattice enumeration supports 1 <= p <= 4")
    n_steps = int(round(1.0 / resolution))
    if n_steps < 1:
        raise ValueError("resolution must be at most 1")
    if _lattice_count(n_steps, p) > _LATTICE_LIMIT:
        raise ValueError("resolution too fine for this p; the lattice is too large")
    if p == 1:
        return np.ones((1, 1))
    if p == 2:
        k = np.arange(n_steps + 1, dtype=np.float64)
        return np.column_stack([k, n_steps - k]) / n_steps
    if p == 3:
        a, b = np.meshgrid(np.arange(n_steps + 1), np.arange(n_steps + 1),
                           indexing="ij")
        keep = (a + b) <= n_steps
        a, b = a[keep], b[keep]
        return np.column_stack([a, b, n_steps - a - b]).astype(np.float64) / n_steps
    blocks = []
    for a in range(n_steps + 1):
        rem = n_steps - a
        b, c = np.meshgrid(np.arange(rem + 1), np.arange(rem + 1), indexing="ij")
        keep = (b + c) <= rem
        b, c = b[keep], c[keep]
        blocks.append(np.column_stack(
            [np.full(b.size, a), b, c, rem - b - c]))
    return np.concatenate(blocks).astype(np.float64) / n_steps


def _evaluate_lattice(objective, points, batch):
    if batch:
        values = np.asarray(objective(points), dtype=np.float64)
        if values.shape != (points.shape[0],):
            raise ValueError("batch objective must return one value per point")
        return values
    values = np.empty(points.shape[0])
    for i, th in enumerate(points):
        try:
            values[i] = float(objective(th))
        except DomainError:
            values[i] = np.inf
    return values


def grid_oracle(objective, p: int, resolution: float,
                *, batch: bool = False) -> tuple[np.ndarray, float]:
    """Exhaustive objective minimization over the simplex lattice.

    ``objective`` maps a point to a float (out-of-domain points may raise
    :class:`DomainError` or return a non-finite value and are skipped).
    With ``batch=True`` it must instead map a (count, p) array to a
    (count,) array. Intended as an independent reference for tests.
    """
    points = simplex_lattice(p, resolution)
    values = _evaluate_lattice(objective, points, batch)
    finite = np.isfinite(values)
    if not finite.any():
        raise DomainError("every lattice point is outside the objective's domain")
    values = np.where(finite, values, np.inf)
    best = int(np.argmin(values))
    return points[best].copy(), float(values[best])


def refine_on_simplex(objective, theta0, span: float, step: float,
                      *, batch: bool = False) -> tuple[np.ndarray, float]:
    """Local lattice search around ``theta0`` on the simplex.

    Grids the first p-1 coordinates within ``span`` of ``theta0`` at the
    given ``step`` (the last coordinate closes the sum to one; points that
    leave the simplex are skipped). Used by tests to sharpen a coarse
    :func:`grid_oracle` point.
    """
    t0 = np.asarray(theta0, dtype=np.float64)
    p = t0.size
    if p < 2:
        return t0.copy(), float(_evaluate_lattice(objective, t0[None, :], batch)[0])
    offsets = np.arange(-round(span / step), round(span / step) + 1) * step
    if offsets.size ** (p - 1) > _LATTICE_LIMIT:
        raise ValueError("refinement lattice too large; widen step or narrow span")
    grids = np.meshgrid(*[t0[i] + offsets for i in range(p - 1)], indexing="ij")
    free = np.column_stack([g.ravel() for g in grids])
    last = 1.0 - free.sum(axis=1)
    points = np.column_stack([free, last])
    points = points[np.all(points >= 0.0, axis=1)]
    if points.shape[0] == 0:
        return t0.copy(), float(_evaluate_lattice(objective, t0[None, :], batch)[0])
    values = _evaluate_lattice(objective, points, batch)
    finite = np.isfinite(values)
    if not finite.any():
        raise DomainError("every refinement point is outside the objective's domain")
    values = np.where(finite, values, np.inf)
    best = int(np.argmin(values))
    return points[best].copy(), float(values[best])
