"""Vectorized numpy implementations of the hot numerical kernels.

This is the fallback backend, selected with ``POLYGRAPH_BACKEND=numpy`` or
when numba is not importable. It must stay behaviorally identical to the
compiled twins in ``_numba``; the test suite cross-checks both backends on
random instances.

All solvers are projected gradient descent with a backtracking line search
(sufficient-decrease rule). They return ``(x, objective, iterations,
converged, kkt_residual)`` where ``kkt_residual`` is the norm of the
unit-step projected gradient ``x - P(x - g)``.
"""

import numpy as np

DEGREE_FLOOR = 1e-12
_MAX_BACKTRACKS = 60


def project_scaled_simplex(y, total):
    """Euclidean projection of ``y`` onto ``{x >= 0, sum(x) = total}``.

    Sort-and-threshold method; requires ``total > 0``.
    """
    u = np.sort(y)[::-1]
    css = np.cumsum(u)
    thresholds = (css - total) / np.arange(1.0, y.size + 1.0)
    rho = np.nonzero(u > thresholds)[0][-1]
    return np.maximum(y - thresholds[rho], 0.0)


def dykstra_simplex_hyperplane(y, ell, target, max_iters, tol):
    """Dykstra projection of ``y`` onto the simplex sliced by a hyperplane.

    Alternates projections between ``{x >= 0, sum(x) = 1}`` and
    ``{x : x @ ell = target}`` with Dykstra's correction terms. Returns the
    simplex-side iterate (exactly on the simplex) once its hyperplane
    residual drops below ``tol * max(1, |target|)``, together with the
    number of cycles used. The caller is responsible for ensuring the
    intersection is nonempty.
    """
    ell = np.asarray(ell, dtype=np.float64)
    ell_sq = float(ell @ ell)
    scale = max(1.0, abs(target))
    x = np.asarray(y, dtype=np.float64).copy()
    p_corr = np.zeros_like(x)
    q_corr = np.zeros_like(x)
    z = project_scaled_simplex(x, 1.0)
    done = 0
    for it in range(max_iters):
        z = project_scaled_simplex(x + p_corr, 1.0)
        p_corr = x + p_corr - z
        w = z + q_corr
        x = w - ((float(w @ ell) - target) / ell_sq) * ell
        q_corr = w - x
        done = it + 1
        if abs(float(z @ ell) - target) <= tol * scale:
            break
    return z, done


def _pgd(value, grad, project, x0, max_iters, grad_tol, step0, shrink, armijo):
    # Shared projected-gradient driver; `value` returns +inf out of domain.
    x = project(np.asarray(x0, dtype=np.float64))
    f = value(x)
    iters = 0
    converged = False
    kkt = np.inf
    for _ in range(max_iters):
        g = grad(x)
        cand_unit = project(x - g)
        kkt = float(np.sqrt(np.sum((x - cand_unit) ** 2)))
        if kkt <= grad_tol:
            converged = True
            break
        step = step0
        accepted = False
        for _bt in range(_MAX_BACKTRACKS):
            if step == step0 and step0 == 1.0:
                cand = cand_unit
            else:
                cand = project(x - step * g)
            gd = float(g @ (cand - x))
            fc = value(cand)
            if fc <= f + armijo * gd:
                accepted = True
                break
            step *= shrink
        if not accepted:
            break
        x = cand
        f = fc
        iters += 1
    if not converged:
        g = grad(x)
        kkt = float(np.sqrt(np.sum((x - project(x - g)) ** 2)))
        converged = bool(kkt <= grad_tol)
    return x, float(f), iters, converged, kkt


def solve_qp_simplex(u, Q, ell, target, use_affine, theta0,
                     max_iters, grad_tol, step0, shrink, armijo,
                     proj_iters, proj_tol):
    """Minimize ``th @ u + th @ Q @ th`` over the simplex.

    With ``use_affine`` the feasible set is additionally sliced by
    ``th @ ell = target`` (projections via Dykstra).
    """
    if use_affine:
        def project(v):
            return dykstra_simplex_hyperplane(v, ell, target, proj_iters, proj_tol)[0]
    else:
        def project(v):
            return project_scaled_simplex(v, 1.0)

    def value(th):
        return float(th @ u + th @ (Q @ th))

    def grad(th):
        return u + 2.0 * (Q @ th)

    return _pgd(value, grad, project, theta0, max_iters, grad_tol, step0, shrink, armijo)


def solve_log_simplex(v, degb, Q, alpha, theta0,
                      max_iters, grad_tol, step0, shrink, armijo):
    """Minimize ``th @ v - alpha * sum(log(degb @ th)) + th @ Q @ th`` on the simplex.

    ``degb`` holds one per-node degree column per coordinate; points where
    any degree falls to ``DEGREE_FLOOR`` or below are treated as +inf so the
    line search never leaves the log domain. ``theta0`` must be in-domain.
    """
    def project(th):
        return project_scaled_simplex(th, 1.0)

    def value(th):
        d = degb @ th
        if d.min() <= DEGREE_FLOOR:
            return np.inf
        return float(th @ v + th @ (Q @ th) - alpha * np.log(d).sum())

    def grad(th):
        d = degb @ th
        return v - alpha * (degb.T @ (1.0 / d)) + 2.0 * (Q @ th)

    return _pgd(value, grad, project, theta0, max_iters, grad_tol, step0, shrink, armijo)


def solve_edge_qp(c, ei, ej, n, total, alpha, w0,
                  max_iters, grad_tol, step0, shrink, armijo):
    """Minimize ``c @ w + alpha * (sum(d^2) + 2 * sum(w^2))`` over a scaled simplex.

    ``w`` are upper-triangle edge weights, ``d`` the induced node degrees,
    and the feasible set is ``{w >= 0, sum(w) = total}``.
    """
    def degrees(w):
        return (np.bincount(ei, weights=w, minlength=n)
                + np.bincount(ej, weights=w, minlength=n))

    def project(w):
        return project_scaled_simplex(w, total)

    def value(w):
        d = degrees(w)
        return float(c @ w + alpha * (d @ d + 2.0 * (w @ w)))

    def grad(w):
        d = degrees(w)
        return c + alpha * (2.0 * (d[ei] + d[ej]) + 4.0 * w)

    return _pgd(value, grad, project, w0, max_iters, grad_tol, step0, shrink, armijo)


def solve_edge_log(c, ei, ej, n, alpha, beta, w0,
                   max_iters, grad_tol, step0, shrink, armijo):
    """Minimize ``c @ w - alpha * sum(log(d)) + beta * sum(w^2)`` over ``w >= 0``."""
    def degrees(w):
        return (np.bincount(ei, weights=w, minlength=n)
                + np.bincount(ej, weights=w, minlength=n))

    def project(w):
        return np.maximum(w, 0.0)

    def value(w):
        d = degrees(w)
        if d.min() <= DEGREE_FLOOR:
            return np.inf
        return float(c @ w + beta * (w @ w) - alpha * np.log(d).sum())

    def grad(w):
        d = degrees(w)
        return c - alpha * (1.0 / d[ei] + 1.0 / d[ej]) + 2.0 * beta * w

    return _pgd(value, grad, project, w0, max_iters, grad_tol, step0, shrink, armijo)
