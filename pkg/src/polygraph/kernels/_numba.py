"""Numba-compiled twins of the numerical kernels.

Importing this module requires numba; the pure-numpy fallbacks live in
``_numpy``. Same contracts, loop-style bodies, compiled with ``cache=True``
so repeat runs skip compilation.
"""

import numpy as np
from numba import njit

DEGREE_FLOOR = 1e-12
_MAX_BACKTRACKS = 60


@njit(cache=True)
def project_scaled_simplex(y, total):
    p = y.size
    u = np.sort(y)[::-1]
    css = 0.0
    tau = 0.0
    for j in range(p):
        css += u[j]
        t = (css - total) / (j + 1.0)
        # the admissible indices form a prefix, so the last hit wins
        if u[j] > t:
            tau = t
    out = np.empty(p)
    for i in range(p):
        v = y[i] - tau
        out[i] = v if v > 0.0 else 0.0
    return out


@njit(cache=True)
def dykstra_simplex_hyperplane(y, ell, target, max_iters, tol):
    p = y.size
    ell_sq = 0.0
    for i in range(p):
        ell_sq += ell[i] * ell[i]
    scale = abs(target) if abs(target) > 1.0 else 1.0
    x = y.copy()
    p_corr = np.zeros(p)
    q_corr = np.zeros(p)
    z = project_scaled_simplex(x, 1.0)
    done = 0
    for it in range(max_iters):
        z = project_scaled_simplex(x + p_corr, 1.0)
        hres = -target
        for i in range(p):
            p_corr[i] = x[i] + p_corr[i] - z[i]
            hres += z[i] * ell[i]
        resid = -target
        for i in range(p):
            resid += (z[i] + q_corr[i]) * ell[i]
        coef = resid / ell_sq
        for i in range(p):
            w = z[i] + q_corr[i]
            x[i] = w - coef * ell[i]
            q_corr[i] = w - x[i]
        done = it + 1
        if abs(hres) <= tol * scale:
            break
    return z, done


@njit(cache=True)
def _project_feasible(v, use_affine, ell, target, proj_iters, proj_tol):
    if use_affine:
        z, _ = dykstra_simplex_hyperplane(v, ell, target, proj_iters, proj_tol)
        return z
    return project_scaled_simplex(v, 1.0)


@njit(cache=True)
def _qp_value(u, Q, th):
    p = th.size
    val = 0.0
    for i in range(p):
        acc = 0.0
        for j in range(p):
            acc += Q[i, j] * th[j]
        val += th[i] * (u[i] + acc)
    return val


@njit(cache=True)
def _qp_grad(u, Q, th, g):
    p = th.size
    for i in range(p):
        acc = 0.0
        for j in range(p):
            acc += Q[i, j] * th[j]
        g[i] = u[i] + 2.0 * acc


@njit(cache=True)
def solve_qp_simplex(u, Q, ell, target, use_affine, theta0,
                     max_iters, grad_tol, step0, shrink, armijo,
                     proj_iters, proj_tol):
    p = theta0.size
    theta = _project_feasible(theta0, use_affine, ell, target, proj_iters, proj_tol)
    f = _qp_value(u, Q, theta)
    g = np.empty(p)
    iters = 0
    converged = False
    kkt = np.inf
    for _ in range(max_iters):
        _qp_grad(u, Q, theta, g)
        cand_unit = _project_feasible(theta - g, use_affine, ell, target,
                                      proj_iters, proj_tol)
        s = 0.0
        for i in range(p):
            d = theta[i] - cand_unit[i]
            s += d * d
        kkt = np.sqrt(s)
        if kkt <= grad_tol:
            converged = True
            break
        step = step0
        accepted = False
        fc = f
        for _bt in range(_MAX_BACKTRACKS):
            if step == step0 and step0 == 1.0:
                cand = cand_unit
            else:
                cand = _project_feasible(theta - step * g, use_affine, ell, target,
                                         proj_iters, proj_tol)
            gd = 0.0
            for i in range(p):
                gd += g[i] * (cand[i] - theta[i])
            fc = _qp_value(u, Q, cand)
            if fc <= f + armijo * gd:
                accepted = True
                break
            step *= shrink
        if not accepted:
            break
        theta = cand
        f = fc
        iters += 1
    if not converged:
        _qp_grad(u, Q, theta, g)
        cand_unit = _project_feasible(theta - g, use_affine, ell, target,
                                      proj_iters, proj_tol)
        s = 0.0
        for i in range(p):
            d = theta[i] - cand_unit[i]
            s += d * d
        kkt = np.sqrt(s)
        converged = kkt <= grad_tol
    return theta, f, iters, converged, kkt


@njit(cache=True)
def _log_value(v, degb, Q, alpha, th):
    n = degb.shape[0]
    p = th.size
    val = 0.0
    for i in range(p):
        acc = 0.0
        for j in range(p):
            acc += Q[i, j] * th[j]
        val += th[i] * (v[i] + acc)
    for k in range(n):
        d = 0.0
        for i in range(p):
            d += degb[k, i] * th[i]
        if d <= DEGREE_FLOOR:
            return np.inf
        val -= alpha * np.log(d)
    return val


@njit(cache=True)
def _log_grad(v, degb, Q, alpha, th, g):
    n = degb.shape[0]
    p = th.size
    for i in range(p):
        acc = 0.0
        for j in range(p):
            acc += Q[i, j] * th[j]
        g[i] = v[i] + 2.0 * acc
    for k in range(n):
        d = 0.0
        for i in range(p):
            d += degb[k, i] * th[i]
        inv = alpha / d
        for i in range(p):
            g[i] -= degb[k, i] * inv


@njit(cache=True)
def solve_log_simplex(v, degb, Q, alpha, theta0,
                      max_iters, grad_tol, step0, shrink, armijo):
    p = theta0.size
    theta = project_scaled_simplex(theta0, 1.0)
    f = _log_value(v, degb, Q, alpha, theta)
    g = np.empty(p)
    iters = 0
    converged = False
    kkt = np.inf
    for _ in range(max_iters):
        _log_grad(v, degb, Q, alpha, theta, g)
        cand_unit = project_scaled_simplex(theta - g, 1.0)
        s = 0.0
        for i in range(p):
            d = theta[i] - cand_unit[i]
            s += d * d
        kkt = np.sqrt(s)
        if kkt <= grad_tol:
            converged = True
            break
        step = step0
        accepted = False
        fc = f
        for _bt in range(_MAX_BACKTRACKS):
            if step == step0 and step0 == 1.0:
                cand = cand_unit
            else:
                cand = project_scaled_simplex(theta - step * g, 1.0)
            gd = 0.0
            for i in range(p):
                gd += g[i] * (cand[i] - theta[i])
            fc = _log_value(v, degb, Q, alpha, cand)
            if fc <= f + armijo * gd:
                accepted = True
                break
            step *= shrink
        if not accepted:
            break
        theta = cand
        f = fc
        iters += 1
    if not converged:
        _log_grad(v, degb, Q, alpha, theta, g)
        cand_unit = project_scaled_simplex(theta - g, 1.0)
        s = 0.0
        for i in range(p):
            d = theta[i] - cand_unit[i]
            s += d * d
        kkt = np.sqrt(s)
        converged = kkt <= grad_tol
    return theta, f, iters, converged, kkt


@njit(cache=True)
def _edge_degrees(w, ei, ej, n):
    d = np.zeros(n)
    for e in range(w.size):
        d[ei[e]] += w[e]
        d[ej[e]] += w[e]
    return d


@njit(cache=True)
def _edge_qp_value(c, w, ei, ej, n, alpha):
    d = _edge_degrees(w, ei, ej, n)
    val = 0.0
    for e in range(w.size):
        val += c[e] * w[e] + 2.0 * alpha * w[e] * w[e]
    for k in range(n):
        val += alpha * d[k] * d[k]
    return val


@njit(cache=True)
def _edge_qp_grad(c, w, ei, ej, n, alpha, g):
    d = _edge_degrees(w, ei, ej, n)
    for e in range(w.size):
        g[e] = c[e] + alpha * (2.0 * (d[ei[e]] + d[ej[e]]) + 4.0 * w[e])


@njit(cache=True)
def solve_edge_qp(c, ei, ej, n, total, alpha, w0,
                  max_iters, grad_tol, step0, shrink, armijo):
    m = w0.size
    w = project_scaled_simplex(w0, total)
    f = _edge_qp_value(c, w, ei, ej, n, alpha)
    g = np.empty(m)
    iters = 0
    converged = False
    kkt = np.inf
    for _ in range(max_iters):
        _edge_qp_grad(c, w, ei, ej, n, alpha, g)
        cand_unit = project_scaled_simplex(w - g, total)
        s = 0.0
        for e in range(m):
            d = w[e] - cand_unit[e]
            s += d * d
        kkt = np.sqrt(s)
        if kkt <= grad_tol:
            converged = True
            break
        step = step0
        accepted = False
        fc = f
        for _bt in range(_MAX_BACKTRACKS):
            if step == step0 and step0 == 1.0:
                cand = cand_unit
            else:
                cand = project_scaled_simplex(w - step * g, total)
            gd = 0.0
            for e in range(m):
                gd += g[e] * (cand[e] - w[e])
            fc = _edge_qp_value(c, cand, ei, ej, n, alpha)
            if fc <= f + armijo * gd:
                accepted = True
                break
            step *= shrink
        if not accepted:
            break
        w = cand
        f = fc
        iters += 1
    if not converged:
        _edge_qp_grad(c, w, ei, ej, n, alpha, g)
        cand_unit = project_scaled_simplex(w - g, total)
        s = 0.0
        for e in range(m):
            d = w[e] - cand_unit[e]
            s += d * d
        kkt = np.sqrt(s)
        converged = kkt <= grad_tol
    return w, f, iters, converged, kkt


@njit(cache=True)
def _clip_nonneg(v):
    out = np.empty(v.size)
    for i in range(v.size):
        out[i] = v[i] if v[i] > 0.0 else 0.0
    return out


@njit(cache=True)
def _edge_log_value(c, w, ei, ej, n, alpha, beta):
    d = _edge_degrees(w, ei, ej, n)
    val = 0.0
    for k in range(n):
        if d[k] <= DEGREE_FLOOR:
            return np.inf
        val -= alpha * np.log(d[k])
    for e in range(w.size):
        val += c[e] * w[e] + beta * w[e] * w[e]
    return val


@njit(cache=True)
def _edge_log_grad(c, w, ei, ej, n, alpha, beta, g):
    d = _edge_degrees(w, ei, ej, n)
    for e in range(w.size):
        g[e] = c[e] - alpha * (1.0 / d[ei[e]] + 1.0 / d[ej[e]]) + 2.0 * beta * w[e]


@njit(cache=True)
def solve_edge_log(c, ei, ej, n, alpha, beta, w0,
                   max_iters, grad_tol, step0, shrink, armijo):
    m = w0.size
    w = _clip_nonneg(w0)
    f = _edge_log_value(c, w, ei, ej, n, alpha, beta)
    g = np.empty(m)
    iters = 0
    converged = False
    kkt = np.inf
    for _ in range(max_iters):
        _edge_log_grad(c, w, ei, ej, n, alpha, beta, g)
        cand_unit = _clip_nonneg(w - g)
        s = 0.0
        for e in range(m):
            d = w[e] - cand_unit[e]
            s += d * d
        kkt = np.sqrt(s)
        if kkt <= grad_tol:
            converged = True
            break
        step = step0
        accepted = False
        fc = f
        for _bt in range(_MAX_BACKTRACKS):
            if step == step0 and step0 == 1.0:
                cand = cand_unit
            else:
                cand = _clip_nonneg(w - step * g)
            gd = 0.0
            for e in range(m):
                gd += g[e] * (cand[e] - w[e])
            fc = _edge_log_value(c, cand, ei, ej, n, alpha, beta)
            if fc <= f + armijo * gd:
                accepted = True
                break
            step *= shrink
        if not accepted:
            break
        w = cand
        f = fc
        iters += 1
    if not converged:
        _edge_log_grad(c, w, ei, ej, n, alpha, beta, g)
        cand_unit = _clip_nonneg(w - g)
        s = 0.0
        for e in range(m):
            d = w[e] - cand_unit[e]
            s += d * d
        kkt = np.sqrt(s)
        converged = kkt <= grad_tol
    return w, f, iters, converged, kkt
