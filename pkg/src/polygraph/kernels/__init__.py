"""Backend dispatch for the numerical kernels.

Two interchangeable implementations exist: compiled numba kernels
(``_numba``) and a vectorized pure-numpy fallback (``_numpy``). Selection
happens once at import time from the ``POLYGRAPH_BACKEND`` environment
variable:

* ``numpy``  - force the pure-numpy fallback
* ``numba``  - require the compiled backend (import error if numba is missing)
* unset/empty - numba when importable, numpy otherwise

``BACKEND`` records the active choice. ``benchmarks/bench_backends.py``
compares the two on representative workloads.
"""

import os

import numpy as np

from . import _numpy


def _select(name):
    if name == "numpy":
        return _numpy, "numpy"
    if name == "numba":
        from . import _numba
        return _numba, "numba"
    if name == "":
        try:
            from . import _numba
            return _numba, "numba"
        except ImportError:
            return _numpy, "numpy"
    raise ValueError(
        f"unknown POLYGRAPH_BACKEND value {name!r}; expected 'numba' or 'numpy'"
    )


_impl, BACKEND = _select(os.environ.get("POLYGRAPH_BACKEND", "").strip().lower())

DEGREE_FLOOR = _numpy.DEGREE_FLOOR

project_scaled_simplex = _impl.project_scaled_simplex
dykstra_simplex_hyperplane = _impl.dykstra_simplex_hyperplane
solve_qp_simplex = _impl.solve_qp_simplex
solve_log_simplex = _impl.solve_log_simplex
solve_edge_qp = _impl.solve_edge_qp
solve_edge_log = _impl.solve_edge_log


def warm_up():
    """Run every kernel once on tiny inputs.

    On the numba backend this triggers (or loads the cached) JIT
    compilation so later calls, including timed ones, measure only the
    algorithm. On the numpy backend it is a cheap no-op-like pass.
    """
    y = np.array([0.6, 0.7, -0.1])
    project_scaled_simplex(y, 1.0)
    ell3 = np.array([1.0, 2.0, 3.0])
    dykstra_simplex_hyperplane(y, ell3, 2.0, 1000, 1e-12)
    u = np.array([0.1, -0.2])
    Q = np.array([[1.0, 0.1], [0.1, 1.0]])
    half = np.array([0.5, 0.5])
    ell2 = np.array([0.5, 1.5])
    solve_qp_simplex(u, Q, ell2, 1.0, False, half, 50, 1e-9, 1.0, 0.5, 1e-4, 1000, 1e-12)
    solve_qp_simplex(u, Q, ell2, 1.0, True, half, 50, 1e-9, 1.0, 0.5, 1e-4, 1000, 1e-12)
    degb = np.array([[1.0, 0.5], [0.5, 1.0], [1.0, 1.0]])
    solve_log_simplex(np.array([0.2, 0.1]), degb, Q, 0.5, half, 50, 1e-9, 1.0, 0.5, 1e-4)
    ei = np.array([0, 0, 1], dtype=np.int64)
    ej = np.array([1, 2, 2], dtype=np.int64)
    c = np.array([0.5, 1.0, 0.2])
    w0 = np.full(3, 0.5)
    solve_edge_qp(c, ei, ej, 3, 1.5, 0.1, w0, 50, 1e-9, 1.0, 0.5, 1e-4)
    solve_edge_log(c, ei, ej, 3, 1.0, 0.5, w0, 50, 1e-9, 1.0, 0.5, 1e-4)
