"""Synthetic benchmark generation: random geometric graphs, ground-truth
polytopes, smooth (low-pass filtered) signals, and pairwise distances.

Every generator is a pure function of its seed and parameters; parallel
generation across seeds is safe.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph_core import (
    ADJACENCY,
    LAPLACIAN,
    Laplacian,
    PolytopeBasis,
    SimplexPoint,
    WeightedAdjacency,
    build_laplacian,
    combine,
    normalize_trace,
)

DEFAULT_RADIUS = 0.5
DEFAULT_GAMMA = 10.0
DEFAULT_NOISE_SD = 0.05

_MAX_PLACEMENT_ATTEMPTS = 50


@dataclass(frozen=True, eq=False)
class SignalMatrix:
    """Node-by-sample signal matrix; row i is the signal on node i."""

    data: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.data, dtype=np.float64)
        if x.ndim != 2:
            raise ValueError("signals must form a 2-D node-by-sample matrix")
        if not np.all(np.isfinite(x)):
            raise ValueError("signals must be finite")
        x = x.copy()
        x.setflags(write=False)
        object.__setattr__(self, "data", x)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def m(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Squared pairwise signal distances: symmetric, nonnegative, hollow."""

    entries: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.entries, dtype=np.float64)
        if z.ndim != 2 or z.shape[0] != z.shape[1]:
            raise ValueError("distance matrix must be square")
        if not np.all(np.isfinite(z)):
            raise ValueError("distances must be finite")
        if np.max(np.abs(z - z.T), initial=0.0) > 1e-12:
            raise ValueError("distance matrix must be symmetric")
        if np.any(z < 0.0):
            raise ValueError("squared distances must be nonnegative")
        if np.max(np.abs(np.diag(z)), initial=0.0) > 1e-12:
            raise ValueError("distance matrix diagonal must be zero")
        z = z.copy()
        z.setflags(write=False)
        object.__setattr__(self, "entries", z)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True, eq=False)
class GroundTruth:
    """A known polytope basis, the true weights, and their combination."""

    basis: PolytopeBasis
    theta_star: SimplexPoint
    graph: object

    def __post_init__(self):
        expect = combine(self.basis, self.theta_star)
        got = self.graph.entries if isinstance(self.graph, Laplacian) else self.graph.weights
        ref = expect.entries if isinstance(expect, Laplacian) else expect.weights
        if np.max(np.abs(got - ref), initial=0.0) > 1e-12:
            raise ValueError("ground-truth graph does not match combine(basis, theta_star)")


def random_geometric_graph(n: int, radius: float, seed) -> WeightedAdjacency:
    """Random geometric graph on the unit square with Gaussian edge weights.

    ``n`` points are drawn uniformly; nodes closer than ``radius`` are
    joined with weight exp(-d^2 / (2 sigma^2)), sigma = radius / 2. If a
    placement leaves an isolated node, fresh points are drawn, up to 50
    times (downstream log-degree objectives need positive degrees).
    Deterministic for a fixed seed.
    """
    if n < 2:
        raise ValueError("need at least two nodes")
    if not (0.0 < radius <= np.sqrt(2.0) + 1e-12):
        raise ValueError("radius must lie in (0, sqrt(2)]")
    rng = np.random.default_rng(seed)
    sigma_sq = (radius / 2.0) ** 2
    for _attempt in range(_MAX_PLACEMENT_ATTEMPTS):
        pts = rng.random((n, 2))
        diff = pts[:, None, :] - pts[None, :, :]
        dist_sq = np.einsum("ijk,ijk->ij", diff, diff)
        weights = np.where(dist_sq <= radius * radius,
                           np.exp(-dist_sq / (2.0 * sigma_sq)), 0.0)
        np.fill_diagonal(weights, 0.0)
        if np.all((weights > 0.0).sum(axis=1) >= 1):
            return WeightedAdjacency(weights)
    raise RuntimeError(
        f"no isolated-node-free geometric graph found in "
        f"{_MAX_PLACEMENT_ATTEMPTS} placements (n={n}, radius={radius})"
    )


def _scale_total_weight(adj: WeightedAdjacency, target: float) -> WeightedAdjacency:
    total = float(adj.weights.sum())
    if total <= 0.0:
        raise ValueError("cannot scale an empty graph")
    return WeightedAdjacency(adj.weights * (target / total))


def make_ground_truth(n: int, p: int, theta_star, flavor: str, seed,
                      radius: float = DEFAULT_RADIUS) -> GroundTruth:
    """Build a known basis of p random geometric graphs and its combination.

    Each basis element comes from an independent sub-seed. Laplacian flavor
    normalizes every element to trace n; adjacency flavor scales every
    element to total weight n (the same scaling, so the two flavors of one
    seed describe identical topologies).
    """
    if p < 2:
        raise ValueError("a ground-truth polytope needs p >= 2")
    point = theta_star if isinstance(theta_star, SimplexPoint) else SimplexPoint(np.asarray(theta_star, dtype=np.float64))
    if point.p != p:
        raise ValueError(f"theta_star has {point.p} entries, expected {p}")
    children = np.random.SeedSequence(seed).spawn(p)
    mats = []
    for child in children:
        adj = random_geometric_graph(n, radius, child)
        if flavor == LAPLACIAN:
            mats.append(normalize_trace(build_laplacian(adj), float(n)))
        elif flavor == ADJACENCY:
            mats.append(_scale_total_weight(adj, float(n)))
        else:
            raise ValueError(f"unknown flavor {flavor!r}")
    basis = PolytopeBasis(flavor, tuple(mats))
    return GroundTruth(basis, point, combine(basis, point))


def tikhonov_signals(lap: Laplacian, m: int, gamma: float = DEFAULT_GAMMA,
                     noise_sd: float = DEFAULT_NOISE_SD, seed=0) -> SignalMatrix:
    """Low-pass filtered white noise on the graph spectrum, plus noise.

    Each column is h(L) x0 + eps with h(lambda) = 1 / (1 + gamma lambda)
    applied through the eigendecomposition of the Laplacian, x0 standard
    normal, and eps normal with standard deviation ``noise_sd``.
    Deterministic for a fixed seed.
    """
    if m < 1:
        raise ValueError("need at least one signal")
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    if noise_sd < 0.0:
        raise ValueError("noise_sd must be nonnegative")
    rng = np.random.default_rng(seed)
    lam, vecs = np.linalg.eigh(lap.entries)
    lam = np.maximum(lam, 0.0)
    gains = 1.0 / (1.0 + gamma * lam)
    x0 = rng.standard_normal((lap.n, m))
    x = (vecs * gains) @ (vecs.T @ x0)
    # noise drawn unconditionally; keeps the stream identical across noise_sd
    x = x + noise_sd * rng.standard_normal((lap.n, m))
    if not np.all(np.isfinite(x)):
        raise RuntimeError("signal filtering produced non-finite values")
    return SignalMatrix(x)


def pairwise_distances(signals: SignalMatrix) -> DistanceMatrix:
    """Squared Euclidean distances between per-node signal rows."""
    x = signals.data
    iu, ju = np.triu_indices(signals.n, 1)
    diffs = x[iu] - x[ju]
    condensed = np.einsum("ij,ij->i", diffs, diffs)
    z = np.zeros((signals.n, signals.n))
    z[iu, ju] = condensed
    return DistanceMatrix(z + z.T)
