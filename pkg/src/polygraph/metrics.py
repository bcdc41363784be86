"""Edge-recovery metrics: mutual information and F-measure on binarized
edge patterns, plus the Frobenius distance between matrices."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph_core import Laplacian, WeightedAdjacency

DEFAULT_THRESHOLD = 1e-4


@dataclass(frozen=True, eq=False)
class EdgePattern:
    """Boolean edge presence over the n(n-1)/2 node pairs, upper-tri order."""

    n: int
    present: np.ndarray

    def __post_init__(self):
        pr = np.asarray(self.present, dtype=bool)
        if pr.ndim != 1 or pr.size != self.n * (self.n - 1) // 2:
            raise ValueError(
                f"expected {self.n * (self.n - 1) // 2} pair flags for n={self.n}"
            )
        pr = pr.copy()
        pr.setflags(write=False)
        object.__setattr__(self, "present", pr)

    @property
    def edge_count(self) -> int:
        return int(self.present.sum())


def _as_matrix(m) -> np.ndarray:
    if isinstance(m, Laplacian):
        return m.entries
    if isinstance(m, WeightedAdjacency):
        return m.weights
    return np.asarray(m, dtype=np.float64)


def binarize(matrix, threshold: float = DEFAULT_THRESHOLD) -> EdgePattern:
    """Edge pattern of a learned matrix: |off-diagonal| above the threshold.

    Works for both flavors: adjacency entries are nonnegative and Laplacian
    off-diagonals are nonpositive, so the magnitude is the absolute value
    either way.
    """
    if threshold < 0.0:
        raise ValueError("threshold must be nonnegative")
    m = _as_matrix(matrix)
    iu, ju = np.triu_indices(m.shape[0], 1)
    return EdgePattern(m.shape[0], np.abs(m[iu, ju]) > threshold)


def f_measure(truth: EdgePattern, learned: EdgePattern) -> float:
    """Harmonic mean of edge precision and recall.

    Two empty patterns score 1; exactly one empty side scores 0.
    """
    if truth.n != learned.n:
        raise ValueError("patterns cover different node counts")
    tp = int(np.sum(truth.present & learned.present))
    true_edges = truth.edge_count
    learned_edges = learned.edge_count
    if true_edges == 0 and learned_edges == 0:
        return 1.0
    if true_edges == 0 or learned_edges == 0:
        return 0.0
    if tp == 0:
        return 0.0
    precision = tp / learned_edges
    recall = tp / true_edges
    return 2.0 * precision * recall / (precision + recall)


def _entropy(counts, total):
    h = 0.0
    for c in counts:
        if c:
            q = c / total
            h -= q * math.log(q)
    return h


def nmi(truth: EdgePattern, learned: EdgePattern,
        normalization: str = "geometric") -> float:
    """Normalized mutual information of the two edge labelings.

    The boolean vectors label the node pairs; mutual information of the
    2x2 contingency table (natural logs, 0 log 0 := 0) is normalized by
    the geometric (default) or arithmetic mean of the marginal entropies.
    When either entropy vanishes the score is 1 for identical patterns and
    0 otherwise.
    """
    if truth.n != learned.n:
        raise ValueError("patterns cover different node counts")
    if normalization not in ("geometric", "arithmetic"):
        raise ValueError("normalization must be 'geometric' or 'arithmetic'")
    t = truth.present
    l = learned.present
    total = t.size
    n11 = int(np.sum(t & l))
    n10 = int(np.sum(t & ~l))
    n01 = int(np.sum(~t & l))
    n00 = total - n11 - n10 - n01
    t1, t0 = n11 + n10, n01 + n00
    l1, l0 = n11 + n01, n10 + n00
    h_t = _entropy((t1, t0), total)
    h_l = _entropy((l1, l0), total)
    if h_t == 0.0 or h_l == 0.0:
        return 1.0 if np.array_equal(t, l) else 0.0
    info = 0.0
    for nij, ni, nj in ((n11, t1, l1), (n10, t1, l0),
                        (n01, t0, l1), (n00, t0, l0)):
        if nij:
            info += (nij / total) * math.log(nij * total / (ni * nj))
    if normalization == "geometric":
        denom = math.sqrt(h_t * h_l)
    else:
        denom = 0.5 * (h_t + h_l)
    # clip the tiny negative/over-one float residue
    return min(1.0, max(0.0, info / denom))


def frobenius_error(truth, learned) -> float:
    """Frobenius norm of the difference, with flavor and shape checks."""
    if (isinstance(truth, (Laplacian, WeightedAdjacency))
            and isinstance(learned, (Laplacian, WeightedAdjacency))
            and type(truth) is not type(learned)):
        raise ValueError("cannot compare a Laplacian against an adjacency matrix")
    a = _as_matrix(truth)
    b = _as_matrix(learned)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


@dataclass(frozen=True)
class EvalRow:
    """One method's scores against the ground truth."""

    method: str
    nmi: float
    f_measure: float
    frobenius: float

    def __post_init__(self):
        if not (0.0 <= self.nmi <= 1.0 and 0.0 <= self.f_measure <= 1.0):
            raise ValueError("nmi and f_measure must lie in [0, 1]")
        if self.frobenius < 0.0:
            raise ValueError("frobenius error must be nonnegative")

    def csv_line(self) -> str:
        return (f"{self.method},{self.nmi:.6f},"
                f"{self.f_measure:.6f},{self.frobenius:.6f}")


def evaluate(method: str, truth, learned,
             threshold: float = DEFAULT_THRESHOLD) -> EvalRow:
    """All three scores of a learned matrix against the ground truth."""
    t_pat = binarize(truth, threshold)
    l_pat = binarize(learned, threshold)
    return EvalRow(method, nmi(t_pat, l_pat), f_measure(t_pat, l_pat),
                   frobenius_error(truth, learned))
