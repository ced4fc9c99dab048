"""Evaluation tools: Monte Carlo total-variation distance between uniform
simplex distributions, the sandwich bound check, vertex matching, and the
coupon-collector trial bound."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .geometry import Simplex, contains_points
from .sampling import _simplex_weights, substream

__all__ = [
    "TVEstimate",
    "SandwichReport",
    "MatchResult",
    "tv_distance_mc",
    "check_sandwich_bound",
    "match_vertices",
    "coupon_trials_bound",
    "hoeffding_sample_size",
]


@dataclass(frozen=True)
class TVEstimate:
    """Monte Carlo estimate of d_TV between two uniform simplex
    distributions, with its binomial standard error."""

    value: float
    std_error: float
    mc_points: int


def _require_full_dimensional(s: Simplex, name: str) -> None:
    if s.ambient_dim != s.dim:
        raise ValueError(f"{name} must be full-dimensional for volume-based TV")


def tv_distance_mc(k: Simplex, l: Simplex, mc_points: int, rng: int | np.random.Generator = 0) -> TVEstimate:
    """Estimate d_TV(uniform on K, uniform on L).

    Uses the identity d_TV = vol(K \\ L) / vol(K) for vol(K) >= vol(L):
    points are sampled only from the larger-volume simplex and tested for
    membership in the other, so the estimate is exact in expectation and
    identically zero when K equals L.

    Args:
        k, l: full-dimensional simplices of equal dimension.
        mc_points: Monte Carlo sample size.
        rng: integer seed or numpy Generator.

    Returns:
        TVEstimate with value, std_error = sqrt(v(1-v)/mc_points), mc_points.
    """
    _require_full_dimensional(k, "K")
    _require_full_dimensional(l, "L")
    if k.dim != l.dim:
        raise ValueError("simplices must have equal dimension")
    if mc_points < 1:
        raise ValueError("mc_points must be >= 1")
    gen = rng if isinstance(rng, np.random.Generator) else substream(rng, 31)
    big, small = (k, l) if k.volume() >= l.volume() else (l, k)
    weights = _simplex_weights(gen, big.dim + 1, mc_points)
    points = weights @ big.vertices
    outside = 1.0 - contains_points(small, points).mean()
    std_error = math.sqrt(max(outside * (1.0 - outside), 0.0) / mc_points)
    return TVEstimate(float(outside), std_error, mc_points)


@dataclass(frozen=True)
class SandwichReport:
    """Outcome of :func:`check_sandwich_bound`."""

    tv: TVEstimate
    bound: float
    holds: bool
    alpha: float
    beta: float


def check_sandwich_bound(
    k: Simplex,
    l: Simplex,
    alpha: float,
    beta: float,
    mc_points: int,
    rng: int | np.random.Generator = 0,
) -> SandwichReport:
    """Verify alpha K <= L <= beta K by vertex membership, then check the
    sandwich bound d_TV <= 2 (1 - (alpha/beta)^n) against the Monte Carlo
    estimate (with a 3 sigma allowance).

    Scaling is about the origin, so K should contain it.  Raises ValueError
    when the claimed containments fail.
    """
    if not 0 < alpha <= beta:
        raise ValueError("need 0 < alpha <= beta")
    inner = k.scaled(alpha)
    outer = k.scaled(beta)
    if not contains_points(l, inner.vertices).all():
        raise ValueError("alpha K is not contained in L")
    if not contains_points(outer, l.vertices).all():
        raise ValueError("L is not contained in beta K")
    tv = tv_distance_mc(k, l, mc_points, rng)
    bound = 2.0 * (1.0 - (alpha / beta) ** k.dim)
    return SandwichReport(tv=tv, bound=bound, holds=bool(tv.value <= bound + 3.0 * tv.std_error), alpha=alpha, beta=beta)


@dataclass(frozen=True)
class MatchResult:
    """A bijection between true and estimated vertices.

    permutation[i] is the estimate index matched to truth vertex i;
    per_vertex_error the corresponding distances; max_error their maximum,
    minimized over all bijections.
    """

    permutation: tuple
    per_vertex_error: np.ndarray
    max_error: float


def _vertex_array(x) -> np.ndarray:
    return x.vertices if isinstance(x, Simplex) else np.atleast_2d(np.asarray(x, dtype=float))


def match_vertices(truth, estimate) -> MatchResult:
    """Minimum-max-error bijection between two equal-size vertex sets.

    The optimal bottleneck value is found by bisecting over the sorted
    pairwise distances with a bipartite-matching feasibility test; among
    the bijections achieving it, total error is minimized.

    Args:
        truth, estimate: Simplex instances or (k, d) vertex arrays.

    Returns:
        MatchResult ordered by truth index.
    """
    a = _vertex_array(truth)
    b = _vertex_array(estimate)
    if a.shape != b.shape:
        raise ValueError("vertex sets must have matching shapes")
    dist = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=2)

    def feasible(threshold: float) -> bool:
        adjacency = csr_matrix(dist <= threshold)
        return (maximum_bipartite_matching(adjacency, perm_type="column") >= 0).all()

    levels = np.unique(dist)
    lo, hi = 0, len(levels) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(levels[mid]):
            hi = mid
        else:
            lo = mid + 1
    bottleneck = levels[lo]

    # min-sum assignment restricted to pairs within the bottleneck
    penalty = np.where(dist <= bottleneck, dist, 1e30)
    rows, cols = linear_sum_assignment(penalty)
    order = np.argsort(rows)
    perm = cols[order]
    errors = dist[np.arange(len(perm)), perm]
    return MatchResult(tuple(int(j) for j in perm), errors, float(errors.max()))


def coupon_trials_bound(n: int, alpha: float, delta: float) -> int:
    """Trials needed to see all n outcomes with probability >= 1 - delta
    when each outcome occurs with probability >= alpha per trial:
    ceil((ln n + ln 1/delta) / alpha)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    return math.ceil((math.log(n) + math.log(1.0 / delta)) / alpha)


def hoeffding_sample_size(eps: float, delta: float) -> int:
    """Points for a [0,1]-bounded Monte Carlo mean to sit within eps of its
    expectation with probability >= 1 - delta: ceil(ln(2/delta) / (2 eps^2))."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    return math.ceil(math.log(2.0 / delta) / (2.0 * eps * eps))
