"""Reductions from simplex and lp-ball learning to ICA, plus a small
self-contained ICA routine to consume them.

Scaling a uniform simplex sample (lifted by a constant coordinate) with
independent Gamma(n+1, 1) radii turns it into a linear mixture of iid
exponentials; scaling a uniform lp-ball sample with Gamma(n/p + 1, 1)^(1/p)
radii turns it into a mixture of iid exp(-|t|^p) coordinates.  Any ICA
routine that unmixes those products recovers the simplex vertices or the
ball's linear map, up to signed permutation.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass

import numpy as np

from .geometry import DegenerateSimplexError
from .sampling import (
    SampleMatrix,
    generalized_gaussian_std,
    sample_lp_ball,
    substream,
)

__all__ = [
    "MixingEstimate",
    "SimplexReduction",
    "LpReduction",
    "CpnEstimate",
    "ica_estimate",
    "reduce_simplex_to_ica",
    "reduce_lp_to_ica",
    "compute_c_pn",
    "separation_index",
    "align_signed_permutation",
    "signed_permutation_deviation",
    "lp_symmetric_difference",
    "clear_c_pn_cache",
]

MAX_SWEEPS = 500
DIRECTION_TOL = 1e-8
# A direction's third cumulant is treated as absent (and the component
# re-run with the fourth-cumulant contrast) unless it clears both this
# absolute floor and 4 standard errors of its own estimate; a fixed floor
# alone lets sampling noise pass for symmetric heavy-tailed sources.
SKEW_FLOOR = 0.02

_CPN_CACHE: dict[tuple[float, int], "CpnEstimate"] = {}


@dataclass
class MixingEstimate:
    """ICA output: ``separating`` M with M (Y - mean) isotropic with
    independent coordinates, ``mixing`` its inverse, per-component
    convergence flags and the contrast each component ended up using.
    ``permutation_note`` records the inherent ambiguity."""

    separating: np.ndarray
    mixing: np.ndarray
    mean: np.ndarray
    converged: list
    contrast: list
    permutation_note: str = "components are recovered up to signed permutation"


def _whiten(points: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    mean = points.mean(axis=0)
    centered = points - mean
    cov = (centered.T @ centered) / points.shape[0]
    eigenvalues, eigenvectors = np.linalg.eigh(cov)
    if eigenvalues[0] <= 1e-12 * eigenvalues[-1]:
        raise DegenerateSimplexError("sample covariance is singular; cannot whiten")
    whitener = (eigenvectors / np.sqrt(eigenvalues)) @ eigenvectors.T
    return centered @ whitener.T, whitener, mean


def ica_estimate(
    sample: SampleMatrix | np.ndarray,
    seed: int = 0,
    max_sweeps: int = MAX_SWEEPS,
    tol: float = DIRECTION_TOL,
) -> MixingEstimate:
    """Deflationary fixed-point ICA.

    Whitens with the empirical covariance, then extracts one direction at a
    time by iterating w -> E[z (w . z)^2] (the third-cumulant contrast),
    orthogonalizing against finished components each sweep.  A component
    whose skewness vanishes (or fails to converge) is re-run with the
    kurtosis contrast w -> E[z (w . z)^3] - 3 w.  A direction counts as
    converged when it moves by at most ``tol`` (after sign alignment)
    between sweeps.

    Returns:
        MixingEstimate; ``separating`` row count equals the sample
        dimension.  Non-convergence is flagged per component, not raised.
    """
    points = sample.points if isinstance(sample, SampleMatrix) else np.atleast_2d(np.asarray(sample, dtype=float))
    t, d = points.shape
    z, whitener, mean = _whiten(points)
    rng = substream(seed, 61)

    basis = np.zeros((d, d))
    converged_flags: list[bool] = []
    contrasts: list[str] = []

    def extract(k: int, contrast: str) -> tuple[np.ndarray, bool]:
        w = rng.standard_normal(d)
        w /= np.linalg.norm(w)
        for _ in range(max_sweeps):
            s = z @ w
            if contrast == "skew":
                candidate = (z.T @ (s * s)) / t
            else:
                candidate = (z.T @ (s * s * s)) / t - 3.0 * w
            candidate -= basis[:k].T @ (basis[:k] @ candidate)
            norm = np.linalg.norm(candidate)
            if norm < 1e-12:
                w = rng.standard_normal(d)
                w /= np.linalg.norm(w)
                continue
            candidate /= norm
            if 1.0 - abs(w @ candidate) <= tol:
                return candidate, True
            w = candidate
        return w, False

    for k in range(d):
        w, ok = extract(k, "skew")
        used = "skew"
        cubes = (z @ w) ** 3
        skew_floor = max(SKEW_FLOOR, 4.0 * cubes.std() / math.sqrt(t))
        if not ok or abs(cubes.mean()) < skew_floor:
            w, ok = extract(k, "kurtosis")
            used = "kurtosis"
        basis[k] = w
        converged_flags.append(bool(ok))
        contrasts.append(used)

    separating = basis @ whitener
    return MixingEstimate(
        separating=separating,
        mixing=np.linalg.inv(separating),
        mean=mean,
        converged=converged_flags,
        contrast=contrasts,
    )


@dataclass
class SimplexReduction:
    """Vertices recovered through the ICA reduction (rows, arbitrary
    order), plus the underlying estimate."""

    vertices: np.ndarray
    estimate: MixingEstimate


def reduce_simplex_to_ica(sample: SampleMatrix, seed: int = 0) -> SimplexReduction:
    """Recover simplex vertices from uniform samples via ICA.

    Each point p is lifted to (p, 1) and scaled by an independent
    Gamma(n+1, 1) radius, which makes the result a product of iid Exp(1)
    coordinates under the lifted vertex matrix.  The inverted separating
    matrix has columns proportional to (v_j, 1) up to sign; multiplying
    every column by the sign of its last entry fixes the orientation, and
    dropping the last row leaves the vertices.
    """
    points = sample.points
    t, n = points.shape
    rng = substream(seed, 67)
    radii = rng.gamma(n + 1, 1.0, size=t)
    lifted = np.hstack([points, np.ones((t, 1))]) * radii[:, None]
    estimate = ica_estimate(lifted, seed=seed)
    mixing = estimate.mixing.copy()
    signs = np.sign(mixing[-1, :])
    signs[signs == 0] = 1.0
    mixing = mixing * signs
    return SimplexReduction(vertices=mixing[:-1, :].T.copy(), estimate=estimate)


@dataclass
class LpReduction:
    """Linear map recovered through the lp-ball reduction."""

    mixing: np.ndarray
    estimate: MixingEstimate
    p: float


def reduce_lp_to_ica(sample: SampleMatrix, p: float, seed: int = 0) -> LpReduction:
    """Recover the linear map A of a body A(unit lp ball) from uniform
    samples via ICA.

    Each point is scaled by T^(1/p) with T ~ Gamma(n/p + 1, 1), making the
    result A times a vector of iid exp(-|t|^p) coordinates.  The inverted
    separating matrix is divided by the standard deviation of that source
    density, so the recovered map carries the input's scale and matches A
    up to signed permutation of columns.  At p = 2 the ball is rotation
    invariant and only the ellipsoid A A^T is identified.
    """
    points = sample.points
    t, n = points.shape
    rng = substream(seed, 71)
    radii = rng.gamma(n / p + 1.0, 1.0, size=t)
    scaled = points * (radii ** (1.0 / p))[:, None]
    estimate = ica_estimate(scaled, seed=seed)
    mixing = estimate.mixing / generalized_gaussian_std(p)
    if abs(p - 2.0) < 1e-12:
        estimate.permutation_note = "p=2 ball is rotation invariant; only the ellipsoid A A^T is identified"
    return LpReduction(mixing=mixing, estimate=estimate, p=p)


@dataclass(frozen=True)
class CpnEstimate:
    """Monte Carlo estimate of c_{p,n} = sqrt(E[X_1^2]) for X uniform in
    the unit lp ball of R^n."""

    value: float
    std_error: float
    samples: int


def compute_c_pn(
    p: float,
    n: int,
    samples: int = 1_000_000,
    seed: int = 0,
    cache_path: str | None = None,
) -> CpnEstimate:
    """Estimate c_{p,n}, the coordinate scale of the unit lp ball.

    Pools x_i^2 across all n coordinates of each sample point (the ball is
    coordinate symmetric), doubling blocks until the relative standard
    error of the estimate is at most 1e-3.  Results are memoized per (p, n)
    in memory, and in a JSON lookup file when ``cache_path`` is given.
    """
    key = (float(p), int(n))
    if key in _CPN_CACHE:
        return _CPN_CACHE[key]
    if cache_path is not None and os.path.exists(cache_path):
        with open(cache_path) as fh:
            stored = json.load(fh)
        tag = f"p={key[0]:.17g},n={key[1]}"
        if tag in stored:
            est = CpnEstimate(**stored[tag])
            _CPN_CACHE[key] = est
            return est

    if samples < 1:
        raise ValueError("samples must be >= 1")
    block_seed = 0
    row_means: list[np.ndarray] = []
    total = 0
    while True:
        block = min(max(samples, 1), 1_000_000)
        pts = sample_lp_ball(n, p, block, seed=int(np.random.SeedSequence((seed, 73, block_seed)).generate_state(1)[0])).points
        row_means.append((pts * pts).mean(axis=1))
        total += block
        block_seed += 1
        pooled = np.concatenate(row_means)
        mean = pooled.mean()
        se_mean = pooled.std(ddof=1) / math.sqrt(total)
        value = math.sqrt(mean)
        se_value = se_mean / (2.0 * value)
        if total >= samples and se_value <= 1e-3 * value:
            break
        if total >= 32 * max(samples, 1_000_000):
            raise RuntimeError("relative standard error target unreachable")
    est = CpnEstimate(value=float(value), std_error=float(se_value), samples=total)
    _CPN_CACHE[key] = est
    if cache_path is not None:
        stored = {}
        if os.path.exists(cache_path):
            with open(cache_path) as fh:
                stored = json.load(fh)
        stored[f"p={key[0]:.17g},n={key[1]}"] = {
            "value": est.value,
            "std_error": est.std_error,
            "samples": est.samples,
        }
        with open(cache_path, "w") as fh:
            json.dump(stored, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return est


def clear_c_pn_cache() -> None:
    _CPN_CACHE.clear()


def separation_index(g: np.ndarray) -> float:
    """Amari-style distance of a matrix from the signed permutations.

    For each row, sum(|g|)/max(|g|) - 1, likewise for columns, averaged and
    normalized by d-1 so the result lies in [0, 1]; 0 means g is exactly a
    scaled signed permutation.
    """
    g = np.abs(np.asarray(g, dtype=float))
    d = g.shape[0]
    if g.shape != (d, d):
        raise ValueError("matrix must be square")
    if d == 1:
        return 0.0
    rows = (g.sum(axis=1) / g.max(axis=1) - 1.0).sum()
    cols = (g.sum(axis=0) / g.max(axis=0) - 1.0).sum()
    return float((rows + cols) / (2.0 * d * (d - 1.0)))


def align_signed_permutation(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Greedy signed-permutation alignment of a near-signed-permutation
    matrix: repeatedly take the largest remaining |entry|.

    Returns (perm, signs) such that column perm[i], flipped by signs[i],
    is the one matched to row i.
    """
    g = np.asarray(g, dtype=float)
    d = g.shape[0]
    work = np.abs(g).copy()
    perm = np.full(d, -1, dtype=int)
    signs = np.ones(d)
    for _ in range(d):
        i, j = np.unravel_index(np.argmax(work), work.shape)
        perm[i] = j
        signs[i] = 1.0 if g[i, j] >= 0 else -1.0
        work[i, :] = -np.inf
        work[:, j] = -np.inf
    return perm, signs


def signed_permutation_deviation(g: np.ndarray) -> float:
    """Max per-entry deviation of g from the nearest greedy-aligned signed
    permutation matrix."""
    g = np.asarray(g, dtype=float)
    perm, signs = align_signed_permutation(g)
    target = np.zeros_like(g)
    target[np.arange(g.shape[0]), perm] = signs
    return float(np.abs(g - target).max())


def lp_symmetric_difference(
    a: np.ndarray,
    a_est: np.ndarray,
    p: float,
    mc_points: int = 100_000,
    seed: int = 0,
) -> float:
    """Monte Carlo volume of (A B_p symdiff A_est B_p) / vol(A B_p).

    Membership of x in M B_p is ||M^-1 x||_p <= 1; the volume ratio between
    the two bodies is |det A_est| / |det A|.
    """
    a = np.asarray(a, dtype=float)
    a_est = np.asarray(a_est, dtype=float)
    n = a.shape[0]
    a_inv = np.linalg.inv(a)
    a_est_inv = np.linalg.inv(a_est)

    def outside_fraction(sample_map: np.ndarray, other_inv: np.ndarray, key: int) -> float:
        ball = sample_lp_ball(n, p, mc_points, seed=int(np.random.SeedSequence((seed, 79, key)).generate_state(1)[0]))
        pts = ball.points @ sample_map.T
        norms = (np.abs(pts @ other_inv.T) ** p).sum(axis=1) ** (1.0 / p)
        return float((norms > 1.0).mean())

    ratio = abs(np.linalg.det(a_est)) / abs(np.linalg.det(a))
    return outside_fraction(a, a_est_inv, 0) + ratio * outside_fraction(a_est, a_inv, 1)
