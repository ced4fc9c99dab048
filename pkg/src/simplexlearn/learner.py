"""End-to-end simplex learning from uniform samples.

The pipeline: estimate an affine frame (mean and covariance factor) from a
first block of points, move the data into that frame where the hidden
simplex is nearly isotropic, embed it onto the hyperplane {y . 1 = 1}
where it becomes a nearly standard simplex rotated about the all-ones
direction, and repeatedly run the third-moment fixed point to collect its
vertices.  Each accepted direction is projected exactly onto the
hyperplane and mapped back through the frame.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .evaluation import coupon_trials_bound, hoeffding_sample_size, tv_distance_mc
from .geometry import AffineFrame, EmbedMap, Simplex, make_embed_map
from .sampling import SampleMatrix, substream
from .vertex_finder import IterationConfig, find_vertex

__all__ = [
    "DegenerateSampleError",
    "BoostFailureError",
    "LearnerConfig",
    "ExperimentReport",
    "LearnedSimplex",
    "BoostResult",
    "estimate_frame",
    "learn_simplex",
    "boost",
]

DEDUP_RADIUS_DEFAULT = math.sqrt(2.0) / 2.0

# Failure budget used when the repetition count is left unset.
COUPON_DELTA_DEFAULT = 0.1


class DegenerateSampleError(ValueError):
    """The sample covariance is singular, so no frame can be estimated."""


class BoostFailureError(RuntimeError):
    """No boosted run had enough nearby neighbors to be selected."""


def estimate_frame(sample: SampleMatrix | np.ndarray) -> AffineFrame:
    """Mean and Cholesky covariance factor of a point block.

    The covariance uses the biased 1/t normalizer.  Raises
    DegenerateSampleError when the covariance is not positive definite
    (fewer than d+1 points, or points on a lower-dimensional flat).
    """
    pts = sample.points if isinstance(sample, SampleMatrix) else np.atleast_2d(np.asarray(sample, dtype=float))
    t, d = pts.shape
    if t < d + 1:
        raise DegenerateSampleError(f"{t} points cannot determine a {d}-dimensional frame")
    mean = pts.mean(axis=0)
    centered = pts - mean
    cov = (centered.T @ centered) / t
    try:
        factor = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        raise DegenerateSampleError("sample covariance is singular") from exc
    return AffineFrame(mean=mean, factor=factor)


@dataclass(frozen=True)
class LearnerConfig:
    """Parameters for :func:`learn_simplex`.

    t1: points for the frame estimate (must be >= n+2).
    t3: fresh points per vertex-finder gradient evaluation.
    m: repetition budget; None picks the coupon-collector bound for
       uniform vertex hits with failure budget 0.1 (always >= n+1).
    dedup_radius: directions closer than this to an accepted one are
       duplicates; the default is half the standard simplex edge length.
    vertex_finder: template for the inner iteration (its
       sample_per_gradient must equal t3); None builds one from t3.
    share_sample: reuse a single t3 block for every gradient evaluation
       instead of drawing fresh ones, trading accuracy for sample size.
    """

    t1: int = 50_000
    t3: int = 50_000
    m: int | None = None
    dedup_radius: float = DEDUP_RADIUS_DEFAULT
    vertex_finder: IterationConfig | None = None
    seed: int = 0
    share_sample: bool = False

    def __post_init__(self):
        if self.t1 < 2 or self.t3 < 1:
            raise ValueError("t1 and t3 must be positive (t1 >= n+2 is checked at run time)")
        if self.m is not None and self.m < 1:
            raise ValueError("m must be >= 1 when given")
        if not 0.0 < self.dedup_radius < math.sqrt(2.0):
            raise ValueError("dedup_radius must lie in (0, sqrt(2))")
        if self.vertex_finder is not None and self.vertex_finder.sample_per_gradient != self.t3:
            raise ValueError("vertex_finder.sample_per_gradient must equal t3")

    def resolved_iteration(self) -> IterationConfig:
        if self.vertex_finder is not None:
            return self.vertex_finder
        return IterationConfig(sample_per_gradient=self.t3)

    def repetitions(self, n: int) -> int:
        if self.m is not None:
            return self.m
        return max(n + 1, coupon_trials_bound(n + 1, 1.0 / (n + 1), COUPON_DELTA_DEFAULT))


@dataclass
class ExperimentReport:
    """JSON-ready record of a learning run.

    per_vertex_match_error and tv_estimate need ground truth and are filled
    by harnesses that have it; the learner itself leaves them None.
    wall_time_ms is excluded from any byte-for-byte comparisons.
    """

    n: int
    config: dict
    found_count: int
    vertices: list | None
    per_vertex_match_error: list | None
    tv_estimate: float | None
    wall_time_ms: float
    seed: int
    schema_version: int = 1

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class LearnedSimplex:
    """Result of :func:`learn_simplex`; ``simplex`` is None when fewer than
    n+1 distinct vertex directions were found (the run is incomplete, never
    padded)."""

    simplex: Simplex | None
    found_count: int
    directions: np.ndarray
    report: ExperimentReport

    @property
    def complete(self) -> bool:
        return self.simplex is not None


def _per_repetition_seed(seed: int, rep: int) -> int:
    return int(np.random.SeedSequence(entropy=seed, spawn_key=(41, rep)).generate_state(1)[0])


def learn_simplex(sample_source: Callable[[int], np.ndarray], n: int, config: LearnerConfig) -> LearnedSimplex:
    """Learn an n-dimensional simplex from uniform samples.

    Args:
        sample_source: draw(count) callable yielding fresh iid uniform
            points from the unknown simplex in R^n.
        n: ambient (and simplex) dimension.
        config: see :class:`LearnerConfig`.

    Returns:
        LearnedSimplex.  The repetition loop stops as soon as n+1 distinct
        directions are found; if the budget runs out first the result is
        flagged incomplete and carries the vertices found so far.
    """
    started = time.perf_counter()
    if config.t1 < n + 2:
        raise ValueError(f"t1 must be at least n+2 = {n + 2}")
    frame = estimate_frame(sample_source(config.t1))
    emb = make_embed_map(n)
    iteration = config.resolved_iteration()
    reps = config.repetitions(n)

    shared_block = None
    if config.share_sample:
        shared_block = emb.forward(frame.forward(sample_source(config.t3)))

    def embedded_source() -> Callable[[int], np.ndarray]:
        if shared_block is not None:
            return lambda count: shared_block
        return lambda count: emb.forward(frame.forward(sample_source(count)))

    ones = np.ones(n + 1)
    accepted: list[np.ndarray] = []
    for rep in range(reps):
        rep_config = IterationConfig(
            iterations=iteration.iterations,
            sample_per_gradient=config.t3,
            seed=_per_repetition_seed(config.seed, rep),
            record_trace=iteration.record_trace,
        )
        result = find_vertex(embedded_source(), n + 1, rep_config)
        u = result.u
        # exact projection onto the hyperplane {u . 1 = 1}
        candidate = u + (1.0 - u.sum()) / (n + 1) * ones
        if all(np.linalg.norm(candidate - seen) > config.dedup_radius for seen in accepted):
            accepted.append(candidate)
        if len(accepted) == n + 1:
            break

    directions = np.array(accepted) if accepted else np.empty((0, n + 1))
    vertices = None
    if accepted:
        vertices = _back_map(directions, frame, emb, n)
    simplex = Simplex(vertices) if (vertices is not None and len(accepted) == n + 1) else None

    report = ExperimentReport(
        n=n,
        config=asdict(config),
        found_count=len(accepted),
        vertices=vertices.tolist() if vertices is not None else None,
        per_vertex_match_error=None,
        tv_estimate=None,
        wall_time_ms=(time.perf_counter() - started) * 1000.0,
        seed=config.seed,
    )
    return LearnedSimplex(simplex=simplex, found_count=len(accepted), directions=directions, report=report)


def _back_map(directions: np.ndarray, frame: AffineFrame, emb: EmbedMap, n: int) -> np.ndarray:
    """Map hyperplane directions back to input coordinates:

        v = sqrt((n+1)(n+2)) B A^T (u - 1/(n+1)) + mu.

    The same map written as frame.inverse(emb.inverse(u)) must agree; the
    assertion guards the two code paths against drifting apart.
    """
    explicit = math.sqrt((n + 1) * (n + 2)) * ((directions - 1.0 / (n + 1)) @ emb.basis) @ frame.factor.T + frame.mean
    composed = frame.inverse(emb.inverse(directions))
    if not np.allclose(explicit, composed, rtol=0.0, atol=1e-9 * (1.0 + np.abs(explicit).max())):
        raise AssertionError("back-map forms disagree; embedding or frame inversion is broken")
    return explicit


@dataclass
class BoostResult:
    """Consensus pick across repeated learning runs."""

    simplex: Simplex
    index: int
    neighbor_count: int
    threshold: float
    pairwise: np.ndarray


def boost(
    learn_runs: list[Simplex],
    eps_prime: float,
    tv_estimator: Callable[[Simplex, Simplex], float] | None = None,
    seed: int = 0,
) -> BoostResult:
    """Pick one run from many by pairwise total-variation consensus.

    If at least 2/3 of the runs are within eps_prime of the truth, some run
    has at least floor(2t/3) of all runs (itself included) within estimated
    distance (2 + 1/10) eps_prime, and any such run is within
    (3 + 2/10) eps_prime of the truth.  The first qualifying run is
    returned; BoostFailureError is raised when none qualifies.

    Args:
        learn_runs: at least 3 learned simplices.
        eps_prime: target accuracy of the individual runs.
        tv_estimator: pairwise distance estimate; defaults to Monte Carlo
            TV with a Hoeffding sample size for additive error eps_prime/10
            at confidence 0.95.
        seed: seed for the default estimator.
    """
    t = len(learn_runs)
    if t < 3:
        raise ValueError("boosting needs at least 3 runs")
    if eps_prime <= 0:
        raise ValueError("eps_prime must be positive")
    if tv_estimator is None:
        mc = hoeffding_sample_size(eps_prime / 10.0, 0.05)

        def tv_estimator(a: Simplex, b: Simplex, _mc=mc) -> float:
            return tv_distance_mc(a, b, _mc, rng=substream(seed, 53)).value

    pairwise = np.zeros((t, t))
    for i in range(t):
        for j in range(i + 1, t):
            pairwise[i, j] = pairwise[j, i] = tv_estimator(learn_runs[i], learn_runs[j])

    threshold = (2.0 + 0.1) * eps_prime
    needed = (2 * t) // 3
    counts = (pairwise <= threshold).sum(axis=1)  # diagonal counts the run itself
    for i in range(t):
        if counts[i] >= needed:
            return BoostResult(
                simplex=learn_runs[i],
                index=i,
                neighbor_count=int(counts[i]),
                threshold=threshold,
                pairwise=pairwise,
            )
    raise BoostFailureError(f"no run had {needed} of {t} runs within {threshold:.4g}")
