"""Deterministic, batch-parallel Gaussian Monte Carlo over projective space.

The invariant measure is realized by drawing standard complex Gaussian
vectors (independent N(0,1) real and imaginary parts per component) and
projecting to the unit sphere; integrands are averaged over the projected
directions. The stream for batch k is derived from (seed, k) and batches are
reduced in ascending k, so results are bit-identical for any worker count.
The worker cap comes from the PROJMI_THREADS environment variable.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadParameter,
    NonFiniteSample,
    ReconstructionOutOfTolerance,
    ValidationError,
)
from .projective import ProjectivePoint
from .states import DensityMatrix, validate_density

DEFAULT_BATCH_SIZE = 4096
_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class SamplerConfig:
    """Seed, sample count and batch size of one Monte Carlo run.

    ``batch_size`` is clamped to ``n_samples`` so every batch is nonempty.
    """

    seed: int
    n_samples: int
    batch_size: int = DEFAULT_BATCH_SIZE

    def __post_init__(self):
        if self.n_samples < 2:
            raise BadParameter(f"n_samples must be >= 2, got {self.n_samples}")
        if self.batch_size < 1:
            raise BadParameter(f"batch_size must be >= 1, got {self.batch_size}")
        if self.batch_size > self.n_samples:
            object.__setattr__(self, "batch_size", self.n_samples)


@dataclass(frozen=True)
class MCEstimate:
    """Monte Carlo result: mean, standard error, and reproduction metadata."""

    mean: float
    std_error: float
    n_samples: int
    seed: int
    method: str


def substream(seed: int, index: int) -> np.random.Generator:
    """Deterministic generator for batch ``index`` of a run seeded by ``seed``."""
    return np.random.default_rng(np.random.SeedSequence([seed & _SEED_MASK, index]))


def worker_count() -> int:
    """Worker cap: PROJMI_THREADS if set, else available parallelism."""
    raw = os.environ.get("PROJMI_THREADS", "").strip()
    if raw:
        try:
            return max(1, int(raw))
        except ValueError as exc:
            raise BadParameter(f"PROJMI_THREADS must be an integer, got {raw!r}") from exc
    return max(1, os.cpu_count() or 1)


def gaussian_sample(n: int, rng: np.random.Generator) -> np.ndarray:
    """One length-n complex vector with 2n i.i.d. standard normal coordinates."""
    z = rng.standard_normal(2 * n)
    return z[:n] + 1j * z[n:]


def _gaussian_batch(rng: np.random.Generator, m: int, n: int) -> np.ndarray:
    z = rng.standard_normal((m, 2 * n))
    return z[:, :n] + 1j * z[:, n:]


def _unit_rows(z: np.ndarray) -> np.ndarray:
    return z / np.linalg.norm(z, axis=1)[:, None]


def _batch_sizes(cfg: SamplerConfig) -> list[int]:
    full, rem = divmod(cfg.n_samples, cfg.batch_size)
    sizes = [cfg.batch_size] * full
    if rem:
        sizes.append(rem)
    return sizes


def _run_batches(cfg: SamplerConfig, batch_values) -> tuple[float, float]:
    """Mean and standard error of ``batch_values(rng, m) -> (m,) array``.

    The standard error estimates the per-sample standard deviation from the
    spread of batch means (single-batch runs fall back to the within-batch
    spread) and divides by sqrt(n_samples).
    """
    sizes = _batch_sizes(cfg)
    n_batches = len(sizes)
    offsets = [i * cfg.batch_size for i in range(n_batches)]

    def task(k: int):
        rng = substream(cfg.seed, k)
        values = np.asarray(batch_values(rng, sizes[k]), dtype=float)
        finite = np.isfinite(values)
        if not finite.all():
            bad = int(np.argmin(finite))
            raise NonFiniteSample(
                f"integrand returned a non-finite value at sample {offsets[k] + bad}"
            )
        return float(values.sum()), float(values @ values), sizes[k]

    workers = min(worker_count(), n_batches)
    if workers <= 1:
        results = [task(k) for k in range(n_batches)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(task, range(n_batches)))

    total = 0.0
    for batch_sum, _, _ in results:
        total += batch_sum
    mean = total / cfg.n_samples

    if n_batches >= 2:
        spread = 0.0
        for batch_sum, _, m in results:
            delta = batch_sum / m - mean
            spread += m * delta * delta
        var_sample = spread / (n_batches - 1)
    else:
        batch_sum, sq, m = results[0]
        var_sample = max(sq - m * mean * mean, 0.0) / (m - 1)
    return mean, float(np.sqrt(var_sample / cfg.n_samples))


def _direction_evaluator(f, batch_f):
    if batch_f is not None:
        return batch_f
    if f is None:
        raise BadParameter("either f or batch_f must be provided")

    def rowwise(points: np.ndarray) -> np.ndarray:
        return np.array([f(ProjectivePoint(row)) for row in points], dtype=float)

    return rowwise


def _pair_evaluator(f, batch_f):
    if batch_f is not None:
        return batch_f
    if f is None:
        raise BadParameter("either f or batch_f must be provided")

    def rowwise(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        return np.array(
            [f(ProjectivePoint(x), ProjectivePoint(y)) for x, y in zip(xs, ys)],
            dtype=float,
        )

    return rowwise


def integrate_nu(f, n: int, cfg: SamplerConfig, *, batch_f=None) -> MCEstimate:
    """Integral of f over the invariant probability measure on rays.

    ``f`` maps a ProjectivePoint to a real; a vectorized ``batch_f`` taking an
    (m, n) array of unit rows may be supplied instead for speed.
    """
    evaluate = _direction_evaluator(f, batch_f)

    def batch_values(rng, m):
        return evaluate(_unit_rows(_gaussian_batch(rng, m, n)))

    mean, se = _run_batches(cfg, batch_values)
    return MCEstimate(mean, se, cfg.n_samples, cfg.seed, "nu")


def integrate_mu(f, n: int, cfg: SamplerConfig, *, batch_f=None) -> MCEstimate:
    """Integral over the invariant measure of total mass n (n times the nu integral)."""
    est = integrate_nu(f, n, cfg, batch_f=batch_f)
    return MCEstimate(n * est.mean, n * est.std_error, est.n_samples, est.seed, "mu")


def integrate_product_nu(
    f, n_a: int, n_b: int, cfg: SamplerConfig, *, batch_f=None
) -> MCEstimate:
    """Integral of f(p, q) over independent invariant directions of two factors."""
    evaluate = _pair_evaluator(f, batch_f)

    def batch_values(rng, m):
        xs = _unit_rows(_gaussian_batch(rng, m, n_a))
        ys = _unit_rows(_gaussian_batch(rng, m, n_b))
        return evaluate(xs, ys)

    mean, se = _run_batches(cfg, batch_values)
    return MCEstimate(mean, se, cfg.n_samples, cfg.seed, "product_nu")


def gaussian_expectation(f, n: int, cfg: SamplerConfig, *, batch_f=None) -> MCEstimate:
    """Expectation of f(x) over raw (unnormalized) standard complex Gaussians."""
    if batch_f is not None:
        evaluate = batch_f
    elif f is not None:
        def evaluate(xs):
            return np.array([f(x) for x in xs], dtype=float)
    else:
        raise BadParameter("either f or batch_f must be provided")

    def batch_values(rng, m):
        return evaluate(_gaussian_batch(rng, m, n))

    mean, se = _run_batches(cfg, batch_values)
    return MCEstimate(mean, se, cfg.n_samples, cfg.seed, "gaussian")


def gaussian_pair_expectation(
    f, n_a: int, n_b: int, cfg: SamplerConfig, *, batch_f=None
) -> MCEstimate:
    """Expectation of f(x, y) over independent raw Gaussian vectors."""
    if batch_f is not None:
        evaluate = batch_f
    elif f is not None:
        def evaluate(xs, ys):
            return np.array([f(x, y) for x, y in zip(xs, ys)], dtype=float)
    else:
        raise BadParameter("either f or batch_f must be provided")

    def batch_values(rng, m):
        xs = _gaussian_batch(rng, m, n_a)
        ys = _gaussian_batch(rng, m, n_b)
        return evaluate(xs, ys)

    mean, se = _run_batches(cfg, batch_values)
    return MCEstimate(mean, se, cfg.n_samples, cfg.seed, "gaussian_pair")


def reconstruct_density_matrix(rho, n: int, cfg: SamplerConfig) -> DensityMatrix:
    """Recover the state behind a Liouville-density evaluator from second moments.

    Uses sigma_hat = n(n+1) E[rho(p) p] - I over the invariant measure; the
    accumulated matrix is symmetrized, validated at the relaxed tolerance
    5e-2, then clamped and trace-normalized to a strictly valid state.
    """
    evaluate = getattr(rho, "eval_batch", None)
    if evaluate is None:
        def evaluate(points):
            return np.array([rho(ProjectivePoint(row)) for row in points], dtype=float)

    sizes = _batch_sizes(cfg)
    accum = np.zeros((n, n), dtype=complex)
    for k, m in enumerate(sizes):
        rng = substream(cfg.seed, k)
        points = _unit_rows(_gaussian_batch(rng, m, n))
        weights = np.asarray(evaluate(points), dtype=float)
        finite = np.isfinite(weights)
        if not finite.all():
            bad = int(np.argmin(finite))
            raise NonFiniteSample(
                f"density returned a non-finite value at sample {k * cfg.batch_size + bad}"
            )
        accum += np.einsum("b,bi,bj->ij", weights, points, points.conj(), optimize=True)

    moment = accum / cfg.n_samples
    raw = n * (n + 1) * moment - np.eye(n)
    sym = (raw + raw.conj().T) / 2
    try:
        validate_density(sym, tol=5e-2)
    except ValidationError as exc:
        raise ReconstructionOutOfTolerance(
            f"reconstructed matrix failed relaxed validation: {exc}"
        ) from exc
    vals, vecs = np.linalg.eigh(sym)
    clamped = (vecs * np.maximum(vals, 0.0)) @ vecs.conj().T
    repaired = clamped / np.trace(clamped).real
    return validate_density(repaired)
