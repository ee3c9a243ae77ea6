"""Monte Carlo generation of masked Wigner matrices and spectral summaries.

Entries are produced by a counter-based stream: every upper-triangle slot
``(i, j)`` of every replica owns one 64-bit counter, and the drawn value
is a pure function of ``(seed, replica, i, j)``.  Matrices are therefore
bit-identical regardless of execution order or thread count, and the
visible and invisible masks of the same stream partition the unmasked
matrix exactly, entry by entry.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.special import ndtri

from .euler import totient_sum
from .moments import free_cumulants_from_moments

MASKS = ("none", "visible", "invisible")
ENTRY_LAWS = ("gaussian", "rademacher", "uniform")

#: Second moments of the visible / invisible limit laws, used for rescaling.
VISIBLE_VARIANCE = 6.0 / math.pi**2
INVISIBLE_VARIANCE = 1.0 - VISIBLE_VARIANCE

_M64 = (1 << 64) - 1
_GAMMA_INT = 0x9E3779B97F4A7C15
_GAMMA = np.uint64(_GAMMA_INT)
_MIX_A = np.uint64(0xBF58476D1CE4E5B9)
_MIX_B = np.uint64(0x94D049BB133111EB)


@dataclass(frozen=True)
class EnsembleSpec:
    """Configuration of one simulated ensemble."""

    n: int
    mask: str = "none"
    entry_law: str = "gaussian"
    seed: int = 0
    replicas: int = 1

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("matrix dimension must be at least 2")
        if self.mask not in MASKS:
            raise ValueError(f"mask must be one of {MASKS}")
        if self.entry_law not in ENTRY_LAWS:
            raise ValueError(f"entry law must be one of {ENTRY_LAWS}")
        if self.replicas < 1:
            raise ValueError("replica count must be positive")


@dataclass(frozen=True)
class SpectrumSample:
    """Eigenvalues (ascending) of one simulated, n^(-1/2)-scaled matrix."""

    eigenvalues: np.ndarray
    spec: EnsembleSpec
    replica_index: int


def _mix64_int(x: int) -> int:
    x &= _M64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _M64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _M64
    x ^= x >> 31
    return x


def _mix64(x: np.ndarray) -> np.ndarray:
    x = x.copy()
    x ^= x >> np.uint64(30)
    x *= _MIX_A
    x ^= x >> np.uint64(27)
    x *= _MIX_B
    x ^= x >> np.uint64(31)
    return x


def entry_uniforms(seed: int, replica_index: int, count: int) -> np.ndarray:
    """``count`` uniforms in (0, 1), one per counter, keyed by (seed, replica)."""
    key = _mix64_int(_mix64_int(seed) + _GAMMA_INT * (replica_index + 1))
    counters = np.arange(1, count + 1, dtype=np.uint64)
    hashed = _mix64(np.uint64(key) + _GAMMA * counters)
    return ((hashed >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


def _law_values(uniforms: np.ndarray, law: str) -> np.ndarray:
    if law == "gaussian":
        return ndtri(uniforms)
    if law == "rademacher":
        return np.where(uniforms < 0.5, -1.0, 1.0)
    if law == "uniform":
        return math.sqrt(3.0) * (2.0 * uniforms - 1.0)
    raise ValueError(f"unknown entry law {law!r}")


def mask_matrix(n: int, mask: str) -> np.ndarray:
    """Boolean keep-matrix of a mask on 1-based index pairs."""
    if mask == "none":
        return np.ones((n, n), dtype=bool)
    idx = np.arange(1, n + 1)
    g = np.gcd.outer(idx, idx)
    return g == 1 if mask == "visible" else g != 1


def generate_matrix(spec: EnsembleSpec, replica_index: int) -> np.ndarray:
    """One symmetric n x n matrix, masked and scaled by n^(-1/2).

    The underlying unmasked entries depend only on (seed, replica, i, j),
    so the visible and the invisible matrix of the same spec satisfy
    ``visible + invisible == unmasked`` exactly.
    """
    n = spec.n
    u = entry_uniforms(spec.seed, replica_index, n * (n + 1) // 2)
    values = _law_values(u, spec.entry_law)
    mat = np.zeros((n, n))
    mat[np.triu_indices(n)] = values
    mat = mat + np.triu(mat, 1).T
    if spec.mask != "none":
        mat *= mask_matrix(n, spec.mask)
    mat /= math.sqrt(n)
    return mat


def mask_density(n: int, mask: str) -> Fraction:
    """Exact fraction of index pairs in (1..n)^2 kept by the mask."""
    if n < 1:
        raise ValueError("n must be positive")
    if mask not in MASKS:
        raise ValueError(f"mask must be one of {MASKS}")
    if mask == "none":
        return Fraction(1)
    visible = Fraction(2 * totient_sum(n) - 1, n * n)
    return visible if mask == "visible" else 1 - visible


def eigenvalues(matrix: np.ndarray, check_residuals: bool = False, check_count: int = 3) -> np.ndarray:
    """Ascending spectrum of a dense symmetric matrix.

    With ``check_residuals`` the eigenvectors are computed as well and
    ``check_count`` randomly chosen pairs must satisfy
    ``|A v - lambda v| <= 1e-8 * |A|``.
    """
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError("matrix must be square")
    if not np.array_equal(matrix, matrix.T):
        raise ValueError("matrix must be symmetric")
    if not check_residuals:
        return np.linalg.eigvalsh(matrix)
    w, v = np.linalg.eigh(matrix)
    norm = float(np.max(np.abs(w))) or 1.0
    rng = np.random.default_rng(0)
    for col in rng.choice(len(w), size=min(check_count, len(w)), replace=False):
        residual = float(np.linalg.norm(matrix @ v[:, col] - w[col] * v[:, col]))
        if residual > 1e-8 * norm:
            raise ArithmeticError(f"eigenpair residual {residual:.3e} exceeds 1e-8 * |A|")
    return w


def sample_spectra(spec: EnsembleSpec, workers: int = 1) -> list[SpectrumSample]:
    """Spectra of all replicas; a pure function of the spec, whatever ``workers`` is."""

    def one(r: int) -> SpectrumSample:
        return SpectrumSample(eigenvalues(generate_matrix(spec, r)), spec, r)

    indices = range(spec.replicas)
    if workers <= 1:
        return [one(r) for r in indices]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, indices))


def rescale_factor(mask: str) -> float:
    """Multiplier taking a mask's spectrum to unit limiting second moment."""
    if mask == "visible":
        return 1.0 / math.sqrt(VISIBLE_VARIANCE)
    if mask == "invisible":
        return 1.0 / math.sqrt(INVISIBLE_VARIANCE)
    return 1.0


@dataclass
class SpectralSummary:
    """Replica-resolved and pooled spectral statistics.

    Moments and the histogram describe the (optionally rescaled)
    eigenvalues; ``lambda_max`` always refers to the natural n^(-1/2)
    scale.  Pooled moments average the per-replica moments in replica
    order, so aggregation does not depend on execution order.
    """

    spec: EnsembleSpec
    replica_indices: np.ndarray
    moments: np.ndarray            # (replicas, moment_max)
    pooled_moments: np.ndarray     # (moment_max,)
    free_cumulants: np.ndarray     # (min(5, moment_max),)
    lambda_max: np.ndarray         # (replicas,)
    lambda_max_mean: float
    lambda_max_sd: float
    hist_edges: np.ndarray
    hist_counts: np.ndarray
    hist_density: np.ndarray
    scale: float
    max_fluctuations: np.ndarray | None = None
    kde_grid: np.ndarray | None = None
    kde_density: np.ndarray | None = None


def summarize(
    samples: Sequence[SpectrumSample],
    *,
    bins: int = 81,
    hist_range: tuple[float, float] | None = None,
    moment_max: int = 8,
    rescale: bool = False,
    kde: bool = False,
    center: float | None = None,
) -> SpectralSummary:
    """Summarize replica spectra: moments, cumulants, extremes, histogram.

    ``center`` switches on the largest-eigenvalue fluctuation export
    ``n^(2/3) * (lambda_max - center)``.
    """
    if not samples:
        raise ValueError("need at least one spectrum sample")
    ordered = sorted(samples, key=lambda s: s.replica_index)
    spec = ordered[0].spec
    eigs = np.stack([s.eigenvalues for s in ordered])
    scale = rescale_factor(spec.mask) if rescale else 1.0
    scaled = eigs * scale

    moments = np.stack(
        [np.mean(scaled**h, axis=1) for h in range(1, moment_max + 1)], axis=1
    )
    pooled = moments.mean(axis=0)
    kappas = np.array(free_cumulants_from_moments(list(pooled[: min(5, moment_max)])))

    lam = eigs[:, -1]
    lam_mean = float(lam.mean())
    lam_sd = float(lam.std(ddof=1)) if len(lam) > 1 else 0.0

    pooled_eigs = scaled.ravel()
    if hist_range is None:
        hist_range = (float(pooled_eigs.min()), float(pooled_eigs.max()))
    counts, edges = np.histogram(pooled_eigs, bins=bins, range=hist_range)
    width = edges[1] - edges[0]
    density = counts / (pooled_eigs.size * width)

    fluct = None
    if center is not None:
        fluct = spec.n ** (2.0 / 3.0) * (lam - center)

    kde_grid = kde_density = None
    if kde:
        from scipy.stats import gaussian_kde

        kde_grid = np.linspace(hist_range[0], hist_range[1], 256)
        kde_density = gaussian_kde(pooled_eigs, bw_method="silverman")(kde_grid)

    return SpectralSummary(
        spec=spec,
        replica_indices=np.array([s.replica_index for s in ordered]),
        moments=moments,
        pooled_moments=pooled,
        free_cumulants=kappas,
        lambda_max=lam,
        lambda_max_mean=lam_mean,
        lambda_max_sd=lam_sd,
        hist_edges=edges,
        hist_counts=counts,
        hist_density=density,
        scale=scale,
        max_fluctuations=fluct,
        kde_grid=kde_grid,
        kde_density=kde_density,
    )
