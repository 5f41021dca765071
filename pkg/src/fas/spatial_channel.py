"""Fluid-antenna port geometry, Jake's spatial correlation, and channel sampling.

The aperture is a line of N uniformly spaced ports spanning W wavelengths.
Adjacent-port correlation follows the isotropic-scattering kernel
J0(2*pi*d) for a separation of d wavelengths. Correlated Rayleigh draws come
from the eigen-factorization of the correlation matrix; the receiver always
activates the port with the largest instantaneous magnitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import toeplitz

from .special_functions import bessel_j0

__all__ = [
    "ApertureConfig",
    "CorrelationModel",
    "ChannelDraw",
    "NegativeEigenvalueError",
    "port_spacing",
    "build_jakes_model",
    "effective_rank",
    "channel_transform",
    "sample_channel",
    "sample_channel_block",
    "instantaneous_snr",
]

DEFAULT_RANK_THRESHOLD = 1e-10


class NegativeEigenvalueError(RuntimeError):
    """The correlation matrix came out non-PSD beyond rounding noise."""


@dataclass(frozen=True)
class ApertureConfig:
    """Physical geometry of the fluid antenna: N ports over W wavelengths.

    ``mean_powers`` holds the per-port average channel power (the squared
    diagonal of the RMS-level matrix); it defaults to all ones.
    """

    num_ports: int
    aperture_width: float
    mean_powers: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.num_ports < 1:
            raise ValueError(f"num_ports must be >= 1, got {self.num_ports}")
        if not (self.aperture_width >= 0.0) or not math.isfinite(self.aperture_width):
            raise ValueError(f"aperture_width must be >= 0, got {self.aperture_width}")
        powers = self.mean_powers
        if powers is None:
            powers = (1.0,) * self.num_ports
        else:
            powers = tuple(float(p) for p in powers)
            if len(powers) != self.num_ports:
                raise ValueError(
                    f"expected {self.num_ports} mean powers, got {len(powers)}"
                )
            if any(p <= 0.0 or not math.isfinite(p) for p in powers):
                raise ValueError("all mean powers must be positive and finite")
        object.__setattr__(self, "mean_powers", powers)

    @property
    def unit_powers(self) -> bool:
        return all(p == 1.0 for p in self.mean_powers)


@dataclass(frozen=True, eq=False)
class CorrelationModel:
    """Jake's correlation matrix plus its symmetric eigen-factorization.

    Eigenvalues are sorted descending. Eigenvalues at or below
    ``rank_threshold`` times the largest one do not count toward
    ``effective_rank`` or ``pseudo_log_det`` and are zeroed for sampling.
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    rank_threshold: float
    effective_rank: int = field(init=False)
    pseudo_log_det: float = field(init=False)

    def __post_init__(self) -> None:
        lam = np.asarray(self.eigenvalues, dtype=float)
        cutoff = self.rank_threshold * lam[0]
        retained = lam[lam > cutoff]
        object.__setattr__(self, "effective_rank", int(retained.size))
        object.__setattr__(self, "pseudo_log_det", float(np.sum(np.log(retained))))

    @property
    def num_ports(self) -> int:
        return self.matrix.shape[0]

    @property
    def sampling_eigenvalues(self) -> np.ndarray:
        """Eigenvalues with below-threshold entries clamped to zero."""
        lam = self.eigenvalues
        return np.where(lam > self.rank_threshold * lam[0], lam, 0.0)

    @property
    def retained_eigenvalues(self) -> np.ndarray:
        lam = self.eigenvalues
        return lam[lam > self.rank_threshold * lam[0]]


@dataclass(frozen=True, eq=False)
class ChannelDraw:
    """One correlated channel realization with best-port selection applied."""

    coefficients: np.ndarray
    best_port: int
    best_gain: float


def port_spacing(i: int, j: int, cfg: ApertureConfig) -> float:
    """Separation, in wavelengths, between ports i and j (1-based indices)."""
    n = cfg.num_ports
    if n < 2:
        raise ValueError("port_spacing is undefined for a single-port aperture")
    if not (1 <= i <= n) or not (1 <= j <= n):
        raise ValueError(f"port indices must lie in 1..{n}, got ({i}, {j})")
    return abs(i - j) * cfg.aperture_width / (n - 1)


def build_jakes_model(
    cfg: ApertureConfig, rank_threshold: float = DEFAULT_RANK_THRESHOLD
) -> CorrelationModel:
    """Build and factorize the Jake's-model correlation matrix for ``cfg``.

    Entries are J0(2*pi*W*|i-j|/(N-1)); the matrix is Toeplitz-symmetric by
    construction. Raises :class:`NegativeEigenvalueError` if the spectrum is
    negative beyond rounding noise.
    """
    if rank_threshold <= 0.0:
        raise ValueError(f"rank_threshold must be positive, got {rank_threshold}")
    n = cfg.num_ports
    if n == 1:
        first_row = np.array([1.0])
    else:
        step = 2.0 * math.pi * cfg.aperture_width / (n - 1)
        first_row = np.array([bessel_j0(step * m) for m in range(n)])
    matrix = toeplitz(first_row)

    lam, vec = np.linalg.eigh(matrix)
    order = np.argsort(lam)[::-1]
    lam = lam[order]
    vec = vec[:, order]

    if lam[-1] < -1e-8 * lam[0]:
        raise NegativeEigenvalueError(
            f"correlation matrix has eigenvalue {lam[-1]:.3e} "
            f"below -1e-8 * lambda_max = {-1e-8 * lam[0]:.3e}"
        )
    # rounding noise only: clamp small negatives so sqrt is safe downstream
    lam = np.maximum(lam, 0.0)

    return CorrelationModel(
        matrix=matrix,
        eigenvalues=lam,
        eigenvectors=vec,
        rank_threshold=float(rank_threshold),
    )


def effective_rank(model: CorrelationModel) -> int:
    """Count of eigenvalues above the relative rank threshold."""
    return model.effective_rank


def channel_transform(model: CorrelationModel, cfg: ApertureConfig) -> np.ndarray:
    """Matrix B with h = B z for z ~ CN(0, I): B = T U sqrt(Lambda)."""
    if cfg.num_ports != model.num_ports:
        raise ValueError("aperture and correlation model disagree on port count")
    amp = np.sqrt(np.asarray(cfg.mean_powers))
    return amp[:, None] * (model.eigenvectors * np.sqrt(model.sampling_eigenvalues))


def sample_channel_block(
    model: CorrelationModel,
    cfg: ApertureConfig,
    rng: np.random.Generator,
    count: int,
    transform: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Draw ``count`` correlated channel vectors at once.

    Returns (coefficients, best_ports, best_gains) with shapes
    (count, N), (count,), (count,). Real and imaginary parts of the i.i.d.
    source are each N(0, 1/2) so every source entry has unit power.
    """
    b = channel_transform(model, cfg) if transform is None else transform
    n = model.num_ports
    z = rng.standard_normal((count, 2 * n))
    z = (z[:, :n] + 1j * z[:, n:]) * math.sqrt(0.5)
    h = z @ b.T
    gains = np.abs(h)
    best = np.argmax(gains, axis=1)
    return h, best, gains[np.arange(count), best]


def sample_channel(
    model: CorrelationModel, cfg: ApertureConfig, rng: np.random.Generator
) -> ChannelDraw:
    """Draw one correlated channel vector and select the best port.

    ``best_port`` is a zero-based index; ties go to the lowest index.
    """
    h, best, gain = sample_channel_block(model, cfg, rng, 1)
    return ChannelDraw(
        coefficients=h[0], best_port=int(best[0]), best_gain=float(gain[0])
    )


def instantaneous_snr(draw: ChannelDraw, mean_snr: float) -> float:
    """Post-selection SNR: mean SNR times the squared best-port magnitude."""
    if not (mean_snr > 0.0):
        raise ValueError(f"mean_snr must be positive, got {mean_snr}")
    return mean_snr * draw.best_gain**2
