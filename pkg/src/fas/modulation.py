"""Coherent modulation formats: conditional-SER parameters and constellations.

Each supported scheme maps to a (p, k) pair such that the symbol error
probability conditioned on a channel power x is p * Q(sqrt(k * x * snr)).
For BPSK the expression is exact; for the higher-order families it is the
standard nearest-neighbor form, which the symbol-level detection path is
there to cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc as _erfc

from .special_functions import gaussian_q

__all__ = [
    "SCHEMES",
    "ModulationSpec",
    "Constellation",
    "params_of",
    "conditional_ser",
    "build_constellation",
    "detect",
]

SCHEMES = ("bpsk", "psk", "pam", "qam")


def _is_power_of_two(m: int) -> bool:
    return m >= 1 and (m & (m - 1)) == 0


@dataclass(frozen=True)
class ModulationSpec:
    """Scheme identifier, order, and the conditional-SER pair (p, k)."""

    scheme: str
    order: int
    p: float
    k: float

    @property
    def label(self) -> str:
        return "bpsk" if self.scheme == "bpsk" else f"{self.order}{self.scheme}"


@dataclass(frozen=True, eq=False)
class Constellation:
    """Unit-average-energy symbol set; ``labels[i]`` names ``points[i]``."""

    points: np.ndarray
    labels: tuple[int, ...]


def params_of(scheme: str, order: int) -> ModulationSpec:
    """Conditional-SER parameters (p, k) for a scheme/order pair.

    bpsk: p=1, k=2. M-PSK (M >= 4, power of two): p=2, k=2 sin^2(pi/M).
    M-PAM (M >= 2): p=2(1-1/M), k=6/(M^2-1). Square M-QAM (M in 4,16,64,...):
    p=4(1-1/sqrt(M)), k=3/(M-1).
    """
    scheme = scheme.lower()
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    if scheme == "bpsk":
        if order != 2:
            raise ValueError(f"bpsk requires order 2, got {order}")
        return ModulationSpec("bpsk", 2, 1.0, 2.0)
    if scheme == "psk":
        if order < 4 or not _is_power_of_two(order):
            raise ValueError(f"psk requires a power-of-two order >= 4, got {order}")
        return ModulationSpec("psk", order, 2.0, 2.0 * math.sin(math.pi / order) ** 2)
    if scheme == "pam":
        if order < 2:
            raise ValueError(f"pam requires order >= 2, got {order}")
        return ModulationSpec(
            "pam", order, 2.0 * (1.0 - 1.0 / order), 6.0 / (order**2 - 1)
        )
    # qam: square grid, so the order must be an even power of two >= 4
    root = math.isqrt(order)
    if order < 4 or root * root != order or not _is_power_of_two(order):
        raise ValueError(
            f"qam requires a perfect-square power-of-two order >= 4, got {order}"
        )
    return ModulationSpec(
        "qam", order, 4.0 * (1.0 - 1.0 / root), 3.0 / (order - 1)
    )


def conditional_ser(x, mean_snr: float, spec: ModulationSpec):
    """SER conditioned on channel power x: p * Q(sqrt(k * x * mean_snr)).

    Accepts a scalar or an ndarray of channel powers.
    """
    if not (mean_snr > 0.0):
        raise ValueError(f"mean_snr must be positive, got {mean_snr}")
    if isinstance(x, np.ndarray):
        if np.any(x < 0.0):
            raise ValueError("channel power x must be nonnegative")
        z = np.sqrt(spec.k * x * mean_snr)
        return spec.p * 0.5 * _erfc(z / math.sqrt(2.0))
    if x < 0.0:
        raise ValueError(f"channel power x must be nonnegative, got {x}")
    return spec.p * gaussian_q(math.sqrt(spec.k * x * mean_snr))


def build_constellation(spec: ModulationSpec) -> Constellation:
    """Normalized constellation for ``spec`` (unit mean symbol energy)."""
    m = spec.order
    if spec.scheme == "bpsk":
        points = np.array([1.0 + 0.0j, -1.0 + 0.0j])
    elif spec.scheme == "psk":
        points = np.exp(2j * math.pi * np.arange(m) / m)
    elif spec.scheme == "pam":
        points = (2.0 * np.arange(m) - (m - 1)).astype(complex)
    else:  # qam: square grid of two pam axes
        side = math.isqrt(m)
        axis = 2.0 * np.arange(side) - (side - 1)
        re, im = np.meshgrid(axis, axis, indexing="ij")
        points = (re + 1j * im).ravel()
    points = points / math.sqrt(float(np.mean(np.abs(points) ** 2)))
    return Constellation(points=points, labels=tuple(range(m)))


def detect(received: complex, effective_gain: float, constellation: Constellation) -> int:
    """Minimum-distance decision: argmin |received - gain * point|.

    Ties resolve to the lowest index.
    """
    if effective_gain < 0.0:
        raise ValueError(f"effective_gain must be nonnegative, got {effective_gain}")
    dist = np.abs(received - effective_gain * constellation.points)
    return int(np.argmin(dist))
