"""Clustered multipath channel model for large uniform linear arrays.

The propagation model is a sparse sum of planar wavefronts: each path has a
complex gain and a departure/arrival angle pair, and the channel matrix is the
gain-weighted sum of outer products of the array responses at those angles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ArrayGeometry",
    "SystemDims",
    "PathSet",
    "ula_response",
    "draw_paths",
    "assemble_channel",
]


@dataclass(frozen=True)
class ArrayGeometry:
    """Uniform linear array geometry, element spacing in carrier wavelengths."""

    spacing_over_wavelength: float = 0.5

    def __post_init__(self) -> None:
        if not self.spacing_over_wavelength > 0:
            raise ValueError(
                f"element spacing must be positive, got {self.spacing_over_wavelength}"
            )

    @property
    def phase_factor(self) -> float:
        """Per-element phase increment coefficient 2*pi*d/lambda."""
        return 2.0 * math.pi * self.spacing_over_wavelength


@dataclass(frozen=True)
class SystemDims:
    """Antenna and RF-chain counts for one point-to-point link.

    The number of data streams equals the RF chain count on both ends; this
    is the working assumption of the whole package and is enforced here.
    """

    n_tx: int
    n_rx: int
    n_tx_rf: int
    n_rx_rf: int
    n_streams: int

    def __post_init__(self) -> None:
        for name in ("n_tx", "n_rx", "n_tx_rf", "n_rx_rf", "n_streams"):
            value = getattr(self, name)
            if not (isinstance(value, int) and value >= 1):
                raise ValueError(f"{name} must be a positive integer, got {value!r}")
        if not (self.n_tx_rf == self.n_rx_rf == self.n_streams):
            raise ValueError(
                "stream count must match the RF chain count on both sides, got "
                f"n_tx_rf={self.n_tx_rf}, n_rx_rf={self.n_rx_rf}, n_streams={self.n_streams}"
            )
        if self.n_tx < self.n_tx_rf or self.n_rx < self.n_rx_rf:
            raise ValueError(
                f"antenna counts ({self.n_tx}, {self.n_rx}) must be at least the "
                f"RF chain counts ({self.n_tx_rf}, {self.n_rx_rf})"
            )

    @classmethod
    def symmetric(cls, n_tx: int, n_rx: int, n_rf: int) -> "SystemDims":
        """Dims with the same RF chain count on both sides and one stream per chain."""
        return cls(n_tx=n_tx, n_rx=n_rx, n_tx_rf=n_rf, n_rx_rf=n_rf, n_streams=n_rf)


@dataclass(frozen=True)
class PathSet:
    """One draw of propagation paths: complex gains plus departure/arrival angles."""

    gains: np.ndarray
    aod: np.ndarray
    aoa: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "gains", np.asarray(self.gains, dtype=np.complex128))
        object.__setattr__(self, "aod", np.asarray(self.aod, dtype=np.float64))
        object.__setattr__(self, "aoa", np.asarray(self.aoa, dtype=np.float64))
        if self.gains.ndim != 1 or self.aod.ndim != 1 or self.aoa.ndim != 1:
            raise ValueError("gains, aod and aoa must be one-dimensional")
        if not (len(self.gains) == len(self.aod) == len(self.aoa)):
            raise ValueError(
                f"path arrays must have equal length, got {len(self.gains)}, "
                f"{len(self.aod)}, {len(self.aoa)}"
            )
        if len(self.gains) < 1:
            raise ValueError("a path set needs at least one path")

    @property
    def n_paths(self) -> int:
        return len(self.gains)


def ula_response(n_antennas: int, angle: float, geometry: ArrayGeometry = ArrayGeometry()) -> np.ndarray:
    """Unit-norm array response of an n-element uniform linear array.

    Element m carries phase m * (2*pi*d/lambda) * sin(angle); the vector is
    scaled by 1/sqrt(n_antennas) so its Euclidean norm is exactly 1.

    Args:
        n_antennas: number of array elements, >= 1.
        angle: azimuth angle in radians.
        geometry: element spacing description.

    Returns:
        Complex vector of shape (n_antennas,).
    """
    if not (isinstance(n_antennas, int) and n_antennas >= 1):
        raise ValueError(f"n_antennas must be a positive integer, got {n_antennas!r}")
    phases = np.arange(n_antennas) * (geometry.phase_factor * math.sin(angle))
    return np.exp(1j * phases) / math.sqrt(n_antennas)


def draw_paths(n_paths: int, rng: np.random.Generator) -> PathSet:
    """Draw one random path set.

    Gains are circularly-symmetric complex normal with unit variance, drawn as
    (x + jy)/sqrt(2) with x, y standard normal; both angle kinds are uniform
    on [0, pi). Draw order is fixed (gain real parts, gain imaginary parts,
    departures, arrivals) so a seeded generator reproduces the set exactly.
    """
    if not (isinstance(n_paths, int) and n_paths >= 1):
        raise ValueError(f"n_paths must be a positive integer, got {n_paths!r}")
    x = rng.standard_normal(n_paths)
    y = rng.standard_normal(n_paths)
    gains = (x + 1j * y) / math.sqrt(2.0)
    aod = rng.uniform(0.0, math.pi, n_paths)
    aoa = rng.uniform(0.0, math.pi, n_paths)
    return PathSet(gains=gains, aod=aod, aoa=aoa)


def assemble_channel(
    dims: SystemDims,
    paths: PathSet,
    geometry: ArrayGeometry = ArrayGeometry(),
) -> np.ndarray:
    """Assemble the (n_rx, n_tx) channel matrix from a path set.

    H = sqrt(n_tx*n_rx/L) * sum_l gain_l * a_rx(aoa_l) a_tx(aod_l)^H, which
    normalizes the expected squared Frobenius norm to n_tx*n_rx.
    """
    l_paths = paths.n_paths
    a_rx = np.column_stack([ula_response(dims.n_rx, a, geometry) for a in paths.aoa])
    a_tx = np.column_stack([ula_response(dims.n_tx, a, geometry) for a in paths.aod])
    scale = math.sqrt(dims.n_tx * dims.n_rx / l_paths)
    return scale * (a_rx * paths.gains) @ a_tx.conj().T
