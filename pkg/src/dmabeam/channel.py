"""Line-of-sight effective channel between a DMA and a far-field receiver.

The feed wave accrues an intrinsic phase inside the waveguide before
radiating from each slot; free-space propagation toward azimuth phi adds
the extrinsic array phase.  Both are linear in frequency and element
index, which makes the coherent array sum a Dirichlet kernel in the
normalized product p = f d_y (n_g + sin phi) / c.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core_model import CONSTANTS, DmaDesign
from .errors import DomainError

# Relative closeness to an integer below which the Dirichlet ratio is
# replaced by its limit value; the gain optimum lives exactly at integer p.
NEAR_INTEGER_TOL = 1e-9


@dataclass(frozen=True)
class Channel:
    """Effective channel vector h(phi, f) together with its arguments."""

    entries: np.ndarray
    aod: float
    freq: float


def intrinsic_phase(design: DmaDesign, n: int, f: float) -> float:
    """Waveguide phase at element n (1-based): -n_g 2 pi (f/c) (n-1) d_y."""
    if not 1 <= n <= design.n_elements:
        raise DomainError(f"element index {n} outside 1..{design.n_elements}")
    return -design.refractive_index * 2.0 * np.pi * (f / CONSTANTS.c) \
        * (n - 1) * design.spacing


def extrinsic_phase(design: DmaDesign, n: int, phi: float, f: float) -> float:
    """Free-space array phase at element n: -2 pi (f/c) (n-1) d_y sin(phi)."""
    if not 1 <= n <= design.n_elements:
        raise DomainError(f"element index {n} outside 1..{design.n_elements}")
    return -2.0 * np.pi * (f / CONSTANTS.c) * (n - 1) * design.spacing * np.sin(phi)


def combined_phases(design: DmaDesign, phi: float, f: float) -> np.ndarray:
    """Total per-element phase, -2 pi (f/c) (n-1) d_y (n_g + sin phi)."""
    idx = np.arange(design.n_elements)
    return -2.0 * np.pi * (f / CONSTANTS.c) * idx * design.spacing \
        * (design.refractive_index + np.sin(phi))


def attenuation_vector(design: DmaDesign) -> np.ndarray:
    """Exponential per-element magnitude decay g_n = exp(-alpha (n-1) d_y).

    The decay rate is frequency-flat.  All ones when the design carries no
    attenuation.
    """
    if design.attenuation is None:
        return np.ones(design.n_elements)
    idx = np.arange(design.n_elements)
    return np.exp(-design.attenuation * idx * design.spacing)


def effective_channel(design: DmaDesign, phi: float, f: float,
                      with_attenuation: bool = False) -> Channel:
    """Effective channel h(phi, f), optionally with waveguide attenuation."""
    entries = np.exp(1j * combined_phases(design, phi, f))
    if with_attenuation:
        entries = entries * attenuation_vector(design)
    return Channel(entries=entries, aod=float(phi), freq=float(f))


def normalized_product(design: DmaDesign, phi, f):
    """The dimensionless product p = f d_y (n_g + sin phi) / c."""
    return np.asarray(f) * design.spacing \
        * (design.refractive_index + np.sin(np.asarray(phi))) / CONSTANTS.c


def dirichlet_kernel(design: DmaDesign, phi, f):
    """Coherent array sum S = sin(pi N p) / sin(pi p).

    The removable singularity at integer p is evaluated analytically:
    S -> N (-1)^{p (N-1)}.  Accepts scalars or arrays.
    """
    n = design.n_elements
    p = np.asarray(normalized_product(design, phi, f), dtype=float)
    return dirichlet_of_p(p, n)


def dirichlet_of_p(p, n: int):
    """Dirichlet kernel as a function of the normalized product itself."""
    p = np.asarray(p, dtype=float)
    nearest = np.round(p)
    near = np.abs(p - nearest) < NEAR_INTEGER_TOL
    den = np.sin(np.pi * p)
    ratio = np.sin(np.pi * n * p) / np.where(near, 1.0, den)
    limit = n * np.where((nearest.astype(np.int64) * (n - 1)) % 2 == 0, 1.0, -1.0)
    out = np.where(near, limit, ratio)
    return float(out) if out.ndim == 0 else out
