"""Lorentzian element model for a dynamic metasurface antenna (DMA).

A DMA is a waveguide feeding N radiating slots.  Each slot behaves as a
Lorentzian resonator whose resonant frequency is the only tunable knob:
magnitude and phase of the element weight are coupled through the
resonance and cannot be set independently.  The reachable weight set is
a circle of radius 1/2 centered at -j/2 in the complex plane.

All frequencies are in Hz, angles in radians, lengths in meters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError, InfeasibleElementError, SingularityError

# Tolerance (rad) around the tangent pole of the resonance map.
SINGULARITY_TOL = 1e-9


@dataclass(frozen=True)
class PhysicalConstants:
    """Universal constants used throughout (rounded convention values)."""

    c: float = 3.0e8          # speed of light, m/s (exactly 3e8 by convention)
    eta0: float = 377.0       # free-space impedance, ohm
    k_B: float = 1.38e-23     # Boltzmann constant, J/K

    def __post_init__(self):
        if self.c <= 0 or self.eta0 <= 0 or self.k_B <= 0:
            raise DomainError("physical constants must be strictly positive")


CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class DmaDesign:
    """Immutable physical description of one waveguide.

    Attributes:
        n_elements: number of radiating slots N.
        spacing: inter-element spacing d_y along the waveguide, m.
        refractive_index: waveguide refractive index n_g (>= 1).
        damping: Lorentzian damping factor Gamma, Hz.
        coupling: Lorentzian coupling strength F, m^3.
        f_min, f_max: tunable operating-frequency range, Hz.
        attenuation: optional per-meter waveguide attenuation alpha (>= 0);
            None models the ideal lossless guide.
    """

    n_elements: int
    spacing: float
    refractive_index: float
    damping: float
    coupling: float
    f_min: float
    f_max: float
    attenuation: Optional[float] = None

    def __post_init__(self):
        if self.n_elements < 1:
            raise DomainError("n_elements must be >= 1")
        if self.spacing <= 0:
            raise DomainError("spacing must be positive")
        if self.refractive_index < 1:
            raise DomainError("refractive_index must be >= 1")
        if self.damping <= 0:
            raise DomainError("damping must be positive")
        if self.coupling <= 0:
            raise DomainError("coupling must be positive")
        if not (0 < self.f_min < self.f_max):
            raise DomainError("need 0 < f_min < f_max")
        if self.attenuation is not None and self.attenuation < 0:
            raise DomainError("attenuation must be >= 0")

    def quality_factor(self, f: float) -> float:
        """Q evaluated at the frequency of use, Q(f) = 2 pi f / Gamma."""
        return 2.0 * np.pi * f / self.damping


@dataclass(frozen=True)
class ResonantConfig:
    """The per-element resonant frequencies currently programmed."""

    f_r: np.ndarray

    def __post_init__(self):
        arr = np.atleast_1d(np.asarray(self.f_r, dtype=float))
        object.__setattr__(self, "f_r", arr)
        if arr.ndim != 1:
            raise DomainError("f_r must be a 1-d vector")
        if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
            raise DomainError("resonant frequencies must be finite and positive")

    def __len__(self) -> int:
        return self.f_r.size


def polarizability(design: DmaDesign, f_r_n, f):
    """Magnetic polarizability of one slot, m^3.

    alpha(f) = F * 2 pi f^2 / (2 pi f_r^2 - 2 pi f^2 + j Gamma f).
    The imaginary damping term keeps the denominator away from zero for
    every positive frequency.  Accepts scalars or arrays.
    """
    f_r_n = np.asarray(f_r_n, dtype=float)
    f = np.asarray(f, dtype=float)
    if np.any(f <= 0) or np.any(f_r_n <= 0):
        raise DomainError("frequencies must be positive")
    den = 2.0 * np.pi * f_r_n**2 - 2.0 * np.pi * f**2 + 1j * design.damping * f
    out = design.coupling * 2.0 * np.pi * f**2 / den
    return complex(out) if out.ndim == 0 else out


def psi_angle(design: DmaDesign, f_r_n, f):
    """Lorentzian phase angle psi = atan2(-Gamma f, 2 pi (f_r^2 - f^2)).

    Always in [-pi, 0]: 0- far below resonance, -pi/2 on resonance,
    -pi far above.
    """
    f_r_n = np.asarray(f_r_n, dtype=float)
    f = np.asarray(f, dtype=float)
    if np.any(f <= 0) or np.any(f_r_n <= 0):
        raise DomainError("frequencies must be positive")
    out = np.arctan2(-design.damping * f, 2.0 * np.pi * (f_r_n**2 - f**2))
    return float(out) if out.ndim == 0 else out


def beamformer_weight(design: DmaDesign, f_r_n, f):
    """Dimensionless element weight w = -sin(psi) e^{j psi}.

    The polarizability factors as alpha = -F Q sin(psi) e^{j psi}; this is
    the frequency-normalized part that acts as the beamforming weight.
    It always lies on the circle |w + j/2| = 1/2.
    """
    psi = psi_angle(design, f_r_n, f)
    out = -np.sin(psi) * np.exp(1j * np.asarray(psi))
    return complex(out) if np.ndim(out) == 0 else out


def weight_from_shifted(psi_tilde):
    """Element weight expressed through the shifted angle psi_tilde."""
    psi = np.asarray(psi_tilde) / 2.0 - np.pi / 4.0
    out = -np.sin(psi) * np.exp(1j * psi)
    return complex(out) if np.ndim(out) == 0 else out


def shift_origin(psi):
    """Map the Lorentzian angle psi in [-pi, 0] to psi_tilde = 2 psi + pi/2.

    The shifted angle parameterizes the weight circle around its center,
    ranging over [-3 pi/2, pi/2].
    """
    psi = np.asarray(psi, dtype=float)
    if np.any(psi < -np.pi - 1e-12) or np.any(psi > 1e-12):
        raise DomainError("psi must lie in [-pi, 0]")
    out = 2.0 * psi + np.pi / 2.0
    return float(out) if out.ndim == 0 else out


def unshift_origin(psi_tilde):
    """Inverse of shift_origin: psi = psi_tilde / 2 - pi/4."""
    psi_tilde = np.asarray(psi_tilde, dtype=float)
    lo, hi = -1.5 * np.pi, 0.5 * np.pi
    if np.any(psi_tilde < lo - 1e-12) or np.any(psi_tilde > hi + 1e-12):
        raise DomainError("psi_tilde must lie in [-3pi/2, pi/2]")
    out = psi_tilde / 2.0 - np.pi / 4.0
    return float(out) if out.ndim == 0 else out


def resonant_from_shifted(design: DmaDesign, psi_tilde: float, f_t: float) -> float:
    """Resonant frequency realizing a requested shifted angle at f_t.

    f_r = sqrt(f_t^2 + (Gamma f_t / 2 pi) tan(pi/4 + psi_tilde/2)).

    Raises SingularityError within SINGULARITY_TOL of the tangent poles
    (psi_tilde -> -3pi/2 or pi/2, where |f_r| would need to be 0 or
    infinite) and InfeasibleElementError when the square-root argument is
    negative (the requested angle is not reachable by any real resonance
    at this operating frequency).
    """
    if f_t <= 0:
        raise DomainError("f_t must be positive")
    half = np.pi / 4.0 + psi_tilde / 2.0
    if abs(half) >= np.pi / 2.0 - SINGULARITY_TOL:
        raise SingularityError(
            f"psi_tilde={psi_tilde:.6f} sits on the tangent singularity")
    arg = f_t**2 + design.damping * f_t / (2.0 * np.pi) * np.tan(half)
    if arg < 0:
        raise InfeasibleElementError(
            None, f"psi_tilde={psi_tilde:.6f} needs an imaginary resonance at f_t={f_t:.4g}")
    return float(np.sqrt(arg))
