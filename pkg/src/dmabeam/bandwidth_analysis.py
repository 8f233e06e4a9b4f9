"""Frequency response of the optimally configured DMA.

With every element resonant at the operating frequency the gain
factorizes into an element term (a Lorentzian magnitude response shared
by all slots) and an array term (the squared Dirichlet sum).  The
element term dominates the frequency roll-off and admits closed-form
cutoff frequencies for any relative threshold nu.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.optimize import brentq

from .channel import dirichlet_kernel
from .core_model import CONSTANTS, DmaDesign
from .errors import DomainError

ARRAY_CUTOFF_TOL = 1e3   # Hz, bisection tolerance for full-array cutoffs


@dataclass(frozen=True)
class CutoffReport:
    """Element-gain cutoff frequencies for one threshold nu."""

    f_lower: float
    f_upper: float
    bandwidth: float
    nu: float
    approx_bandwidth: float


def element_gain(design: DmaDesign, f_t_star: float, f):
    """Per-element gain |Gamma f / (2 pi f*^2 - 2 pi f^2 + j Gamma f)|^2.

    Equals 1 exactly on resonance (f = f_t_star) and falls off on both
    sides.  Accepts scalar or array f.
    """
    f = np.asarray(f, dtype=float)
    if np.any(f <= 0):
        raise DomainError("frequency must be positive")
    g = design.damping * f
    det = 2.0 * np.pi * (f_t_star**2 - f**2)
    out = g**2 / (det**2 + g**2)
    return float(out) if out.ndim == 0 else out


def array_gain(design: DmaDesign, phi: float, f):
    """Array factor |1^T h(phi, f)|^2 = S(phi, f)^2."""
    s = dirichlet_kernel(design, phi, f)
    out = np.asarray(s) ** 2
    return float(out) if out.ndim == 0 else out


def cutoff_frequencies(design: DmaDesign, f_t_star: float, nu: float) -> CutoffReport:
    """Exact nu-cutoff frequencies of the element gain.

    With rho = nu / (1 - nu):

        f_{l,u} = sqrt(f*^2 + (Gamma^2 -+ sqrt(Gamma^4 + 16 Gamma^2 pi^2
                  f*^2 rho)) / (8 pi^2 rho))

    The first-order width Gamma / (2 pi sqrt(rho)) is reported alongside;
    for this response shape it coincides with f_upper - f_lower because
    f_upper * f_lower = f*^2 holds identically.
    """
    if not 0.0 < nu < 1.0:
        raise DomainError("nu must lie strictly between 0 and 1")
    if f_t_star <= 0:
        raise DomainError("f_t_star must be positive")
    gam = design.damping
    rho = nu / (1.0 - nu)
    root = np.sqrt(gam**4 + 16.0 * gam**2 * np.pi**2 * f_t_star**2 * rho)
    f_lower = np.sqrt(f_t_star**2 + (gam**2 - root) / (8.0 * np.pi**2 * rho))
    f_upper = np.sqrt(f_t_star**2 + (gam**2 + root) / (8.0 * np.pi**2 * rho))
    for f_edge in (f_lower, f_upper):
        if abs(element_gain(design, f_t_star, f_edge) - nu) > 1e-8:
            raise RuntimeError("cutoff closed form failed its own threshold check")
    return CutoffReport(
        f_lower=float(f_lower),
        f_upper=float(f_upper),
        bandwidth=float(f_upper - f_lower),
        nu=float(nu),
        approx_bandwidth=float(gam / (2.0 * np.pi * np.sqrt(rho))),
    )


def array_cutoff_frequencies(design: DmaDesign, phi: float, f_t_star: float,
                             nu: float) -> Tuple[float, float]:
    """Numerical nu-cutoffs of the whole-DMA response (element x array).

    The array factor only narrows the response around the configured peak,
    so the element-only cutoffs bracket the search on each side.  Solved
    by root bisection to ARRAY_CUTOFF_TOL.
    """
    if not 0.0 < nu < 1.0:
        raise DomainError("nu must lie strictly between 0 and 1")
    peak = element_gain(design, f_t_star, f_t_star) \
        * array_gain(design, phi, f_t_star)
    if peak <= 0:
        raise DomainError("array response vanishes at f_t_star; nothing to cut off")

    def excess(f):
        return element_gain(design, f_t_star, f) \
            * array_gain(design, phi, f) / peak - nu

    elem = cutoff_frequencies(design, f_t_star, nu)
    lo_bracket = elem.f_lower
    while excess(lo_bracket) > 0 and lo_bracket > 0.5 * elem.f_lower:
        lo_bracket *= 0.99
    hi_bracket = elem.f_upper
    while excess(hi_bracket) > 0 and hi_bracket < 2.0 * elem.f_upper:
        hi_bracket *= 1.01
    f_lower = brentq(excess, lo_bracket, f_t_star, xtol=ARRAY_CUTOFF_TOL)
    f_upper = brentq(excess, f_t_star, hi_bracket, xtol=ARRAY_CUTOFF_TOL)
    return float(f_lower), float(f_upper)
