"""Operating-frequency selection and waveguide design rules.

The array sum peaks whenever the normalized product
p = f d_y (n_g + sin phi) / c is an integer, so steering reduces to
picking the operating frequency that lands p on (or closest to) an
integer inside the tunable band.  The waveguide design rules choose the
refractive index and element spacing so an integer p is reachable for
every angle of a target sector.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .channel import dirichlet_of_p
from .core_model import CONSTANTS, DmaDesign
from .errors import DomainError, NoCrossoverError

GOLDEN_TOL = 1e-12   # interval tolerance for the lobe search, in p units
INV_PHI = (np.sqrt(5.0) - 1.0) / 2.0


class CoverageAngle(NamedTuple):
    """Maximum steerable angle and whether the arcsin argument saturated."""

    angle: float
    saturated: bool


@dataclass(frozen=True)
class OperatingPoint:
    """Optimal operating frequency for one angle of departure."""

    f_t_star: float
    p_star: float
    gain: float
    integer_case: bool


@dataclass(frozen=True)
class SectorDesign:
    """Waveguide parameters covering an angular sector with full gain."""

    phi_lower: float
    phi_upper: float
    n_g_star: float
    d_y_star: float
    p_star_choice: int


def golden_section_max(f, a: float, b: float, tol: float = GOLDEN_TOL) -> float:
    """Argmax of a unimodal f on [a, b] by golden-section search."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
        else:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
    return 0.5 * (a + b)


def optimal_operating_freq(design: DmaDesign, phi: float) -> OperatingPoint:
    """Best operating frequency in [f_min, f_max] for the given angle.

    If an integer p is reachable the gain hits N^2 exactly (smallest such
    integer wins when several are reachable).  Otherwise the Dirichlet
    magnitude is maximized lobe by lobe between its nulls, which keeps
    each golden-section run on a unimodal piece.
    """
    n = design.n_elements
    slope = design.spacing * (design.refractive_index + np.sin(phi)) / CONSTANTS.c
    if slope <= 0:
        raise DomainError("need n_g + sin(phi) > 0")
    p_min = design.f_min * slope
    p_max = design.f_max * slope
    first_int = np.ceil(p_min)
    if first_int <= p_max:
        p_star = float(first_int)
        return OperatingPoint(
            f_t_star=p_star / slope,
            p_star=p_star,
            gain=float(n ** 2),
            integer_case=True,
        )

    def objective(p):
        return abs(dirichlet_of_p(p, n))

    # Dirichlet nulls at multiples of 1/N partition [p_min, p_max] into
    # unimodal lobes; integer p is excluded here so no lobe holds the peak.
    k_lo = int(np.floor(p_min * n)) + 1
    k_hi = int(np.ceil(p_max * n)) - 1
    bounds = [p_min] + [k / n for k in range(k_lo, k_hi + 1)
                        if p_min < k / n < p_max] + [p_max]
    candidates = list(bounds)
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        candidates.append(golden_section_max(objective, lo, hi))
    values = [objective(p) for p in candidates]
    p_star = float(candidates[int(np.argmax(values))])
    s_best = max(values)
    # p/slope can land an ulp outside the band when p came from an edge.
    f_t_star = min(max(p_star / slope, design.f_min), design.f_max)
    return OperatingPoint(
        f_t_star=f_t_star,
        p_star=p_star,
        gain=float((n + s_best) ** 2 / 4.0),
        integer_case=False,
    )


def crossover_angle(design: DmaDesign, f_c: float) -> float:
    """The angle where the optimal operating frequency equals f_c (p = 1)."""
    arg = CONSTANTS.c / (f_c * design.spacing) - design.refractive_index
    if abs(arg) > 1.0:
        raise NoCrossoverError(
            f"no angle steers p=1 to {f_c:.4g} Hz with this design")
    return float(np.arcsin(arg))


def design_sector(phi_lower: float, phi_upper: float, f_min: float,
                  f_max: float, p_star: int = 1) -> SectorDesign:
    """Refractive index and spacing covering [phi_lower, phi_upper].

    The closed forms place p = p_star at f_max for the lower sector edge
    and at f_min for the upper edge, so every angle between reaches an
    integer p inside the band.
    """
    if not (0 < f_min < f_max):
        raise DomainError("need 0 < f_min < f_max")
    if not phi_lower < phi_upper:
        raise DomainError("need phi_lower < phi_upper")
    if p_star < 1:
        raise DomainError("p_star must be a positive integer")
    s_up, s_lw = np.sin(phi_upper), np.sin(phi_lower)
    n_g = (s_up - s_lw) / 2.0 * (f_max + f_min) / (f_max - f_min) \
        - (s_up + s_lw) / 2.0
    d_y = CONSTANTS.c * p_star * (f_max - f_min) / ((s_up - s_lw) * f_min * f_max)
    return SectorDesign(
        phi_lower=float(phi_lower),
        phi_upper=float(phi_upper),
        n_g_star=float(n_g),
        d_y_star=float(d_y),
        p_star_choice=int(p_star),
    )


def max_coverage_angle(n_g_max: float, tuning_range: float,
                       f_c: float) -> CoverageAngle:
    """Largest steerable angle from broadside for a given tuning range.

    phi_max = arcsin(n_g_max T_r / (2 f_c)); when the argument exceeds 1
    the whole front half-space is reachable and the result saturates at
    pi/2.
    """
    if n_g_max <= 0 or tuning_range < 0 or f_c <= 0:
        raise DomainError("arguments must be positive (tuning_range >= 0)")
    arg = n_g_max * tuning_range / (2.0 * f_c)
    if arg > 1.0:
        return CoverageAngle(angle=float(np.pi / 2.0), saturated=True)
    return CoverageAngle(angle=float(np.arcsin(arg)), saturated=False)
