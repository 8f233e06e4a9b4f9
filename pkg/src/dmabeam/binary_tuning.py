"""Exhaustive gain maximization over binary on/off element weights.

The benchmark constrains each element weight to {0, 1}: an element is
either transparent (weight 1, no Lorentzian phase shaping) or switched
off.  The best mask is found by full enumeration, which is exact and
deterministic: among equal-gain masks the lexicographically smallest
wins.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import effective_channel
from .core_model import DmaDesign
from .errors import EnumerationLimitError

MAX_ELEMENTS = 24          # 2^N enumeration guard
_CHUNK = 1 << 16


@dataclass(frozen=True)
class BinarySolution:
    """Best binary mask and its gain for one (phi, f) pair."""

    mask: np.ndarray
    gain: float


def solve_p4(design: DmaDesign, phi: float, f_c: float,
             with_attenuation: bool = False) -> BinarySolution:
    """Globally optimal binary weights by exhaustive enumeration.

    Masks are scanned in lexicographic order (element 1 most significant),
    so the first occurrence of the maximum gain is the lexicographically
    smallest optimal mask.
    """
    n = design.n_elements
    if n > MAX_ELEMENTS:
        raise EnumerationLimitError(
            f"{n} elements need 2^{n} masks; limit is {MAX_ELEMENTS}")
    h = effective_channel(design, phi, f_c, with_attenuation).entries
    shifts = n - 1 - np.arange(n)
    best_gain = -1.0
    best_index = 0
    total = 1 << n
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        bits = (idx[:, None] >> shifts) & 1
        gains = np.abs(bits @ h) ** 2
        k = int(np.argmax(gains))
        if gains[k] > best_gain:
            best_gain = float(gains[k])
            best_index = int(idx[k])
    mask = (best_index >> shifts) & 1
    return BinarySolution(mask=mask.astype(np.int8), gain=best_gain)
