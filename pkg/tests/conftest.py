"""Shared fixtures: the reference 12-18 GHz waveguide and its stacked array."""

import numpy as np
import pytest

import dmabeam as db

F_C = 15e9


@pytest.fixture(scope="session")
def design():
    """8-slot waveguide, 12-18 GHz band, Q = 50 at band center."""
    return db.DmaDesign(n_elements=8, spacing=1.0 / 120.0, refractive_index=2.5,
                        damping=2 * np.pi * F_C / 50, coupling=1e-9,
                        f_min=12e9, f_max=18e9)


@pytest.fixture(scope="session")
def layout(design):
    """Four stacked waveguides, one training group until a codebook exists."""
    return db.ArrayLayout(n_dmas=4, per_dma=design, groups=1)
