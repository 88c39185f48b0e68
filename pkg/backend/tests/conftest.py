import math

import numpy as np
import pytest

from fzk.config import DEFAULT_THREADS
from fzk.schemas import DispersionParams, GridSpec, SolverConfig, SymbolFamily
from fzk.spectral import SpectralGrid
from fzk.utils.parallel import configure_threads

FAMILIES_2D = [SymbolFamily.ISOTROPIC_FZK, SymbolFamily.MULTI_DIRECTIONAL_BO, SymbolFamily.RIBAUD_VENTO_2D]
EXPONENTS = [1.0, 1.5, 2.0]


@pytest.fixture(autouse=True)
def reset_threads():
    yield
    configure_threads(DEFAULT_THREADS)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def grid2():
    return SpectralGrid(2, 32)


@pytest.fixture
def grid3():
    return SpectralGrid(3, 16)


@pytest.fixture
def zk_params():
    return DispersionParams(a=2.0, n=2)


def solver_config(a: float = 2.0, M: int = 32, T: float = 0.02, family=SymbolFamily.ISOTROPIC_FZK, **kwargs) -> SolverConfig:
    """Solver config whose dt sits safely inside the phase-resolution bound"""
    params = DispersionParams(family=family, a=a, n=2)
    cut = (M - 1) // 3
    dt = kwargs.pop("dt", 0.2 / (2.0 * cut * (math.sqrt(2.0) * cut) ** a))
    return SolverConfig(params=params, grid=GridSpec(n=2, modes_per_dim=M), dt=dt, T=T, **kwargs)
