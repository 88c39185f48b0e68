import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from pydantic import ValidationError

from fzk.errors import GridError, ParameterError
from fzk.schemas import CutoffKind, DispersionParams, DyadicShell, GridSpec, SymbolFamily
from fzk.spectral import (
    Field, SpectralGrid, anisotropic_norm, apply_x1_derivative, dyadic_shells, homogeneous_sobolev_norm, lp_low_pass,
    lp_project, max_dyadic, propagate, random_shell_field, reflect_x1, shell_multiplier,
    shell_norms, smooth_step, sobolev_norm, symbol_multiplier,
)

from conftest import EXPONENTS, FAMILIES_2D


def random_complex_field(grid, rng):
    coeffs = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    return Field(grid, coeffs, real_flag=False)


# ============================================================================
# GRID AND TRANSFORMS
# ============================================================================

def test_grid_rejects_odd_modes():
    with pytest.raises(ValidationError):
        GridSpec(n=2, modes_per_dim=31)


def test_grid_rejects_oversized_lattice():
    with pytest.raises(ValidationError):
        GridSpec(n=3, modes_per_dim=128)


@pytest.mark.parametrize("n,M", [(1, 64), (2, 32), (3, 16)])
def test_round_trip_complex(n, M, rng):
    grid = SpectralGrid(n, M)
    f = random_complex_field(grid, rng)
    back = Field.from_physical(grid, f.to_physical(), real=False)
    assert_allclose(back.coeffs, f.coeffs, rtol=0, atol=1e-12 * np.max(np.abs(f.coeffs)))


def test_round_trip_real_without_nyquist(grid2, rng):
    f = random_shell_field(grid2, 4, rng, real=True)
    values = f.to_physical()
    assert values.dtype == np.float64
    back = Field.from_physical(grid2, values)
    assert back.real_flag
    assert_allclose(back.coeffs, f.coeffs, atol=1e-12)


def test_real_fields_drop_nyquist(grid2, rng):
    coeffs = rng.standard_normal(grid2.shape) + 0j
    f = Field(grid2, coeffs, real_flag=True)
    assert np.all(f.coeffs[grid2.nyquist_mask] == 0)


@pytest.mark.parametrize("period", [2 * math.pi, 10.0])
def test_parseval(period, rng):
    grid = SpectralGrid(2, 32, period)
    f = random_complex_field(grid, rng)
    assert f.physical_l2_norm() == pytest.approx(f.l2_norm(), rel=1e-12)


def test_single_real_mode_is_a_cosine(grid2):
    f = Field.single_mode(grid2, (1, 0), 0.5, real=True)
    x = grid2.physical_coordinates()
    assert_allclose(f.to_physical(), np.cos(x[0]) / (2 * math.pi), atol=1e-14)
    assert f.hermitian_defect() == 0.0


def test_padded_evaluation_matches_coarse_samples(grid2, rng):
    f = random_shell_field(grid2, 4, rng)
    fine = f.to_physical(pad_to=64)
    assert_allclose(fine[::2, ::2], f.to_physical(), atol=1e-12)


def test_single_mode_outside_lattice(grid2):
    with pytest.raises(GridError):
        Field.single_mode(grid2, (16, 0))


def test_fields_are_immutable(grid2):
    f = Field.zeros(grid2)
    with pytest.raises(ValueError):
        f.coeffs[0, 0] = 1.0


def test_arithmetic_requires_same_grid(grid2):
    with pytest.raises(GridError):
        Field.zeros(grid2) + Field.zeros(SpectralGrid(2, 16))


# ============================================================================
# SYMBOLS AND PROPAGATOR
# ============================================================================

@pytest.mark.parametrize(
    "family,expected",
    [
        (SymbolFamily.ISOTROPIC_FZK, 5),
        (SymbolFamily.MULTI_DIRECTIONAL_BO, 9),
        (SymbolFamily.RIBAUD_VENTO_2D, 3),
    ],
)
def test_exact_symbols_at_a_two(family, expected):
    params = DispersionParams(family=family, a=2.0, n=2)
    value = symbol_multiplier(params, np.array([1, 2]))
    assert value == expected
    assert np.issubdtype(np.asarray(value).dtype, np.integer)


@pytest.mark.parametrize("family", FAMILIES_2D)
@pytest.mark.parametrize("a", EXPONENTS)
def test_symbols_are_odd(family, a, rng):
    params = DispersionParams(family=family, a=a, n=2)
    xi = rng.uniform(-5, 5, size=(200, 2))
    assert_allclose(symbol_multiplier(params, -xi), -symbol_multiplier(params, xi), rtol=1e-14)


def test_symbol_dimension_mismatch(zk_params):
    with pytest.raises(ParameterError):
        symbol_multiplier(zk_params, np.array([1.0, 2.0, 3.0]))


def test_ribaud_vento_needs_two_dimensions():
    with pytest.raises(ValidationError):
        DispersionParams(family=SymbolFamily.RIBAUD_VENTO_2D, n=3)


@pytest.mark.parametrize("a", EXPONENTS)
def test_propagator_group_law(a, grid2, rng):
    params = DispersionParams(a=a, n=2)
    f = random_complex_field(grid2, rng)
    two_steps = propagate(propagate(f, 0.3, params), 0.45, params)
    assert_allclose(two_steps.coeffs, propagate(f, 0.75, params).coeffs, atol=1e-10 * np.max(np.abs(f.coeffs)))
    assert propagate(f, 0.75, params).l2_norm() == pytest.approx(f.l2_norm(), rel=1e-13)


def test_propagator_keeps_real_fields_real(grid2, rng, zk_params):
    f = random_shell_field(grid2, 8, rng)
    assert propagate(f, 1.7, zk_params).hermitian_defect() < 1e-13


# ============================================================================
# LITTLEWOOD-PALEY
# ============================================================================

def test_smooth_step_limits():
    r = np.array([0.0, 0.5, 1.0, 2.0, 3.0])
    assert_allclose(smooth_step(r), [1.0, 1.0, 1.0, 0.0, 0.0])
    middle = smooth_step(np.linspace(1.01, 1.99, 50))
    assert np.all(np.diff(middle) < 0)


def test_max_dyadic(grid2):
    assert max_dyadic(grid2) == 32
    assert dyadic_shells(grid2) == [1, 2, 4, 8, 16, 32]


@pytest.mark.parametrize("cutoff", [CutoffKind.SHARP, CutoffKind.SMOOTH])
@pytest.mark.parametrize("grid", [SpectralGrid(2, 64), SpectralGrid(3, 16), SpectralGrid(2, 32, 7.0)])
def test_partition_of_unity(cutoff, grid):
    total = sum(shell_multiplier(grid, DyadicShell(N=N, cutoff=cutoff)) for N in dyadic_shells(grid))
    assert_allclose(total, 1.0, atol=1e-12)


def test_sharp_shells_are_disjoint(grid2):
    masks = [shell_multiplier(grid2, DyadicShell(N=N)) for N in dyadic_shells(grid2)]
    assert np.all(sum(masks) == 1.0)


def test_frequency_three_belongs_to_shell_four(grid2):
    f = Field.single_mode(grid2, (3, 0))
    norms = shell_norms(f)
    assert norms[4] == pytest.approx(1.0)
    assert sum(norms.values()) == pytest.approx(1.0)


def test_shell_beyond_grid(grid2):
    with pytest.raises(GridError, match="shell beyond grid"):
        lp_project(Field.zeros(grid2), DyadicShell(N=64))


def test_dyadic_shell_label():
    with pytest.raises(ValidationError):
        DyadicShell(N=6)


def test_smooth_low_pass_telescopes(grid2, rng):
    f = random_complex_field(grid2, rng)
    pieces = [lp_project(f, DyadicShell(N=M, cutoff=CutoffKind.SMOOTH)) for M in (1, 2, 4, 8)]
    summed = pieces[0]
    for piece in pieces[1:]:
        summed = summed + piece
    assert_allclose(summed.coeffs, lp_low_pass(f, 8).coeffs, atol=1e-12)


def test_shell_projection_is_idempotent_for_sharp(grid2, rng):
    f = random_complex_field(grid2, rng)
    once = lp_project(f, DyadicShell(N=8))
    assert_allclose(lp_project(once, DyadicShell(N=8)).coeffs, once.coeffs)


@pytest.mark.parametrize("cutoff", [CutoffKind.SHARP, CutoffKind.SMOOTH])
def test_propagator_commutes_with_shell_projection(cutoff, grid2, rng):
    params = DispersionParams(a=1.5, n=2)
    f = random_complex_field(grid2, rng)
    shell = DyadicShell(N=4, cutoff=cutoff)
    left = propagate(lp_project(f, shell), 0.6, params)
    right = lp_project(propagate(f, 0.6, params), shell)
    assert_allclose(left.coeffs, right.coeffs, atol=1e-13)


# ============================================================================
# NORMS AND OPERATORS
# ============================================================================

def test_sobolev_norm_of_a_mode(grid2):
    f = Field.single_mode(grid2, (3, 4), 2.0)
    assert sobolev_norm(f, 0.0) == pytest.approx(2.0)
    assert sobolev_norm(f, 1.0) == pytest.approx(2.0 * math.sqrt(26.0))
    assert homogeneous_sobolev_norm(f, 1.0) == pytest.approx(10.0)


def test_homogeneous_norm_ignores_the_mean(grid2):
    f = Field.single_mode(grid2, (0, 0), 3.0)
    assert homogeneous_sobolev_norm(f, 2.0) == 0.0


def test_anisotropic_norm_weights_first_component(grid2):
    f = Field.single_mode(grid2, (0, 5))
    assert anisotropic_norm(f, 2.0) == pytest.approx(1.0)
    g = Field.single_mode(grid2, (2, 0))
    assert anisotropic_norm(g, 1.0) == pytest.approx(math.sqrt(5.0))


def test_anisotropic_norm_needs_the_plane(grid3):
    with pytest.raises(GridError, match="anisotropic norm defined for n = 2"):
        anisotropic_norm(Field.zeros(grid3), 1.0)


def test_reflect_x1_flips_the_first_frequency(grid2):
    f = Field.single_mode(grid2, (3, -2))
    reflected = reflect_x1(f)
    assert reflected.coeffs[(-3) % 32, (-2) % 32] == 1.0
    assert_allclose(reflect_x1(reflected).coeffs, f.coeffs)


def test_random_shell_field_support(grid2, rng):
    f = random_shell_field(grid2, 8, rng)
    outside = shell_multiplier(grid2, DyadicShell(N=8)) == 0.0
    assert np.all(f.coeffs[outside] == 0)
    assert f.hermitian_defect() < 1e-15


def test_x1_derivative_of_a_sine(grid2):
    x = grid2.physical_coordinates()
    f = Field.from_physical(grid2, np.sin(3 * x[0]) * np.cos(x[1]))
    assert_allclose(apply_x1_derivative(f).to_physical(), 3 * np.cos(3 * x[0]) * np.cos(x[1]), atol=1e-12)
