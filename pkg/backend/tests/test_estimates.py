import math

import numpy as np
import pytest
from scipy import integrate

from fzk.errors import ParameterError, WrapAroundError
from fzk.estimates import (
    KERNEL_TOLERANCE, bilinear_ratio, bilinear_report, check_admissible, default_x_sampler,
    kernel_decay_scan, kernel_integral, kernel_integral_tensor, linear_strichartz_ratio, radial_profile,
    shorttime_amelioration, shorttime_report, strichartz_exponent, strichartz_report,
)
from fzk.schemas import DispersionParams, Domain, EstimateProbe, GridSpec, SymbolFamily, Verdict
from fzk.spectral import Field, SpectralGrid, random_shell_field

from conftest import EXPONENTS


def plane_probe(a=2.0, M=32, shells=(8,), **kwargs) -> EstimateProbe:
    return EstimateProbe(
        params=DispersionParams(a=a, n=2),
        grid=GridSpec(n=2, modes_per_dim=M),
        shells=list(shells),
        low_shell=kwargs.pop("low_shell", 1),
        **kwargs,
    )


# ============================================================================
# KERNEL
# ============================================================================

@pytest.mark.parametrize("profile", ["bump", "littlewood-paley"])
def test_kernel_at_the_origin_is_the_profile_mass(profile):
    params = DispersionParams(a=2.0, n=3)
    psi = radial_profile(profile)
    expected, _ = integrate.quad(lambda r: 4 * math.pi * r ** 2 * float(psi(np.array([r]))[0]), 0.5, 2.0, limit=200)
    value = kernel_integral(np.zeros(3), 0.0, params, profile)
    assert value.imag == 0.0
    assert value.real == pytest.approx(expected, rel=1e-7)


@pytest.mark.parametrize("a", [1.0, 2.0])
@pytest.mark.parametrize("t,x1", [(1.0, 0.5), (2.0, -3.0), (0.5, 1.0)])
def test_kernel_on_axis_matches_angular_quadrature(a, t, x1):
    params = DispersionParams(a=a, n=3)
    psi = radial_profile("bump")

    def integrand(c, r):
        return 2 * math.pi * r ** 2 * float(psi(np.array([r]))[0]) * math.cos(r * (t * r ** a + x1) * c)

    expected, _ = integrate.dblquad(integrand, 0.5, 2.0, -1.0, 1.0, epsabs=1e-12, epsrel=1e-11)
    value = kernel_integral(np.array([x1, 0.0, 0.0]), t, params)
    assert value.real == pytest.approx(expected, rel=1e-5, abs=1e-8)


def test_kernel_depends_on_transverse_radius_only():
    params = DispersionParams(a=1.5, n=3)
    first = kernel_integral(np.array([0.3, 1.0, 0.0]), 2.0, params)
    second = kernel_integral(np.array([0.3, 0.6, 0.8]), 2.0, params)
    assert first.real == pytest.approx(second.real, rel=1e-8)


def test_kernel_refinement_is_stable():
    params = DispersionParams(a=2.0, n=3)
    x = np.array([-8.0, 1.0, 2.0])
    coarse = kernel_integral(x, 4.0, params)
    fine = kernel_integral(x, 4.0, params, refine=2)
    assert abs(fine - coarse) <= KERNEL_TOLERANCE * abs(fine)


@pytest.mark.parametrize("a", [1.0, 2.0])
def test_tensor_quadrature_agrees_with_radial_reduction(a):
    params = DispersionParams(a=a, n=3)
    x = np.array([0.3, 0.0, 0.2])
    radial = kernel_integral(x, 0.25, params)
    tensor = kernel_integral_tensor(x, 0.25, params, refine=2)
    assert abs(tensor - radial) <= 1e-5 * abs(radial)


def test_kernel_is_conjugate_symmetric():
    params = DispersionParams(a=1.5, n=3)
    x = np.array([0.4, -0.2, 0.1])
    assert kernel_integral(-x, -3.0, params) == pytest.approx(np.conj(kernel_integral(x, 3.0, params)), rel=1e-12)
    forward = kernel_integral_tensor(x, 0.5, params)
    backward = kernel_integral_tensor(-x, -0.5, params)
    assert abs(backward - np.conj(forward)) <= 1e-10 * abs(forward)


def test_kernel_rejects_the_plane():
    with pytest.raises(ParameterError, match="n ≥ 3"):
        kernel_integral(np.zeros(2), 1.0, DispersionParams(a=2.0, n=2))


def test_kernel_rejects_other_families():
    with pytest.raises(ParameterError):
        kernel_integral(np.zeros(3), 1.0, DispersionParams(family=SymbolFamily.MULTI_DIRECTIONAL_BO, a=2.0, n=3))


def test_default_sampler_is_seeded():
    sampler = default_x_sampler(3, axial_points=4, far_points=2, seed=5)
    first, second = sampler(8.0), sampler(8.0)
    assert first.shape == (2 * 4 + 1 + 2, 3)
    assert np.array_equal(first, second)


def test_kernel_decay_scan_structure():
    params = DispersionParams(a=2.0, n=3)
    report = kernel_decay_scan(params, [1.0, 2.0, 4.0], default_x_sampler(3, 5, 1))
    assert [row.t for row in report.rows] == [1.0, 2.0, 4.0]
    assert report.c_emp == max(row.sup_value for row in report.rows)
    assert report.self_consistency is not None and report.self_consistency <= KERNEL_TOLERANCE


def test_kernel_decay_scan_rejects_zero_time():
    with pytest.raises(ParameterError):
        kernel_decay_scan(DispersionParams(a=2.0, n=3), [0.0, 1.0])


@pytest.mark.slow
@pytest.mark.parametrize("a", [1.0, 2.0])
def test_kernel_decay_acceptance(a):
    report = kernel_decay_scan(DispersionParams(a=a, n=3), [1, 2, 4, 8, 16, 32, 64])
    assert report.verdict == Verdict.PASS
    assert report.self_consistency <= KERNEL_TOLERANCE


# ============================================================================
# BILINEAR AND SHORT-TIME
# ============================================================================

def single_mode_pair(grid, N):
    return Field.single_mode(grid, (N, 0)), Field.single_mode(grid, (1, 0))


def test_bilinear_closed_form():
    probe = plane_probe(domain=Domain.PERIODIC, trials=1)
    grid = SpectralGrid.from_spec(probe.grid)
    report = bilinear_report(probe, 8, data=[single_mode_pair(grid, 8)])
    assert report.T == 1.0
    assert report.lhs[0] == pytest.approx(1.0 / (2 * math.pi), rel=1e-12)
    assert report.ratio[0] == pytest.approx(8.0 / (2 * math.pi), rel=1e-12)


def test_shorttime_closed_form():
    probe = plane_probe(domain=Domain.PERIODIC, trials=1)
    grid = SpectralGrid.from_spec(probe.grid)
    report = shorttime_report(probe, 8, data=[single_mode_pair(grid, 8)])
    assert report.T == 1.0
    assert report.lhs[0] == pytest.approx(9.0 / (2 * math.pi), rel=1e-12)
    assert report.ratio[0] == pytest.approx(9.0 / (2 * math.pi), rel=1e-12)


def test_shorttime_horizon_shrinks_with_frequency():
    probe = plane_probe(a=1.5, domain=Domain.PERIODIC, trials=1)
    grid = SpectralGrid.from_spec(probe.grid)
    report = shorttime_report(probe, 8, data=[single_mode_pair(grid, 8)])
    assert report.T == pytest.approx(8.0 ** -0.5)


@pytest.mark.parametrize("report_fn", [bilinear_report, shorttime_report])
def test_ratio_ignores_the_data_amplitude(report_fn, rng):
    request = plane_probe(a=1.5, domain=Domain.PERIODIC, time_horizon=0.05, trials=1)
    grid = SpectralGrid.from_spec(request.grid)
    u0, v0 = random_shell_field(grid, 8, rng), random_shell_field(grid, 1, rng)
    base = report_fn(request, 8, data=[(u0, v0)])
    scaled = report_fn(request, 8, data=[(3.7 * u0, v0)])
    assert scaled.lhs[0] == pytest.approx(3.7 * base.lhs[0], rel=1e-12)
    assert scaled.ratio[0] == pytest.approx(base.ratio[0], rel=1e-12)


def test_bilinear_requires_separated_shells():
    with pytest.raises(ParameterError, match="shells not separated"):
        bilinear_report(plane_probe(low_shell=2, domain=Domain.PERIODIC, time_horizon=0.01), 8)


def test_euclidean_horizon_guard():
    probe = plane_probe(shells=[8], time_horizon=1.0, trials=1)
    with pytest.raises(WrapAroundError):
        bilinear_report(probe, 8)


def test_transit_guard():
    probe = plane_probe(shells=[8], time_horizon=1e-5, domain=Domain.PERIODIC, trials=1)
    with pytest.raises(ParameterError, match="transit guard"):
        bilinear_report(probe, 8)


def test_undersampled_time_grid_is_rejected():
    probe = plane_probe(shells=[8], time_horizon=1.0, time_samples=3, domain=Domain.PERIODIC, trials=1)
    with pytest.raises(ParameterError, match="does not resolve"):
        bilinear_report(probe, 8)


def test_euclidean_default_horizon_is_the_wraparound_cap():
    probe = plane_probe(a=1.5, shells=[8], trials=2)
    report = bilinear_report(probe, 8)
    assert 0.0 < report.T < 1.0
    assert len(report.ratio) == 2


def test_bilinear_sweep_is_deterministic():
    probe = plane_probe(a=1.5, M=64, shells=[8, 16], time_horizon=0.01, domain=Domain.PERIODIC, trials=3, rng_seed=7)
    first = bilinear_ratio(probe)
    second = bilinear_ratio(probe)
    assert first.kind == "VerifyBilinear"
    assert [r.N for r in first.reports] == [8, 16]
    assert first.reports[1].lhs == second.reports[1].lhs
    assert first.statistic >= 1.0
    assert first.convergence_delta is not None


def test_shorttime_sweep_with_injected_data():
    probe = plane_probe(M=64, shells=[8, 16], domain=Domain.PERIODIC, trials=1)
    grid = SpectralGrid.from_spec(probe.grid)
    data = {N: [single_mode_pair(grid, N)] for N in (8, 16)}
    summary = shorttime_amelioration(probe, data)
    # |d_1(u v)| = (N + 1) / L against N (K / N^2)^(1/2) = 1 at T = 1
    assert summary.reports[0].ratio[0] == pytest.approx(9 / (2 * math.pi), rel=1e-12)
    assert summary.reports[1].ratio[0] == pytest.approx(17 / (2 * math.pi), rel=1e-12)
    assert summary.statistic == pytest.approx(17 / 9)
    assert summary.verdict == Verdict.PASS


@pytest.mark.slow
@pytest.mark.parametrize("a", EXPONENTS)
@pytest.mark.parametrize("K", [1, 2])
def test_bilinear_acceptance(a, K):
    probe = EstimateProbe(
        params=DispersionParams(a=a, n=2), grid=GridSpec(n=2, modes_per_dim=256),
        shells=[16, 32, 64], low_shell=K, trials=50,
    )
    summary = bilinear_ratio(probe)
    assert summary.verdict == Verdict.PASS


@pytest.mark.slow
@pytest.mark.parametrize("K", [1, 2])
def test_shorttime_acceptance(K):
    probe = EstimateProbe(
        params=DispersionParams(a=1.0, n=2), grid=GridSpec(n=2, modes_per_dim=256),
        shells=[16, 32, 64], low_shell=K, trials=50, domain=Domain.PERIODIC,
    )
    summary = shorttime_amelioration(probe)
    assert summary.verdict == Verdict.PASS


@pytest.mark.slow
@pytest.mark.parametrize("a", [1.5, 2.0])
@pytest.mark.parametrize("K", [1, 2])
def test_shorttime_reduced_grid(a, K):
    # time samples grow like T max|phi|, too many on the 256 lattice once T = N^(a-2) nears 1
    probe = EstimateProbe(
        params=DispersionParams(a=a, n=2), grid=GridSpec(n=2, modes_per_dim=64),
        shells=[8, 16, 32] if K == 1 else [16, 32], low_shell=K, trials=10, domain=Domain.PERIODIC,
    )
    summary = shorttime_amelioration(probe)
    assert summary.verdict == Verdict.PASS


# ============================================================================
# LINEAR STRICHARTZ
# ============================================================================

def test_admissible_pairs():
    check_admissible(4.0, 4.0)
    check_admissible(math.inf, 2.0)
    with pytest.raises(ParameterError, match="not admissible"):
        check_admissible(3.0, 3.0)
    with pytest.raises(ParameterError, match="not admissible"):
        check_admissible(2.0, math.inf)


def test_strichartz_exponent():
    params = DispersionParams(a=2.0, n=3)
    assert strichartz_exponent(params, 4.0, 4.0) == pytest.approx(0.0)
    assert strichartz_exponent(DispersionParams(a=1.0, n=3), 4.0, 4.0) == pytest.approx(0.25)


def test_energy_endpoint_is_an_identity():
    probe = EstimateProbe(
        params=DispersionParams(a=2.0, n=3), grid=GridSpec(n=3, modes_per_dim=16),
        shells=[2], trials=1, domain=Domain.PERIODIC,
    )
    grid = SpectralGrid.from_spec(probe.grid)
    f = Field.single_mode(grid, (2, 0, 0), 3.0)
    summary = linear_strichartz_ratio(probe, math.inf, 2.0, data={2: [f]})
    assert summary.reports[0].ratio[0] == pytest.approx(1.0, rel=1e-12)
    assert summary.statistic == 0.0
    assert summary.verdict == Verdict.PASS


def test_strichartz_rejects_the_plane():
    with pytest.raises(ParameterError):
        strichartz_report(plane_probe(shells=[8]), 8, 4.0, 4.0)


def test_strichartz_random_trials_are_finite():
    probe = EstimateProbe(
        params=DispersionParams(a=2.0, n=3), grid=GridSpec(n=3, modes_per_dim=16),
        shells=[2, 4], trials=2, domain=Domain.PERIODIC, time_horizon=0.05,
    )
    summary = linear_strichartz_ratio(probe, 4.0, 4.0)
    assert all(np.isfinite(r.max_ratio) and r.max_ratio > 0 for r in summary.reports)
    assert np.isfinite(summary.statistic)
