"""
Numerical checks of the dispersive estimates: kernel decay, linear
Strichartz, bilinear Strichartz and the short-time amelioration.

Every ratio experiment follows the same pattern. Shell-localized data are
drawn per trial from ``seed + trial``. The free evolution is sampled on a
uniform time grid and each space norm is computed exactly on a zero-padded
grid. Time integrals use the composite trapezoid rule. The measured norm is
then divided by the scale of the bound with its implicit constant dropped.
"""
from dataclasses import dataclass
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple
import logging
import math

import numpy as np
from scipy import integrate, special, stats

from .dispersion import max_group_speed
from .errors import ParameterError, WrapAroundError
from .schemas import (
    CutoffKind, Domain, DyadicShell, EstimateProbe, KernelDecayReport, KernelDecayRow,
    RatioReport, SymbolFamily, Verdict, VerificationSummary, DispersionParams,
)
from .spectral import (
    Field, SpectralGrid, analyze, grid_symbol, lattice_wavevectors, padded_size,
    random_shell_field, shell_multiplier, smooth_step, synthesize,
)
from .utils.parallel import parallel_map
from .utils.quadrature import composite_gauss_legendre

logger = logging.getLogger(__name__)

# Auto time sampling targets dt * max|phi| <= RESOLUTION; explicit samples must meet MAX_RESOLUTION
RESOLUTION = math.pi / 16
MAX_RESOLUTION = math.pi / 4

VARIATION_THRESHOLD = 2.0
SLOPE_THRESHOLD = 0.1
KERNEL_GROWTH_FACTOR = 4.0
CONVERGENCE_TOLERANCE = 1e-4
KERNEL_TOLERANCE = 1e-6


# ============================================================================
# DISPERSIVE KERNEL
# ============================================================================

def _bump(r: np.ndarray) -> np.ndarray:
    """exp(-1/(1 - x^2)) with x = (r - 5/4) / (3/4), supported in (1/2, 2)"""
    x = (np.asarray(r, dtype=np.float64) - 1.25) / 0.75
    out = np.zeros_like(x)
    inside = np.abs(x) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - x[inside] ** 2))
    return out


def _annulus(r: np.ndarray) -> np.ndarray:
    r = np.asarray(r, dtype=np.float64)
    return smooth_step(r) - smooth_step(2.0 * r)


PROFILES: Dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "bump": _bump,
    "littlewood-paley": _annulus,
}


def radial_profile(name: str) -> Callable[[np.ndarray], np.ndarray]:
    try:
        return PROFILES[name]
    except KeyError:
        raise ParameterError(f"unknown radial profile '{name}'; expected one of {sorted(PROFILES)}")


def kernel_panels(x: np.ndarray, t: float, a: float) -> int:
    """Panels per integration variable: 8 (1 + (|t| (1+a) 2^a + |x|_inf) / 2 pi)"""
    bound = abs(t) * (1.0 + a) * 2.0 ** a + float(np.max(np.abs(x), initial=0.0))
    return int(math.ceil(8.0 * (1.0 + bound / (2.0 * math.pi))))


def _sphere_transform(rho: np.ndarray, n: int) -> np.ndarray:
    """Fourier transform of the unit sphere measure in R^n at radius rho"""
    nu = 0.5 * (n - 2)
    at_zero = 2.0 * math.pi ** (0.5 * n) / special.gamma(0.5 * n)
    safe = np.where(rho > 0.0, rho, 1.0)
    value = (2.0 * math.pi) ** (0.5 * n) * safe ** (-nu) * special.jv(nu, safe)
    return np.where(rho > 0.0, value, at_zero)


def _kernel_inputs(x, params: DispersionParams, profile: str) -> Tuple[np.ndarray, Callable[[np.ndarray], np.ndarray]]:
    if params.n < 3:
        raise ParameterError("kernel estimate stated for n ≥ 3")
    if params.family != SymbolFamily.ISOTROPIC_FZK:
        raise ParameterError("kernel estimate stated for the IsotropicFZK symbol")
    return np.asarray(x, dtype=np.float64).reshape(params.n), radial_profile(profile)


def kernel_integral(
    x,
    t: float,
    params: DispersionParams,
    profile: str = "bump",
    refine: int = 1,
) -> complex:
    """
    I(x, t) = integral of psi(|xi|) exp(i (t xi_1 |xi|^a + x . xi)) over R^n.

    For fixed |xi| = r the phase is linear on the sphere,
    r omega . (t r^a + x_1, x'), so the angular integral is the Fourier
    transform of the sphere measure and I reduces exactly to one radial
    integral over the profile's support, evaluated with composite
    Gauss-Legendre panels.

    Args:
        x: evaluation point in R^n
        t: time
        params: IsotropicFZK parameters with n >= 3
        profile: "bump" or "littlewood-paley"
        refine: panel multiplier (2 is the self-consistency check)
    """
    n, a = params.n, params.a
    x, psi = _kernel_inputs(x, params, profile)

    r, w = composite_gauss_legendre(0.5, 2.0, refine * kernel_panels(x, t, a))
    y1 = t * r ** a + x[0]
    y = np.sqrt(y1 ** 2 + float(np.sum(x[1:] ** 2)))
    value = np.sum(w * psi(r) * r ** (n - 1) * _sphere_transform(r * y, n))
    return complex(value)


def kernel_integral_tensor(
    x,
    t: float,
    params: DispersionParams,
    profile: str = "bump",
    refine: int = 1,
) -> complex:
    """
    I(x, t) by tensorized Gauss-Legendre panels on the cube [-2, 2]^n.

    Cross-check for ``kernel_integral``; the cost grows like panels^n, so
    it is meant for small |x| and |t|.
    """
    n, a = params.n, params.a
    x, psi = _kernel_inputs(x, params, profile)

    nodes, w = composite_gauss_legendre(-2.0, 2.0, refine * kernel_panels(x, t, a))
    rest = np.meshgrid(*([nodes] * (n - 1)), indexing="ij")
    rest_w = np.prod(np.meshgrid(*([w] * (n - 1)), indexing="ij"), axis=0)
    rest_sq = sum(c * c for c in rest)
    rest_phase = sum(xi * c for xi, c in zip(x[1:], rest))
    total = 0.0 + 0.0j
    for xi1, w1 in zip(nodes, w):
        r = np.sqrt(xi1 * xi1 + rest_sq)
        phase = t * xi1 * r ** a + x[0] * xi1 + rest_phase
        total += w1 * np.sum(rest_w * psi(r) * np.exp(1j * phase))
    return complex(total)


XSampler = Callable[[float], np.ndarray]


def default_x_sampler(n: int, axial_points: int = 9, far_points: int = 3, seed: int = 0) -> XSampler:
    """
    Origin, axial points with |x_1 / t| in geomspace(1/4, 4) of both signs,
    and ``far_points`` seeded off-axis points with |x_1 / t| in [1/4, 4] and
    transverse part in [-4|t|, 4|t|].
    """
    ratios = np.geomspace(0.25, 4.0, axial_points)

    def sample(t: float) -> np.ndarray:
        axial = np.zeros((2 * axial_points + 1, n))
        axial[1:axial_points + 1, 0] = ratios * t
        axial[axial_points + 1:, 0] = -ratios * t
        rng = np.random.default_rng([seed, int(round(abs(t) * 1e6))])
        far = np.empty((far_points, n))
        far[:, 0] = rng.choice([-1.0, 1.0], far_points) * rng.uniform(0.25, 4.0, far_points) * t
        far[:, 1:] = rng.uniform(-4.0 * abs(t), 4.0 * abs(t), (far_points, n - 1))
        return np.vstack([axial, far])

    return sample


def kernel_decay_scan(
    params: DispersionParams,
    t_list: Sequence[float],
    x_sampler: Optional[XSampler] = None,
    profile: str = "bump",
    check_consistency: bool = True,
) -> KernelDecayReport:
    """
    Per-t supremum of |t| |I(x, t)| over sampled x.

    PASS when every supremum is within KERNEL_GROWTH_FACTOR of the value at
    the smallest |t|.
    """
    if params.n < 3:
        raise ParameterError("kernel estimate stated for n ≥ 3")
    if not t_list or any(t == 0 for t in t_list):
        raise ParameterError("t_list must be non-empty and free of t = 0")
    sampler = x_sampler or default_x_sampler(params.n)

    rows: List[KernelDecayRow] = []
    for t in t_list:
        xs = np.asarray(sampler(t), dtype=np.float64).reshape(-1, params.n)
        values = parallel_map(lambda x: abs(t) * abs(kernel_integral(x, t, params, profile)), list(xs))
        best = int(np.argmax(values))
        rows.append(KernelDecayRow(t=t, sup_value=float(values[best]), argmax_x=xs[best].tolist(), samples=len(xs)))
        logger.debug(f"t={t:g}: sup |t||I| = {values[best]:.6g} at x = {xs[best].tolist()}")

    base = min(rows, key=lambda row: abs(row.t)).sup_value
    verdict = Verdict.PASS if all(row.sup_value <= KERNEL_GROWTH_FACTOR * base for row in rows) else Verdict.FAIL

    consistency = None
    if check_consistency:
        deltas = []
        for row in rows:
            coarse = kernel_integral(row.argmax_x, row.t, params, profile)
            fine = kernel_integral(row.argmax_x, row.t, params, profile, refine=2)
            deltas.append(abs(fine - coarse) / max(abs(fine), 1e-300))
        consistency = float(max(deltas))
        if consistency > KERNEL_TOLERANCE:
            logger.warning(f"⚠️ Kernel quadrature self-consistency {consistency:.2e} exceeds {KERNEL_TOLERANCE:g}")

    report = KernelDecayReport(
        params=params,
        profile=profile,
        rows=rows,
        c_emp=max(row.sup_value for row in rows),
        verdict=verdict,
        self_consistency=consistency,
    )
    logger.info(f"✅ Kernel decay a={params.a:g} n={params.n}: C_emp={report.c_emp:.6g} -> {verdict.value}")
    return report


# ============================================================================
# SHARED PROBE MACHINERY
# ============================================================================

@dataclass
class _TimeGrid:
    T: float
    times: np.ndarray

    @property
    def samples(self) -> int:
        return len(self.times)

    def refined(self) -> "_TimeGrid":
        """Same interval with the number of intervals doubled"""
        return _time_grid(self.T, 2 * self.samples - 1)

    def integrate(self, values: np.ndarray) -> float:
        """Composite trapezoid rule over the samples"""
        return float(integrate.trapezoid(values, x=self.times))


def _time_grid(T: float, samples: int) -> _TimeGrid:
    return _TimeGrid(T, np.linspace(0.0, T, samples))


def _shell_mask(grid: SpectralGrid, N: int) -> np.ndarray:
    return shell_multiplier(grid, DyadicShell(N=N, cutoff=CutoffKind.SHARP)) > 0.0


def _support(fields: Sequence[Field]) -> np.ndarray:
    mask = np.zeros(fields[0].grid.shape, dtype=bool)
    for f in fields:
        mask |= f.coeffs != 0
    return mask


def _kmax(grid: SpectralGrid, mask: np.ndarray) -> int:
    if not mask.any():
        return 0
    return int(np.max(np.abs(grid.mode_indices[:, mask])))


def _max_phase(params: DispersionParams, grid: SpectralGrid, mask: np.ndarray) -> float:
    if not mask.any():
        return 0.0
    return float(np.max(np.abs(grid_symbol(params, grid)[mask])))


def wraparound_horizon(params: DispersionParams, grid: SpectralGrid, mask: np.ndarray) -> float:
    """L / (2 max |grad phi|) over the populated modes"""
    speed = max_group_speed(params, np.moveaxis(grid.wavevectors, 0, -1)[mask])
    return math.inf if speed == 0.0 else grid.period / (2.0 * speed)


def _check_horizon(probe: EstimateProbe, grid: SpectralGrid, T: float, N: int, mask: np.ndarray) -> None:
    a = probe.params.a
    floor = probe.transit_guard * float(N) ** (-a)
    if T < floor:
        raise ParameterError(f"time horizon T = {T:.3g} is below the dispersion transit guard {floor:.3g} for N = {N}")
    if probe.domain == Domain.EUCLIDEAN:
        cap = wraparound_horizon(probe.params, grid, mask)
        if T > cap * (1.0 + 1e-12):
            raise WrapAroundError(
                f"time horizon T = {T:.3g} exceeds the wrap-around horizon {cap:.3g} for N = {N}; "
                f"enlarge the box or use the periodic domain"
            )


def _resolve_samples(probe: EstimateProbe, T: float, max_phase: float) -> _TimeGrid:
    if probe.time_samples is not None:
        step = T / (probe.time_samples - 1)
        if step * max_phase > MAX_RESOLUTION:
            raise ParameterError(
                f"time sampling does not resolve the fastest phase: dt * max|phi| = {step * max_phase:.3g} > pi/4"
            )
        return _time_grid(T, probe.time_samples)
    return _time_grid(T, max(2, int(math.ceil(T * max_phase / RESOLUTION)) + 1))


def _ratio(lhs: float, rhs: float) -> float:
    return lhs / rhs if rhs > 0.0 else 0.0


def _variation(reports: Sequence[RatioReport]) -> float:
    """max / min over N of the per-N max ratio"""
    peaks = [r.max_ratio for r in reports]
    top, bottom = max(peaks), min(peaks)
    if top == 0.0:
        return 1.0
    return math.inf if bottom == 0.0 else top / bottom


def _relative_change(old: float, new: float) -> float:
    return abs(new - old) / abs(new) if new != 0.0 else abs(new - old)


# ============================================================================
# BILINEAR ESTIMATES
# ============================================================================

@dataclass
class _PairProbe:
    """Resolved setup of one (N, K) bilinear experiment"""
    grid: SpectralGrid
    phi: np.ndarray
    size: int
    clock: _TimeGrid
    pairs: Optional[Sequence[Tuple[Field, Field]]]


def _bilinear_setup(
    probe: EstimateProbe,
    N: int,
    T_default: Callable[[float], float],
    data: Optional[Sequence[Tuple[Field, Field]]],
) -> Tuple[_PairProbe, int]:
    grid = SpectralGrid.from_spec(probe.grid)
    K = probe.low_shell or 1
    if 8 * K > N:
        raise ParameterError(f"shells not separated: K = {K} > N/8 = {N / 8:g}")
    mask_u, mask_v = _shell_mask(grid, N), _shell_mask(grid, K)
    if data is not None:
        if not data:
            raise ParameterError("explicit data must contain at least one pair")
        mask_u = _support([u for u, _ in data])
        mask_v = _support([v for _, v in data])
    mask = mask_u | mask_v
    cap = wraparound_horizon(probe.params, grid, mask)
    T = probe.time_horizon or T_default(cap)
    _check_horizon(probe, grid, T, N, mask)
    clock = _resolve_samples(probe, T, _max_phase(probe.params, grid, mask))
    size = padded_size(grid, 2 * (_kmax(grid, mask_u) + _kmax(grid, mask_v)) + 2)
    return _PairProbe(grid, grid_symbol(probe.params, grid), size, clock, data), K


def _draw_pair(probe: EstimateProbe, setup: _PairProbe, N: int, K: int, trial: int) -> Tuple[Field, Field]:
    if setup.pairs is not None:
        return setup.pairs[trial]
    rng = np.random.default_rng(probe.rng_seed + trial)
    u0 = random_shell_field(setup.grid, N, rng)
    v0 = random_shell_field(setup.grid, K, rng)
    return u0, v0


def _product_norms(setup: _PairProbe, u0: Field, v0: Field, clock: _TimeGrid, derivative: bool) -> np.ndarray:
    """||u(t) v(t)||_{L2} (or ||d_1 (u v)(t)||_{L2}) at every sample time"""
    grid, size = setup.grid, setup.size
    pair = np.stack([u0.coeffs, v0.coeffs])
    cell = (grid.period / size) ** grid.n
    xi1 = lattice_wavevectors(grid.n, size, grid.period)[0] if derivative else None
    norms = np.empty(clock.samples)
    for i, t in enumerate(clock.times):
        u, v = synthesize(grid, pair * np.exp(-1j * t * setup.phi), size)
        w = u * v
        if derivative:
            coeffs = analyze(w, grid.n, grid.period)
            norms[i] = math.sqrt(float(np.sum(xi1 ** 2 * np.abs(coeffs) ** 2)))
        else:
            norms[i] = math.sqrt(float(np.sum(np.abs(w) ** 2)) * cell)
    return norms


def _bilinear_lhs(setup: _PairProbe, u0: Field, v0: Field, clock: _TimeGrid) -> float:
    """||u v||_{L2_t L2_x([0, T] x box)}"""
    norms = _product_norms(setup, u0, v0, clock, derivative=False)
    return math.sqrt(clock.integrate(norms ** 2))


def _shorttime_lhs(setup: _PairProbe, u0: Field, v0: Field, clock: _TimeGrid) -> float:
    """||d_1 (u v)||_{L1_t L2_x([0, T] x box)}"""
    norms = _product_norms(setup, u0, v0, clock, derivative=True)
    return clock.integrate(norms)


def _bilinear_scale(N: int, K: int, params: DispersionParams) -> float:
    """(K^(n-1) / N^a)^(1/2)"""
    return math.sqrt(float(K) ** (params.n - 1) / float(N) ** params.a)


def _pair_report(
    probe: EstimateProbe,
    N: int,
    data: Optional[Sequence[Tuple[Field, Field]]],
    T_default: Callable[[float], float],
    lhs_fn: Callable,
    scale_fn: Callable[[float], float],
) -> RatioReport:
    setup, K = _bilinear_setup(probe, N, T_default, data)
    trials = len(data) if data is not None else probe.trials
    scale = _bilinear_scale(N, K, probe.params) * scale_fn(setup.clock.T)

    def run(trial: int) -> Tuple[float, float]:
        u0, v0 = _draw_pair(probe, setup, N, K, trial)
        lhs = lhs_fn(setup, u0, v0, setup.clock)
        rhs = scale * u0.l2_norm() * v0.l2_norm()
        logger.debug(f"N={N} K={K} trial {trial}: lhs={lhs:.6g} rhs={rhs:.6g}")
        return lhs, rhs

    results = parallel_map(run, list(range(trials)))
    lhs = [r[0] for r in results]
    rhs = [r[1] for r in results]
    return RatioReport(
        N=N,
        K=K,
        a=probe.params.a,
        n=probe.params.n,
        T=setup.clock.T,
        seed=probe.rng_seed,
        time_samples=setup.clock.samples,
        lhs=lhs,
        rhs_scale=rhs,
        ratio=[_ratio(l, r) for l, r in zip(lhs, rhs)],
    )


def bilinear_report(
    probe: EstimateProbe,
    N: int,
    data: Optional[Sequence[Tuple[Field, Field]]] = None,
) -> RatioReport:
    """
    ||P_N S(t) u0 . P_K S(t) v0||_{L2([0, T] x box)} against
    (K^(n-1) / N^a)^(1/2) ||u0|| ||v0|| for one high shell N.

    T defaults to the wrap-around horizon on the Euclidean domain and to 1
    on the periodic one.
    """
    default = (lambda cap: cap) if probe.domain == Domain.EUCLIDEAN else (lambda cap: 1.0)
    return _pair_report(probe, N, data, default, _bilinear_lhs, lambda T: 1.0)


def shorttime_report(
    probe: EstimateProbe,
    N: int,
    data: Optional[Sequence[Tuple[Field, Field]]] = None,
) -> RatioReport:
    """
    ||d_1 (P_N S u0 . P_K S v0)||_{L1([0, T]; L2)} against
    T^(1/2) N (K^(n-1) / N^a)^(1/2) ||u0|| ||v0||, with T = N^(a-2) by default.
    """
    a = probe.params.a
    return _pair_report(
        probe, N, data,
        lambda cap: float(N) ** (a - 2.0),
        _shorttime_lhs,
        lambda T: math.sqrt(T) * N,
    )


def _pair_convergence(probe: EstimateProbe, N: int, data, T_default, lhs_fn) -> float:
    """Relative change of trial 0's lhs when the time grid is refined"""
    setup, K = _bilinear_setup(probe, N, T_default, data)
    u0, v0 = _draw_pair(probe, setup, N, K, 0)
    coarse = lhs_fn(setup, u0, v0, setup.clock)
    fine = lhs_fn(setup, u0, v0, setup.clock.refined())
    return _relative_change(coarse, fine)


def _sweep(
    kind: str,
    probe: EstimateProbe,
    report_fn: Callable,
    T_default: Callable[[int], Callable[[float], float]],
    lhs_fn: Callable,
    data: Optional[Mapping[int, Sequence[Tuple[Field, Field]]]],
) -> VerificationSummary:
    reports = []
    for N in probe.shells:
        reports.append(report_fn(probe, N, None if data is None else data[N]))
        logger.info(f"{kind} N={N}: max ratio {reports[-1].max_ratio:.6g}, mean {reports[-1].mean_ratio:.6g}")

    N0 = probe.shells[0]
    delta = _pair_convergence(probe, N0, None if data is None else data[N0], T_default(N0), lhs_fn)
    if delta > CONVERGENCE_TOLERANCE:
        logger.warning(f"⚠️ {kind}: time-sampling convergence delta {delta:.2e} exceeds {CONVERGENCE_TOLERANCE:g}")

    statistic = _variation(reports)
    verdict = Verdict.PASS if statistic < VARIATION_THRESHOLD else Verdict.FAIL
    logger.info(f"✅ {kind}: variation factor {statistic:.4g} -> {verdict.value}")
    return VerificationSummary(
        kind=kind,
        verdict=verdict,
        statistic=statistic,
        threshold=VARIATION_THRESHOLD,
        convergence_delta=delta,
        reports=reports,
    )


def bilinear_ratio(
    probe: EstimateProbe,
    data: Optional[Mapping[int, Sequence[Tuple[Field, Field]]]] = None,
) -> VerificationSummary:
    """
    Bilinear Strichartz sweep over probe.shells at fixed K = probe.low_shell.

    PASS when the per-N max ratio varies by less than a factor 2 across N.
    """
    default = (lambda cap: cap) if probe.domain == Domain.EUCLIDEAN else (lambda cap: 1.0)
    return _sweep("VerifyBilinear", probe, bilinear_report, lambda N: default, _bilinear_lhs, data)


def shorttime_amelioration(
    probe: EstimateProbe,
    data: Optional[Mapping[int, Sequence[Tuple[Field, Field]]]] = None,
) -> VerificationSummary:
    """Short-time amelioration sweep; same verdict rule as bilinear_ratio"""
    a = probe.params.a
    return _sweep(
        "VerifyShorttime", probe, shorttime_report,
        lambda N: (lambda cap: float(N) ** (a - 2.0)),
        _shorttime_lhs, data,
    )


# ============================================================================
# LINEAR STRICHARTZ
# ============================================================================

def check_admissible(q: float, p: float) -> None:
    if math.isinf(p) or p < 2.0 or q < 2.0:
        raise ParameterError(f"not admissible: (q, p) = ({q:g}, {p:g}) needs 2 <= p < inf and q >= 2")
    if abs(2.0 / q + 2.0 / p - 1.0) > 1e-12:
        raise ParameterError(f"not admissible: 2/q + 2/p = {2.0 / q + 2.0 / p:.15g} != 1")


def strichartz_exponent(params: DispersionParams, q: float, p: float) -> float:
    """s = n (1/2 - 1/p) - (a + 1) / q"""
    return params.n * (0.5 - 1.0 / p) - (params.a + 1.0) / q


def _space_time_norm(u_hat: np.ndarray, grid: SpectralGrid, phi: np.ndarray, size: int, clock: _TimeGrid, q: float, p: float) -> float:
    cell = (grid.period / size) ** grid.n
    norms = np.empty(clock.samples)
    for i, t in enumerate(clock.times):
        u = synthesize(grid, u_hat * np.exp(-1j * t * phi), size)
        norms[i] = (float(np.sum(np.abs(u) ** p)) * cell) ** (1.0 / p)
    if math.isinf(q):
        return float(np.max(norms))
    return clock.integrate(norms ** q) ** (1.0 / q)


def strichartz_report(
    probe: EstimateProbe,
    N: int,
    q: float,
    p: float,
    data: Optional[Sequence[Field]] = None,
) -> RatioReport:
    """||S(t) P_N f||_{L^q_t([0, T]; L^p_x)} against N^s ||P_N f||_{L2}"""
    params = probe.params
    if params.n < 3:
        raise ParameterError("linear Strichartz check stated for n ≥ 3")
    check_admissible(q, p)
    s = strichartz_exponent(params, q, p)
    grid = SpectralGrid.from_spec(probe.grid)
    mask = _shell_mask(grid, N) if data is None else _support(data)
    T = probe.time_horizon or 1.0
    _check_horizon(probe, grid, T, N, mask)
    clock = _resolve_samples(probe, T, _max_phase(params, grid, mask))
    kmax = _kmax(grid, mask)
    size = grid.modes_per_dim if p == 2.0 else padded_size(grid, 4 * kmax + 2)
    phi = grid_symbol(params, grid)
    trials = len(data) if data is not None else probe.trials

    def run(trial: int) -> Tuple[float, float]:
        if data is not None:
            f = data[trial]
        else:
            f = random_shell_field(grid, N, np.random.default_rng(probe.rng_seed + trial), real=False)
        lhs = _space_time_norm(f.coeffs, grid, phi, size, clock, q, p)
        return lhs, float(N) ** s * f.l2_norm()

    results = parallel_map(run, list(range(trials)))
    lhs = [r[0] for r in results]
    rhs = [r[1] for r in results]
    return RatioReport(
        N=N, K=None, a=params.a, n=params.n, T=T, seed=probe.rng_seed,
        time_samples=clock.samples, lhs=lhs, rhs_scale=rhs,
        ratio=[_ratio(l, r) for l, r in zip(lhs, rhs)],
    )


def linear_strichartz_ratio(
    probe: EstimateProbe,
    q: float,
    p: float,
    data: Optional[Mapping[int, Sequence[Field]]] = None,
) -> VerificationSummary:
    """
    Linear Strichartz sweep over probe.shells.

    PASS when the slope of log(max ratio) against log N is at most 0.1.
    """
    check_admissible(q, p)
    reports = []
    for N in probe.shells:
        reports.append(strichartz_report(probe, N, q, p, None if data is None else data[N]))
        logger.info(f"VerifyLinearStrichartz N={N}: max ratio {reports[-1].max_ratio:.6g}")

    peaks = np.array([r.max_ratio for r in reports])
    if len(reports) >= 2 and np.all(peaks > 0.0):
        slope = float(stats.linregress(np.log([r.N for r in reports]), np.log(peaks)).slope)
    else:
        slope = 0.0

    N0 = probe.shells[0]
    delta = None
    if data is None or data.get(N0):
        grid = SpectralGrid.from_spec(probe.grid)
        f = (data[N0][0] if data is not None
             else random_shell_field(grid, N0, np.random.default_rng(probe.rng_seed), real=False))
        mask = _support([f])
        clock = _resolve_samples(probe, reports[0].T, _max_phase(probe.params, grid, mask))
        size = grid.modes_per_dim if p == 2.0 else padded_size(grid, 4 * _kmax(grid, mask) + 2)
        phi = grid_symbol(probe.params, grid)
        coarse = _space_time_norm(f.coeffs, grid, phi, size, clock, q, p)
        fine = _space_time_norm(f.coeffs, grid, phi, size, clock.refined(), q, p)
        delta = _relative_change(coarse, fine)
        if delta > CONVERGENCE_TOLERANCE:
            logger.warning(f"⚠️ VerifyLinearStrichartz: time-sampling convergence delta {delta:.2e} exceeds {CONVERGENCE_TOLERANCE:g}")

    verdict = Verdict.PASS if slope <= SLOPE_THRESHOLD else Verdict.FAIL
    logger.info(f"✅ VerifyLinearStrichartz (q={q:g}, p={p:g}): log-log slope {slope:.4g} -> {verdict.value}")
    return VerificationSummary(
        kind="VerifyLinearStrichartz",
        verdict=verdict,
        statistic=slope,
        threshold=SLOPE_THRESHOLD,
        convergence_delta=delta,
        reports=reports,
    )
