"""
Integrating-factor RK4 solver for

    d_t u + d_1 (-Delta)^{a/2} u = u d_1 u

in the spectral form d_t u_hat = -i phi(xi) u_hat + (i/2) m(xi) (u^2)^,
with m(xi) = xi_1 (sum_i xi_i for the multi-directional symbol). The
nonlinearity is written in divergence form so discrete mass is conserved
under dealiasing. u -> -u maps solutions of this equation onto solutions of
the version with the nonlinearity on the left-hand side.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple
import logging
import math

import numpy as np
import pandas as pd

from .errors import GridError, NumericalError, ParameterError
from .schemas import (
    BonaSmithReport, BonaSmithRow, CutoffKind, Dealias, DispersionParams, Domain,
    DyadicShell, InitialDatum, SolverConfig, SymbolFamily,
)
from .spectral import (
    Field, SpectralGrid, analyze, dyadic_shells, grid_symbol, hermitian_symmetrize,
    lp_low_pass, padded_size, reflect_axes, shell_multiplier, sobolev_norm, synthesize,
)
from .utils.parallel import parallel_map

logger = logging.getLogger(__name__)


# ============================================================================
# CONSERVED QUANTITIES
# ============================================================================

def _require_real(f: Field, what: str) -> None:
    if not f.real_flag:
        raise ParameterError(f"{what} defined for real fields")


def mass(f: Field) -> float:
    """M(u) = integral of u^2, via Parseval"""
    _require_real(f, "mass")
    return float(np.sum(np.abs(f.coeffs) ** 2))


def _energy_terms(grid: SpectralGrid, coeffs: np.ndarray, a: float) -> Tuple[float, float]:
    power = np.abs(coeffs) ** 2
    quadratic = float(np.sum(grid.wavenumber_sq ** (a / 2.0) * power))
    populated = coeffs != 0
    if not populated.any():
        return quadratic, 0.0
    kmax = int(np.max(np.abs(grid.mode_indices[:, populated])))
    size = padded_size(grid, 3 * kmax + 2)
    u = synthesize(grid, coeffs, size).real
    cubic = float(np.sum(u ** 3)) * (grid.period / size) ** grid.n / 3.0
    return quadratic, cubic


def energy_terms(f: Field, params: DispersionParams) -> Tuple[float, float]:
    """
    (integral |D^{a/2} u|^2, (1/3) integral u^3).

    The quadratic term is the lattice sum of |xi|^a |f_hat|^2 (zero at the
    origin). The cubic term is an exact lattice sum on a grid padded past
    three times the populated band.
    """
    _require_real(f, "energy")
    if params.family != SymbolFamily.ISOTROPIC_FZK:
        raise ParameterError("energy defined for the IsotropicFZK symbol")
    return _energy_terms(f.grid, f.coeffs, params.a)


def energy(f: Field, params: DispersionParams) -> float:
    """E(u) = integral |D^{a/2} u|^2 - (1/3) u^3"""
    quadratic, cubic = energy_terms(f, params)
    return quadratic - cubic


# ============================================================================
# NONLINEARITY
# ============================================================================

def nonlinear_multiplier(params: DispersionParams, grid: SpectralGrid) -> np.ndarray:
    """m(xi): xi_1, or sum_i xi_i for MultiDirectionalBO"""
    if params.family == SymbolFamily.MULTI_DIRECTIONAL_BO:
        return np.sum(grid.wavevectors, axis=0)
    return grid.wavevectors[0]


def quadratic_product(f: Field, dealias: Dealias = Dealias.TWO_THIRDS) -> Field:
    """
    Coefficients of u^2 computed in physical space.

    With TwoThirds the input is truncated to |k_i| <= (M-1)//3 and so is the
    output; products of such data are then free of aliasing.
    """
    grid = f.grid
    mask = grid.dealias_mask(dealias)
    u = synthesize(grid, f.coeffs * mask)
    if f.real_flag:
        u = u.real
    return Field(grid, analyze(u * u, grid.n, grid.period) * mask, f.real_flag)


def nonlinear_term(f: Field, params: DispersionParams, dealias: Dealias = Dealias.TWO_THIRDS) -> Field:
    """(1/2) d_1 (u^2) (or (1/2) sum_i d_i (u^2))"""
    square = quadratic_product(f, dealias)
    return square.with_coeffs(0.5j * nonlinear_multiplier(params, f.grid) * square.coeffs)


class _Stepper:
    """One integrating-factor RK4 step of fixed size, reusable across steps and threads"""

    def __init__(self, cfg: SolverConfig, dt: float):
        grid = SpectralGrid.from_spec(cfg.grid)
        phi = grid_symbol(cfg.params, grid)
        self.grid = grid
        self.dt = dt
        self.E = np.exp(-1j * dt * phi)
        self.E2 = np.exp(-0.5j * dt * phi)
        self.mask = grid.dealias_mask(cfg.dealias)
        self.mult = 0.5j * nonlinear_multiplier(cfg.params, grid) * self.mask
        self.nonlinear = cfg.nonlinear

    def rhs(self, c: np.ndarray) -> np.ndarray:
        grid = self.grid
        u = synthesize(grid, c * self.mask).real
        return self.mult * analyze(u * u, grid.n, grid.period)

    def advance(self, c: np.ndarray, k: int) -> np.ndarray:
        E, E2, h = self.E, self.E2, self.dt
        if not self.nonlinear:
            out = E * c
        else:
            k1 = self.rhs(c)
            k2 = self.rhs(E2 * (c + 0.5 * h * k1))
            k3 = self.rhs(E2 * c + 0.5 * h * k2)
            k4 = self.rhs(E * c + h * E2 * k3)
            out = E * c + (h / 6.0) * (E * k1 + 2.0 * E2 * (k2 + k3) + k4)
        if not np.all(np.isfinite(out)):
            raise NumericalError(f"blow-up or instability at step {k} (t = {k * h:.6g})")
        return out


def _check_datum(f: Field, cfg: SolverConfig) -> SpectralGrid:
    grid = SpectralGrid.from_spec(cfg.grid)
    if f.grid != grid:
        raise GridError(f"field lives on {f.grid!r}, solver is configured for {grid!r}")
    _require_real(f, "the solver is")
    return grid


def step(f: Field, cfg: SolverConfig, index: int = 1) -> Field:
    """Advance one cfg.dt; the linear flow is exact and the nonlinearity enters through RK4"""
    _check_datum(f, cfg)
    return f.with_coeffs(_Stepper(cfg, cfg.dt).advance(f.coeffs, index))


def _schedule(cfg: SolverConfig) -> Tuple[int, float]:
    """Number of steps and the step size that lands exactly on T"""
    if cfg.T == 0.0:
        return 0, cfg.dt
    steps = max(1, math.ceil(cfg.T / cfg.dt - 1e-9))
    return steps, cfg.T / steps


# ============================================================================
# TRAJECTORY
# ============================================================================

@dataclass
class Trajectory:
    """Diagnostics at every sample time plus the retained snapshots"""
    dt: float
    steps: int
    times: List[float] = field(default_factory=list)
    mass: List[float] = field(default_factory=list)
    energy: List[float] = field(default_factory=list)
    energy_quadratic: List[float] = field(default_factory=list)
    energy_cubic: List[float] = field(default_factory=list)
    sobolev: Dict[float, List[float]] = field(default_factory=dict)
    shell_norms: Dict[int, List[float]] = field(default_factory=dict)
    shell_sup: Dict[int, List[float]] = field(default_factory=dict)
    snapshot_times: List[float] = field(default_factory=list)
    snapshots: List[Field] = field(default_factory=list)

    @property
    def final(self) -> Field:
        return self.snapshots[-1]

    def drift(self, series: Sequence[float]) -> float:
        """max_t |q(t) - q(0)| / |q(0)|"""
        values = np.asarray(series, dtype=np.float64)
        if values.size == 0 or np.all(np.isnan(values)):
            return math.nan
        base = abs(values[0]) or 1.0
        return float(np.nanmax(np.abs(values - values[0])) / base)

    @property
    def mass_drift(self) -> float:
        return self.drift(self.mass)

    @property
    def energy_drift(self) -> float:
        return self.drift(self.energy)

    def to_frame(self) -> pd.DataFrame:
        table = {
            "t": self.times,
            "mass": self.mass,
            "energy": self.energy,
            "energy_quadratic": self.energy_quadratic,
            "energy_cubic": self.energy_cubic,
        }
        for s, values in self.sobolev.items():
            table[f"hs_{s:g}"] = values
        for N, values in self.shell_norms.items():
            table[f"shell_{N}"] = values
        for N, values in self.shell_sup.items():
            table[f"shell_sup_{N}"] = values
        return pd.DataFrame(table)


class _Recorder:
    """
    Fills a Trajectory at each diagnostic sample.

    Diagnostics read the solver state as is, Nyquist planes included; only
    the stored snapshots are real Fields.
    """

    def __init__(self, grid: SpectralGrid, cfg: SolverConfig, trajectory: Trajectory):
        self.grid = grid
        self.cfg = cfg
        self.trajectory = trajectory
        self.shells = {N: shell_multiplier(grid, DyadicShell(N=N)) > 0.0 for N in dyadic_shells(grid)}
        self.weights = {s: (1.0 + grid.wavenumber_sq) ** s for s in cfg.sobolev_s}
        self.with_energy = cfg.params.family == SymbolFamily.ISOTROPIC_FZK
        self.samples = 0

    def __call__(self, t: float, coeffs: np.ndarray, keep: bool) -> None:
        traj = self.trajectory
        power = np.abs(coeffs) ** 2
        traj.times.append(t)
        traj.mass.append(float(np.sum(power)))
        if self.with_energy:
            quadratic, cubic = _energy_terms(self.grid, coeffs, self.cfg.params.a)
        else:
            quadratic = cubic = math.nan
        traj.energy_quadratic.append(quadratic)
        traj.energy_cubic.append(cubic)
        traj.energy.append(quadratic - cubic)
        for s, weight in self.weights.items():
            traj.sobolev.setdefault(s, []).append(math.sqrt(float(np.sum(weight * power))))
        for N, mask in self.shells.items():
            value = math.sqrt(float(np.sum(power[mask])))
            traj.shell_norms.setdefault(N, []).append(value)
            previous = traj.shell_sup.get(N)
            traj.shell_sup.setdefault(N, []).append(max(value, previous[-1]) if previous else value)
        stride = self.cfg.snapshot_every
        if keep or (stride is not None and self.samples % stride == 0):
            traj.snapshot_times.append(t)
            traj.snapshots.append(Field(self.grid, coeffs, real_flag=True))
        self.samples += 1


def solve(u0: Field, cfg: SolverConfig) -> Trajectory:
    """
    Evolve u0 to cfg.T, recording diagnostics every cfg.diag_every steps.

    The step count is ceil(T / dt) with the step shortened so the last step
    lands on T. The initial and final states are always kept as snapshots;
    intermediate ones follow cfg.snapshot_every.
    """
    grid = _check_datum(u0, cfg)
    steps, dt = _schedule(cfg)
    stepper = _Stepper(cfg, dt)
    trajectory = Trajectory(dt=dt, steps=steps)
    record = _Recorder(grid, cfg, trajectory)

    coeffs = np.array(u0.coeffs)
    record(0.0, coeffs, keep=True)
    for k in range(1, steps + 1):
        coeffs = stepper.advance(coeffs, k)
        last = k == steps
        if last or k % cfg.diag_every == 0:
            record(k * dt if not last else cfg.T, coeffs, keep=last)
            logger.debug(f"step {k}/{steps}: mass={trajectory.mass[-1]:.15g}")

    logger.info(
        f"✅ Solved to T={cfg.T:g} in {steps} steps of {dt:.3g}: "
        f"mass drift {trajectory.mass_drift:.2e}, energy drift {trajectory.energy_drift:.2e}"
    )
    return trajectory


def energy_space_norm(trajectory: Trajectory, s: float) -> float:
    """(sum_N N^(2s) sup_t ||P_N u(t)||^2)^(1/2) from the shell ledger"""
    total = sum(float(N) ** (2 * s) * values[-1] ** 2 for N, values in trajectory.shell_sup.items())
    return math.sqrt(total)


def _reversal_axes(params: DispersionParams) -> Tuple[int, ...]:
    if params.family == SymbolFamily.MULTI_DIRECTIONAL_BO:
        return tuple(range(params.n))
    return (0,)


def time_reversal_defect(u0: Field, cfg: SolverConfig) -> float:
    """
    Evolve to T, reflect x_1, evolve to T again and reflect back.

    u(t, x_1, x') -> u(-t, -x_1, x') maps solutions to solutions (all
    coordinates for MultiDirectionalBO), so the result should return u0;
    the relative L2 defect is returned.
    """
    axes = _reversal_axes(cfg.params)
    forward = solve(u0, cfg).final
    back = solve(reflect_axes(forward, axes), cfg).final
    restored = reflect_axes(back, axes)
    scale = u0.l2_norm() or 1.0
    return (restored - u0).l2_norm() / scale


# ============================================================================
# WELL-POSEDNESS CONTEXT
# ============================================================================

def wellposedness_threshold(params: DispersionParams, domain: Domain) -> float:
    """
    Regularity above which the local theory applies.

    Euclidean: (n + 3)/2 - a (a = 2 is the limiting case). Periodic:
    (n + 1)/2 for n = 2 or a = 2, otherwise the energy-method value (n + 2)/2.
    """
    n, a = params.n, params.a
    if domain == Domain.EUCLIDEAN:
        return (n + 3) / 2.0 - a
    if n == 2 or a == 2.0:
        return (n + 1) / 2.0
    return (n + 2) / 2.0


# ============================================================================
# BONA-SMITH
# ============================================================================

def _nonincreasing(values: Sequence[float], tol: float = 1e-14) -> bool:
    return all(b <= a * (1.0 + 1e-9) + tol for a, b in zip(values, values[1:]))


def bona_smith(
    u0: Field,
    s: float,
    cutoffs: Sequence[int],
    cfg: SolverConfig,
    cutoff: CutoffKind = CutoffKind.SMOOTH,
) -> BonaSmithReport:
    """
    sup_t ||u(t) - u_N(t)|| in L2 and H^s for u_N evolved from P_{<=N} u0.

    The reference solution is marched first and its states are kept at the
    diagnostic samples; the truncated branches then run concurrently
    against it.
    """
    if s <= 0.0:
        raise ParameterError("Bona-Smith order s must be positive")
    grid = _check_datum(u0, cfg)
    cutoffs = sorted(cutoffs)
    starts = [lp_low_pass(u0, N, cutoff) for N in cutoffs]
    steps, dt = _schedule(cfg)
    stepper = _Stepper(cfg, dt)
    weight = (1.0 + grid.wavenumber_sq) ** s

    def samples(c: np.ndarray):
        yield c
        for k in range(1, steps + 1):
            c = stepper.advance(c, k)
            if k == steps or k % cfg.diag_every == 0:
                yield c

    reference = list(samples(np.array(u0.coeffs)))

    def branch(start: Field) -> Tuple[float, float]:
        sup_h0 = sup_hs = 0.0
        for ref, c in zip(reference, samples(np.array(start.coeffs))):
            power = np.abs(ref - c) ** 2
            sup_h0 = max(sup_h0, math.sqrt(float(np.sum(power))))
            sup_hs = max(sup_hs, math.sqrt(float(np.sum(weight * power))))
        return sup_h0, sup_hs

    results = parallel_map(branch, starts)
    rows = [BonaSmithRow(N=N, sup_h0=h0, sup_hs=hs) for N, (h0, hs) in zip(cutoffs, results)]
    h0 = [row.sup_h0 for row in rows]
    hs = [row.sup_hs for row in rows]
    decay = [a / b if b > 0.0 else math.inf for a, b in zip(h0, h0[1:])]
    report = BonaSmithReport(
        s=s,
        cutoff=cutoff,
        T=cfg.T,
        steps=steps,
        rows=rows,
        monotone_h0=_nonincreasing(h0),
        monotone_hs=_nonincreasing(hs),
        h0_decay=decay,
        threshold=wellposedness_threshold(cfg.params, Domain.PERIODIC),
    )
    if not (report.monotone_h0 and report.monotone_hs):
        logger.warning(f"⚠️ Bona-Smith table is not nonincreasing in N: L2 {h0}, H^{s:g} {hs}")
    logger.info(f"✅ Bona-Smith over N={cutoffs}: L2 {['%.3g' % v for v in h0]}, H^{s:g} {['%.3g' % v for v in hs]}")
    return report


# ============================================================================
# INITIAL DATA
# ============================================================================

def cosine_datum(grid: SpectralGrid, amplitude: float, mode: Sequence[int]) -> Field:
    """amplitude * cos(xi_k . x)"""
    if len(mode) != grid.n:
        raise GridError(f"mode {list(mode)} has the wrong dimension for {grid!r}")
    x = grid.physical_coordinates()
    phase = sum(grid.scale * k * x[i] for i, k in enumerate(mode))
    return Field.from_physical(grid, amplitude * np.cos(phase), real=True)


def gaussian_datum(grid: SpectralGrid, amplitude: float, width: float) -> Field:
    """amplitude * exp(-|x - c|^2 / (2 width^2)) centred in the box"""
    x = grid.physical_coordinates()
    r2 = np.sum((x - 0.5 * grid.period) ** 2, axis=0)
    return Field.from_physical(grid, amplitude * np.exp(-r2 / (2.0 * width ** 2)), real=True)


def random_datum(
    grid: SpectralGrid,
    rng: np.random.Generator,
    decay: float,
    target_s: float,
    target_norm: Optional[float],
    max_mode: Optional[int] = None,
) -> Field:
    """
    Mean-zero real datum with coefficients ~ (1 + |xi|^2)^(-decay/2) times
    complex Gaussians, cut off above |k|_inf = max_mode (default the
    two-thirds band) and scaled to ||u||_{H^target_s} = target_norm.
    """
    cut = max_mode if max_mode is not None else (grid.modes_per_dim - 1) // 3
    coeffs = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    coeffs *= (1.0 + grid.wavenumber_sq) ** (-decay / 2.0)
    coeffs[np.any(np.abs(grid.mode_indices) > cut, axis=0)] = 0.0
    coeffs[(0,) * grid.n] = 0.0
    f = Field(grid, hermitian_symmetrize(coeffs), real_flag=True)
    if target_norm is not None:
        norm = sobolev_norm(f, target_s)
        if norm > 0.0:
            f = f * (target_norm / norm)
    return f


def build_datum(grid: SpectralGrid, datum: InitialDatum, seed: int) -> Field:
    if datum.profile == "cosine":
        return cosine_datum(grid, datum.amplitude, datum.mode)
    if datum.profile == "gaussian":
        return gaussian_datum(grid, datum.amplitude, datum.width)
    return random_datum(
        grid, np.random.default_rng(seed), datum.decay, datum.target_s, datum.target_norm, datum.max_mode,
    )
