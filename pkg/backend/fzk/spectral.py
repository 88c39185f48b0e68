"""
Spectral substrate: periodic grids, fields, Littlewood-Paley projectors,
Sobolev norms and the exact free propagator.

Conventions
-----------
Coefficients are unitary Fourier-series coefficients on the box [0, L)^n:

    u(x) = L^{-n/2} * sum_k  f_hat(k) exp(i xi_k . x),   xi_k = (2 pi / L) k

so the spectral l2 norm of ``coeffs`` *is* the L2 norm of ``u`` and physical
integrals are lattice sums with cell volume (L/M)^n. Coefficients are held in
FFT order (0, 1, ..., M/2-1, -M/2, ..., -1) along every axis; the signed order
-M/2 .. M/2-1 is used at the serialization boundary. Real fields carry a
zero Nyquist plane so Hermitian symmetry pairs every retained mode.
"""
from functools import cached_property, lru_cache
from typing import Optional, Sequence, Union
import logging
import math

import numpy as np
import scipy.fft as sfft

from .errors import GridError, ParameterError
from .schemas import (
    CutoffKind, Dealias, DispersionParams, DyadicShell, GridSpec, SymbolFamily,
)
from .utils.parallel import worker_count

logger = logging.getLogger(__name__)

ArrayLike = Union[np.ndarray, Sequence[float], Sequence[int]]

# Integer symbol evaluation switches to Python ints above this magnitude
_INT64_SAFE = 2 ** 20


# ============================================================================
# GRID
# ============================================================================

class SpectralGrid:
    """Frequency lattice and physical sampling lattice of one periodic box"""

    def __init__(self, n: int, modes_per_dim: int, period: float = 2.0 * math.pi):
        spec = GridSpec(n=n, modes_per_dim=modes_per_dim, period=period)
        self.n = spec.n
        self.modes_per_dim = spec.modes_per_dim
        self.period = spec.period

    @classmethod
    def from_spec(cls, spec: GridSpec) -> "SpectralGrid":
        return cls(spec.n, spec.modes_per_dim, spec.period)

    def to_spec(self) -> GridSpec:
        return GridSpec(n=self.n, modes_per_dim=self.modes_per_dim, period=self.period)

    def __repr__(self) -> str:
        return f"SpectralGrid(n={self.n}, M={self.modes_per_dim}, L={self.period:g})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, SpectralGrid):
            return NotImplemented
        return (self.n, self.modes_per_dim, self.period) == (other.n, other.modes_per_dim, other.period)

    def __hash__(self) -> int:
        return hash((self.n, self.modes_per_dim, self.period))

    @property
    def shape(self) -> tuple:
        return (self.modes_per_dim,) * self.n

    @property
    def scale(self) -> float:
        """Lattice spacing 2 pi / L in frequency space"""
        return 2.0 * math.pi / self.period

    @property
    def cell_volume(self) -> float:
        return (self.period / self.modes_per_dim) ** self.n

    @cached_property
    def integer_modes(self) -> np.ndarray:
        """Signed integer mode numbers along one axis, FFT order"""
        M = self.modes_per_dim
        return np.rint(sfft.fftfreq(M, d=1.0 / M)).astype(np.int64)

    @cached_property
    def mode_indices(self) -> np.ndarray:
        """Integer lattice indices k, shape (n, M, ..., M)"""
        axes = [self.integer_modes] * self.n
        grid = np.stack(np.meshgrid(*axes, indexing="ij"))
        grid.setflags(write=False)
        return grid

    @cached_property
    def wavevectors(self) -> np.ndarray:
        """Physical frequencies xi = (2 pi / L) k, shape (n, M, ..., M)"""
        xi = self.scale * self.mode_indices
        xi.setflags(write=False)
        return xi

    @cached_property
    def wavenumber_sq(self) -> np.ndarray:
        """|xi|^2 on the lattice"""
        k2 = np.sum(self.mode_indices.astype(np.float64) ** 2, axis=0) * self.scale ** 2
        k2.setflags(write=False)
        return k2

    @cached_property
    def nyquist_mask(self) -> np.ndarray:
        """True where any coordinate sits on the unpaired -M/2 plane"""
        mask = np.any(self.mode_indices == -self.modes_per_dim // 2, axis=0)
        mask.setflags(write=False)
        return mask

    @property
    def max_frequency(self) -> float:
        """Largest |xi| on the lattice"""
        return self.scale * (self.modes_per_dim / 2) * math.sqrt(self.n)

    def physical_axes(self, M: Optional[int] = None) -> list:
        M = M or self.modes_per_dim
        return [np.arange(M) * (self.period / M)] * self.n

    def physical_coordinates(self, M: Optional[int] = None) -> np.ndarray:
        """Sample points x_j = L j / M, shape (n, M, ..., M)"""
        return np.stack(np.meshgrid(*self.physical_axes(M), indexing="ij"))

    def dealias_mask(self, dealias: Dealias) -> np.ndarray:
        """Retained modes: |k_i| <= (M-1)//3 on every axis for the two-thirds rule"""
        if dealias == Dealias.NONE:
            return np.ones(self.shape, dtype=bool)
        cut = (self.modes_per_dim - 1) // 3
        return np.all(np.abs(self.mode_indices) <= cut, axis=0)


def padded_size(grid: SpectralGrid, minimum: int) -> int:
    """Even FFT-friendly size >= max(minimum, M)"""
    size = sfft.next_fast_len(max(minimum, grid.modes_per_dim))
    return size + (size % 2)


def synthesize(grid: SpectralGrid, coeffs: np.ndarray, size: Optional[int] = None) -> np.ndarray:
    """
    Physical samples of unitary coefficients on a grid of ``size`` points per axis.

    The last ``grid.n`` axes of ``coeffs`` are frequency axes in FFT order;
    leading axes are batch axes. ``size`` > M zero-pads.
    """
    n, M = grid.n, grid.modes_per_dim
    axes = tuple(range(-n, 0))
    if size is not None and size > M:
        padded = np.zeros(coeffs.shape[:-n] + (size,) * n, dtype=np.complex128)
        idx = np.ix_(*([grid.integer_modes % size] * n))
        padded[(Ellipsis,) + idx] = coeffs
        coeffs = padded
    else:
        size = M
    values = sfft.ifftn(coeffs, axes=axes, norm="ortho", workers=worker_count())
    values /= (grid.period / size) ** (n / 2)
    return values


def analyze(values: np.ndarray, n: int, period: float) -> np.ndarray:
    """Unitary coefficients of samples on a grid of any size (inverse of synthesize)"""
    size = values.shape[-1]
    coeffs = sfft.fftn(values, axes=tuple(range(-n, 0)), norm="ortho", workers=worker_count())
    coeffs *= (period / size) ** (n / 2)
    return coeffs


def lattice_wavevectors(n: int, size: int, period: float) -> np.ndarray:
    """Physical frequencies of a size^n lattice, shape (n, size, ..., size), FFT order"""
    axis = (2.0 * math.pi / period) * np.rint(sfft.fftfreq(size, d=1.0 / size))
    return np.stack(np.meshgrid(*([axis] * n), indexing="ij"))


# ============================================================================
# FIELD
# ============================================================================

def _reflect(coeffs: np.ndarray, axes: Optional[Sequence[int]] = None) -> np.ndarray:
    """c(k) -> c(-k) along the given axes, FFT order"""
    axes = range(coeffs.ndim) if axes is None else axes
    out = coeffs
    for ax in axes:
        out = np.roll(np.flip(out, axis=ax), 1, axis=ax)
    return out


class Field:
    """
    One space snapshot on a SpectralGrid.

    Fields are immutable: ``coeffs`` is a read-only array and every operation
    returns a new Field.
    """

    __slots__ = ("grid", "coeffs", "real_flag")

    def __init__(self, grid: SpectralGrid, coeffs: np.ndarray, real_flag: bool = False):
        coeffs = np.array(coeffs, dtype=np.complex128, copy=True)
        if coeffs.shape != grid.shape:
            raise GridError(f"coefficient shape {coeffs.shape} does not match grid shape {grid.shape}")
        if real_flag:
            coeffs[grid.nyquist_mask] = 0.0
        coeffs.setflags(write=False)
        self.grid = grid
        self.coeffs = coeffs
        self.real_flag = bool(real_flag)

    def __repr__(self) -> str:
        return f"Field({self.grid!r}, real={self.real_flag}, l2={self.l2_norm():.6g})"

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------

    @classmethod
    def zeros(cls, grid: SpectralGrid, real: bool = True) -> "Field":
        return cls(grid, np.zeros(grid.shape, dtype=np.complex128), real)

    @classmethod
    def from_physical(cls, grid: SpectralGrid, values: np.ndarray, real: Optional[bool] = None) -> "Field":
        """Transform physical samples to unitary coefficients"""
        values = np.asarray(values)
        if values.shape != grid.shape:
            raise GridError(f"sample shape {values.shape} does not match grid shape {grid.shape}")
        if real is None:
            real = not np.iscomplexobj(values)
        return cls(grid, analyze(values, grid.n, grid.period), real)

    @classmethod
    def single_mode(cls, grid: SpectralGrid, k: Sequence[int], amplitude: complex = 1.0, real: bool = False) -> "Field":
        """
        Field with one lattice mode set.

        With ``real`` the conjugate partner -k receives conj(amplitude) so the
        field is real-valued; a self-conjugate mode must then be real.
        """
        M = grid.modes_per_dim
        k = tuple(int(v) for v in k)
        if len(k) != grid.n:
            raise GridError(f"mode {k} has the wrong dimension for {grid!r}")
        if any(not (-M // 2 <= v < M // 2) for v in k):
            raise GridError(f"mode {k} is outside the lattice of {grid!r}")
        coeffs = np.zeros(grid.shape, dtype=np.complex128)
        idx = tuple(v % M for v in k)
        coeffs[idx] = amplitude
        if real:
            partner = tuple((-v) % M for v in k)
            if partner == idx:
                coeffs[idx] = complex(amplitude).real
            else:
                coeffs[partner] = np.conj(amplitude)
        return cls(grid, coeffs, real)

    def with_coeffs(self, coeffs: np.ndarray) -> "Field":
        return Field(self.grid, coeffs, self.real_flag)

    # ------------------------------------------------------------------
    # Transforms
    # ------------------------------------------------------------------

    def to_physical(self, pad_to: Optional[int] = None) -> np.ndarray:
        """
        Samples on the (optionally zero-padded) physical grid.

        Padding evaluates the same trigonometric polynomial on a finer grid,
        so lattice sums of products up to the padded degree stay exact.
        """
        values = synthesize(self.grid, self.coeffs, pad_to)
        return values.real if self.real_flag else values

    # ------------------------------------------------------------------
    # Norms and checks
    # ------------------------------------------------------------------

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.coeffs) ** 2)))

    def physical_l2_norm(self) -> float:
        values = self.to_physical()
        return float(np.sqrt(np.sum(np.abs(values) ** 2) * self.grid.cell_volume))

    def hermitian_defect(self) -> float:
        """max |c(-k) - conj c(k)| relative to max |c|"""
        scale = np.max(np.abs(self.coeffs))
        if scale == 0.0:
            return 0.0
        return float(np.max(np.abs(_reflect(self.coeffs) - np.conj(self.coeffs))) / scale)

    # ------------------------------------------------------------------
    # Linear structure
    # ------------------------------------------------------------------

    def _check_compatible(self, other: "Field") -> None:
        if self.grid != other.grid:
            raise GridError("fields live on different grids")

    def __add__(self, other: "Field") -> "Field":
        self._check_compatible(other)
        return Field(self.grid, self.coeffs + other.coeffs, self.real_flag and other.real_flag)

    def __sub__(self, other: "Field") -> "Field":
        self._check_compatible(other)
        return Field(self.grid, self.coeffs - other.coeffs, self.real_flag and other.real_flag)

    def __mul__(self, scalar: complex) -> "Field":
        real = self.real_flag and np.isreal(scalar)
        return Field(self.grid, self.coeffs * scalar, real)

    __rmul__ = __mul__

    def __neg__(self) -> "Field":
        return self.with_coeffs(-self.coeffs)


def hermitian_symmetrize(coeffs: np.ndarray) -> np.ndarray:
    """(c(k) + conj c(-k)) / 2: the coefficients of the real part"""
    return 0.5 * (coeffs + np.conj(_reflect(coeffs)))


# ============================================================================
# SYMBOLS
# ============================================================================

def _exact_symbol(params: DispersionParams, xi: np.ndarray) -> np.ndarray:
    """a = 2 symbols on integer vectors, in integer arithmetic"""
    if xi.size and np.max(np.abs(xi)) > _INT64_SAFE:
        xi = xi.astype(object)
    x1 = xi[..., 0]
    if params.family == SymbolFamily.ISOTROPIC_FZK:
        return x1 * np.sum(xi * xi, axis=-1)
    if params.family == SymbolFamily.MULTI_DIRECTIONAL_BO:
        return np.sum(xi * xi * xi, axis=-1)
    return -x1 * x1 * x1 + x1 * xi[..., 1] * xi[..., 1]


def symbol_multiplier(params: DispersionParams, xi: ArrayLike) -> np.ndarray:
    """
    Dispersion symbol phi(xi), vectorized over leading axes.

    ``xi`` carries the n components on its last axis. Integer input with
    a = 2 is evaluated exactly in integer arithmetic.

    IsotropicFZK:        xi_1 |xi|^a
    MultiDirectionalBO:  sum_i xi_i |xi_i|^a
    RibaudVento2D:       -xi_1 |xi_1|^a + xi_1 xi_2^2
    """
    xi = np.asarray(xi)
    if xi.shape[-1:] != (params.n,):
        raise ParameterError(f"frequency vector must have {params.n} components, got shape {xi.shape}")
    if params.a == 2.0 and np.issubdtype(xi.dtype, np.integer):
        return _exact_symbol(params, xi)
    xi = xi.astype(np.float64)
    a = params.a
    x1 = xi[..., 0]
    if params.family == SymbolFamily.ISOTROPIC_FZK:
        return x1 * np.sqrt(np.sum(xi * xi, axis=-1)) ** a
    if params.family == SymbolFamily.MULTI_DIRECTIONAL_BO:
        return np.sum(xi * np.abs(xi) ** a, axis=-1)
    return -x1 * np.abs(x1) ** a + x1 * xi[..., 1] ** 2


def _check_params_grid(params: DispersionParams, grid: SpectralGrid) -> None:
    if params.n != grid.n or not math.isclose(params.period, grid.period):
        raise ParameterError(f"params (n={params.n}, L={params.period:g}) do not match {grid!r}")


@lru_cache(maxsize=64)
def grid_symbol(params: DispersionParams, grid: SpectralGrid) -> np.ndarray:
    """phi on every lattice frequency of the grid (read-only, cached)"""
    _check_params_grid(params, grid)
    phi = symbol_multiplier(params, np.moveaxis(grid.wavevectors, 0, -1))
    phi = np.asarray(phi, dtype=np.float64)
    phi.setflags(write=False)
    return phi


def max_abs_symbol(params: DispersionParams, grid: SpectralGrid, dealias: Dealias = Dealias.NONE) -> float:
    """max |phi| over the modes a solver retains"""
    phi = grid_symbol(params, grid)
    return float(np.max(np.abs(phi[grid.dealias_mask(dealias)])))


def propagate(f: Field, t: float, params: DispersionParams) -> Field:
    """Free flow S(t): multiply every coefficient by exp(-i t phi(xi))"""
    if t == 0.0:
        return f
    phase = np.exp(-1j * t * grid_symbol(params, f.grid))
    return f.with_coeffs(f.coeffs * phase)


# ============================================================================
# LITTLEWOOD-PALEY
# ============================================================================

def _theta(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x, dtype=np.float64)
    pos = x > 0.0
    out[pos] = np.exp(-1.0 / x[pos])
    return out


def smooth_step(r: ArrayLike) -> np.ndarray:
    """
    C-infinity radial step: 1 on [0, 1], 0 on [2, inf).

        psi(r) = theta(2 - r) / (theta(2 - r) + theta(r - 1)),  theta(x) = exp(-1/x) for x > 0

    Phi = psi(|xi|) and chi_N = psi(|xi|/N) - psi(2|xi|/N) telescope to
    psi(|xi|/N_max), which is identically 1 once N_max >= max |xi|.
    """
    r = np.asarray(r, dtype=np.float64)
    upper = _theta(2.0 - r)
    return upper / (upper + _theta(r - 1.0))


def max_dyadic(grid: SpectralGrid) -> int:
    """Least dyadic N with N >= max |xi| on the lattice"""
    top = grid.max_frequency
    return 1 if top <= 1.0 else 1 << math.ceil(math.log2(top) - 1e-12)


def dyadic_shells(grid: SpectralGrid) -> list:
    """1, 2, 4, ..., max_dyadic(grid)"""
    shells, N = [], 1
    while N <= max_dyadic(grid):
        shells.append(N)
        N *= 2
    return shells


def _check_shell(grid: SpectralGrid, N: int) -> None:
    if N > max_dyadic(grid):
        raise GridError(f"shell beyond grid: N = {N} > {max_dyadic(grid)} for {grid!r}")


def shell_multiplier(grid: SpectralGrid, shell: DyadicShell) -> np.ndarray:
    """
    Fourier multiplier of P_N.

    Sharp shells are indicators of N^2/2 <= |xi|^2 < 2 N^2 (|xi|^2 < 2 for
    N = 1); they tile the lattice and sit inside [N/2, 2N).
    """
    N = shell.N
    _check_shell(grid, N)
    k2 = grid.wavenumber_sq
    if shell.cutoff == CutoffKind.SHARP:
        upper = k2 < 2.0 * N * N
        if N == 1:
            return upper.astype(np.float64)
        return (upper & (k2 >= 0.5 * N * N)).astype(np.float64)
    r = np.sqrt(k2)
    if N == 1:
        return smooth_step(r)
    return smooth_step(r / N) - smooth_step(2 * r / N)


def low_pass_multiplier(grid: SpectralGrid, N: int, cutoff: CutoffKind = CutoffKind.SMOOTH) -> np.ndarray:
    """Multiplier of P_{<=N} = sum of shells up to N"""
    _check_shell(grid, N)
    k2 = grid.wavenumber_sq
    if cutoff == CutoffKind.SHARP:
        return (k2 < 2.0 * N * N).astype(np.float64)
    return smooth_step(np.sqrt(k2) / N)


def lp_project(f: Field, shell: DyadicShell) -> Field:
    return f.with_coeffs(f.coeffs * shell_multiplier(f.grid, shell))


def lp_low_pass(f: Field, N: int, cutoff: CutoffKind = CutoffKind.SMOOTH) -> Field:
    return f.with_coeffs(f.coeffs * low_pass_multiplier(f.grid, N, cutoff))


def shell_norms(f: Field, cutoff: CutoffKind = CutoffKind.SHARP) -> dict:
    """||P_N f||_{L2} for every shell of the grid"""
    power = np.abs(f.coeffs) ** 2
    return {
        N: float(np.sqrt(np.sum(power * shell_multiplier(f.grid, DyadicShell(N=N, cutoff=cutoff)) ** 2)))
        for N in dyadic_shells(f.grid)
    }


# ============================================================================
# NORMS AND MULTIPLIERS
# ============================================================================

def sobolev_norm(f: Field, s: float) -> float:
    """(sum (1 + |xi|^2)^s |f_hat|^2)^(1/2)"""
    weight = (1.0 + f.grid.wavenumber_sq) ** s
    return float(np.sqrt(np.sum(weight * np.abs(f.coeffs) ** 2)))


def homogeneous_sobolev_norm(f: Field, s: float) -> float:
    """(sum_{xi != 0} |xi|^(2s) |f_hat|^2)^(1/2)"""
    k2 = f.grid.wavenumber_sq
    nonzero = k2 > 0.0
    weight = np.zeros_like(k2)
    weight[nonzero] = k2[nonzero] ** s
    return float(np.sqrt(np.sum(weight * np.abs(f.coeffs) ** 2)))


def anisotropic_norm(f: Field, s: float) -> float:
    """H^{s,0}(T^2): only the first frequency component is weighted"""
    if f.grid.n != 2:
        raise GridError("anisotropic norm defined for n = 2")
    weight = (1.0 + f.grid.wavevectors[0] ** 2) ** s
    return float(np.sqrt(np.sum(weight * np.abs(f.coeffs) ** 2)))


def apply_x1_derivative(f: Field) -> Field:
    return f.with_coeffs(1j * f.grid.wavevectors[0] * f.coeffs)


def reflect_axes(f: Field, axes: Sequence[int]) -> Field:
    """f with x_i -> -x_i for every i in ``axes``"""
    return f.with_coeffs(_reflect(f.coeffs, axes=axes))


def reflect_x1(f: Field) -> Field:
    """f(-x_1, x'); spectrally xi_1 -> -xi_1"""
    return reflect_axes(f, (0,))


# ============================================================================
# RANDOM DATA
# ============================================================================

def random_shell_field(
    grid: SpectralGrid,
    N: int,
    rng: np.random.Generator,
    real: bool = True,
) -> Field:
    """
    i.i.d. complex Gaussian coefficients on the Sharp shell N.

    Real fields are Hermitian-symmetrized afterwards; the support is
    preserved because Sharp shells are symmetric under xi -> -xi.
    """
    mask = shell_multiplier(grid, DyadicShell(N=N, cutoff=CutoffKind.SHARP)) > 0.0
    coeffs = np.zeros(grid.shape, dtype=np.complex128)
    count = int(np.count_nonzero(mask))
    coeffs[mask] = rng.standard_normal(count) + 1j * rng.standard_normal(count)
    if real:
        coeffs = hermitian_symmetrize(coeffs)
    return Field(grid, coeffs, real)
