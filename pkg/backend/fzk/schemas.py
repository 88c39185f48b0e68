"""
Pydantic models shared by every module of the lab.

Parameters, grid descriptions, probes, solver configurations, reports and the
per-kind experiment specifications all live here so the CLI can validate a
config file against a single source of truth.
"""
from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator, model_validator
from typing import Optional, List, Literal, Union, Annotated, Dict, Any
from pathlib import Path
import enum
import math


TWO_PI = 2.0 * math.pi

# Largest modes_per_dim per spatial dimension
MODE_LIMIT = {1: 4096, 2: 256, 3: 64}
MODE_LIMIT_HIGHER = 16


def is_dyadic(value: int) -> bool:
    """True for 1, 2, 4, 8, ..."""
    return value >= 1 and (value & (value - 1)) == 0


# ============================================================================
# ENUMERATIONS
# ============================================================================

class SymbolFamily(str, enum.Enum):
    """Dispersion symbol families"""
    ISOTROPIC_FZK = "IsotropicFZK"
    MULTI_DIRECTIONAL_BO = "MultiDirectionalBO"
    RIBAUD_VENTO_2D = "RibaudVento2D"


class CutoffKind(str, enum.Enum):
    SHARP = "Sharp"
    SMOOTH = "Smooth"


class Constraint(str, enum.Enum):
    """Admissibility rules for transversality scans"""
    HIGH_HIGH_HIGH = "HighHighHigh"
    SEPARATED_HIGH_LOW = "SeparatedHighLow"
    ZK_ND_SMALL_FIRST_COMPONENT = "ZK_nD_SmallFirstComponent"


class Dealias(str, enum.Enum):
    TWO_THIRDS = "TwoThirds"
    NONE = "None"


class Integrator(str, enum.Enum):
    IFRK4 = "IFRK4"


class Domain(str, enum.Enum):
    """Which version of an estimate a probe is checking"""
    EUCLIDEAN = "euclidean"
    PERIODIC = "periodic"


class Verdict(str, enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"


class ExperimentKind(str, enum.Enum):
    SIMULATE = "Simulate"
    VERIFY_BILINEAR = "VerifyBilinear"
    VERIFY_SHORTTIME = "VerifyShorttime"
    VERIFY_KERNEL = "VerifyKernel"
    VERIFY_LINEAR_STRICHARTZ = "VerifyLinearStrichartz"
    TRANSVERSALITY = "Transversality"
    RESONANCE_SCAN = "ResonanceScan"
    BONA_SMITH = "BonaSmith"


# ============================================================================
# SPECTRAL-CORE TYPES
# ============================================================================

class DispersionParams(BaseModel):
    """Symbol family, fractional exponent, dimension and box period"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    family: SymbolFamily = Field(SymbolFamily.ISOTROPIC_FZK, description="Dispersion symbol family")
    a: float = Field(2.0, ge=1.0, le=2.0, description="Fractional exponent a in [1, 2]")
    n: int = Field(2, ge=1, description="Spatial dimension")
    period: float = Field(TWO_PI, gt=0.0, description="Box side length L; frequencies live on (2π/L)·Z^n")

    @model_validator(mode="after")
    def check_family_dimension(self):
        if self.family == SymbolFamily.RIBAUD_VENTO_2D and self.n != 2:
            raise ValueError("RibaudVento2D is defined for n = 2 only")
        return self

    @property
    def lattice_scale(self) -> float:
        return TWO_PI / self.period

    @property
    def integer_lattice(self) -> bool:
        """Lattice frequencies are integers (L = 2π)"""
        return math.isclose(self.period, TWO_PI, rel_tol=0.0, abs_tol=1e-15)

    @property
    def exact(self) -> bool:
        """Symbols on the lattice can be evaluated in integer arithmetic"""
        return self.a == 2.0 and self.integer_lattice


class GridSpec(BaseModel):
    """Shape of one periodic box discretization"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    n: int = Field(2, ge=1, description="Spatial dimension")
    modes_per_dim: int = Field(64, gt=0, description="Even number of modes M per dimension")
    period: float = Field(TWO_PI, gt=0.0, description="Box side length L")

    @field_validator("modes_per_dim")
    def validate_even(cls, v):
        if v % 2 != 0:
            raise ValueError("modes_per_dim must be even")
        return v

    @model_validator(mode="after")
    def check_mode_limit(self):
        limit = MODE_LIMIT.get(self.n, MODE_LIMIT_HIGHER)
        if self.modes_per_dim > limit:
            raise ValueError(
                f"M = {self.modes_per_dim} exceeds the mode limit M <= {limit} for n = {self.n}"
            )
        return self


class DyadicShell(BaseModel):
    """Littlewood-Paley shell label"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    N: int = Field(..., ge=1, description="Dyadic frequency scale")
    cutoff: CutoffKind = CutoffKind.SHARP

    @field_validator("N")
    def validate_dyadic(cls, v):
        if not is_dyadic(v):
            raise ValueError(f"N = {v} is not a dyadic integer")
        return v


class FieldHeader(BaseModel):
    """Header shared by the FZK1 binary container and its JSON sidecar"""
    magic: Literal["FZK1"] = "FZK1"
    n: int
    M: int
    L: float
    real_flag: bool


# ============================================================================
# DISPERSION-ANALYSIS TYPES
# ============================================================================

class FrequencyTriple(BaseModel):
    """Three lattice frequencies (integer mode indices) summing to zero"""
    model_config = ConfigDict(frozen=True)

    xi: List[List[int]] = Field(..., min_length=3, max_length=3)
    shells: List[int] = Field(..., min_length=3, max_length=3)

    @model_validator(mode="after")
    def check_convolution(self):
        dims = {len(v) for v in self.xi}
        if len(dims) != 1:
            raise ValueError("frequencies must share one dimension")
        if any(sum(col) != 0 for col in zip(*self.xi)):
            raise ValueError("frequencies must sum to zero")
        return self


class TransversalityReport(BaseModel):
    """Outcome of a min_transversality scan"""
    N: int
    params: DispersionParams
    constraint: Constraint
    c_min: float
    witness: FrequencyTriple
    triples_scanned: int
    sampled: bool = False
    seed: Optional[int] = None
    low: Optional[int] = None
    shells: Optional[List[int]] = None
    normalization: float
    reference_bound: Optional[float] = None

    def to_summary(self) -> Dict[str, Any]:
        """The flat JSON record written next to the CSV"""
        return {
            "N": self.N,
            "a": self.params.a,
            "n": self.params.n,
            "family": self.params.family.value,
            "constraint": self.constraint.value,
            "c_min": self.c_min,
            "witness": [list(v) for v in self.witness.xi],
            "triples_scanned": self.triples_scanned,
            "sampled": self.sampled,
            "seed": self.seed,
        }


# ============================================================================
# ESTIMATE-VERIFY TYPES
# ============================================================================

class EstimateProbe(BaseModel):
    """Everything a ratio experiment needs besides the estimate itself"""
    model_config = ConfigDict(extra="forbid")

    params: DispersionParams = Field(default_factory=DispersionParams)
    grid: GridSpec = Field(default_factory=GridSpec)
    shells: List[int] = Field(default_factory=lambda: [16, 32, 64], description="High shells N")
    low_shell: Optional[int] = Field(None, description="Low shell K for bilinear experiments")
    time_horizon: Optional[float] = Field(None, gt=0.0, description="T; defaults depend on the experiment")
    time_samples: Optional[int] = Field(None, ge=2, description="Uniform time samples on [0, T]; auto when omitted")
    rng_seed: int = 0
    trials: int = Field(50, ge=1)
    domain: Domain = Domain.EUCLIDEAN
    transit_guard: float = Field(0.1, gt=0.0, description="Lower guard: T >= transit_guard * N^-a")

    @field_validator("shells")
    def validate_shells(cls, v):
        if not v:
            raise ValueError("at least one shell is required")
        for N in v:
            if not is_dyadic(N):
                raise ValueError(f"shell {N} is not dyadic")
        return sorted(v)

    @field_validator("low_shell")
    def validate_low(cls, v):
        if v is not None and not is_dyadic(v):
            raise ValueError(f"low shell {v} is not dyadic")
        return v

    @model_validator(mode="after")
    def check_grid_matches(self):
        if self.grid.n != self.params.n:
            raise ValueError("grid and params disagree on the dimension")
        if not math.isclose(self.grid.period, self.params.period):
            raise ValueError("grid and params disagree on the period")
        return self


class RatioReport(BaseModel):
    """Per-(N, K) record: per-trial measured norm, bound scale and ratio"""
    N: int
    K: Optional[int] = None
    a: float
    n: int
    T: float
    seed: int
    time_samples: int
    lhs: List[float]
    rhs_scale: List[float]
    ratio: List[float]

    @computed_field
    @property
    def max_ratio(self) -> float:
        return max(self.ratio)

    @computed_field
    @property
    def mean_ratio(self) -> float:
        return sum(self.ratio) / len(self.ratio)


class VerificationSummary(BaseModel):
    """Verdict over a sweep of RatioReports"""
    kind: str
    verdict: Verdict
    statistic: float = Field(..., description="Variation factor or log-log slope driving the verdict")
    threshold: float
    convergence_delta: Optional[float] = None
    reports: List[RatioReport]


class KernelDecayRow(BaseModel):
    t: float
    sup_value: float = Field(..., description="|t| * sup_x |I(x, t)|")
    argmax_x: List[float]
    samples: int


class KernelDecayReport(BaseModel):
    params: DispersionParams
    profile: str
    rows: List[KernelDecayRow]
    c_emp: float
    verdict: Verdict
    self_consistency: Optional[float] = None


# ============================================================================
# EVOLUTION TYPES
# ============================================================================

class SolverConfig(BaseModel):
    """Integrating-factor solver configuration"""
    model_config = ConfigDict(extra="forbid")

    params: DispersionParams = Field(default_factory=DispersionParams)
    grid: GridSpec = Field(default_factory=GridSpec)
    dt: float = Field(1e-4, gt=0.0)
    T: float = Field(1.0, ge=0.0)
    dealias: Dealias = Dealias.TWO_THIRDS
    integrator: Integrator = Integrator.IFRK4
    diag_every: int = Field(1, ge=1)
    sobolev_s: List[float] = Field(default_factory=lambda: [1.0])
    snapshot_every: Optional[int] = Field(None, ge=1, description="Stride (in diagnostic samples) of exported snapshots")
    nonlinear: bool = Field(True, description="Test hook: False reduces the solver to the free flow")

    @model_validator(mode="after")
    def check_phase_resolution(self):
        if self.grid.n != self.params.n:
            raise ValueError("grid and params disagree on the dimension")
        if not math.isclose(self.grid.period, self.params.period):
            raise ValueError("grid and params disagree on the period")
        from .spectral import SpectralGrid, max_abs_symbol

        bound = self.dt * max_abs_symbol(self.params, SpectralGrid.from_spec(self.grid), self.dealias)
        if bound > 0.5:
            raise ValueError(
                f"dt * max|phi| = {bound:.3g} exceeds 0.5; reduce dt below "
                f"{0.5 * self.dt / bound:.3g}"
            )
        return self


class BonaSmithRow(BaseModel):
    N: int
    sup_h0: float = Field(..., description="sup_t ||u - u_N||_{L2}")
    sup_hs: float = Field(..., description="sup_t ||u - u_N||_{H^s}")


class BonaSmithReport(BaseModel):
    """Convergence table of the frequency-truncated approximations"""
    s: float
    cutoff: CutoffKind
    T: float
    steps: int
    rows: List[BonaSmithRow]
    monotone_h0: bool
    monotone_hs: bool
    h0_decay: List[float] = Field(default_factory=list, description="sup_h0(N) / sup_h0(2N) per doubling")
    threshold: Optional[float] = Field(None, description="Regularity threshold of the local theory for this setting")


# ============================================================================
# EXPERIMENT SPECIFICATIONS
# ============================================================================

class InitialDatum(BaseModel):
    """Initial data recipe"""
    model_config = ConfigDict(extra="forbid")

    profile: Literal["cosine", "gaussian", "random"] = "random"
    amplitude: float = 0.1
    mode: List[int] = Field(default_factory=lambda: [1, 0], description="Lattice mode for the cosine profile")
    width: float = Field(0.5, gt=0.0, description="Gaussian width")
    decay: float = Field(5.0, description="Random datum: coefficients decay like (1+|xi|^2)^(-decay/2)")
    target_s: float = Field(3.0, description="Random datum: Sobolev index of the normalization")
    target_norm: Optional[float] = Field(0.5, gt=0.0, description="Random datum: H^target_s norm after scaling")
    max_mode: Optional[int] = Field(None, ge=1, description="Random datum: zero modes with |k|_inf above this")


class ExperimentBase(BaseModel):
    model_config = ConfigDict(extra="forbid")

    seed: int = Field(0, ge=0, lt=2 ** 64)
    out_dir: Optional[Path] = None


class SimulateSpec(ExperimentBase):
    kind: Literal["Simulate"] = "Simulate"
    solver: SolverConfig = Field(default_factory=lambda: SolverConfig(dt=1e-4, T=0.01, grid=GridSpec(modes_per_dim=32)))
    datum: InitialDatum = Field(default_factory=InitialDatum)


class BilinearSpec(ExperimentBase):
    kind: Literal["VerifyBilinear"] = "VerifyBilinear"
    probe: EstimateProbe = Field(default_factory=lambda: EstimateProbe(low_shell=1, grid=GridSpec(modes_per_dim=256)))


class ShorttimeSpec(ExperimentBase):
    kind: Literal["VerifyShorttime"] = "VerifyShorttime"
    probe: EstimateProbe = Field(
        default_factory=lambda: EstimateProbe(
            low_shell=1, grid=GridSpec(modes_per_dim=256), domain=Domain.PERIODIC
        )
    )


class KernelSpec(ExperimentBase):
    kind: Literal["VerifyKernel"] = "VerifyKernel"
    params: DispersionParams = Field(default_factory=lambda: DispersionParams(n=3))
    t_list: List[float] = Field(default_factory=lambda: [1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0])
    profile: Literal["bump", "littlewood-paley"] = "bump"
    axial_points: int = Field(9, ge=1, description="Samples with x1/t in [1/4, 4] on the x1 axis (both signs)")
    far_points: int = Field(3, ge=0, description="Random off-axis samples per t")
    check_consistency: bool = True


class LinearStrichartzSpec(ExperimentBase):
    kind: Literal["VerifyLinearStrichartz"] = "VerifyLinearStrichartz"
    probe: EstimateProbe = Field(
        default_factory=lambda: EstimateProbe(
            params=DispersionParams(n=3), grid=GridSpec(n=3, modes_per_dim=64),
            shells=[2, 4, 8], trials=10, domain=Domain.PERIODIC,
        )
    )
    q: float = Field(4.0, ge=2.0)
    p: float = Field(4.0, ge=2.0)


class TransversalitySpec(ExperimentBase):
    kind: Literal["Transversality"] = "Transversality"
    params: DispersionParams = Field(default_factory=DispersionParams)
    constraint: Constraint = Constraint.HIGH_HIGH_HIGH
    shells: List[int] = Field(default_factory=lambda: [8], description="Values of N (or 2^k)")
    low: Optional[int] = Field(None, description="K for SeparatedHighLow")
    triple: Optional[List[int]] = Field(
        None, min_length=3, max_length=3,
        description="Explicit (N1, N2, N3) Sharp shells for HighHighHigh; replaces the shells sweep",
    )
    sample_size: int = Field(1_000_000, ge=1)


class ResonanceScanSpec(ExperimentBase):
    kind: Literal["ResonanceScan"] = "ResonanceScan"
    params: DispersionParams = Field(default_factory=DispersionParams)
    radius: float = Field(4.0, gt=0.0, description="Scan lattice pairs with |xi_i| <= radius")


class BonaSmithSpec(ExperimentBase):
    kind: Literal["BonaSmith"] = "BonaSmith"
    solver: SolverConfig = Field(default_factory=lambda: SolverConfig(dt=2e-5, T=0.01, grid=GridSpec(modes_per_dim=64)))
    datum: InitialDatum = Field(default_factory=lambda: InitialDatum(decay=5.0, target_s=4.0))
    s: float = Field(2.0, gt=0.0)
    cutoffs: List[int] = Field(default_factory=lambda: [4, 8, 16, 32])
    cutoff: CutoffKind = CutoffKind.SMOOTH

    @field_validator("cutoffs")
    def validate_cutoffs(cls, v):
        for N in v:
            if not is_dyadic(N):
                raise ValueError(f"cutoff {N} is not dyadic")
        return sorted(v)


ExperimentSpec = Annotated[
    Union[
        SimulateSpec,
        BilinearSpec,
        ShorttimeSpec,
        KernelSpec,
        LinearStrichartzSpec,
        TransversalitySpec,
        ResonanceScanSpec,
        BonaSmithSpec,
    ],
    Field(discriminator="kind"),
]
