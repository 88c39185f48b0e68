"""
Group velocities, the resonance function and lattice transversality scans.

Frequencies handed to ``group_velocity`` and ``resonance`` are physical
vectors xi. Transversality scans work on integer mode indices k with
xi = (2 pi / L) k; for a = 2 on the integer lattice every gap is computed in
integer arithmetic.
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple
import itertools
import logging
import math

import numpy as np
import pandas as pd
from scipy import signal, spatial

from .errors import AdmissibilityError, NumericalError, ParameterError, SingularityError
from .schemas import (
    Constraint, DispersionParams, FrequencyTriple, SymbolFamily, TransversalityReport, is_dyadic,
)
from .spectral import symbol_multiplier
from .utils.parallel import worker_count

logger = logging.getLogger(__name__)

# Exhaustive enumeration is used for n = 2 up to this N; above it and in n >= 3 scans sample
ENUMERATION_LIMIT = 32
DEFAULT_SAMPLE_SIZE = 1_000_000
_SAMPLE_BATCH = 1 << 16
_MAX_DRAW_FACTOR = 200
# Lead frequencies per KD-tree query in exact scans
_QUERY_BLOCK = 4096


# ============================================================================
# GROUP VELOCITY
# ============================================================================

def _gradient(params: DispersionParams, xi: np.ndarray) -> np.ndarray:
    """
    grad phi on the last axis of ``xi``, extended by continuity to the origin.

    Integer input with a = 2 stays in integer arithmetic.
    """
    a = params.a
    if a == 2.0 and np.issubdtype(xi.dtype, np.integer):
        x1 = xi[..., 0]
        if params.family == SymbolFamily.ISOTROPIC_FZK:
            g = 2 * x1[..., None] * xi
            g[..., 0] = 3 * x1 * x1 + np.sum(xi[..., 1:] * xi[..., 1:], axis=-1)
            return g
        if params.family == SymbolFamily.MULTI_DIRECTIONAL_BO:
            return 3 * xi * xi
        return np.stack([-3 * x1 * x1 + xi[..., 1] * xi[..., 1], 2 * x1 * xi[..., 1]], axis=-1)

    xi = xi.astype(np.float64)
    x1 = xi[..., 0]
    if params.family == SymbolFamily.ISOTROPIC_FZK:
        r2 = np.sum(xi * xi, axis=-1)
        safe = np.where(r2 > 0.0, r2, 1.0)
        w = np.where(r2 > 0.0, safe ** ((a - 2.0) / 2.0), 0.0)
        g = a * (x1 * w)[..., None] * xi
        g[..., 0] = r2 ** (a / 2.0) + a * x1 * x1 * w
        return g
    if params.family == SymbolFamily.MULTI_DIRECTIONAL_BO:
        return (1.0 + a) * np.abs(xi) ** a
    return np.stack([-(1.0 + a) * np.abs(x1) ** a + xi[..., 1] ** 2, 2.0 * x1 * xi[..., 1]], axis=-1)


def group_velocity(params: DispersionParams, xi) -> np.ndarray:
    """
    grad phi(xi), vectorized over leading axes.

    IsotropicFZK: (|xi|^a + a xi_1^2 |xi|^(a-2), a xi_1 xi_j |xi|^(a-2), ...)
    MultiDirectionalBO: (1 + a) |xi_i|^a per component
    RibaudVento2D: (-(1 + a) |xi_1|^a + xi_2^2, 2 xi_1 xi_2)
    """
    xi = np.asarray(xi)
    if xi.shape[-1:] != (params.n,):
        raise ParameterError(f"frequency vector must have {params.n} components, got shape {xi.shape}")
    if params.family == SymbolFamily.ISOTROPIC_FZK and params.a < 2.0:
        if np.any(np.all(xi == 0, axis=-1)):
            raise SingularityError("group velocity singular at origin")
    return _gradient(params, xi)


def max_group_speed(params: DispersionParams, xi: np.ndarray) -> float:
    """max |grad phi| over a set of frequencies (rows of ``xi``), origin included by continuity"""
    xi = np.asarray(xi, dtype=np.float64).reshape(-1, params.n)
    if xi.size == 0:
        return 0.0
    g = _gradient(params, xi)
    return float(np.sqrt(np.max(np.sum(g * g, axis=-1))))


# ============================================================================
# RESONANCE
# ============================================================================

def _expanded_resonance(xi1: np.ndarray, xi2: np.ndarray) -> np.ndarray:
    """3(x1+x2)x1x2 + x1 e2 (2 e1 + e2) + x2 e1 (e1 + 2 e2) for phi = x^3 + x e^2"""
    x1, e1 = xi1[..., 0], xi1[..., 1]
    x2, e2 = xi2[..., 0], xi2[..., 1]
    return 3 * (x1 + x2) * x1 * x2 + x1 * e2 * (2 * e1 + e2) + x2 * e1 * (e1 + 2 * e2)


def _is_zk_plane(params: DispersionParams) -> bool:
    return params.family == SymbolFamily.ISOTROPIC_FZK and params.a == 2.0 and params.n == 2


def resonance(params: DispersionParams, xi1, xi2) -> np.ndarray:
    """
    Omega(xi1, xi2) = phi(xi1 + xi2) - phi(xi1) - phi(xi2).

    For the planar ZK symbol the expanded cubic form is evaluated as well and
    must agree: bit for bit on integer input, otherwise to 1e-12 relative to
    the size of the three symbol values.
    """
    xi1, xi2 = np.asarray(xi1), np.asarray(xi2)
    terms = (symbol_multiplier(params, xi1 + xi2), symbol_multiplier(params, xi1), symbol_multiplier(params, xi2))
    omega = terms[0] - terms[1] - terms[2]
    if _is_zk_plane(params):
        expanded = _expanded_resonance(xi1, xi2)
        if np.issubdtype(np.asarray(omega).dtype, np.integer) or np.asarray(omega).dtype == object:
            agree = np.all(omega == expanded)
        else:
            scale = 1.0 + sum(np.abs(term) for term in terms)
            agree = np.all(np.abs(omega - expanded) <= 1e-12 * scale)
        if not agree:
            raise NumericalError("resonance disagrees with its expanded cubic form")
    return omega


def resonance_partials(xi1, xi2, params: Optional[DispersionParams] = None) -> np.ndarray:
    """
    (dOmega/dxi_2, dOmega/deta_2) for the planar ZK symbol, in closed form:

        3(x1+x2)^2 + (e1+e2)^2 - 3 x2^2 - e2^2,   2(x1+x2)(e1+e2) - 2 x2 e2
    """
    if params is not None and not _is_zk_plane(params):
        raise ParameterError("resonance partials defined for IsotropicFZK with a = 2, n = 2")
    xi1, xi2 = np.asarray(xi1), np.asarray(xi2)
    if xi1.shape[-1:] != (2,) or xi2.shape[-1:] != (2,):
        raise ParameterError("resonance partials defined for IsotropicFZK with a = 2, n = 2")
    x1, e1 = xi1[..., 0], xi1[..., 1]
    x2, e2 = xi2[..., 0], xi2[..., 1]
    sx, se = x1 + x2, e1 + e2
    return np.stack([3 * sx * sx + se * se - 3 * x2 * x2 - e2 * e2, 2 * sx * se - 2 * x2 * e2], axis=-1)


def resonance_scan(params: DispersionParams, radius: float) -> pd.DataFrame:
    """
    Omega over every lattice pair with |xi_i| <= radius.

    Columns: xi1_1..xi1_n, xi2_1..xi2_n, omega, and for the planar ZK symbol
    omega_expanded, d_omega_d_xi2, d_omega_d_eta2.
    """
    if radius <= 0:
        raise ParameterError("scan radius must be positive")
    scale = params.lattice_scale
    R = int(math.floor(radius / scale + 1e-12))
    axis = np.arange(-R, R + 1)
    pts = np.stack(np.meshgrid(*([axis] * params.n), indexing="ij"), axis=-1).reshape(-1, params.n)
    pts = pts[np.sum(pts * pts, axis=-1) * scale ** 2 <= radius ** 2 * (1 + 1e-12)]

    i1, i2 = np.meshgrid(np.arange(len(pts)), np.arange(len(pts)), indexing="ij")
    k1, k2 = pts[i1.ravel()], pts[i2.ravel()]
    xi1, xi2 = (k1, k2) if params.exact else (scale * k1, scale * k2)

    table = {}
    for j in range(params.n):
        table[f"xi1_{j + 1}"] = xi1[:, j]
    for j in range(params.n):
        table[f"xi2_{j + 1}"] = xi2[:, j]
    table["omega"] = resonance(params, xi1, xi2)
    if _is_zk_plane(params):
        table["omega_expanded"] = _expanded_resonance(xi1, xi2)
        partials = resonance_partials(xi1, xi2)
        table["d_omega_d_xi2"] = partials[:, 0]
        table["d_omega_d_eta2"] = partials[:, 1]
    logger.info(f"🔍 Resonance scan: {len(pts)} lattice points, {len(pts) ** 2} pairs within radius {radius:g}")
    return pd.DataFrame(table)


# ============================================================================
# TRANSVERSALITY
# ============================================================================

@dataclass(frozen=True)
class _Slot:
    """Membership rule for one member of a triple, in physical |xi|^2"""
    r2_min: float = 0.0
    r2_max: float = math.inf
    closed_above: bool = False
    first_max: Optional[int] = None

    def contains(self, k: np.ndarray, scale: float) -> np.ndarray:
        r2 = np.sum(k * k, axis=-1) * scale ** 2
        inside = r2 >= self.r2_min
        inside &= (r2 <= self.r2_max) if self.closed_above else (r2 < self.r2_max)
        if self.first_max is not None:
            first = np.abs(k[..., 0])
            inside &= (first >= 1) & (first <= self.first_max)
        return inside

    def radius(self, scale: float) -> int:
        """Integer bounding radius of the slot"""
        return int(math.ceil(math.sqrt(self.r2_max) / scale))

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.r2_max)


def _sharp_slot(N: int) -> _Slot:
    return _Slot(0.0 if N == 1 else 0.5 * N * N, 2.0 * N * N)


def _annulus_slot(N: int) -> _Slot:
    """[N/2, 2N), or B(0, 2) for N = 1"""
    return _Slot(0.0 if N == 1 else 0.25 * N * N, 4.0 * N * N)


@dataclass(frozen=True)
class _Plan:
    slots: Tuple[_Slot, _Slot, _Slot]
    pairs: Tuple[Tuple[int, int], ...]
    symmetric: bool
    normalization: float
    labels: Tuple[int, int, int]
    reference_bound: Optional[float] = None


_ALL_PAIRS = ((0, 1), (0, 2), (1, 2))


def _plan(
    N: int,
    params: DispersionParams,
    constraint: Constraint,
    low: Optional[int],
    shells: Optional[Sequence[int]],
) -> _Plan:
    """Admissible set, gap pairs and normalization of one scan request"""
    if not is_dyadic(N):
        raise ParameterError(f"N = {N} is not dyadic")
    a = params.a

    if shells is not None:
        if constraint != Constraint.HIGH_HIGH_HIGH:
            raise ParameterError("explicit shells are supported for HighHighHigh scans")
        shells = tuple(shells)
        if len(shells) != 3 or any(not (float(s).is_integer() and is_dyadic(int(s))) for s in shells):
            raise AdmissibilityError(f"no admissible triples: shells {shells} are not three dyadic labels")
        shells = tuple(int(s) for s in shells)
        top = max(shells)
        if min(shells) * 8 < top:
            raise AdmissibilityError(f"no admissible triples: shells {shells} are not comparable within a factor 8")
        slots = tuple(_sharp_slot(s) for s in shells)
        lo = [math.sqrt(s.r2_min) for s in slots]
        hi = [math.sqrt(s.r2_max) for s in slots]
        for i in range(3):
            if lo[i] >= sum(hi[j] for j in range(3) if j != i):
                raise AdmissibilityError(f"no admissible triples: shells {shells} violate the triangle inequality")
        return _Plan(slots, _ALL_PAIRS, len(set(shells)) == 1, float(top) ** a, shells)

    if constraint == Constraint.HIGH_HIGH_HIGH:
        slot = _Slot(N * N / 64.0, 64.0 * N * N, closed_above=True)
        return _Plan((slot, slot, slot), _ALL_PAIRS, True, float(N) ** a, (N, N, N))

    if constraint == Constraint.SEPARATED_HIGH_LOW:
        K = 1 if low is None else low
        if not is_dyadic(K):
            raise ParameterError(f"low shell K = {K} is not dyadic")
        if 8 * K > N:
            raise ParameterError(f"shells not separated: K = {K} > N/8 = {N / 8:g}")
        reference = ((N / 2.0) ** a - (1.0 + a) * (2.0 * K) ** a) / float(N) ** a
        return _Plan(
            (_annulus_slot(N), _annulus_slot(K), _Slot()), ((0, 1),), False,
            float(N) ** a, (N, K, N), reference,
        )

    if params.family != SymbolFamily.ISOTROPIC_FZK or params.a != 2.0 or params.n < 3:
        raise ParameterError("ZK_nD_SmallFirstComponent is stated for IsotropicFZK with a = 2, n >= 3")
    if N < 8:
        raise AdmissibilityError(f"no admissible triples: N = {N} leaves no room for 1 <= |xi_1| <= N/8")
    slot = _Slot(0.25 * N * N, 4.0 * N * N, first_max=N // 8)
    return _Plan((slot, slot, slot), _ALL_PAIRS, True, float(N), (N, N, N))


def _gap_sq(g: Sequence[np.ndarray], pairs) -> np.ndarray:
    """Largest squared pairwise gradient gap over ``pairs``"""
    out = None
    for i, j in pairs:
        d = g[i] - g[j]
        d2 = np.sum(d * d, axis=-1)
        out = d2 if out is None else np.maximum(out, d2)
    return out


def _physical(params: DispersionParams, k: np.ndarray) -> np.ndarray:
    return k if params.exact else params.lattice_scale * k


def _canonical(k: np.ndarray) -> np.ndarray:
    """First nonzero coordinate positive (or k = 0)"""
    nz = k != 0
    first = np.argmax(nz, axis=-1)
    lead = np.take_along_axis(k, first[..., None], axis=-1)[..., 0]
    return (lead > 0) | ~np.any(nz, axis=-1)


def _slot_points(slot: _Slot, n: int, scale: float) -> np.ndarray:
    """Every lattice index of a bounded slot, shape (count, n)"""
    R = slot.radius(scale)
    axis = np.arange(-R, R + 1)
    box = np.stack(np.meshgrid(*([axis] * n), indexing="ij"), axis=-1).reshape(-1, n)
    return box[slot.contains(box, scale)]


def _count_admissible(n: int, scale: float, plan: _Plan, sizes: Tuple[int, int]) -> int:
    """Ordered admissible triples: the pair-sum histogram of slots 1 and 2 read at -k_3"""
    if not plan.slots[2].bounded:
        return sizes[0] * sizes[1]
    R = max(slot.radius(scale) for slot in plan.slots)
    axis = np.arange(-R, R + 1)
    box = np.stack(np.meshgrid(*([axis] * n), indexing="ij"), axis=-1)
    first, second, third = (slot.contains(box, scale).astype(np.float64) for slot in plan.slots)
    # entry m + 2R of the full convolution counts pairs with k_1 + k_2 = m
    sums = np.rint(signal.fftconvolve(first, second))
    closing = np.zeros_like(sums)
    closing[tuple(slice(R, 3 * R + 1) for _ in range(n))] = np.flip(third)
    return int(np.rint(np.sum(sums * closing)))


def _enumerate(N: int, params: DispersionParams, plan: _Plan) -> Tuple[float, tuple, int]:
    """
    Exact minimum over every admissible triple, by branch and bound.

    With (p, q) the first gap pair, a triple with largest squared gap B has
    |g_p - g_q| <= sqrt(B), so each k_p only meets the k_q inside a ball
    around g(k_p) (a KD-tree over the gradients of slot q) and
    k_r = -k_p - k_q closes the triple. A pass with ball radius rho finds
    every triple of gap at most rho; the radius doubles until the best gap
    fits inside it. Gaps are even in k, so k_p runs over a half-lattice; for
    identical slots k_p is also the member of largest norm.
    """
    n, scale = params.n, params.lattice_scale
    p, q = plan.pairs[0]
    (r,) = {0, 1, 2} - {p, q}

    lead = _slot_points(plan.slots[p], n, scale)
    partner = _slot_points(plan.slots[q], n, scale)
    scanned = _count_admissible(n, scale, plan, (len(lead), len(partner)))
    if scanned == 0:
        raise AdmissibilityError("no admissible triples")
    lead = lead[_canonical(lead)]
    lead_norms = np.sum(lead * lead, axis=-1)
    order = np.argsort(lead_norms, kind="stable")
    lead, lead_norms = lead[order], lead_norms[order]
    partner_norms = np.sum(partner * partner, axis=-1)
    g_lead = _gradient(params, _physical(params, lead))
    g_partner = _gradient(params, _physical(params, partner))
    tree = spatial.cKDTree(g_partner.astype(np.float64))
    reach = float(np.max(np.linalg.norm(g_lead.astype(np.float64), axis=-1)))
    reach += float(np.max(np.linalg.norm(g_partner.astype(np.float64), axis=-1))) + 1.0

    best, bound, evaluated = None, math.inf, 0

    def scan(start: int, radius: float) -> None:
        nonlocal best, bound, evaluated
        block = g_lead[start:start + _QUERY_BLOCK].astype(np.float64)
        hits = tree.query_ball_point(block, min(radius, math.sqrt(bound)) * (1.0 + 1e-9), workers=worker_count())
        sizes = np.fromiter(map(len, hits), dtype=np.int64, count=len(hits))
        total = int(sizes.sum())
        if total == 0:
            return
        rows = start + np.repeat(np.arange(len(hits)), sizes)
        cols = np.fromiter(itertools.chain.from_iterable(hits), dtype=np.int64, count=total)

        k = [None, None, None]
        k[p], k[q] = lead[rows], partner[cols]
        k[r] = -k[p] - k[q]
        ok = plan.slots[r].contains(k[r], scale)
        if plan.symmetric:
            cap = lead_norms[rows]
            ok &= (partner_norms[cols] <= cap) & (np.sum(k[r] * k[r], axis=-1) <= cap)
        keep = np.flatnonzero(ok)
        if keep.size == 0:
            return
        evaluated += keep.size

        g = [None, None, None]
        g[p], g[q] = g_lead[rows[keep]], g_partner[cols[keep]]
        g[r] = _gradient(params, _physical(params, k[r][keep]))
        gap = _gap_sq(g, plan.pairs)
        low = gap.min()
        tied = keep[gap == low]
        # smallest (k_1, k_2) among equal gaps
        pick = tied[np.lexsort(np.concatenate([k[0][tied], k[1][tied]], axis=1).T[::-1])[0]]
        key = (low, tuple(int(v) for v in k[0][pick]), tuple(int(v) for v in k[1][pick]))
        if best is None or key < best:
            best = key
            bound = float(low)

    radius = scale ** params.a
    while True:
        radius = min(radius, reach)
        for start in range(0, len(lead), _QUERY_BLOCK):
            scan(start, radius)
        if math.sqrt(bound) <= radius or radius >= reach:
            break
        logger.debug(f"No triple within gradient radius {radius:.6g} certifies the minimum; doubling")
        radius *= 2.0

    if best is None:
        raise AdmissibilityError("no admissible triples")
    gap_sq, k1, k2 = best
    logger.debug(f"Certified {scanned} admissible triples after evaluating {evaluated} candidates")
    return gap_sq, (k1, k2), scanned


def _sample(N: int, params: DispersionParams, plan: _Plan, sample_size: int, seed: int) -> Tuple[float, tuple, int]:
    """Seeded rejection sampling of admissible triples; first occurrence wins ties"""
    n, scale = params.n, params.lattice_scale
    rng = np.random.default_rng(seed)

    def draw(slot: _Slot, size: int) -> np.ndarray:
        R = slot.radius(scale)
        k = rng.integers(-R, R + 1, size=(size, n))
        if slot.first_max is not None:
            k[:, 0] = rng.integers(-slot.first_max, slot.first_max + 1, size=size)
        return k

    best, accepted, drawn = None, 0, 0
    limit = _MAX_DRAW_FACTOR * sample_size
    while accepted < sample_size and drawn < limit:
        size = min(_SAMPLE_BATCH, limit - drawn)
        k1, k2 = draw(plan.slots[0], size), draw(plan.slots[1], size)
        k3 = -k1 - k2
        drawn += size
        ok = plan.slots[0].contains(k1, scale) & plan.slots[1].contains(k2, scale) & plan.slots[2].contains(k3, scale)
        ok_idx = np.flatnonzero(ok)[: sample_size - accepted]
        if ok_idx.size == 0:
            continue
        accepted += ok_idx.size
        g = [_gradient(params, _physical(params, k[ok_idx])) for k in (k1, k2, k3)]
        gap = _gap_sq(g, plan.pairs)
        pos = int(np.argmin(gap))
        if best is None or gap[pos] < best[0]:
            j = ok_idx[pos]
            best = (gap[pos], tuple(int(v) for v in k1[j]), tuple(int(v) for v in k2[j]))

    if best is None:
        raise AdmissibilityError("no admissible triples")
    if accepted < sample_size:
        logger.warning(f"⚠️ Only {accepted} of {sample_size} admissible triples found after {drawn} draws")
    return best[0], (best[1], best[2]), accepted


def _witness(k1: tuple, k2: tuple, labels) -> FrequencyTriple:
    k3 = tuple(-x - y for x, y in zip(k1, k2))
    return FrequencyTriple(xi=[list(k1), list(k2), list(k3)], shells=list(labels))


def min_transversality(
    N: int,
    params: DispersionParams,
    constraint: Constraint,
    *,
    low: Optional[int] = None,
    shells: Optional[Sequence[int]] = None,
    sample_size: int = DEFAULT_SAMPLE_SIZE,
    seed: int = 0,
) -> TransversalityReport:
    """
    Minimum over admissible lattice triples of the largest pairwise
    group-velocity gap, divided by the constraint's normalization.

    Args:
        N: dyadic scale (2^k for ZK_nD_SmallFirstComponent)
        params: dispersion parameters
        constraint: admissibility rule
        low: K for SeparatedHighLow (default 1)
        shells: explicit (N1, N2, N3) Sharp shells for HighHighHigh
        sample_size: admissible triples drawn when the scan samples
        seed: sampling seed

    Returns:
        TransversalityReport with the minimizing witness
    """
    plan = _plan(N, params, constraint, low, shells)
    exhaustive = params.n == 2 and N <= ENUMERATION_LIMIT
    if exhaustive:
        gap_sq, (k1, k2), scanned = _enumerate(N, params, plan)
    else:
        gap_sq, (k1, k2), scanned = _sample(N, params, plan, sample_size, seed)

    c_min = math.sqrt(float(gap_sq)) / plan.normalization
    report = TransversalityReport(
        N=N,
        params=params,
        constraint=constraint,
        c_min=c_min,
        witness=_witness(k1, k2, plan.labels),
        triples_scanned=scanned,
        sampled=not exhaustive,
        seed=None if exhaustive else seed,
        low=(1 if low is None else low) if constraint == Constraint.SEPARATED_HIGH_LOW else None,
        shells=list(shells) if shells is not None else None,
        normalization=plan.normalization,
        reference_bound=plan.reference_bound,
    )
    mode = "sampled" if report.sampled else "exhaustive"
    logger.info(f"✅ {constraint.value} N={N} a={params.a:g} n={params.n}: c_min={c_min:.6g} ({mode}, {scanned} triples)")
    return report


def triple_gap(params: DispersionParams, triple: FrequencyTriple, pairs=_ALL_PAIRS) -> float:
    """Largest pairwise gradient gap of one integer-indexed triple (unnormalized)"""
    k = np.asarray(triple.xi)
    g = _gradient(params, _physical(params, k))
    return math.sqrt(float(max(np.sum((g[i] - g[j]) ** 2) for i, j in pairs)))


def validate_witness(report: TransversalityReport) -> bool:
    """Re-check membership of the witness and reproduce c_min from scratch"""
    plan = _plan(report.N, report.params, report.constraint, report.low, report.shells)
    k = np.asarray(report.witness.xi)
    if np.any(k.sum(axis=0) != 0):
        return False
    scale = report.params.lattice_scale
    for slot, point in zip(plan.slots, k):
        if not bool(slot.contains(point, scale)):
            return False
    value = triple_gap(report.params, report.witness, plan.pairs) / plan.normalization
    return math.isclose(value, report.c_min, rel_tol=1e-12, abs_tol=1e-300)


def transversality_sweep(
    shells: List[int],
    params: DispersionParams,
    constraint: Constraint,
    **kwargs,
) -> List[TransversalityReport]:
    """min_transversality for several N; reports come back in shell order"""
    reports = [min_transversality(N, params, constraint, **kwargs) for N in shells]
    values = [r.c_min for r in reports]
    if any(b < a for a, b in itertools.pairwise(values)):
        logger.info(f"c_min is not monotone across N = {shells}: {values}")
    return reports
