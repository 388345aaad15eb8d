"""Birkhoff-James orthogonality: convex minimization over lambda and covering-set geometry."""

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import nnls
from scipy.spatial import ConvexHull, QhullError

from .config import RunConfig
from .curves import Curve
from .errors import EmptyNormingSetError, PoleProximityError
from .expr import Const, HoloExpr
from .logging_setup import get_logger
from .models import CoveringResult, ExclusionDisk, ExclusionRegion, OrthoDecision
from .norms import ZERO_NORM, norming_params, norming_set, sup_norm

logger = get_logger(__name__)

# eps-active levels, relative to the objective scale
ETA_LEVELS = (1e-2, 1e-4, 1e-6, 1e-8, 1e-10)
ARMIJO = 1e-4
MAX_HALVINGS = 60
# relative certificate margin for min phi < 0
COVERING_MARGIN = 1e-9
# |g| below this fraction of ||g|| counts as a zero of g on M_f
COVERING_ZERO_TOL = 1e-10
SUFFICIENT_ZERO_TOL = 1e-8
MAX_SHRINKS = 30

Terms = Callable[[complex], Tuple[np.ndarray, np.ndarray]]


def min_norm_element(points: np.ndarray) -> complex:
    """Smallest-modulus point of the convex hull of complex points (as R^2)."""
    pts = np.unique(np.asarray(points, dtype=complex))
    if len(pts) == 1:
        return complex(pts[0])
    if len(pts) > 3:
        try:
            pts = pts[ConvexHull(np.column_stack([pts.real, pts.imag])).vertices]
        except QhullError:
            # collinear points: the hull is the segment between the extremes
            offsets = pts - pts[0]
            axis = offsets[np.argmax(np.abs(offsets))]
            along = np.real(offsets * np.conj(axis))
            pts = pts[[int(np.argmin(along)), int(np.argmax(along))]]

    # min |D x|^2 over the simplex, with sum(x) = 1 as a heavily weighted row
    weight = 1e3 * float(np.abs(pts).max())
    A = np.vstack([pts.real, pts.imag, np.full(len(pts), weight)])
    b = np.array([0.0, 0.0, weight])
    x, _ = nnls(A, b)
    total = x.sum()
    if total <= 0:
        return complex(pts[np.argmin(np.abs(pts))])
    return complex(np.dot(x / total, pts))


@dataclass
class DescentResult:
    point: complex
    value: float
    iterations: int


def minimize_max(terms: Terms, start: complex, step: float, scale: float,
                 max_iter: int, rel_tol: float = 1e-12) -> DescentResult:
    """Minimize x -> max_k h_k(x) over the plane by eps-steepest descent.

    ``terms(x)`` returns the values h_k(x) and their gradients as complex numbers
    (real part d/dRe x, imaginary part d/dIm x). The direction is minus the
    min-norm element of the hull of gradients of all eta-active terms; eta shrinks
    through ETA_LEVELS whenever the current level stalls.
    """
    x = complex(start)
    h, grad = terms(x)
    value = float(h.max())
    iterations = 0
    for eta in ETA_LEVELS:
        while iterations < max_iter:
            active = h >= value - eta * scale
            g = min_norm_element(grad[active])
            g_norm = abs(g)
            if g_norm <= 1e-12 * max(float(np.abs(grad[active]).max()), 1e-300):
                break
            direction = -g / g_norm
            t = step
            accepted = False
            for _ in range(MAX_HALVINGS):
                candidate = x + t * direction
                h_new, grad_new = terms(candidate)
                new_value = float(h_new.max())
                if new_value <= value - ARMIJO * t * g_norm:
                    accepted = True
                    break
                t *= 0.5
            iterations += 1
            if not accepted:
                break
            decrease = value - new_value
            x, h, grad, value = candidate, h_new, grad_new, new_value
            step = 2.0 * t
            if decrease <= rel_tol * scale:
                break
    return DescentResult(x, value, iterations)


class Pencil:
    """Sampled F(lambda) = max_k |u_k + lambda v_k|."""

    def __init__(self, u: np.ndarray, v: np.ndarray):
        self.u = np.asarray(u, dtype=complex)
        self.v = np.asarray(v, dtype=complex)

    def __call__(self, lam: complex) -> float:
        return float(np.abs(self.u + lam * self.v).max())

    def terms(self, lam: complex) -> Tuple[np.ndarray, np.ndarray]:
        w = self.u + lam * self.v
        modulus = np.abs(w)
        sgn = np.divide(w, modulus, out=np.zeros_like(w), where=modulus > 0)
        return modulus, sgn * np.conj(self.v)


# ---------------------------------------------------------------------------
# covering sets

def exclusion_region(u: complex, v: complex) -> ExclusionRegion:
    """Good set {lambda : |u + lambda v| >= |u|}: the plane, or the complement of an open disk."""
    u, v = complex(u), complex(v)
    if u == 0 or v == 0:
        return ExclusionRegion(all_plane=True)
    disk = ExclusionDisk(center=-u * v.conjugate() / abs(v) ** 2, radius=abs(u) / abs(v))
    return ExclusionRegion(all_plane=False, disk=disk)


def _phi_terms(centers: np.ndarray, radii: np.ndarray) -> Terms:
    def terms(lam: complex) -> Tuple[np.ndarray, np.ndarray]:
        diff = lam - centers
        dist = np.abs(diff)
        grad = np.divide(diff, dist, out=np.zeros_like(diff), where=dist > 0)
        return dist - radii, grad
    return terms


def _phi_many(points: np.ndarray, centers: np.ndarray, radii: np.ndarray, chunk: int = 256) -> np.ndarray:
    out = np.empty(len(points))
    for start in range(0, len(points), chunk):
        block = points[start:start + chunk, None]
        out[start:start + chunk] = (np.abs(block - centers[None, :]) - radii[None, :]).max(axis=1)
    return out


def covering_decide(pairs: Sequence[Tuple[complex, complex]], cfg: Optional[RunConfig] = None) -> CoveringResult:
    """Decide whether the good regions of the pairs cover the plane.

    Covering iff some pair excludes nothing or the open exclusion disks have empty
    common intersection, i.e. min phi >= -margin for
    phi(lambda) = max_i(|lambda - c_i| - r_i).
    """
    cfg = cfg if cfg is not None else RunConfig()
    arr = np.asarray(pairs, dtype=complex).reshape(-1, 2)
    if len(arr) == 0:
        raise ValueError("covering_decide needs at least one pair")
    u, v = arr[:, 0], arr[:, 1]
    if np.any((u == 0) | (v == 0)):
        return CoveringResult(covering=True, margin=0.0, pair_count=len(arr))

    centers = -u * np.conj(v) / np.abs(v) ** 2
    radii = np.abs(u) / np.abs(v)
    margin = COVERING_MARGIN * float(radii.min())

    candidates = np.concatenate([[centers.mean()], centers])
    phi = _phi_many(candidates, centers, radii)
    start = complex(candidates[int(np.argmin(phi))])
    result = minimize_max(_phi_terms(centers, radii), start, step=float(radii.max()),
                          scale=float(radii.max()), max_iter=cfg.covering_iters, rel_tol=1e-10)
    covering = result.value >= -margin
    logger.debug(f"covering_decide: {len(arr)} pairs, min phi {result.value:.3e}, margin {margin:.1e}")
    return CoveringResult(
        covering=bool(covering),
        witness=None if covering else result.point,
        min_phi=result.value,
        margin=margin,
        iterations=result.iterations,
        pair_count=len(arr),
    )


def pair_criterion(z1: complex, z2: complex, w1: complex, w2: complex) -> bool:
    """{(z1, z2), (w1, w2)} is a covering set iff conj(z1) z2 w1 conj(w2) lies in (-inf, 0]."""
    product = complex(z1).conjugate() * complex(z2) * complex(w1) * complex(w2).conjugate()
    magnitude = abs(product)
    return abs(product.imag) <= 1e-9 * magnitude and product.real <= 1e-9 * magnitude


# ---------------------------------------------------------------------------
# decisions

def _cfg(cfg: Optional[RunConfig]) -> RunConfig:
    return cfg if cfg is not None else RunConfig()


def _verdict(min_value: float, base: float, cfg: RunConfig) -> str:
    ortho_margin, non_ortho_margin = cfg.ortho_margins
    if min_value <= base * (1.0 - non_ortho_margin):
        return "NotOrthogonal"
    if min_value >= base * (1.0 - ortho_margin):
        return "Orthogonal"
    return "Inconclusive"


def pencil_norm(f: HoloExpr, g: HoloExpr, lam: complex, curve: Curve, cfg: RunConfig) -> float:
    """Refined ||f + lam g|| on the curve."""
    return sup_norm(f + Const(complex(lam)) * g, curve, cfg).norm_value


def bj_minimize(f: HoloExpr, g: HoloExpr, curve: Curve, cfg: Optional[RunConfig] = None) -> OrthoDecision:
    """Decide f against g by minimizing the convex map lambda -> ||f + lambda g||."""
    cfg = _cfg(cfg)
    base = sup_norm(f, curve, cfg).norm_value
    if base < ZERO_NORM:
        return OrthoDecision(verdict="Orthogonal", min_value=0.0, base_norm=0.0)

    _, z, _ = curve.sample(cfg.grid_N)
    u = np.broadcast_to(f.evaluate(z), z.shape)
    v = np.broadcast_to(g.evaluate(z), z.shape)
    v_max = float(np.abs(v).max())
    if v_max == 0:
        return OrthoDecision(verdict="Orthogonal", min_value=base, base_norm=base)

    pencil = Pencil(u, v)
    result = minimize_max(pencil.terms, 0j, step=base / v_max, scale=base, max_iter=cfg.descent_iters)
    min_value, minimizer = base, 0j
    if result.point != 0:
        refined = pencil_norm(f, g, result.point, curve, cfg)
        if refined < base:
            min_value, minimizer = refined, result.point

    verdict = _verdict(min_value, base, cfg)
    logger.debug(f"bj_minimize: {verdict} after {result.iterations} iterations, "
                 f"min {min_value:.15g} at {minimizer:.6g}, base {base:.15g}")
    if verdict == "Inconclusive":
        logger.warning(f"bj_minimize inconclusive for f = {f}, g = {g} on {curve}: "
                       f"min {min_value:.12g} vs base {base:.12g}")
    witness = minimizer if verdict == "NotOrthogonal" else None
    return OrthoDecision(
        verdict=verdict,
        witness=witness,
        achieved=min_value if witness is not None else None,
        min_value=min_value,
        minimizer=minimizer,
        base_norm=base,
        iterations=result.iterations,
        method="minimize",
    )


def ortho_via_covering(f: HoloExpr, g: HoloExpr, curve: Curve, cfg: Optional[RunConfig] = None) -> OrthoDecision:
    """Decide f against g by testing {(f(z), g(z)) : z in sampled M_f} for covering."""
    cfg = _cfg(cfg)
    ns = norming_set(f, curve, cfg.norming_eps, cfg)
    base = ns.norm_value
    if base < ZERO_NORM:
        return OrthoDecision(verdict="Orthogonal", min_value=0.0, base_norm=0.0, discrete_Mf=True, method="covering")
    if not ns.clusters:
        raise EmptyNormingSetError(f"no norming points found for f = {f} on {curve}")

    points = curve.point(norming_params(ns))
    u = np.broadcast_to(f.evaluate(points), points.shape)
    v = np.array(np.broadcast_to(g.evaluate(points), points.shape))
    _, z, _ = curve.sample(cfg.grid_N)
    g_norm = float(np.abs(g.evaluate(z)).max())
    v[np.abs(v) <= COVERING_ZERO_TOL * g_norm] = 0

    covering = covering_decide(np.column_stack([u, v]), cfg)
    if covering.covering:
        return OrthoDecision(verdict="Orthogonal", min_value=base, base_norm=base,
                             iterations=covering.iterations, discrete_Mf=True, method="covering")

    # shrink the disk witness until it beats ||f|| on the whole curve
    lam = complex(covering.witness)
    best_value, best_lam = base, 0j
    sigma = 1.0
    for _ in range(MAX_SHRINKS):
        value = pencil_norm(f, g, sigma * lam, curve, cfg)
        if value < best_value:
            best_value, best_lam = value, sigma * lam
        if _verdict(value, base, cfg) == "NotOrthogonal":
            break
        sigma *= 0.5

    verdict = "NotOrthogonal" if _verdict(best_value, base, cfg) == "NotOrthogonal" else "Inconclusive"
    if verdict == "Inconclusive":
        logger.warning(f"covering witness {lam:.6g} never beat ||f|| = {base:.12g} for f = {f}, g = {g}")
    return OrthoDecision(
        verdict=verdict,
        witness=best_lam if verdict == "NotOrthogonal" else None,
        achieved=best_value if verdict == "NotOrthogonal" else None,
        min_value=best_value,
        minimizer=best_lam,
        base_norm=base,
        iterations=covering.iterations,
        discrete_Mf=True,
        method="covering",
    )


def decide_both(f: HoloExpr, g: HoloExpr, curve: Curve,
                cfg: Optional[RunConfig] = None) -> Tuple[OrthoDecision, OrthoDecision, bool]:
    """Run both decision paths; the flag is False only on a decisive disagreement."""
    cfg = _cfg(cfg)
    direct = bj_minimize(f, g, curve, cfg)
    covering = ortho_via_covering(f, g, curve, cfg)
    decisive = "Inconclusive" not in (direct.verdict, covering.verdict)
    agree = not decisive or direct.verdict == covering.verdict
    if not agree:
        logger.warning(f"decision paths disagree for f = {f}, g = {g} on {curve}: "
                       f"minimize {direct.verdict}, covering {covering.verdict}")
    return direct, covering, agree


def sufficient_zero(f: HoloExpr, g: HoloExpr, curve: Curve, cfg: Optional[RunConfig] = None) -> bool:
    """True iff g vanishes at some sampled point of M_f (then f is orthogonal to g)."""
    cfg = _cfg(cfg)
    ns = norming_set(f, curve, cfg.norming_eps, cfg)
    g_norm = sup_norm(g, curve, cfg).norm_value
    if g_norm < ZERO_NORM:
        return True
    points = curve.point(norming_params(ns))
    values = np.abs(np.broadcast_to(g.evaluate(points), points.shape))
    return bool(np.any(values <= SUFFICIENT_ZERO_TOL * g_norm))


def sufficient_argument(f: HoloExpr, g: HoloExpr, curve: Curve, gap_tol: Optional[float] = None,
                        cfg: Optional[RunConfig] = None) -> bool:
    """True iff arg(g/f) over sampled M_f leaves no gap wider than gap_tol on the circle.

    False means the sweep was not detected, not that f and g fail to be orthogonal.
    """
    cfg = _cfg(cfg)
    gap_tol = cfg.argument_gap if gap_tol is None else gap_tol
    ns = norming_set(f, curve, cfg.norming_eps, cfg)
    points = curve.point(norming_params(ns))
    fv = np.broadcast_to(f.evaluate(points), points.shape)
    gv = np.broadcast_to(g.evaluate(points), points.shape)
    if np.any(np.abs(fv) < ZERO_NORM):
        raise PoleProximityError("g/f has a pole on the norming set")
    keep = np.abs(gv) > 0
    if not keep.any():
        return False
    angles = np.sort(np.mod(np.angle(gv[keep] / fv[keep]), 2.0 * math.pi))
    gaps = np.diff(angles, append=angles[0] + 2.0 * math.pi)
    return bool(gaps.max() <= gap_tol)
