"""Supremum norms on curves, norming sets M_f, J(Gamma) membership and point classification."""

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

from .config import RunConfig
from .curves import Curve
from .errors import ZeroFunctionError
from .expr import HoloExpr
from .logging_setup import get_logger
from .models import Cluster, JGammaReport, NormingSet, NormReport, PointClassification

logger = get_logger(__name__)

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
ZERO_NORM = 1e-30
# grid points this close to the maximum form a plateau (an arc rather than a point)
PLATEAU_TOL = 1e-10


def golden_section(h: Callable[[np.ndarray], np.ndarray], centers: np.ndarray, half_width: float,
                   iters: int, maximize: bool = True) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized golden-section search of h on [c - w, c + w] for every center c.

    Returns the best parameters and the values of h there.
    """
    sign = 1.0 if maximize else -1.0
    a = np.asarray(centers, dtype=float) - half_width
    b = np.asarray(centers, dtype=float) + half_width
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc = sign * h(c)
    fd = sign * h(d)
    for _ in range(iters):
        keep_left = fc >= fd
        b = np.where(keep_left, d, b)
        a = np.where(keep_left, a, c)
        new_c = b - INV_PHI * (b - a)
        new_d = a + INV_PHI * (b - a)
        probe = np.where(keep_left, new_c, new_d)
        fp = sign * h(probe)
        c, d, fc, fd = (
            np.where(keep_left, probe, d),
            np.where(keep_left, c, probe),
            np.where(keep_left, fp, fd),
            np.where(keep_left, fc, fp),
        )
    best_t = np.where(fc >= fd, c, d)
    best_v = np.maximum(fc, fd)
    return best_t, sign * best_v


def modulus_on(f: HoloExpr, curve: Curve) -> Callable[[np.ndarray], np.ndarray]:
    """t -> |f(gamma(t))|."""
    return lambda t: np.abs(f.evaluate(curve.point(t)))


@dataclass
class GridScan:
    """|f| on the grid plus refined local maxima."""
    t: np.ndarray
    modulus: np.ndarray
    peak_index: np.ndarray
    peak_t: np.ndarray
    peak_value: np.ndarray

    @property
    def norm(self) -> float:
        return float(max(self.modulus.max(), self.peak_value.max(initial=0.0)))


def _local_extrema(values: np.ndarray, maxima: bool = True) -> np.ndarray:
    prev, nxt = np.roll(values, 1), np.roll(values, -1)
    if maxima:
        mask = (values >= prev) & (values >= nxt)
    else:
        mask = (values <= prev) & (values <= nxt)
    return np.flatnonzero(mask)


def scan(f: HoloExpr, curve: Curve, N: int, iters: int) -> GridScan:
    """Sample |f| on the N-grid and refine every grid-local maximum."""
    t, z, _ = curve.sample(N)
    modulus = np.abs(f.evaluate(z))
    peaks = _local_extrema(modulus)
    refined_t, refined_v = golden_section(modulus_on(f, curve), t[peaks], 1.0 / N, iters)
    # refinement never reports less than the grid already saw
    better = refined_v > modulus[peaks]
    peak_t = np.mod(np.where(better, refined_t, t[peaks]), 1.0)
    peak_v = np.where(better, refined_v, modulus[peaks])
    logger.debug(f"scan N={N}: {len(peaks)} grid maxima refined")
    return GridScan(t, modulus, peaks, peak_t, peak_v)


def _cfg(cfg: Optional[RunConfig]) -> RunConfig:
    return cfg if cfg is not None else RunConfig()


def sup_norm(f: HoloExpr, curve: Curve, cfg: Optional[RunConfig] = None) -> NormReport:
    """||f|| = sup over the curve of |f|, grid maximum refined by golden-section search."""
    cfg = _cfg(cfg)
    result = scan(f, curve, cfg.grid_N, cfg.refine_iters)
    norm = result.norm
    tol = 1e-12 * max(1.0, norm)
    if result.modulus.min() >= norm - tol:
        # |f| constant on the grid up to rounding: every grid point attains the norm
        argmax = result.t.tolist()
    else:
        argmax = sorted(float(t) for t, v in zip(result.peak_t, result.peak_value) if v >= norm - tol)
    return NormReport(norm_value=norm, argmax_params=argmax, grid_size=cfg.grid_N)


def _circular_gap(t1: float, t2: float) -> float:
    d = abs(t1 - t2) % 1.0
    return min(d, 1.0 - d)


def same_point(t1: float, t2: float, N: int) -> bool:
    """Two maxima closer than 2 pi / N^2 in angle are one point up to refinement noise."""
    return 2.0 * math.pi * _circular_gap(t1, t2) < 2.0 * math.pi / N ** 2


def _runs(mask: np.ndarray) -> List[np.ndarray]:
    """Cyclic runs of True in mask, as index arrays in traversal order."""
    n = len(mask)
    start = int(np.flatnonzero(~mask)[0])
    order = (np.arange(n) + start) % n
    runs: List[np.ndarray] = []
    current: List[int] = []
    for idx in order:
        if mask[idx]:
            current.append(int(idx))
        elif current:
            runs.append(np.array(current))
            current = []
    if current:
        runs.append(np.array(current))
    return runs


def norming_set(f: HoloExpr, curve: Curve, eps: Optional[float] = None,
                cfg: Optional[RunConfig] = None) -> NormingSet:
    """Clusters of parameters where |f| >= (1 - eps) ||f||."""
    cfg = _cfg(cfg)
    eps = cfg.norming_eps if eps is None else eps
    N = cfg.grid_N
    result = scan(f, curve, N, cfg.refine_iters)
    norm = result.norm
    threshold = (1.0 - eps) * norm
    qualifies = result.modulus >= threshold
    best = int(np.argmax(result.peak_value))

    if qualifies.all():
        cluster = Cluster(kind="whole_curve", t=float(result.peak_t[best]), t_lo=0.0, t_hi=1.0,
                          value=float(result.peak_value[best]))
        return NormingSet(clusters=[cluster], eps=eps, norm_value=norm, grid_size=N)

    peak_of = {int(i): k for k, i in enumerate(result.peak_index)}
    clusters: List[Cluster] = []
    for run in _runs(qualifies):
        peaks = [peak_of[i] for i in run if i in peak_of]
        plateau = run[result.modulus[run] >= norm * (1.0 - PLATEAU_TOL)]
        if len(plateau) >= 2:
            k = max(peaks, key=lambda p: result.peak_value[p]) if peaks else None
            t_rep = float(result.peak_t[k]) if k is not None else float(result.t[plateau[0]])
            value = float(result.peak_value[k]) if k is not None else float(result.modulus[plateau[0]])
            t_lo = float(result.t[run[0]])
            t_hi = float(result.t[run[-1]])
            if t_hi < t_lo:
                t_hi += 1.0
            clusters.append(Cluster(kind="arc", t=t_rep, t_lo=t_lo, t_hi=t_hi, value=value))
            continue

        points = sorted((float(result.peak_t[p]), float(result.peak_value[p]))
                        for p in peaks if result.peak_value[p] >= threshold)
        if not points:
            i = int(run[np.argmax(result.modulus[run])])
            points = [(float(result.t[i]), float(result.modulus[i]))]
        merged: List[Tuple[float, float]] = []
        for t, v in points:
            if merged and same_point(merged[-1][0], t, N):
                if v > merged[-1][1]:
                    merged[-1] = (t, v)
                continue
            merged.append((t, v))
        for t, v in merged:
            clusters.append(Cluster(kind="isolated", t=t, t_lo=t, t_hi=t, value=v))

    clusters.sort(key=lambda c: c.t_lo)
    logger.debug(f"norming_set: {len(clusters)} clusters, norm {norm:.15g}")
    return NormingSet(clusters=clusters, eps=eps, norm_value=norm, grid_size=N)


def norming_params(ns: NormingSet) -> np.ndarray:
    """Curve parameters standing in for M_f.

    Isolated clusters contribute their refined representative, arcs every grid
    point they span plus the representative, the whole curve every grid point.
    """
    N = ns.grid_size
    grid = np.arange(N) / N
    params: List[float] = []
    for cluster in ns.clusters:
        if cluster.kind == "whole_curve":
            return grid
        params.append(cluster.t)
        if cluster.kind == "arc":
            # t_hi may exceed 1 for arcs through t = 0
            offset = np.mod(grid - cluster.t_lo, 1.0)
            params.extend(grid[offset <= cluster.t_hi - cluster.t_lo + 0.5 / N].tolist())
    return np.array(params, dtype=float)


def jgamma_report(f: HoloExpr, curve: Curve, tol: Optional[float] = None,
                  cfg: Optional[RunConfig] = None) -> JGammaReport:
    """Spread of |f| over the curve against the J(Gamma) tolerance."""
    cfg = _cfg(cfg)
    tol = cfg.jgamma_tol if tol is None else tol
    result = scan(f, curve, cfg.grid_N, cfg.refine_iters)
    norm = result.norm
    if norm < ZERO_NORM:
        return JGammaReport(member=True, zero_function=True, norm_value=norm, min_value=0.0, spread=0.0, tol=tol)

    troughs = _local_extrema(result.modulus, maxima=False)
    _, trough_v = golden_section(modulus_on(f, curve), result.t[troughs], 1.0 / cfg.grid_N,
                                 cfg.refine_iters, maximize=False)
    min_value = float(min(result.modulus.min(), trough_v.min(initial=math.inf)))
    spread = (norm - min_value) / norm
    return JGammaReport(member=bool(spread <= tol), zero_function=False, norm_value=norm,
                        min_value=min_value, spread=float(spread), tol=tol)


def in_J_gamma(f: HoloExpr, curve: Curve, tol: Optional[float] = None,
               cfg: Optional[RunConfig] = None) -> bool:
    """True iff |f| is constant on the curve (the zero function counts as a member)."""
    return jgamma_report(f, curve, tol, cfg).member


def classify_point(f: HoloExpr, curve: Curve, cfg: Optional[RunConfig] = None) -> PointClassification:
    """Smoothness (M_f a singleton) and extremality (unit norm and |f| constant)."""
    cfg = _cfg(cfg)
    ns = norming_set(f, curve, cfg.norming_eps, cfg)
    if ns.norm_value < ZERO_NORM:
        raise ZeroFunctionError("the zero function is neither smooth nor extreme")

    smooth = len(ns.clusters) == 1 and ns.clusters[0].kind == "isolated"
    extreme: Optional[bool] = None
    if curve.is_analytic:
        extreme = abs(ns.norm_value - 1.0) <= 1e-8 and in_J_gamma(f, curve, cfg.jgamma_tol, cfg)
    else:
        logger.warning(f"{curve} is not analytic; extremality left undecided")
    return PointClassification(
        smoothness="Smooth" if smooth else "NotSmooth",
        extreme_on_analytic_curve=extreme,
        cluster_count=len(ns.clusters),
        norm_value=ns.norm_value,
    )
