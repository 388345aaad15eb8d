"""Argument-principle zero counting, Rouche and FTA checks, Cauchy-integral derivatives."""

import math
from typing import Callable, Optional, Tuple

import numpy as np

from .config import RunConfig
from .curves import Circle, Curve, contour_integral, curve_distance
from .errors import (
    GeometryViolation,
    NonConvergentError,
    PreconditionError,
    ZeroOnCurveError,
    ZeroPolynomialError,
)
from .expr import Const, HoloExpr, Polynomial, Z, is_constant, nth_derivative, power
from .logging_setup import get_logger
from .models import DerivativeScenarioReport, FTAReport, MonomialGapReport, RoucheReport, WindingResult
from .norms import in_J_gamma, sup_norm
from .ortho import bj_minimize

logger = get_logger(__name__)

MAX_BISECTION_DEPTH = 40
ZERO_ON_CURVE_TOL = 1e-8
CONTAINMENT_SAMPLES = 64

Path = Callable[[np.ndarray], np.ndarray]


def _cfg(cfg: Optional[RunConfig]) -> RunConfig:
    return cfg if cfg is not None else RunConfig()


def _step_angle(w0: complex, w1: complex) -> float:
    return float(np.angle(w1 / w0))


def _track_argument(path: Path, N: int) -> Tuple[float, float, int]:
    """Continuous argument change of t -> path(t) over [0, 1].

    Steps turning by more than pi/2 are bisected. Returns the total change,
    the smallest modulus seen and the number of inserted points.
    """
    t = np.arange(N + 1) / N
    w = np.array(path(t), dtype=complex)
    w[-1] = w[0]
    modulus = np.abs(w)
    scale = float(modulus.max())
    floor = ZERO_ON_CURVE_TOL * scale
    min_modulus = float(modulus.min())
    if scale == 0 or min_modulus <= floor:
        raise ZeroOnCurveError(f"|f| drops to {min_modulus:.3e} on the curve", min_modulus=min_modulus)

    steps = np.angle(w[1:] / w[:-1])
    wide = np.flatnonzero(np.abs(steps) > math.pi / 2)
    inserted = 0

    def refine(t0: float, t1: float, w0: complex, w1: complex, depth: int) -> float:
        nonlocal inserted, min_modulus
        step = _step_angle(w0, w1)
        if abs(step) <= math.pi / 2:
            return step
        if depth >= MAX_BISECTION_DEPTH:
            raise NonConvergentError(f"argument tracking did not settle near t = {t0:.12g}")
        tm = 0.5 * (t0 + t1)
        wm = complex(np.asarray(path(np.array([tm])))[0])
        inserted += 1
        min_modulus = min(min_modulus, abs(wm))
        if abs(wm) <= floor:
            raise ZeroOnCurveError(f"|f| drops to {abs(wm):.3e} near t = {tm:.12g}", min_modulus=abs(wm))
        return refine(t0, tm, w0, wm, depth + 1) + refine(tm, t1, wm, w1, depth + 1)

    total = float(np.delete(steps, wide).sum())
    for k in wide:
        total += refine(t[k], t[k + 1], w[k], w[k + 1], 0)
    return total, min_modulus, inserted


def _winding(path: Path, N: int) -> WindingResult:
    total, min_modulus, inserted = _track_argument(path, N)
    count = int(round(total / (2.0 * math.pi)))
    if abs(total - 2.0 * math.pi * count) >= 1e-3:
        raise NonConvergentError(f"argument change {total:.9g} is not a multiple of 2 pi")
    return WindingResult(count=count, min_modulus_on_curve=min_modulus, total_arg_variation=total,
                         grid_size=N, bisections=inserted)


def count_zeros(f: HoloExpr, curve: Curve, N: Optional[int] = None, cfg: Optional[RunConfig] = None) -> WindingResult:
    """Number of zeros of f enclosed by the curve, with multiplicity."""
    cfg = _cfg(cfg)
    N = cfg.grid_N if N is None else N
    result = _winding(lambda t: np.broadcast_to(f.evaluate(curve.point(t)), t.shape), N)
    logger.debug(f"count_zeros {f} on {curve}: {result.count} ({result.bisections} bisections)")
    return result


def winding_number(curve: Curve, point: complex, N: int = 1024) -> int:
    """Winding number of the curve around a point off the curve."""
    try:
        return _winding(lambda t: curve.point(t) - point, N).count
    except ZeroOnCurveError as e:
        raise GeometryViolation(f"{point} lies on {curve}") from e


def verify_J_gamma_zero(f: HoloExpr, curve: Curve, cfg: Optional[RunConfig] = None) -> bool:
    """A nonconstant f with |f| constant on the curve has an enclosed zero."""
    cfg = _cfg(cfg)
    if is_constant(f):
        return True
    if not in_J_gamma(f, curve, cfg.jgamma_tol, cfg):
        raise PreconditionError(f"{f} is not in J of {curve}")
    return count_zeros(f, curve, cfg.grid_N, cfg).count >= 1


def rouche_link(f: HoloExpr, g: HoloExpr, curve: Curve, cfg: Optional[RunConfig] = None) -> RoucheReport:
    """For f in J(curve): a non-orthogonality witness forces equal enclosed zero counts."""
    cfg = _cfg(cfg)
    if not in_J_gamma(f, curve, cfg.jgamma_tol, cfg):
        raise PreconditionError(f"{f} is not in J of {curve}")

    decision = bj_minimize(f, g, curve, cfg)
    if decision.verdict != "NotOrthogonal":
        return RoucheReport(verdict=decision.verdict, claim=False, consistent=True, decision=decision)

    _, z, _ = curve.sample(cfg.grid_N)
    fz = np.broadcast_to(f.evaluate(z), z.shape)
    gz = np.broadcast_to(g.evaluate(z), z.shape)
    pointwise = bool(np.all(np.abs(fz + decision.witness * gz) < np.abs(fz)))
    count_f = count_zeros(f, curve, cfg.grid_N, cfg).count
    count_g = count_zeros(g, curve, cfg.grid_N, cfg).count
    consistent = pointwise and count_f == count_g
    if not consistent:
        logger.warning(f"Rouche link broken for f = {f}, g = {g}: pointwise {pointwise}, counts {count_f}/{count_g}")
    return RoucheReport(verdict=decision.verdict, claim=True, pointwise_holds=pointwise,
                        count_f=count_f, count_g=count_g, consistent=consistent, decision=decision)


def different_counts_orthogonal(f: HoloExpr, g: HoloExpr, curve: Curve,
                                cfg: Optional[RunConfig] = None) -> RoucheReport:
    """For f in J(curve): different enclosed zero counts force f orthogonal to g."""
    cfg = _cfg(cfg)
    if not in_J_gamma(f, curve, cfg.jgamma_tol, cfg):
        raise PreconditionError(f"{f} is not in J of {curve}")
    count_f = count_zeros(f, curve, cfg.grid_N, cfg).count
    count_g = count_zeros(g, curve, cfg.grid_N, cfg).count
    decision = bj_minimize(f, g, curve, cfg)
    claim = count_f != count_g
    consistent = not claim or decision.verdict == "Orthogonal"
    return RoucheReport(verdict=decision.verdict, claim=claim, count_f=count_f, count_g=count_g,
                        consistent=consistent, decision=decision)


def monomial_gap(n: int, Q: Polynomial, r: float, cfg: Optional[RunConfig] = None) -> MonomialGapReport:
    """inf over lambda of max over |z| = r of |z^n + lambda Q(z)| is at least r^n when deg Q < n."""
    cfg = _cfg(cfg)
    if n < 1 or (not Q.is_zero and Q.degree >= n):
        raise PreconditionError(f"need deg Q < n, got deg Q = {Q.degree}, n = {n}")
    decision = bj_minimize(power(Z(), n), Q.to_expr(), Circle(0j, r), cfg)
    bound = r ** n
    return MonomialGapReport(n=n, q_degree=Q.degree, radius=r, min_value=decision.min_value,
                             bound=bound, passed=decision.min_value >= bound * (1.0 - 1e-6))


def fta_bound(Q: Polynomial) -> float:
    """max(1, sum_{k<n} |a_k| / |a_n|): every zero of Q lies in the closed disk of this radius."""
    if Q.is_zero:
        raise ZeroPolynomialError("the zero polynomial has no degree")
    if Q.degree < 1:
        raise PreconditionError("need degree at least 1")
    lower = math.fsum(abs(a) for a in Q.coeffs[:-1])
    return max(1.0, lower / abs(Q.leading))


def fta_verify(Q: Polynomial, slack: float = 1.1, cfg: Optional[RunConfig] = None) -> FTAReport:
    """Witness ||z^n - Q/a_n|| < r^n on |z| = r beyond the bound, then count all n zeros."""
    cfg = _cfg(cfg)
    bound = fta_bound(Q)
    n = Q.degree
    r = slack * bound
    circle = Circle(0j, r)
    remainder = Polynomial.from_coeffs([-a / Q.leading for a in Q.coeffs[:-1]])
    witness_norm = sup_norm(remainder.to_expr(), circle, cfg).norm_value
    h_norm = r ** n
    count = count_zeros(Q.to_expr(), circle, cfg.grid_N, cfg).count
    holds = witness_norm < h_norm
    logger.debug(f"fta_verify deg {n}: r = {r:.6g}, witness {witness_norm:.6g} < {h_norm:.6g}, count {count}")
    return FTAReport(degree=n, bound=bound, radius=r, witness_norm=witness_norm, h_norm=h_norm,
                     witness_holds=holds, count=count, passed=holds and count == n)


def cauchy_derivative(f: HoloExpr, z0: complex, n: int, r: float, N: int) -> complex:
    """f^(n)(z0) = n!/(2 pi i) times the integral of f(z)/(z - z0)^(n+1) over |z - z0| = r."""
    if n < 0:
        raise PreconditionError(f"derivative order must be nonnegative, got {n}")
    circle = Circle(complex(z0), r)
    integral = contour_integral(lambda z: f.evaluate(z) / (z - z0) ** (n + 1), circle, N)
    return math.factorial(n) / (2j * math.pi) * integral


def contains(outer: Curve, inner: Curve, samples: int = CONTAINMENT_SAMPLES) -> bool:
    """Every sampled point of ``inner`` is wound around once by ``outer``."""
    _, points, _ = inner.sample(samples)
    try:
        return all(winding_number(outer, complex(p)) == 1 for p in points)
    except GeometryViolation:
        return False


def derivative_ortho_scenario(f: HoloExpr, g: HoloExpr, n: int, outer: Curve, inner: Curve,
                              lam0: complex, r: float, cfg: Optional[RunConfig] = None) -> DerivativeScenarioReport:
    """If max_outer |f + lam0 g| < r^n/n! max_inner |f^(n)|, then f^(n) is not orthogonal to g^(n) on inner."""
    cfg = _cfg(cfg)
    if not contains(outer, inner):
        raise GeometryViolation(f"{inner} is not inside {outer}")
    distance = curve_distance(outer, inner, cfg.distance_N)
    if not 0 < r < distance:
        raise GeometryViolation(f"need 0 < r < dist = {distance:.12g}, got r = {r}")

    fn = nth_derivative(f, n)
    gn = nth_derivative(g, n)
    if sup_norm(gn, inner, cfg).norm_value == 0:
        raise PreconditionError(f"the {n}-th derivative of g vanishes identically")

    lam0 = complex(lam0)
    lhs = sup_norm(f + Const(lam0) * g, outer, cfg).norm_value
    derivative_norm = sup_norm(fn, inner, cfg).norm_value
    rhs = r ** n / math.factorial(n) * derivative_norm
    if not lhs < rhs:
        return DerivativeScenarioReport(n=n, lhs=lhs, rhs=rhs, hypothesis_holds=False, passed=True)

    witness_norm = sup_norm(fn + Const(lam0) * gn, inner, cfg).norm_value
    decision = bj_minimize(fn, gn, inner, cfg)
    counts = None
    if in_J_gamma(fn, inner, cfg.jgamma_tol, cfg):
        counts = (count_zeros(fn, inner, cfg.grid_N, cfg).count, count_zeros(gn, inner, cfg.grid_N, cfg).count)
    passed = (decision.verdict == "NotOrthogonal" and witness_norm < derivative_norm
              and (counts is None or counts[0] == counts[1]))
    return DerivativeScenarioReport(n=n, lhs=lhs, rhs=rhs, hypothesis_holds=True, proof_witness_norm=witness_norm,
                                    derivative_norm=derivative_norm, decision=decision, counts=counts, passed=passed)
