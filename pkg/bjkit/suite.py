"""Regression suite binding each orthogonality, zero-count and quadrature statement to a runnable check.

Checks register themselves with ``@register(block, label)``; ``SuiteRunner`` runs
them in a thread pool with a per-check RNG seeded from (seed, crc32(block)).
"""

import math
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import reduce
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from rich.console import Console
from rich.table import Table

from .config import RunConfig
from .curves import Circle
from .errors import BJKitError, GeometryViolation, ZeroOnCurveError
from .expr import BlaschkeFactor, Const, HoloExpr, Polynomial, Z, mul, nth_derivative, parse, power
from .logging_setup import get_logger
from .models import CheckResult, SuiteSummary
from .norms import classify_point, norming_set, scan, sup_norm
from .ortho import (
    Pencil,
    bj_minimize,
    covering_decide,
    decide_both,
    exclusion_region,
    ortho_via_covering,
    pair_criterion,
    pencil_norm,
    sufficient_zero,
)
from .zeros import (
    cauchy_derivative,
    count_zeros,
    derivative_ortho_scenario,
    different_counts_orthogonal,
    fta_bound,
    fta_verify,
    monomial_gap,
    rouche_link,
    verify_J_gamma_zero,
)

logger = get_logger(__name__)

Outcome = Tuple[int, List[str]]
CheckFunc = Callable[[RunConfig, np.random.Generator], Outcome]


@dataclass
class Check:
    block: str
    label: str
    func: CheckFunc


# Global check registry, in registration order
CHECKS: Dict[str, Check] = {}


def register(block: str, label: str):
    """Decorator to register a suite check under a block name."""
    def decorator(func: CheckFunc) -> CheckFunc:
        CHECKS[block] = Check(block, label, func)
        logger.debug(f"Registered check: {block}")
        return func
    return decorator


# ---------------------------------------------------------------------------
# random corpora

RADII = (0.5, 1.0, 2.0)


def random_complex(rng: np.random.Generator, lo: float = 0.2, hi: float = 5.0) -> complex:
    """Log-uniform modulus in [lo, hi], uniform argument."""
    modulus = math.exp(rng.uniform(math.log(lo), math.log(hi)))
    return complex(modulus * np.exp(1j * rng.uniform(0.0, 2.0 * math.pi)))


def random_polynomial(rng: np.random.Generator, degree: int, box: bool = False) -> Polynomial:
    """Gaussian (or unit-box) complex coefficients with a leading coefficient of modulus >= 0.1."""
    if box:
        coeffs = rng.uniform(-1, 1, degree + 1) + 1j * rng.uniform(-1, 1, degree + 1)
    else:
        coeffs = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
    while abs(coeffs[-1]) < 0.1:
        coeffs[-1] = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
    return Polynomial.from_coeffs(coeffs)


def polynomial_from_roots(roots: Sequence[complex], scale: complex = 1.0) -> Polynomial:
    coeffs = np.atleast_1d(np.poly(np.asarray(roots, dtype=complex)))
    return Polynomial.from_coeffs((scale * coeffs)[::-1])


def roots_off_circle(rng: np.random.Generator, count: int, radius: float, gap: float = 0.05) -> List[complex]:
    """Random roots in |z| < 2 radius, none within gap * radius of |z| = radius."""
    roots: List[complex] = []
    while len(roots) < count:
        rho = rng.uniform(0.0, 2.0 * radius)
        if abs(rho - radius) >= gap * radius:
            roots.append(complex(rho * np.exp(1j * rng.uniform(0, 2 * math.pi))))
    return roots


def blaschke_product(rng: np.random.Generator, k: int, radius: float,
                     max_modulus: float = 0.9, min_modulus: float = 0.0) -> HoloExpr:
    factors = [
        BlaschkeFactor(complex(rng.uniform(min_modulus, max_modulus) * np.exp(1j * rng.uniform(0, 2 * math.pi))), radius)
        for _ in range(k)
    ]
    return reduce(mul, factors)


def oracle_count(Q: Polynomial, radius: float) -> int:
    """Roots of Q with modulus below radius, via the companion matrix."""
    roots = np.roots(np.array(Q.coeffs)[::-1])
    return int(np.sum(np.abs(roots) < radius))


def _describe(f: HoloExpr, g: HoloExpr, curve) -> str:
    return f"f = {f}, g = {g}, {curve}"


# ---------------------------------------------------------------------------
# checks

@register("monomial", "z^n and z^m are orthogonal for n != m")
def check_monomials(cfg: RunConfig, rng: np.random.Generator) -> Outcome:
    instances, failures = 0, []
    for r in RADII:
        curve = Circle(0j, r)
        for n in range(1, 6):
            for m in range(1, 6):
                if n == m:
                    continue
                f, g = power(Z(), n), power(Z(), m)
                direct = bj_minimize(f, g, curve, cfg)
                covering = ortho_via_covering(f, g, curve, cfg)
                instances += 1
                if direct.verdict != "Orthogonal" or covering.verdict != "Orthogonal":
                    failures.append(f"n={n} m={m} r={r}: {direct.verdict}/{covering.verdict}")
                elif abs(direct.min_value - r ** n) > 1e-6 * r ** n:
                    failures.append(f"n={n} m={m} r={r}: min {direct.min_value!r} != {r ** n!r}")
    return instances, failures


@register("poly-gap", "||z^n + lambda Q|| >= r^n for deg Q < n")
def check_polynomial_gap(cfg: RunConfig, rng: np.random.Generator) -> Outcome:
    failures = []
    for i in range(50):
        n = int(rng.integers(1, 6))
        Q = random_polynomial(rng, int(rng.integers(0, n)))
        r = (1.0, 2.0)[i % 2]
        report = monomial_gap(n, Q, r, cfg)
        if not report.passed:
            failures.append(f"n={n} Q={Q.coeffs} r={r}: min {report.min_value!r} < {report.bound!r}")
    return 50, failures


@register("large-radius", "z^n is not orthogonal to a degree-n polynomial beyond the coefficient bound")
def check_large_radius(cfg: RunConfig, rng: np.random.Generator) -> Outcome:
    failures = []
    for _ in range(50):
        n = int(rng.integers(1, 6))
        P = random_polynomial(rng, n)
        r = 1.1 * fta_bound(P)
        curve = Circle(0j, r)
        h = power(Z(), n)
        g = P.to_expr()
        explicit = pencil_norm(h, g, -1.0 / P.leading, curve, cfg)
        decision = bj_minimize(h, g, curve, cfg)
        if decision.verdict != "NotOrthogonal" or not explicit < r ** n:
            failures.append(f"n={n} r={r:.6g}: {decision.verdict}, explicit witness {explicit:.6g} vs {r ** n:.6g}")
    return 50, failures


@register("fta", "a degree-n polynomial has n zeros inside the coefficient-bound circle")
def check_fta(cfg: RunConfig, rng: np.random.Generator) -> Outcome:
    failures = []
    for _ in range(100):
        n = int(rng.integers(1, 7))
        Q = random_polynomial(rng, n, box=True)
        report = fta_verify(Q, 1.1, cfg)
        oracle = oracle_count(Q, report.radius)
        if not report.passed or oracle != n:
            failures.append(f"Q={Q.coeffs}: count {report.count}, oracle {oracle}, witness {report.witness_holds}")
            continue

        # argument principle against the companion-matrix oracle on a random circle
        roots = np.abs(np.roots(np.array(Q.coeffs)[::-1]))
        R = float(rng.uniform(0.3, 2.0))
        while np.min(np.abs(roots - R)) < 0.05:
            R = float(rng.uniform(0.3, 2.0))
        curve = Circle(0j, R)
        count = count_zeros(Q.to_expr(), curve, cfg.grid_N, cfg).count
        doubled = count_zeros(Q.to_expr(), curve, 2 * cfg.grid_N, cfg).count
        if not count == doubled == oracle_count(Q, R):
            failures.append(f"Q={Q.coeffs} R={R:.4f}: counts {count}/{doubled}, oracle {oracle_count(Q, R)}")
    return 100, failures


@register("covering", "covering sets match the singleton and two-pair criteria")
def check_covering(cfg: RunConfig, rng: np.random.Generator) -> Outcome:
    failures = []

    def entry() -> complex:
        return 0j if rng.uniform() < 0.2 else random_complex(rng)

    for _ in range(500):
        u, v = entry(), entry()
        expected = u == 0 or v == 0
        if covering_decide([(u, v)], cfg).covering != expected:
            failures.append(f"singleton ({u}, {v})")

    for i in range(1000):
        z1, z2, w1 = random_complex(rng), random_complex(rng), random_complex(rng)
        if i % 10 == 0:
            w2 = 0j
        elif i % 2 == 0:
            # exactly on the boundary: conj(z1) z2 w1 conj(w2) = -s
            s = float(rng.uniform(0.1, 10.0))
            w2 = -s / (z1 * z2.conjugate() * w1.conjugate())
        else:
            w2 = random_complex(rng)
            while abs(np.angle(-(z1.conjugate() * z2 * w1 * w2.conjugate()))) < 1e-2:
                w2 = random_complex(rng)
        decided = covering_decide([(z1, z2), (w1, w2)], cfg).covering
        if decided != pair_criterion(z1, z2, w1, w2):
            failures.append(f"pairs ({z1}, {z2}), ({w1}, {w2}): covering {decided}")

    for _ in range(1000):
        u, v = random_complex(rng), random_complex(rng)
        disk = exclusion_region(u, v).disk
        lam = disk.center + disk.radius * np.exp(1j * rng.uniform(0, 2 * math.pi))
        if abs(abs(u + lam * v) - abs(u)) > 1e-9 * abs(u):
            failures.append(f"boundary identity ({u}, {v})")
    return 2500, failures


def _isolated_peak_polynomial(rng: np.random.Generator, curve, cfg: RunConfig) -> HoloExpr:
    """Random polynomial whose maximum modulus on the curve is a single well-separated peak."""
    while True:
        f = random_polynomial(rng, int(rng.integers(1, 5))).to_expr()
        peaks = np.sort(scan(f, curve, cfg.grid_N, cfg.refine_iters).peak_value)[::-1]
        if len(peaks) == 1 or peaks[1] < (1.0 - 1e-3) * peaks[0]:
            ns = norming_set(f, curve, cfg.norming_eps, cfg)
            if len(ns.clusters) == 1 and ns.clusters[0].kind == "isolated":
                return f


@register("characterization", "minimization and covering-set decisions agree")
def check_characterization(cfg: RunConfig, rng: np.random.Generator) -> Outcome:
    failures = []
    inconclusive = 0
    instances = 0
    for i in range(200):
        curve = Circle(0j, RADII[i % 3])
        kind = i % 4
        if kind == 0:
            n, m = rng.choice(np.arange(1, 6), size=2, replace=False)
            f = Const(random_complex(rng)) * power(Z(), int(n))
            g = Const(random_complex(rng)) * power(Z(), int(m))
        elif kind == 1:
            f = blaschke_product(rng, int(rng.integers(1, 4)), curve.radius)
            g = random_polynomial(rng, int(rng.integers(0, 5))).to_expr()
        elif kind == 2:
            f = _isolated_peak_polynomial(rng, curve, cfg)
            if rng.uniform() < 0.5:
                g = random_polynomial(rng, int(rng.integers(0, 5))).to_expr()
            else:
                g = blaschke_product(rng, int(rng.integers(1, 4)), curve.radius)
        else:
            # g vanishes on the norming point of f
            f = _isolated_peak_polynomial(rng, curve, cfg)
            z_star = complex(curve.point(norming_set(f, curve, cfg.norming_eps, cfg).clusters[0].t))
            g = (Z() - Const(z_star)) * random_polynomial(rng, int(rng.integers(0, 3))).to_expr()

        direct, covering, agree = decide_both(f, g, curve, cfg)
        instances += 1
        if "Inconclusive" in (direct.verdict, covering.verdict):
            inconclusive += 1
        elif not agree:
            failures.append(f"{_describe(f, g, curve)}: minimize {direct.verdict}, covering {covering.verdict}")
        elif kind in (0, 3) and direct.verdict != "Orthogonal":
            failures.append(f"{_describe(f, g, curve)}: expected Orthogonal, got {direct.verdict}")

        if i % 20 == 0:
            # verdict is invariant under f -> c f, g -> d g
            c, d = random_complex(rng), random_complex(rng)
            scaled = bj_minimize(Const(c) * f, Const(d) * g, curve, cfg)
            if "Inconclusive" not in (scaled.verdict, direct.verdict) and scaled.verdict != direct.verdict:
                failures.append(f"{_describe(f, g, curve)}: scaling changed {direct.verdict} to {scaled.verdict}")
            # the sampled map lambda -> ||f + lambda g|| is convex
            _, z, _ = curve.sample(cfg.grid_N)
            pencil = Pencil(np.broadcast_to(f.evaluate(z), z.shape), np.broadcast_to(g.evaluate(z), z.shape))
            for _ in range(100):
                l1, l2 = random_complex(rng), random_complex(rng)
                if pencil(0.5 * (l1 + l2)) > 0.5 * (pencil(l1) + pencil(l2)) + 1e-10:
                    failures.append(f"{_describe(f, g, curve)}: convexity fails between {l1} and {l2}")
                    break

    zero_left = bj_minimize(Const(0j), Z(), Circle(0j, 1.0), cfg)
    if zero_left.verdict != "Orthogonal":
        failures.append(f"0 against z: {zero_left.verdict}")
    forward = bj_minimize(parse("z"), parse("z*(z-1)"), Circle(0j, 1.0), cfg)
    backward = bj_minimize(parse("z*(z-1)"), parse("z"), Circle(0j, 1.0), cfg)
    if forward.verdict != "Orthogonal" or backward.verdict != "NotOrthogonal":
        failures.append(f"non-symmetry witness: {forward.verdict}/{backward.verdict}")
    if inconclusive:
        logger.warning(f"characterization: {inconclusive} of {instances} instances inconclusive")
    return instances + 2, failures


@register("classify", "smoothness from M_f and extremality from |f| constant")
def check_classify(cfg: RunConfig, rng: np.random.Generator) -> Outcome:
    unit = Circle(0j, 1.0)
    cases: List[Tuple[HoloExpr, Optional[str], bool]] = [
        (parse("z+2"), "Smooth", False),
        (parse("z^2+1"), "NotSmooth", False),
    ]
    for _ in range(19):
        rotation = Const(complex(np.exp(1j * rng.uniform(0, 2 * math.pi))))
        cases.append((rotation * blaschke_product(rng, int(rng.integers(1, 5)), 1.0), "NotSmooth", True))
    for _ in range(19):
        P = random_polynomial(rng, int(rng.integers(1, 5)))
        # a nonzero constant term keeps |P| from being constant on the circle
        coeffs = list(P.coeffs)
        coeffs[0] = coeffs[0] if abs(coeffs[0]) >= 0.1 else complex(1.0)
        f = Polynomial.from_coeffs(coeffs).to_expr()
        f = Const(1.0 / sup_norm(f, unit, cfg).norm_value) * f
        cases.append((f, None, False))

    failures = []
    for f, smoothness, extreme in cases:
        result = classify_point(f, unit, cfg)
        if (smoothness is not None and result.smoothness != smoothness) or result.extreme_on_analytic_curve != extreme:
            failures.append(f"f = {f}: {result.smoothness}, extreme {result.extreme_on_analytic_curve}")
    return len(cases), failures


@register("jgamma-zero", "a nonconstant member of J(Gamma) has an enclosed zero")
def check_jgamma_zero(cfg: RunConfig, rng: np.random.Generator) -> Outcome:
    failures = []
    for i in range(50):
        k = int(rng.integers(1, 5))
        curve = Circle(0j, RADII[i % 3])
        f = blaschke_product(rng, k, curve.radius)
        count = count_zeros(f, curve, cfg.grid_N, cfg).count
        if count != k or not verify_J_gamma_zero(f, curve, cfg):
            failures.append(f"f = {f}: count {count}, expected {k}")
    if not verify_J_gamma_zero(Const(2j), Circle(0j, 1.0), cfg):
        failures.append("constant 2i")
    return 51, failures


@register("cauchy", "Cauchy-integral derivatives match symbolic derivatives")
def check_cauchy(cfg: RunConfig, rng: np.random.Generator) -> Outcome:
    failures = []
    cases: List[Tuple[HoloExpr, complex]] = []
    for _ in range(30):
        f = random_polynomial(rng, int(rng.integers(0, 7)), box=True).to_expr()
        z0 = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
        cases.append((f, z0))
    for _ in range(20):
        # poles at 1/conj(a), at least 2 away from the unit disk center
        cases.append((blaschke_product(rng, int(rng.integers(1, 3)), 1.0, max_modulus=0.5, min_modulus=0.3), 0j))

    for f, z0 in cases:
        n = int(rng.integers(0, 5))
        approx = cauchy_derivative(f, z0, n, 1.0, cfg.quad_N)
        exact = complex(nth_derivative(f, n).evaluate(z0))
        if abs(approx - exact) > 1e-8 * max(1.0, abs(exact)):
            failures.append(f"f = {f}, z0 = {z0:.4g}, n = {n}: {approx} vs {exact}")
    return len(cases), failures


@register("deriv", "a small ||f + lambda0 g|| on the outer curve forces non-orthogonal derivatives inside")
def check_derivative_scenario(cfg: RunConfig, rng: np.random.Generator) -> Outcome:
    failures = []
    outer, inner = Circle(0j, 2.0), Circle(0j, 0.5)
    report = derivative_ortho_scenario(parse("z^2"), parse("z^2 + 0.01*z^3"), 2, outer, inner, -1.0, 1.0, cfg)
    if not (report.passed and report.hypothesis_holds and abs(report.lhs - 0.08) < 1e-9
            and abs(report.rhs - 1.0) < 1e-9 and report.decision.achieved <= 1.81):
        failures.append(f"worked instance: {report.model_dump()}")

    violated = derivative_ortho_scenario(parse("z^2"), parse("z^3"), 2, outer, inner, 0.0, 1.0, cfg)
    if violated.hypothesis_holds or violated.decision is not None:
        failures.append("hypothesis-violating instance reported a claim")

    try:
        derivative_ortho_scenario(parse("z^2"), parse("z^3"), 2, outer, inner, 0.0, 2.0, cfg)
        failures.append("r beyond the curve distance accepted")
    except GeometryViolation:
        pass
    return 3, failures


@register("converse", "orthogonal functions may still have equal zero counts")
def check_converse(cfg: RunConfig, rng: np.random.Generator) -> Outcome:
    failures = []
    f, g = parse("z"), parse("z*(z-1)")
    unit = Circle(0j, 1.0)
    for decision in (bj_minimize(f, g, unit, cfg), ortho_via_covering(f, g, unit, cfg)):
        if decision.verdict != "Orthogonal":
            failures.append(f"{decision.method}: {decision.verdict}")
    if not sufficient_zero(f, g, unit, cfg):
        failures.append("sufficient_zero missed z = 1")

    shrunk = Circle(0j, 0.9)
    counts = (count_zeros(f, shrunk, cfg.grid_N, cfg).count, count_zeros(g, shrunk, cfg.grid_N, cfg).count)
    if counts != (1, 1):
        failures.append(f"counts on radius 0.9: {counts}")
    try:
        count_zeros(g, unit, cfg.grid_N, cfg)
        failures.append("zero at z = 1 not detected on the unit circle")
    except ZeroOnCurveError:
        pass

    link = rouche_link(f, g, unit, cfg)
    if link.claim:
        failures.append("rouche_link claimed for an orthogonal pair")
    return 5, failures


@register("rouche", "a non-orthogonality witness against f in J(Gamma) forces equal zero counts")
def check_rouche(cfg: RunConfig, rng: np.random.Generator) -> Outcome:
    failures = []
    unit = Circle(0j, 1.0)
    example = rouche_link(parse("z^2"), parse("z^2 + 0.1*z + 0.05"), unit, cfg)
    if not (example.claim and example.consistent and example.count_f == example.count_g == 2):
        failures.append(f"worked instance: {example.verdict}, counts {example.count_f}/{example.count_g}")

    for i in range(30):
        curve = Circle(0j, RADII[i % 3])
        f = blaschke_product(rng, int(rng.integers(1, 4)), curve.radius)
        roots = roots_off_circle(rng, int(rng.integers(0, 4)), curve.radius)
        g = polynomial_from_roots(roots, random_complex(rng)).to_expr()
        link = rouche_link(f, g, curve, cfg)
        contrast = different_counts_orthogonal(f, g, curve, cfg)
        if not link.consistent or not contrast.consistent:
            failures.append(f"{_describe(f, g, curve)}: link {link.consistent}, contrast {contrast.consistent}")
    return 31, failures


# ---------------------------------------------------------------------------
# runner

class SuiteRunner:
    """Runs registered checks concurrently and collects a summary."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.checks = CHECKS.copy()
        logger.debug(f"SuiteRunner initialized with {len(self.checks)} checks")

    def rng_for(self, block: str) -> np.random.Generator:
        return np.random.default_rng([self.cfg.seed, zlib.crc32(block.encode("utf-8"))])

    def run_check(self, check: Check) -> CheckResult:
        logger.info(f"Running check: {check.block}")
        started = time.perf_counter()
        try:
            instances, failures = check.func(self.cfg, self.rng_for(check.block))
        except BJKitError as e:
            logger.error(f"Check {check.block} raised {type(e).__name__}: {e}")
            instances, failures = 0, [f"{type(e).__name__}: {e}"]
        except Exception as e:
            # a crash in one block must not discard the others
            logger.exception(f"Check {check.block} crashed")
            instances, failures = 0, [f"{type(e).__name__}: {e}"]
        elapsed = time.perf_counter() - started
        status = "passed" if not failures else f"{len(failures)} failures"
        logger.info(f"Check {check.block}: {instances} instances, {status} ({elapsed:.1f}s)")
        return CheckResult(label=check.label, block=check.block, instances=instances,
                           failures=failures, elapsed=elapsed)

    def run(self, only: Optional[Sequence[str]] = None) -> SuiteSummary:
        selected = [c for name, c in self.checks.items() if not only or name in only]
        started = time.perf_counter()
        with ThreadPoolExecutor(max_workers=self.cfg.workers) as pool:
            results = list(pool.map(self.run_check, selected))
        return SuiteSummary(checks=results, elapsed=time.perf_counter() - started)


def verify_paper(cfg: RunConfig, only: Optional[Sequence[str]] = None) -> SuiteSummary:
    """Run the suite (or the named blocks)."""
    return SuiteRunner(cfg).run(only)


def render_summary(summary: SuiteSummary, console: Optional[Console] = None) -> None:
    console = console or Console(stderr=True)
    table = Table(title="verify-paper")
    table.add_column("block")
    table.add_column("statement")
    table.add_column("instances", justify="right")
    table.add_column("result")
    table.add_column("time", justify="right")
    for check in summary.checks:
        result = "[green]pass[/green]" if check.passed else f"[red]FAIL ({len(check.failures)})[/red]"
        table.add_row(check.block, check.label, str(check.instances), result, f"{check.elapsed:.1f}s")
    console.print(table)
    for check in summary.checks:
        for failure in check.failures[:5]:
            console.print(f"[red]{check.block}[/red]: {failure}")
