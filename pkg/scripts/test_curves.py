"""Test script for curves, sampling, quadrature and curve distance."""

import math
import sys
from pathlib import Path

import numpy as np

# Add package directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from bjkit.curves import Circle, Ellipse, contour_integral, curve_distance, parse_curve, sample
from bjkit.errors import CurveSyntaxError, PreconditionError
from bjkit.logging_setup import get_logger, setup_logging

logger = get_logger(__name__)


def test_sampling():
    logger.info("=== Testing Curve Sampling ===")
    t, z, dz = sample(Circle(0j, 1.0), 4)
    assert np.allclose(t, [0, 0.25, 0.5, 0.75])
    assert np.allclose(z, [1, 1j, -1, -1j], rtol=0, atol=1e-15)
    assert np.allclose(dz, 2j * math.pi * z, rtol=0, atol=1e-14)

    _, z, dz = sample(Ellipse(1j, 2.0, 1.0), 8)
    assert np.allclose(((z.real / 2.0) ** 2 + (z.imag - 1) ** 2), 1.0)
    assert abs(dz[0] - 2j * math.pi) < 1e-14
    try:
        sample(Circle(0j, 1.0), 0)
        raise AssertionError("empty sample accepted")
    except PreconditionError:
        pass
    logger.info("✓ Points and tangents on the uniform grid")


def test_parse_curve():
    logger.info("=== Testing Curve Literals ===")
    c = parse_curve("circle(0,2)")
    assert isinstance(c, Circle) and c.center == 0 and c.radius == 2
    e = parse_curve("ellipse(1+1i, 2, 0.5)")
    assert isinstance(e, Ellipse) and e.center == 1 + 1j and (e.semi_a, e.semi_b) == (2, 0.5)
    assert parse_curve(c.literal) == c
    assert parse_curve(e.literal) == e
    for bad in ("circle(0,-1)", "square(0,1)", "circle(0)", "circle(0,1i)", "ellipse(0,1,x)"):
        try:
            parse_curve(bad)
            raise AssertionError(f"{bad} accepted")
        except CurveSyntaxError:
            pass
    logger.info("✓ Literals parse, print and reject malformed input")


def test_contour_integral():
    logger.info("=== Testing Trapezoid Quadrature ===")
    unit = Circle(0j, 1.0)
    assert abs(contour_integral(lambda z: 1 / z, unit, 64) - 2j * math.pi) < 1e-13
    for k in range(0, 5):
        assert abs(contour_integral(lambda z, k=k: z ** k, unit, 64)) < 1e-13

    ellipse = Ellipse(0j, 2.0, 1.0)
    assert abs(contour_integral(lambda z: 1 / (z - 0.5), ellipse, 1024) - 2j * math.pi) < 1e-8
    assert abs(contour_integral(lambda z: 1 / (z - 3.0), ellipse, 1024)) < 1e-8
    logger.info("✓ Cauchy integrals on circles and ellipses")


def test_curve_distance():
    logger.info("=== Testing Curve Distance ===")
    assert abs(curve_distance(Circle(0j, 2.0), Circle(0j, 0.5)) - 1.5) < 1e-9
    assert abs(curve_distance(Circle(0j, 1.0), Circle(3 + 0j, 1.0)) - 1.0) < 1e-9
    # closest points fall between grid nodes
    d = curve_distance(Circle(0j, 1.0), Circle(2.0 * np.exp(0.123j), 0.5), N=64)
    assert abs(d - 0.5) < 1e-9
    logger.info("✓ Dense scan plus local refinement")


def inside(curve, z: complex) -> float:
    """Signed level: negative inside the curve, positive outside."""
    w = z - curve.center
    if isinstance(curve, Circle):
        return abs(w) / curve.radius - 1.0
    return (w.real / curve.semi_a) ** 2 + (w.imag / curve.semi_b) ** 2 - 1.0


def test_quadrature_convergence():
    logger.info("=== Testing Quadrature Under Grid Doubling ===")
    cases = [
        (Circle(0j, 1.0), lambda z: 1 / (z - (0.3 + 0.2j))),
        (Circle(0j, 1.0), lambda z: np.exp(z) / (z - 3.0)),
        (Circle(1 + 1j, 0.5), lambda z: z ** 4 / (z - 1.1j)),
        (Ellipse(0j, 2.0, 1.0), lambda z: 1 / (z - 0.5)),
        (Ellipse(0j, 2.0, 1.0), lambda z: np.exp(z) / (z - 3.0)),
    ]
    for curve, F in cases:
        for N in (128, 256, 512):
            coarse = contour_integral(F, curve, N)
            fine = contour_integral(F, curve, 2 * N)
            assert abs(fine - coarse) < 1e-10 * max(1.0, abs(fine)), f"{curve} N={N}"
    logger.info("✓ Doubling N from 128 changes integrals below 1e-10")


def test_random_winding():
    logger.info("=== Testing Cauchy Index at Random Points ===")
    rng = np.random.default_rng(21)
    for curve in (Circle(0j, 1.0), Circle(1 + 1j, 0.5), Ellipse(0j, 2.0, 1.0)):
        extent = 2.0 * max(getattr(curve, "radius", 0.0), getattr(curve, "semi_a", 0.0))
        checked = 0
        while checked < 200:
            z0 = complex(curve.center + rng.uniform(-extent, extent) + 1j * rng.uniform(-extent, extent))
            level = inside(curve, z0)
            if abs(level) < 0.05:
                continue
            index = contour_integral(lambda z: 1 / (z - z0), curve, 2048) / (2j * math.pi)
            assert round(index.real) == (1 if level < 0 else 0), f"{curve} at {z0}: {index}"
            assert abs(index.imag) < 1e-6
            checked += 1
    logger.info("✓ 200 random points per curve classified by their Cauchy index")


def test_distance_symmetry():
    logger.info("=== Testing Curve Distance Symmetry ===")
    rng = np.random.default_rng(22)
    for _ in range(10):
        r1, r2 = rng.uniform(0.3, 1.5, 2)
        gap = rng.uniform(0.1, 1.0)
        offset = (r1 + r2 + gap) * np.exp(1j * rng.uniform(0, 2 * math.pi))
        a, b = Circle(0j, float(r1)), Circle(complex(offset), float(r2))
        forward, backward = curve_distance(a, b, N=128), curve_distance(b, a, N=128)
        assert abs(forward - backward) < 1e-9 and abs(forward - gap) < 1e-9

        # nested, off-center
        outer = Circle(0j, float(r1 + r2 + gap + 0.2))
        inner = Circle(complex(0.2 * np.exp(1j * rng.uniform(0, 2 * math.pi))), float(r2))
        forward, backward = curve_distance(outer, inner, N=128), curve_distance(inner, outer, N=128)
        assert abs(forward - backward) < 1e-9 and abs(forward - (r1 + gap)) < 1e-9
    logger.info("✓ d(A, B) = d(B, A) on separated and nested circles")


def main() -> bool:
    setup_logging("INFO")
    tests = [
        test_sampling,
        test_parse_curve,
        test_contour_integral,
        test_curve_distance,
        test_quadrature_convergence,
        test_random_winding,
        test_distance_symmetry,
    ]
    failed = 0
    for test in tests:
        try:
            test()
        except Exception as e:
            logger.error(f"✗ {test.__name__} failed: {e}")
            failed += 1
    logger.info(f"=== {len(tests) - failed}/{len(tests)} curve tests passed ===")
    return failed == 0


if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
