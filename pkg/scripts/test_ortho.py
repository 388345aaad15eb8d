"""Test script for Birkhoff-James orthogonality decisions and covering sets."""

import cmath
import sys
from pathlib import Path

import numpy as np

# Add package directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from bjkit.config import RunConfig
from bjkit.curves import Circle
from bjkit.expr import parse
from bjkit.logging_setup import get_logger, setup_logging
from bjkit.ortho import (
    Pencil,
    bj_minimize,
    covering_decide,
    decide_both,
    exclusion_region,
    min_norm_element,
    ortho_via_covering,
    pair_criterion,
    sufficient_argument,
    sufficient_zero,
)

logger = get_logger(__name__)

CFG = RunConfig(grid_N=1024)
UNIT = Circle(0j, 1.0)
CUBE_ROOTS = [cmath.exp(2j * cmath.pi * k / 3) for k in range(3)]


def test_min_norm_element():
    logger.info("=== Testing Min-Norm Hull Element ===")
    assert min_norm_element(np.array([1 + 0j])) == 1
    assert abs(min_norm_element(np.array([1 + 0j, -1 + 0j]))) < 1e-9
    assert abs(min_norm_element(np.array([1 + 1j, 1 - 1j])) - 1) < 1e-9
    assert abs(min_norm_element(np.array([2, 3, 2 + 1j, 3 + 1j])) - 2) < 1e-9
    # collinear input goes through the segment fallback
    assert abs(min_norm_element(np.array([1, 2, 3, 4], dtype=complex)) - 1) < 1e-9
    assert abs(min_norm_element(np.array(CUBE_ROOTS))) < 1e-9
    logger.info("✓ Vertices, segments and interior origin")


def test_exclusion_region():
    logger.info("=== Testing Exclusion Regions ===")
    assert exclusion_region(0, 1).all_plane
    assert exclusion_region(1, 0).all_plane

    region = exclusion_region(1, 1)
    assert not region.all_plane
    assert region.disk.center == -1 and region.disk.radius == 1

    for u, v in [(2, 1j), (1 - 3j, 0.5 + 0.2j), (-0.7j, -4)]:
        disk = exclusion_region(u, v).disk
        # every exclusion disk passes through lambda = 0
        assert abs(abs(disk.center) - disk.radius) < 1e-12
        assert abs(u + disk.center * v) < 1e-12
        assert disk.contains(disk.center)
        outside = disk.center * 2.5
        assert abs(u + outside * v) >= abs(u)
    logger.info("✓ Disk through the origin where |u + lambda v| < |u|")


def test_covering_decide():
    logger.info("=== Testing Covering Decisions ===")
    result = covering_decide([(1, 1), (1, -1)], CFG)
    assert result.covering and result.witness is None

    result = covering_decide([(1, 1)], CFG)
    assert not result.covering
    assert abs(result.witness + 1) < 1e-9 and result.min_phi < -0.99

    result = covering_decide([(1, 1), (0, 5)], CFG)
    assert result.covering and result.min_phi is None

    # three disks of radius 1 centred at the cube roots of unity
    pairs = [(-c, 1) for c in CUBE_ROOTS]
    assert covering_decide(pairs, CFG).covering
    for drop in range(3):
        two = [p for k, p in enumerate(pairs) if k != drop]
        result = covering_decide(two, CFG)
        assert not result.covering, f"pair set without {drop} reported covering"
        assert abs(result.min_phi - (3 ** 0.5 / 2 - 1)) < 1e-6
        for u, v in two:
            assert abs(u + result.witness * v) < abs(u)

    try:
        covering_decide([], CFG)
        raise AssertionError("empty family accepted")
    except ValueError:
        pass
    logger.info("✓ Covering iff the exclusion disks share no point")


def test_pair_criterion():
    logger.info("=== Testing Two-Pair Criterion ===")
    assert pair_criterion(1, 1, 1, -1)
    assert not pair_criterion(1, 1, 1, 1)
    assert not pair_criterion(1, 1, 1, 1j)
    assert pair_criterion(0, 1, 2, 3)
    assert pair_criterion(1 + 1j, 2, 1 - 1j, 2j)
    for pair in [((1, 1), (1, -1)), ((1, 1), (1, 1)), ((1, 1), (1, 1j)), ((1 + 1j, 2), (1 - 1j, 2j))]:
        (z1, z2), (w1, w2) = pair
        assert pair_criterion(z1, z2, w1, w2) == covering_decide(list(pair), CFG).covering
    logger.info("✓ Closed form agrees with the geometric decision")


def test_bj_minimize():
    logger.info("=== Testing Direct Minimization ===")
    assert bj_minimize(parse("z^2"), parse("z"), UNIT, CFG).verdict == "Orthogonal"
    assert bj_minimize(parse("z"), parse("z^3"), UNIT, CFG).verdict == "Orthogonal"
    assert bj_minimize(parse("z^2"), parse("z^2"), UNIT, CFG).verdict == "NotOrthogonal"

    decision = bj_minimize(parse("z+2"), parse("1"), UNIT, CFG)
    assert decision.verdict == "NotOrthogonal"
    assert decision.achieved < 1.001 and abs(decision.witness + 2) < 1e-2
    assert abs(decision.base_norm - 3) < 1e-12

    assert bj_minimize(parse("z"), parse("z*(z-1)"), UNIT, CFG).verdict == "Orthogonal"
    decision = bj_minimize(parse("z*(z-1)"), parse("z"), UNIT, CFG)
    assert decision.verdict == "NotOrthogonal" and decision.achieved < 2 * (1 - 1e-4)

    decision = bj_minimize(parse("0"), parse("z"), UNIT, CFG)
    assert decision.verdict == "Orthogonal" and decision.base_norm == 0
    assert bj_minimize(parse("z+2"), parse("0"), UNIT, CFG).verdict == "Orthogonal"
    logger.info("✓ Verdicts on monomials and shifted functions")


def test_scale_invariance():
    logger.info("=== Testing Scale Invariance ===")
    for f, g in [("z+2", "1"), ("z^2", "z"), ("z*(z-1)", "z")]:
        plain = bj_minimize(parse(f), parse(g), UNIT, CFG).verdict
        scaled = bj_minimize(parse(f"3*({f})"), parse(f"2i*({g})"), UNIT, CFG).verdict
        assert plain == scaled, f"{f}, {g}: {plain} vs {scaled}"
    logger.info("✓ Verdicts unchanged under f -> a f, g -> b g")


def test_ortho_via_covering():
    logger.info("=== Testing Covering Decision Path ===")
    decision = ortho_via_covering(parse("z+2"), parse("1"), UNIT, CFG)
    assert decision.verdict == "NotOrthogonal" and decision.discrete_Mf
    assert decision.achieved < 3 * (1 - 1e-4)

    assert ortho_via_covering(parse("z"), parse("z*(z-1)"), UNIT, CFG).verdict == "Orthogonal"
    assert ortho_via_covering(parse("z^2"), parse("z"), UNIT, CFG).verdict == "Orthogonal"

    decision = ortho_via_covering(parse("z*(z-1)"), parse("z"), UNIT, CFG)
    assert decision.verdict == "NotOrthogonal"
    assert decision.method == "covering"

    direct, covering, agree = decide_both(parse("z+2"), parse("z"), UNIT, CFG)
    assert agree and direct.verdict == covering.verdict == "NotOrthogonal"
    logger.info("✓ Covering path agrees with direct minimization")


def test_sufficient_conditions():
    logger.info("=== Testing Sufficient Conditions ===")
    assert sufficient_zero(parse("z"), parse("z*(z-1)"), UNIT, CFG)
    assert sufficient_zero(parse("z^2"), parse("z-1"), UNIT, CFG)
    assert not sufficient_zero(parse("z+2"), parse("1"), UNIT, CFG)
    assert sufficient_zero(parse("z+2"), parse("0"), UNIT, CFG)

    assert sufficient_argument(parse("z^2"), parse("z"), UNIT, cfg=CFG)
    assert not sufficient_argument(parse("z+2"), parse("1"), UNIT, cfg=CFG)
    # orthogonal, but the argument sweep covers only half the circle
    assert not sufficient_argument(parse("z"), parse("z*(z-1)"), UNIT, cfg=CFG)
    logger.info("✓ Zero and argument conditions")


def test_pencil():
    logger.info("=== Testing Sampled Pencil ===")
    pencil = Pencil(np.array([3, 1j]), np.array([1, 1]))
    assert pencil(0) == 3
    assert pencil(-1) == 2
    assert abs(pencil(-3) - abs(1j - 3)) < 1e-15
    values, grads = pencil.terms(-3)
    assert values[0] == 0 and grads[0] == 0
    logger.info("✓ Values and subgradients")


def main() -> bool:
    setup_logging("INFO")
    tests = [
        test_min_norm_element,
        test_exclusion_region,
        test_covering_decide,
        test_pair_criterion,
        test_bj_minimize,
        test_scale_invariance,
        test_ortho_via_covering,
        test_sufficient_conditions,
        test_pencil,
    ]
    failed = 0
    for test in tests:
        try:
            test()
        except Exception as e:
            logger.error(f"✗ {test.__name__} failed: {e}")
            failed += 1
    logger.info(f"=== {len(tests) - failed}/{len(tests)} orthogonality tests passed ===")
    return failed == 0


if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
