"""Test script for configuration, reports and the command-line front end."""

import sys
import tempfile
from pathlib import Path

import yaml
from pydantic import ValidationError

# Add package directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from bjkit.cli import main
from bjkit.config import ConfigManager, RunConfig
from bjkit.curves import parse_curve
from bjkit.errors import ConfigError
from bjkit.logging_setup import get_logger, setup_logging
from bjkit.models import Report, SuiteSummary
from bjkit.report import build_report, landscape_csv
from bjkit.suite import CHECKS, polynomial_from_roots, register

logger = get_logger(__name__)


def write_config(directory: Path, **values) -> str:
    path = directory / "config.yaml"
    data = {"grid_N": 1024, "quad_N": 1024, "log_level": "WARNING"}
    data.update(values)
    path.write_text(yaml.safe_dump(data), encoding="utf-8")
    return str(path)


def run_cli(directory: Path, *argv: str, name: str = "report.yaml", **config):
    """Run main() against a temporary config; returns (exit code, parsed output or None)."""
    out = directory / name
    if out.exists():
        out.unlink()
    code = main([*argv, "--config", write_config(directory, **config), "--out", str(out)])
    if not out.exists():
        return code, None
    text = out.read_text(encoding="utf-8")
    if out.suffix == ".csv":
        return code, text
    return code, yaml.safe_load(text)


def test_run_config():
    logger.info("=== Testing Run Configuration ===")
    cfg = RunConfig()
    assert cfg.grid_N == 4096 and cfg.ortho_margins == (1e-7, 1e-4)
    for bad in ({"grid_N": 4}, {"ortho_margins": (1e-4, 1e-7)}, {"ortho_margins": (0.0, 1e-4)},
                {"norming_eps": 0.5}):
        try:
            RunConfig(**bad)
            raise AssertionError(f"{bad} accepted")
        except ValidationError:
            pass
    logger.info("✓ Field bounds and margin ordering validated")


def test_config_manager():
    logger.info("=== Testing Config Manager ===")
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        assert ConfigManager(str(tmp / "absent.yaml")).config == RunConfig()

        manager = ConfigManager(write_config(tmp, seed=7))
        assert manager.config.seed == 7 and manager.config.grid_N == 1024
        cfg = manager.override(seed=None, grid_N=2048)
        assert cfg.seed == 7 and cfg.grid_N == 2048

        manager.save(str(tmp / "saved.yaml"))
        assert ConfigManager(str(tmp / "saved.yaml")).config == cfg

        try:
            manager.override(grid_N=2)
            raise AssertionError("invalid override accepted")
        except ConfigError:
            pass

        bad = tmp / "bad.yaml"
        bad.write_text("grid_N: -1\n", encoding="utf-8")
        try:
            ConfigManager(str(bad))
            raise AssertionError("invalid config accepted")
        except ConfigError as e:
            assert e.exit_code == 3
    logger.info("✓ Defaults, overrides and save round trip")


def test_report_round_trip():
    logger.info("=== Testing Report YAML ===")
    summary = SuiteSummary(checks=[], elapsed=0.5)
    report = build_report("verify-paper", {"pair": (1 + 2j, -0.5j)}, {"summary": summary, "z": 3j},
                          0.25, RunConfig())
    assert report.inputs["pair"] == [[1.0, 2.0], [-0.0, -0.5]]
    assert Report.from_yaml(report.to_yaml()) == report
    assert not summary.passed
    logger.info("✓ Reports are plain data and parse back equal")

    csv_text = landscape_csv([(0.0, -1.0, 2.5), (0.1, -1.0, 2.4)])
    assert csv_text.splitlines() == ["re_lambda,im_lambda,value", "0.0,-1.0,2.5", "0.1,-1.0,2.4"]
    logger.info("✓ Landscape CSV layout")


def test_cli_commands():
    logger.info("=== Testing CLI Commands ===")
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        code, report = run_cli(tmp, "norm", "z^3", "--curve", "circle(0,2)")
        assert code == 0 and report["command"] == "norm"
        assert abs(report["outputs"]["norm"]["norm_value"] - 8.0) < 1e-12
        assert report["inputs"]["curve"] == parse_curve("circle(0,2)").literal

        code, report = run_cli(tmp, "ortho", "0", "z")
        assert code == 0 and report["outputs"]["verdict"] == "Orthogonal"

        code, report = run_cli(tmp, "ortho", "z+2", "1", "--method", "both")
        assert code == 0 and report["outputs"]["agree"] is True
        assert report["outputs"]["covering"]["verdict"] == "NotOrthogonal"

        code, report = run_cli(tmp, "covering", "1,1", "1,-1")
        assert code == 0 and report["outputs"]["covering"]["covering"] is True

        code, report = run_cli(tmp, "zeros", "z^3 - 0.5")
        assert code == 0 and report["outputs"]["count"] == 3

        code, report = run_cli(tmp, "fta", "z^2 + 2*z + 3")
        assert code == 0 and report["outputs"]["fta"]["passed"] is True

        code, report = run_cli(tmp, "classify", "z+2")
        assert code == 0 and report["outputs"]["classification"]["smoothness"] == "Smooth"
        logger.info("✓ Successful commands write YAML reports")

        code, text = run_cli(tmp, "landscape", "z+2", "1", name="grid.csv")
        lines = text.splitlines()
        assert code == 0 and lines[0] == "re_lambda,im_lambda,value" and len(lines) == 122
        code, text = run_cli(tmp, "landscape", "z+2", "1", "--resolution", "1",
                             "--box", "-3", "-1", "-1", "1", name="grid.csv")
        re, im, value = text.splitlines()[1].split(",")
        assert code == 0 and (re, im) == ("-2.0", "0.0") and abs(float(value) - 1.0) < 1e-12
        logger.info("✓ Landscape CSV grid")


def test_exit_codes():
    logger.info("=== Testing Exit Codes ===")
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        assert run_cli(tmp, "zeros", "z*(z-1)")[0] == 3
        assert run_cli(tmp, "norm", "z +* 2")[0] == 2
        assert run_cli(tmp, "norm", "z", "--curve", "square(0,1)")[0] == 2
        assert run_cli(tmp, "classify", "0")[0] == 3
        assert run_cli(tmp, "landscape", "z", "1", "--resolution", "0", name="grid.csv")[0] == 3
        assert run_cli(tmp, "verify-paper", "--only", "nonsense")[0] == 2
        assert main(["norm"]) == 2
        logger.info("✓ Parse errors 2, precondition errors 3")

        code, report = run_cli(tmp, "verify-paper", "--only", "cauchy", quad_N=8)
        assert code == 5 and report["outputs"]["passed"] is False
        code, report = run_cli(tmp, "verify-paper", "--only", "covering", "--only", "deriv")
        assert code == 0 and report["outputs"]["passed"] is True
        assert [c["block"] for c in report["outputs"]["summary"]["checks"]] == ["covering", "deriv"]
        logger.info("✓ Suite failures exit 5")


def test_suite_blocks():
    logger.info("=== Testing Suite Blocks ===")
    constant = polynomial_from_roots([], 2 - 1j)
    assert constant.coeffs == (2 - 1j,) and constant.degree == 0
    assert polynomial_from_roots([0.5], 2.0).coeffs == (-1.0, 2.0)
    logger.info("✓ Root lists of any length, including none, give polynomials")

    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        code, report = run_cli(tmp, "verify-paper", "--only", "rouche")
        check = report["outputs"]["summary"]["checks"][0]
        assert code == 0 and check["instances"] == 31 and check["failures"] == [], check["failures"]
        logger.info("✓ rouche block passes")

        @register("crash", "a check that fails outside the error hierarchy")
        def check_crash(cfg, rng):
            raise TypeError("corpus generator broke")

        try:
            code, report = run_cli(tmp, "verify-paper", "--only", "crash", "--only", "covering")
        finally:
            CHECKS.pop("crash")
        assert code == 5 and report["outputs"]["passed"] is False
        covering, crash = report["outputs"]["summary"]["checks"]
        assert crash["block"] == "crash" and crash["failures"] == ["TypeError: corpus generator broke"]
        assert covering["block"] == "covering" and covering["failures"] == []
        logger.info("✓ A crashing block is reported as failed and the others still run")


def test_determinism():
    logger.info("=== Testing Determinism ===")
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        runs = []
        for _ in range(2):
            code, report = run_cli(tmp, "ortho", "z*(z-1)", "z", "--method", "both", "--seed", "3")
            assert code == 0 and report["config"]["seed"] == 3
            report.pop("timing")
            runs.append(report)
        assert runs[0] == runs[1]
    logger.info("✓ Reports identical apart from timing")


def main_tests() -> bool:
    setup_logging("INFO")
    tests = [
        test_run_config,
        test_config_manager,
        test_report_round_trip,
        test_cli_commands,
        test_exit_codes,
        test_suite_blocks,
        test_determinism,
    ]
    failed = 0
    for test in tests:
        try:
            test()
        except Exception as e:
            logger.error(f"✗ {test.__name__} failed: {e}")
            failed += 1
    logger.info(f"=== {len(tests) - failed}/{len(tests)} CLI tests passed ===")
    return failed == 0


if __name__ == "__main__":
    success = main_tests()
    sys.exit(0 if success else 1)
