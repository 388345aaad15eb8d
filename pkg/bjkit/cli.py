"""Command-line front end for bjkit."""

import argparse
import sys
import time
from typing import Any, Callable, Dict, List, Optional, Tuple

from .config import ConfigManager, RunConfig
from .curves import parse_curve
from .errors import BJKitError, ExprSyntaxError, PreconditionError, SuiteFailure
from .expr import Polynomial, parse, parse_complex
from .logging_setup import get_logger, setup_logging
from .models import CoveringResult
from .norms import classify_point, jgamma_report, norming_set, sup_norm
from .ortho import bj_minimize, covering_decide, decide_both, ortho_via_covering
from .report import build_report, landscape, landscape_csv, write_output
from .suite import CHECKS, render_summary, verify_paper
from .zeros import count_zeros, derivative_ortho_scenario, fta_verify

logger = get_logger(__name__)

DEFAULT_CURVE = "circle(0,1)"

Outputs = Dict[str, Any]
Inputs = Dict[str, Any]


def _parse_pair(text: str) -> Tuple[complex, complex]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ExprSyntaxError(f"a pair is 'u,v', got {text!r}")
    return parse_complex(parts[0]), parse_complex(parts[1])


# ---------------------------------------------------------------------------
# commands: each returns (inputs, outputs) for the report

def cmd_norm(args, cfg: RunConfig) -> Tuple[Inputs, Outputs]:
    f, curve = parse(args.f), parse_curve(args.curve)
    return {"f": args.f, "curve": curve.literal}, {"norm": sup_norm(f, curve, cfg)}


def cmd_norming_set(args, cfg: RunConfig) -> Tuple[Inputs, Outputs]:
    f, curve = parse(args.f), parse_curve(args.curve)
    ns = norming_set(f, curve, args.eps, cfg)
    return {"f": args.f, "curve": curve.literal, "eps": ns.eps}, {"norming_set": ns}


def cmd_jgamma(args, cfg: RunConfig) -> Tuple[Inputs, Outputs]:
    f, curve = parse(args.f), parse_curve(args.curve)
    report = jgamma_report(f, curve, args.tol, cfg)
    return {"f": args.f, "curve": curve.literal}, {"member": report.member, "jgamma": report}


def cmd_classify(args, cfg: RunConfig) -> Tuple[Inputs, Outputs]:
    f, curve = parse(args.f), parse_curve(args.curve)
    return {"f": args.f, "curve": curve.literal}, {"classification": classify_point(f, curve, cfg)}


def cmd_ortho(args, cfg: RunConfig) -> Tuple[Inputs, Outputs]:
    f, g, curve = parse(args.f), parse(args.g), parse_curve(args.curve)
    inputs = {"f": args.f, "g": args.g, "curve": curve.literal, "method": args.method}
    if args.method == "minimize":
        decision = bj_minimize(f, g, curve, cfg)
        return inputs, {"verdict": decision.verdict, "minimize": decision}
    if args.method == "covering":
        decision = ortho_via_covering(f, g, curve, cfg)
        return inputs, {"verdict": decision.verdict, "covering": decision}
    direct, covering, agree = decide_both(f, g, curve, cfg)
    return inputs, {"verdict": direct.verdict, "agree": agree, "minimize": direct, "covering": covering}


def cmd_covering(args, cfg: RunConfig) -> Tuple[Inputs, Outputs]:
    pairs = [_parse_pair(p) for p in args.pairs]
    result: CoveringResult = covering_decide(pairs, cfg)
    return {"pairs": pairs}, {"covering": result}


def cmd_zeros(args, cfg: RunConfig) -> Tuple[Inputs, Outputs]:
    f, curve = parse(args.f), parse_curve(args.curve)
    result = count_zeros(f, curve, args.N, cfg)
    return {"f": args.f, "curve": curve.literal, "N": result.grid_size}, {"count": result.count, "winding": result}


def cmd_fta(args, cfg: RunConfig) -> Tuple[Inputs, Outputs]:
    Q = Polynomial.from_expr(parse(args.f))
    report = fta_verify(Q, args.slack, cfg)
    return {"f": args.f, "slack": args.slack, "coefficients": list(Q.coeffs)}, {"fta": report}


def cmd_deriv_scenario(args, cfg: RunConfig) -> Tuple[Inputs, Outputs]:
    f, g = parse(args.f), parse(args.g)
    outer, inner = parse_curve(args.outer), parse_curve(args.inner)
    lam0 = parse_complex(args.lam0)
    report = derivative_ortho_scenario(f, g, args.n, outer, inner, lam0, args.r, cfg)
    inputs = {"f": args.f, "g": args.g, "n": args.n, "outer": outer.literal, "inner": inner.literal,
              "lam0": lam0, "r": args.r}
    return inputs, {"scenario": report}


COMMANDS: Dict[str, Callable[[argparse.Namespace, RunConfig], Tuple[Inputs, Outputs]]] = {
    "norm": cmd_norm,
    "norming-set": cmd_norming_set,
    "jgamma": cmd_jgamma,
    "classify": cmd_classify,
    "ortho": cmd_ortho,
    "covering": cmd_covering,
    "zeros": cmd_zeros,
    "fta": cmd_fta,
    "deriv-scenario": cmd_deriv_scenario,
}


def cmd_landscape(args, cfg: RunConfig) -> str:
    f, g, curve = parse(args.f), parse(args.g), parse_curve(args.curve)
    if args.resolution < 1:
        raise PreconditionError(f"resolution must be positive, got {args.resolution}")
    rows = landscape(f, g, curve, tuple(args.box), args.resolution, cfg)
    return landscape_csv(rows)


def cmd_verify_paper(args, cfg: RunConfig) -> Tuple[Inputs, Outputs]:
    summary = verify_paper(cfg, args.only)
    render_summary(summary)
    inputs = {"only": args.only or []}
    outputs = {"passed": summary.passed, "summary": summary}
    if not summary.passed:
        failed = [c.block for c in summary.checks if not c.passed]
        logger.error(f"verify-paper failed: {', '.join(failed)}")
    return inputs, outputs


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default="config.yaml", help="Run configuration YAML (defaults when absent)")
    common.add_argument("--seed", type=int, default=None, help="Override the corpus seed")
    common.add_argument("--out", default=None, help="Write the report here instead of stdout")
    common.add_argument("--log-level", default=None, help="Override the console log level")

    parser = argparse.ArgumentParser(prog="bjkit", description="Birkhoff-James orthogonality toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_curve(p: argparse.ArgumentParser) -> None:
        p.add_argument("--curve", default=DEFAULT_CURVE, help="circle(c,r) or ellipse(c,a,b)")

    p = sub.add_parser("norm", parents=[common], help="Supremum norm on a curve")
    p.add_argument("f")
    with_curve(p)

    p = sub.add_parser("norming-set", parents=[common], help="Norming set M_f")
    p.add_argument("f")
    p.add_argument("--eps", type=float, default=None)
    with_curve(p)

    p = sub.add_parser("jgamma", parents=[common], help="Is |f| constant on the curve")
    p.add_argument("f")
    p.add_argument("--tol", type=float, default=None)
    with_curve(p)

    p = sub.add_parser("classify", parents=[common], help="Smoothness and extremality")
    p.add_argument("f")
    with_curve(p)

    p = sub.add_parser("ortho", parents=[common], help="Decide f orthogonal to g")
    p.add_argument("f")
    p.add_argument("g")
    p.add_argument("--method", choices=["minimize", "covering", "both"], default="minimize")
    with_curve(p)

    p = sub.add_parser("covering", parents=[common], help="Is a family of pairs u,v a covering set")
    p.add_argument("pairs", nargs="+", metavar="U,V")

    p = sub.add_parser("zeros", parents=[common], help="Zeros enclosed by the curve")
    p.add_argument("f")
    p.add_argument("--N", type=int, default=None)
    with_curve(p)

    p = sub.add_parser("fta", parents=[common], help="Zero count beyond the coefficient bound")
    p.add_argument("f")
    p.add_argument("--slack", type=float, default=1.1)

    p = sub.add_parser("deriv-scenario", parents=[common], help="Derivative non-orthogonality statement")
    p.add_argument("f")
    p.add_argument("g")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--outer", required=True)
    p.add_argument("--inner", required=True)
    p.add_argument("--lam0", required=True)
    p.add_argument("--r", type=float, required=True)

    p = sub.add_parser("landscape", parents=[common], help="CSV of ||f + lambda g|| over a lambda box")
    p.add_argument("f")
    p.add_argument("g")
    p.add_argument("--box", type=float, nargs=4, default=[-1.0, 1.0, -1.0, 1.0],
                   metavar=("RE_LO", "RE_HI", "IM_LO", "IM_HI"))
    p.add_argument("--resolution", type=int, default=11)
    with_curve(p)

    p = sub.add_parser("verify-paper", parents=[common], help="Run the regression suite")
    p.add_argument("--only", action="append", choices=list(CHECKS), default=None, help="Run only this block")
    return parser


def run(args: argparse.Namespace) -> int:
    cfg = ConfigManager(args.config).override(seed=args.seed, log_level=args.log_level)
    setup_logging(cfg.log_level, cfg.log_file)
    logger.debug(f"bjkit {args.command} with config {cfg.model_dump()}")

    started = time.perf_counter()
    if args.command == "landscape":
        write_output(cmd_landscape(args, cfg), args.out)
        return 0
    handler = COMMANDS.get(args.command, cmd_verify_paper)
    inputs, outputs = handler(args, cfg)
    report = build_report(args.command, inputs, outputs, time.perf_counter() - started, cfg)
    write_output(report.to_yaml(), args.out)
    if args.command == "verify-paper" and not outputs["passed"]:
        raise SuiteFailure("verification suite reported failures")
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point; returns the process exit code."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # argparse usage errors exit 2, --help exits 0
        return int(e.code or 0)
    setup_logging(args.log_level or "INFO")
    try:
        return run(args)
    except BJKitError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except Exception:
        logger.exception("Unexpected error")
        return 1


if __name__ == "__main__":
    sys.exit(main())
