"""Simple closed curves, sampling, periodic trapezoid quadrature and curve distance."""

import math
import re
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np
from scipy.optimize import minimize

from .errors import CurveSyntaxError, ExprSyntaxError, PreconditionError
from .expr import format_complex, parse_complex
from .logging_setup import get_logger

logger = get_logger(__name__)

TWO_PI = 2.0 * math.pi


class Curve:
    """Periodic regular parametrization gamma: [0, 1) -> C."""

    # circles and ellipses are real-analytic, which the norming-set dichotomy relies on
    is_analytic: bool = True

    def point(self, t):
        raise NotImplementedError

    def tangent(self, t):
        raise NotImplementedError

    @property
    def literal(self) -> str:
        raise NotImplementedError

    def sample(self, N: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Uniform grid t_k = k/N with points and tangents."""
        if N < 1:
            raise PreconditionError(f"sample size must be positive, got {N}")
        t = np.arange(N) / N
        return t, self.point(t), self.tangent(t)

    def __str__(self) -> str:
        return self.literal


@dataclass(frozen=True)
class Circle(Curve):
    center: complex
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise PreconditionError(f"circle radius must be positive, got {self.radius}")

    def point(self, t):
        return self.center + self.radius * np.exp(1j * TWO_PI * np.asarray(t, dtype=float))

    def tangent(self, t):
        return 1j * TWO_PI * self.radius * np.exp(1j * TWO_PI * np.asarray(t, dtype=float))

    @property
    def literal(self) -> str:
        return f"circle({format_complex(self.center, bare=True)},{self.radius!r})"


@dataclass(frozen=True)
class Ellipse(Curve):
    center: complex
    semi_a: float
    semi_b: float

    def __post_init__(self):
        if not (self.semi_a > 0 and self.semi_b > 0):
            raise PreconditionError(f"ellipse semi-axes must be positive, got {self.semi_a}, {self.semi_b}")

    def point(self, t):
        theta = TWO_PI * np.asarray(t, dtype=float)
        return self.center + self.semi_a * np.cos(theta) + 1j * self.semi_b * np.sin(theta)

    def tangent(self, t):
        theta = TWO_PI * np.asarray(t, dtype=float)
        return TWO_PI * (-self.semi_a * np.sin(theta) + 1j * self.semi_b * np.cos(theta))

    @property
    def literal(self) -> str:
        return f"ellipse({format_complex(self.center, bare=True)},{self.semi_a!r},{self.semi_b!r})"


_CURVE_RE = re.compile(r"^\s*(?P<kind>circle|ellipse)\s*\((?P<args>[^()]*)\)\s*$", re.IGNORECASE)


def parse_curve(text: str) -> Curve:
    """Parse ``circle(c,r)`` or ``ellipse(c,a,b)``."""
    m = _CURVE_RE.match(text)
    if not m:
        raise CurveSyntaxError(f"not a curve literal: {text!r}")
    kind = m.group("kind").lower()
    try:
        args = [parse_complex(part) for part in m.group("args").split(",")]
    except ExprSyntaxError as e:
        raise CurveSyntaxError(f"bad curve argument in {text!r}: {e}") from e

    expected = 2 if kind == "circle" else 3
    if len(args) != expected:
        raise CurveSyntaxError(f"{kind} takes {expected} arguments, got {len(args)}")
    if any(a.imag != 0 for a in args[1:]):
        raise CurveSyntaxError(f"{kind} radii must be real in {text!r}")
    try:
        if kind == "circle":
            return Circle(args[0], args[1].real)
        return Ellipse(args[0], args[1].real, args[2].real)
    except PreconditionError as e:
        raise CurveSyntaxError(str(e)) from e


def sample(curve: Curve, N: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Parameters, points and tangents on the uniform N-grid."""
    return curve.sample(N)


def contour_integral(F: Callable[[np.ndarray], np.ndarray], curve: Curve, N: int) -> complex:
    """Periodic trapezoid rule (1/N) sum F(gamma(t_k)) gamma'(t_k)."""
    _, z, dz = curve.sample(N)
    terms = np.asarray(F(z), dtype=complex) * dz
    return complex(math.fsum(terms.real.tolist()), math.fsum(terms.imag.tolist())) / N


def curve_distance(first: Curve, second: Curve, N: int = 512) -> float:
    """Distance between two curves: dense N x N scan refined by local descent."""
    s, z1, _ = first.sample(N)
    t, z2, _ = second.sample(N)

    best = math.inf
    best_pair = (0.0, 0.0)
    chunk = max(1, 2 ** 20 // N)
    for start in range(0, N, chunk):
        block = np.abs(z1[start:start + chunk, None] - z2[None, :])
        k = int(np.argmin(block))
        i, j = divmod(k, N)
        if block[i, j] < best:
            best = float(block[i, j])
            best_pair = (s[start + i], t[j])

    def objective(x: np.ndarray):
        a = first.point(x[0])
        b = second.point(x[1])
        diff = a - b
        value = float(abs(diff) ** 2)
        grad = np.array([
            2.0 * float(np.real(np.conj(diff) * first.tangent(x[0]))),
            -2.0 * float(np.real(np.conj(diff) * second.tangent(x[1]))),
        ])
        return value, grad

    result = minimize(objective, np.array(best_pair), jac=True, method="BFGS", options={"gtol": 1e-14})
    refined = math.sqrt(max(float(result.fun), 0.0))
    logger.debug(f"curve_distance grid={best:.12g} refined={refined:.12g} ({result.nit} iterations)")
    return min(best, refined)
