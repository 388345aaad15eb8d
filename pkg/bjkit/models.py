"""Pydantic models for bjkit results and reports."""

from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple

import yaml
from pydantic import BaseModel, Field, PlainSerializer, PlainValidator


def _to_complex(value: Any) -> complex:
    if isinstance(value, complex):
        return complex(value)
    if isinstance(value, (int, float)):
        return complex(float(value))
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        return complex(value.replace(" ", "").replace("i", "j"))
    raise ValueError(f"cannot interpret {value!r} as a complex number")


def _complex_pair(value: complex) -> List[float]:
    return [float(value.real), float(value.imag)]


# Serialized as [re, im] so YAML reports round-trip exactly
Complex = Annotated[complex, PlainValidator(_to_complex), PlainSerializer(_complex_pair, return_type=List[float])]

Verdict = Literal["Orthogonal", "NotOrthogonal", "Inconclusive"]


class NormReport(BaseModel):
    """Supremum norm of a function on a curve."""
    norm_value: float = Field(..., ge=0, description="Refined maximum of |f| on the curve")
    argmax_params: List[float] = Field(default_factory=list, description="Curve parameters attaining the maximum")
    grid_size: int = Field(..., description="Coarse grid size used")


class Cluster(BaseModel):
    """One connected component of a norming set."""
    kind: Literal["isolated", "arc", "whole_curve"] = Field(..., description="Cluster shape")
    t: float = Field(..., description="Representative parameter (refined maximum)")
    t_lo: float = Field(..., description="Lower end of the parameter range")
    t_hi: float = Field(..., description="Upper end of the parameter range (may wrap past 1)")
    value: float = Field(..., description="|f| at the representative")


class NormingSet(BaseModel):
    """Numerical norming set M_f."""
    clusters: List[Cluster] = Field(default_factory=list, description="Disjoint clusters")
    eps: float = Field(..., description="Relative tolerance used")
    norm_value: float = Field(..., description="Supremum norm")
    grid_size: int = Field(..., description="Grid size used")

    @property
    def whole_curve(self) -> bool:
        return len(self.clusters) == 1 and self.clusters[0].kind == "whole_curve"

    @property
    def representatives(self) -> List[float]:
        return [c.t for c in self.clusters]


class JGammaReport(BaseModel):
    """Outcome of the J(Gamma) membership test."""
    member: bool = Field(..., description="|f| constant on the curve within tolerance")
    zero_function: bool = Field(False, description="f vanishes identically on the curve")
    norm_value: float = Field(..., description="Maximum of |f|")
    min_value: float = Field(..., description="Minimum of |f|")
    spread: float = Field(..., description="(max - min) / max of |f|")
    tol: float = Field(..., description="Tolerance applied")


class PointClassification(BaseModel):
    """Smoothness and extremality of f as an element of the sup-norm algebra."""
    smoothness: Literal["Smooth", "NotSmooth"] = Field(..., description="Smooth iff M_f is a singleton")
    extreme_on_analytic_curve: Optional[bool] = Field(
        None, description="Unit norm and |f| constant on the curve; None when the curve is not analytic"
    )
    cluster_count: int = Field(..., description="Number of norming-set clusters")
    norm_value: float = Field(..., description="Supremum norm")


class ExclusionDisk(BaseModel):
    """Open lambda-disk on which |u + lambda v| < |u|."""
    center: Complex = Field(..., description="-u conj(v) / |v|^2")
    radius: float = Field(..., description="|u| / |v|")

    def contains(self, lam: complex) -> bool:
        return abs(lam - self.center) < self.radius


class ExclusionRegion(BaseModel):
    """Good region {lambda : |u + lambda v| >= |u|} of a single pair."""
    all_plane: bool = Field(..., description="Good region is the whole plane")
    disk: Optional[ExclusionDisk] = Field(None, description="Excluded disk when not the whole plane")


class CoveringResult(BaseModel):
    """Decision whether a finite family of pairs is an orthogonality covering set."""
    covering: bool = Field(..., description="Good regions cover the plane")
    witness: Optional[Complex] = Field(None, description="Point in every exclusion disk when not covering")
    min_phi: Optional[float] = Field(None, description="Minimum found of max_i(|lambda - c_i| - r_i); None when a pair excludes nothing")
    margin: float = Field(..., description="Certificate margin applied")
    iterations: int = Field(0, description="Descent iterations")
    pair_count: int = Field(..., description="Number of pairs")


class OrthoDecision(BaseModel):
    """Tri-state Birkhoff-James orthogonality verdict for f against g."""
    verdict: Verdict = Field(..., description="Decision")
    witness: Optional[Complex] = Field(None, description="lambda with ||f + lambda g|| < ||f||")
    achieved: Optional[float] = Field(None, description="||f + witness g||")
    min_value: float = Field(..., description="Smallest ||f + lambda g|| found")
    minimizer: Complex = Field(0j, description="lambda attaining min_value")
    base_norm: float = Field(..., description="||f||")
    iterations: int = Field(0, description="Descent iterations")
    discrete_Mf: bool = Field(False, description="Decided on a sampled norming set")
    method: Literal["minimize", "covering"] = Field("minimize", description="Decision path")


class WindingResult(BaseModel):
    """Argument-principle zero count."""
    count: int = Field(..., description="Zeros enclosed, with multiplicity")
    min_modulus_on_curve: float = Field(..., description="Minimum of |f| over the sampled curve")
    total_arg_variation: float = Field(..., description="Continuous argument change along the curve")
    grid_size: int = Field(..., description="Base grid size")
    bisections: int = Field(0, description="Extra points inserted by adaptive bisection")


class RoucheReport(BaseModel):
    """Rouche link between non-orthogonality and equal zero counts."""
    verdict: Verdict = Field(..., description="bj_minimize verdict for f against g")
    claim: bool = Field(..., description="False means NoClaim (f orthogonal to g or undecided)")
    pointwise_holds: Optional[bool] = Field(None, description="|f + lambda g| < |f| on the whole grid")
    count_f: Optional[int] = Field(None, description="Zeros of f enclosed")
    count_g: Optional[int] = Field(None, description="Zeros of g enclosed")
    consistent: bool = Field(..., description="Every asserted implication held")
    decision: OrthoDecision = Field(..., description="Underlying orthogonality decision")


class FTAReport(BaseModel):
    """Zero count of a polynomial on a circle beyond the coefficient bound."""
    degree: int = Field(..., description="Degree n")
    bound: float = Field(..., description="max(1, sum_{k<n}|a_k| / |a_n|)")
    radius: float = Field(..., description="Circle radius used (slack * bound)")
    witness_norm: float = Field(..., description="||z^n - Q/a_n|| on the circle")
    h_norm: float = Field(..., description="||z^n|| = r^n")
    witness_holds: bool = Field(..., description="witness_norm < h_norm")
    count: int = Field(..., description="Zeros enclosed")
    passed: bool = Field(..., description="Witness holds and count equals degree")


class DerivativeScenarioReport(BaseModel):
    """Check of the derivative non-orthogonality statement."""
    n: int = Field(..., description="Derivative order")
    lhs: float = Field(..., description="max over Gamma1 of |f + lambda0 g|")
    rhs: float = Field(..., description="r^n / n! * max over Gamma2 of |f^(n)|")
    hypothesis_holds: bool = Field(..., description="lhs < rhs")
    proof_witness_norm: Optional[float] = Field(None, description="||f^(n) + lambda0 g^(n)|| on Gamma2")
    derivative_norm: Optional[float] = Field(None, description="||f^(n)|| on Gamma2")
    decision: Optional[OrthoDecision] = Field(None, description="bj_minimize(f^(n), g^(n)) on Gamma2")
    counts: Optional[Tuple[int, int]] = Field(None, description="Zeros of f^(n), g^(n) in Gamma2 when f^(n) is in J(Gamma2)")
    passed: bool = Field(..., description="Every asserted conclusion held (vacuous when hypothesis fails)")


class MonomialGapReport(BaseModel):
    """inf over lambda of ||z^n + lambda Q|| against r^n for deg Q < n."""
    n: int = Field(..., description="Monomial degree")
    q_degree: int = Field(..., description="Degree of Q")
    radius: float = Field(..., description="Circle radius r")
    min_value: float = Field(..., description="Smallest ||z^n + lambda Q|| found")
    bound: float = Field(..., description="r^n")
    passed: bool = Field(..., description="min_value >= r^n (1 - 1e-6)")


class CheckResult(BaseModel):
    """Outcome of one verify-paper check."""
    label: str = Field(..., description="Statement being checked")
    block: str = Field(..., description="Block name used by --only")
    instances: int = Field(0, description="Instances examined")
    failures: List[str] = Field(default_factory=list, description="Descriptions of failing instances")
    elapsed: float = Field(0.0, description="Wall time in seconds")

    @property
    def passed(self) -> bool:
        return self.instances > 0 and not self.failures


class SuiteSummary(BaseModel):
    """Aggregate of a verify-paper run, in registration order."""
    checks: List[CheckResult] = Field(default_factory=list, description="Per-check results")
    elapsed: float = Field(0.0, description="Total wall time in seconds")

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)


class Report(BaseModel):
    """Serializable record of one command invocation."""
    command: str = Field(..., description="Command name")
    inputs: Dict[str, Any] = Field(default_factory=dict, description="Expression texts, curve literals, options")
    outputs: Dict[str, Any] = Field(default_factory=dict, description="Result objects")
    timing: float = Field(0.0, description="Wall time in seconds")
    config: Dict[str, Any] = Field(default_factory=dict, description="Configuration snapshot")

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.model_dump(mode="json"), sort_keys=False, allow_unicode=True)

    @classmethod
    def from_yaml(cls, text: str) -> "Report":
        """Parse a report from its YAML text."""
        return cls(**yaml.safe_load(text))
