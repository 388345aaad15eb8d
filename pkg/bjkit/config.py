"""Configuration management for bjkit."""

import math
from pathlib import Path
from typing import Any, Optional, Tuple

import yaml
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from .errors import ConfigError
from .logging_setup import get_logger

logger = get_logger(__name__)


class RunConfig(BaseModel):
    """Numerical run configuration."""
    grid_N: int = Field(4096, ge=8, description="Coarse grid size for sup-norm scans")
    refine_iters: int = Field(60, ge=1, description="Golden-section iterations around each grid maximum")
    norming_eps: float = Field(1e-6, gt=0, le=1e-2, description="Relative tolerance defining norming sets")
    jgamma_tol: float = Field(1e-8, gt=0, description="Relative modulus spread tolerance for J(Gamma) membership")
    ortho_margins: Tuple[float, float] = Field(
        (1e-7, 1e-4), description="(orthogonal, not-orthogonal) relative verdict margins"
    )
    quad_N: int = Field(4096, ge=8, description="Trapezoid nodes for contour integrals and winding")
    seed: int = Field(42, description="Seed for corpus generation")
    distance_N: int = Field(512, ge=8, description="Per-curve samples for the dense curve distance scan")
    descent_iters: int = Field(1000, ge=1, description="Iteration cap for the min-max descent over lambda")
    covering_iters: int = Field(500, ge=1, description="Iteration cap for the disk-intersection descent")
    argument_gap: float = Field(2 * math.pi / 64, gt=0, description="Maximal angular gap for the argument test")
    workers: int = Field(4, ge=1, description="Worker threads for verify-paper")
    log_level: str = Field("INFO", description="Console log level")
    log_file: Optional[str] = Field(None, description="Optional log file path")

    @field_validator("ortho_margins")
    @classmethod
    def _positive_margins(cls, value: Tuple[float, float]) -> Tuple[float, float]:
        if min(value) <= 0:
            raise ValueError("ortho margins must be positive")
        return value

    @model_validator(mode="after")
    def _ordered_margins(self) -> "RunConfig":
        orthogonal, not_orthogonal = self.ortho_margins
        if orthogonal >= not_orthogonal:
            raise ValueError("orthogonal margin must be smaller than the not-orthogonal margin")
        return self


class ConfigManager:
    """Loads and saves the run configuration."""

    def __init__(self, config_path: str = "config.yaml"):
        self.config_path = Path(config_path)
        self.config = self._load_config()

    def _load_config(self) -> RunConfig:
        """Load configuration from file, or defaults when the file is absent."""
        if not self.config_path.exists():
            logger.debug(f"No config at {self.config_path}, using defaults")
            return RunConfig()

        try:
            with open(self.config_path, 'r', encoding='utf-8') as f:
                data = yaml.safe_load(f) or {}
            return RunConfig(**data)
        except (yaml.YAMLError, ValidationError, TypeError) as e:
            raise ConfigError(f"Invalid configuration {self.config_path}: {e}") from e

    def save(self, path: Optional[str] = None) -> None:
        """Save configuration to file."""
        target = Path(path) if path else self.config_path
        with open(target, 'w', encoding='utf-8') as f:
            yaml.dump(self.config.model_dump(mode="json"), f, default_flow_style=False, sort_keys=False)

    def override(self, **changes: Any) -> RunConfig:
        """Return a validated copy with the non-None changes applied."""
        data = self.config.model_dump()
        data.update({k: v for k, v in changes.items() if v is not None})
        try:
            self.config = RunConfig(**data)
        except ValidationError as e:
            raise ConfigError(f"Invalid configuration override: {e}") from e
        return self.config
