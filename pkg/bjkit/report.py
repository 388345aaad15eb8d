"""Report assembly, lambda landscapes and output files."""

import csv
import io
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel

from .config import RunConfig
from .curves import Curve
from .expr import HoloExpr
from .logging_setup import get_logger
from .models import Report
from .ortho import pencil_norm

logger = get_logger(__name__)

LANDSCAPE_HEADER = ("re_lambda", "im_lambda", "value")

Box = Tuple[float, float, float, float]


def _plain(value: Any) -> Any:
    if isinstance(value, BaseModel):
        return value.model_dump(mode="json")
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    return value


def build_report(command: str, inputs: Dict[str, Any], outputs: Dict[str, Any],
                 timing: float, cfg: RunConfig) -> Report:
    """Report with outputs flattened to plain data, so YAML round trips compare equal."""
    return Report(
        command=command,
        inputs=_plain(inputs),
        outputs=_plain(outputs),
        timing=timing,
        config=cfg.model_dump(mode="json"),
    )


def landscape(f: HoloExpr, g: HoloExpr, curve: Curve, box: Box, resolution: int,
              cfg: Optional[RunConfig] = None) -> List[Tuple[float, float, float]]:
    """||f + lambda g|| on a resolution x resolution grid over box = (re_lo, re_hi, im_lo, im_hi).

    Resolution 1 evaluates the box center only.
    """
    cfg = cfg if cfg is not None else RunConfig()
    re_lo, re_hi, im_lo, im_hi = box
    if resolution == 1:
        re_axis = np.array([0.5 * (re_lo + re_hi)])
        im_axis = np.array([0.5 * (im_lo + im_hi)])
    else:
        re_axis = np.linspace(re_lo, re_hi, resolution)
        im_axis = np.linspace(im_lo, im_hi, resolution)

    rows = []
    for im in im_axis:
        for re in re_axis:
            value = pencil_norm(f, g, complex(re, im), curve, cfg)
            rows.append((float(re), float(im), float(value)))
    logger.debug(f"landscape: {len(rows)} points over {box}")
    return rows


def landscape_csv(rows: List[Tuple[float, float, float]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(LANDSCAPE_HEADER)
    for re, im, value in rows:
        writer.writerow([repr(re), repr(im), repr(value)])
    return buffer.getvalue()


def write_output(text: str, out: Optional[str]) -> None:
    """Write to ``out`` (parents created) or to stdout."""
    if out is None:
        print(text, end="" if text.endswith("\n") else "\n")
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info(f"Wrote {path}")
