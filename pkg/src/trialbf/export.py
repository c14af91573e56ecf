"""Shared helpers for machine-readable exports."""

from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path

from trialbf.effects import LogEffect, summary_to_record

SCHEMA_VERSION = 1


def fmt(x) -> str:
    """Full-precision text for a CSV cell; absent / NaN values become empty."""
    if x is None:
        return ""
    if isinstance(x, float):
        if math.isnan(x):
            return ""
        return repr(x)
    return str(x)


def jsonable(x):
    """Recursively replace NaN with None and numpy scalars with Python ones."""
    if isinstance(x, dict):
        return {k: jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "tolist"):
        return jsonable(x.tolist())
    if isinstance(x, float) and not math.isfinite(x):
        return None if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return x


def dumps(doc: dict) -> str:
    return json.dumps(jsonable(doc), indent=2, allow_nan=False) + "\n"


def effect_provenance(effect: LogEffect) -> dict:
    doc = {
        "label": effect.label,
        "theta_hat": effect.theta_hat,
        "sigma": effect.sigma,
        "se_source": effect.se_source.value,
        "benefit_sign": effect.benefit_sign.value,
    }
    if effect.summary is not None:
        doc["summary"] = summary_to_record(effect.summary)
    return doc


def atomic_write_text(path: str | Path, text: str) -> None:
    """Write via a temporary file in the same directory, then rename into place."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise
