"""Resource limits, backend selection, and the optional config file.

All limits are overridable per call.  Process-wide defaults come from,
in order of precedence, the environment, then an optional JSON config
file named by JOINLAT_CONFIG, then the builtins (CLI flags beat all of
these):

  JOINLAT_MAX_ORDER  largest group order build() will accept (default 1000)
  JOINLAT_BACKEND    "numba" or "numpy" kernel backend (default: numba if
                     importable, else numpy)
  JOINLAT_CONFIG     path to a JSON file; recognized keys: "max_order",
                     "backend"
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

DEFAULT_MAX_ORDER = 1000
DEFAULT_MAX_SUBGROUPS = 20000
# Coarse cap on closure work during subgroup enumeration, measured in
# multiplication-table lookups.  Backstop against pathological lattices.
DEFAULT_MAX_WORK = 4_000_000_000
DEFAULT_ISO_BUDGET = 10_000_000


class ResourceLimitError(RuntimeError):
    """An enumeration or search exceeded its configured budget."""


class SpecError(ValueError):
    """A group spec string is malformed or violates a constructor constraint."""


def file_config() -> dict:
    path = os.environ.get("JOINLAT_CONFIG", "").strip()
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, ValueError) as exc:
        raise SpecError(f"cannot read config file {path!r}: {exc}") from exc
    if not isinstance(data, dict):
        raise SpecError(f"config file {path!r} must hold a JSON object")
    return data


def max_order() -> int:
    raw = os.environ.get("JOINLAT_MAX_ORDER", "")
    if raw.strip():
        try:
            value = int(raw)
        except ValueError as exc:
            raise SpecError(f"JOINLAT_MAX_ORDER={raw!r} is not an integer") from exc
        if value < 1:
            raise SpecError("JOINLAT_MAX_ORDER must be >= 1")
        return value
    configured = file_config().get("max_order")
    if configured is not None:
        return int(configured)
    return DEFAULT_MAX_ORDER


def backend_name() -> str:
    raw = os.environ.get("JOINLAT_BACKEND", "").strip().lower()
    if not raw:
        raw = str(file_config().get("backend", "")).strip().lower()
    if raw in ("numba", "numpy"):
        return raw
    if raw:
        raise SpecError(f"JOINLAT_BACKEND={raw!r}; expected 'numba' or 'numpy'")
    return "auto"


@dataclass(frozen=True)
class Limits:
    max_subgroups: int = DEFAULT_MAX_SUBGROUPS
    max_work: int = DEFAULT_MAX_WORK
    iso_budget: int = DEFAULT_ISO_BUDGET


DEFAULT_LIMITS = Limits()
