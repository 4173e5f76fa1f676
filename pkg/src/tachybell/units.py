"""Parsing of unit-suffixed quantities from configuration documents.

Config values may be plain numbers (interpreted in SI base units: meters,
seconds, radians, kelvin) or strings with an explicit unit, e.g. "220 um",
"4 s", "90 deg".  Units are parsed, never assumed.
"""

from __future__ import annotations

import math
import re

from .errors import ConfigError

_UNIT_TABLES: dict[str, dict[str, float]] = {
    "length": {
        "m": 1.0,
        "km": 1e3,
        "cm": 1e-2,
        "mm": 1e-3,
        "um": 1e-6,
        "µm": 1e-6,
        "nm": 1e-9,
    },
    "time": {
        "s": 1.0,
        "ms": 1e-3,
        "us": 1e-6,
        "µs": 1e-6,
        "min": 60.0,
        "h": 3600.0,
        "day": 86400.0,
    },
    "angle": {
        "rad": 1.0,
        "mrad": 1e-3,
        "deg": math.pi / 180.0,
    },
    "temperature": {
        "K": 1.0,
        "mK": 1e-3,
        # Temperature differences only, so Celsius steps equal kelvin steps.
        "C": 1.0,
    },
}

_QUANTITY_RE = re.compile(r"^\s*([+-]?[\d.eE+-]+)\s*([^\s\d]*)\s*$")


def parse_quantity(value, dimension: str) -> float:
    """Convert a config value to SI base units for the given dimension."""
    if dimension == "dimensionless":
        if isinstance(value, (int, float)):
            return float(value)
        if isinstance(value, str):
            if value.strip().lower() in ("inf", "infinity"):
                return math.inf
            try:
                return float(value)
            except ValueError:
                raise ConfigError(f"expected a bare number, got {value!r}")
        raise ConfigError(f"expected a number, got {value!r}")

    table = _UNIT_TABLES.get(dimension)
    if table is None:
        raise ConfigError(f"unknown dimension {dimension!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if not isinstance(value, str):
        raise ConfigError(f"expected a number or quantity string, got {value!r}")
    match = _QUANTITY_RE.match(value)
    if not match:
        raise ConfigError(f"cannot parse quantity {value!r}")
    number, unit = match.groups()
    try:
        magnitude = float(number)
    except ValueError:
        raise ConfigError(f"cannot parse number in quantity {value!r}")
    if not unit:
        return magnitude
    if unit not in table:
        raise ConfigError(
            f"unknown {dimension} unit {unit!r} (known: {sorted(table)})"
        )
    return magnitude * table[unit]
