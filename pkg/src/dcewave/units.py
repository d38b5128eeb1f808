"""Parsing of suffixed SI quantities for the command line and config files.

A dimensional value must carry a unit suffix: ``1um``, ``9cm2``, ``10GHz``,
``6.2832e10rad/s``, ``1e-7c``, ``15ns``.  Frequencies in Hz are converted to
angular frequency (x 2 pi).  The bare literal ``0`` is accepted for any kind
because zero needs no unit.
"""

from __future__ import annotations

import math
import re

from .quantities import CODATA2018

__all__ = ["UnitError", "parse_quantity", "format_si", "SI_UNIT", "KINDS"]


class UnitError(ValueError):
    pass


_LENGTH = {"m": 1.0, "cm": 1e-2, "mm": 1e-3, "um": 1e-6, "µm": 1e-6, "nm": 1e-9, "km": 1e3}
_AREA = {"m2": 1.0, "cm2": 1e-4, "mm2": 1e-6, "um2": 1e-12, "µm2": 1e-12}
_FREQ_HZ = {"Hz": 1.0, "kHz": 1e3, "MHz": 1e6, "GHz": 1e9, "THz": 1e12}
_TIME = {"s": 1.0, "ms": 1e-3, "us": 1e-6, "µs": 1e-6, "ns": 1e-9, "ps": 1e-12}

SI_UNIT = {"length": "m", "area": "m2", "frequency": "rad/s", "speed": "m/s", "time": "s"}
KINDS = tuple(SI_UNIT)

_NUMBER = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_PATTERN = re.compile(rf"^\s*({_NUMBER})\s*([A-Za-zµ/0-9]*)\s*$")


def _factor(kind: str, unit: str) -> float:
    if kind == "length":
        table = _LENGTH
    elif kind == "area":
        table = _AREA
    elif kind == "time":
        table = _TIME
    elif kind == "frequency":
        if unit == "rad/s":
            return 1.0
        if unit in _FREQ_HZ:
            return 2.0 * math.pi * _FREQ_HZ[unit]
        table = {}
    elif kind == "speed":
        if unit == "m/s":
            return 1.0
        if unit == "c":
            return CODATA2018.c
        table = {}
    else:
        raise UnitError(f"unknown quantity kind {kind!r}")
    if unit not in table:
        raise UnitError(f"unit {unit!r} is not a valid {kind} unit")
    return table[unit]


def parse_quantity(text, kind: str) -> float:
    """Parse ``text`` as a ``kind`` quantity and return its SI value."""
    if isinstance(text, bool) or not isinstance(text, (str, int, float)):
        raise UnitError(f"cannot parse {text!r} as a {kind}")
    if not isinstance(text, str):
        if text == 0:
            return 0.0
        raise UnitError(f"{kind} value {text!r} needs a unit suffix (write it as a string)")
    match = _PATTERN.match(text)
    if not match:
        raise UnitError(f"cannot parse {text!r} as a {kind}")
    number, unit = match.groups()
    value = float(number)
    if not unit:
        if value == 0.0:
            return 0.0
        raise UnitError(f"{kind} value {text!r} has no unit suffix; expected e.g. {SI_UNIT[kind]!r}")
    if not math.isfinite(value):
        raise UnitError(f"{text!r} is not finite")
    factor = _factor(kind, unit)
    return value if factor == 1.0 else value * factor


def format_si(value: float, kind: str) -> str:
    """Shortest exact text for ``value`` in SI units; parses back identically."""
    return f"{float(value)!r}{SI_UNIT[kind]}"
