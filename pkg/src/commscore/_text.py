"""Small deterministic text-formatting helpers used by the file writers."""

from __future__ import annotations

from fractions import Fraction

_QUOTE_TRIGGERS = (",", ";", '"', "\n", "\r")


def csv_field(value: str) -> str:
    if any(ch in value for ch in _QUOTE_TRIGGERS):
        return '"' + value.replace('"', '""') + '"'
    return value


def csv_line(fields: list[str] | tuple[str, ...]) -> str:
    return ",".join(csv_field(f) for f in fields) + "\n"


def fmt6(value: float | Fraction | int | None) -> str:
    """Six-decimal cell; undefined values render as the empty field."""
    if value is None:
        return ""
    return f"{float(value):.6f}"


def fmt3(value: float | Fraction | int | None) -> str:
    if value is None:
        return ""
    return f"{float(value):.3f}"
