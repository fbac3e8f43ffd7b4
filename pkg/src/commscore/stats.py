"""Pearson correlation with two-tailed significance, and the 8×2 result grid."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from scipy.special import betainc

from ._text import csv_line
from .errors import DegenerateInput, DegenerateSeries, LengthMismatch
from .metrics import METRIC_FIELDS, METRIC_LABELS, MetricVector
from .satisfaction import TeamSatisfaction

ALPHA = 0.05

TARGETS = ("NPS", "KPD")


def _pearson_parts(x: Sequence[float], y: Sequence[float]) -> tuple[Fraction, Fraction, Fraction]:
    n = len(x)
    xs = [Fraction(v) for v in x]
    ys = [Fraction(v) for v in y]
    sx, sy = sum(xs), sum(ys)
    sxy = sum(a * b for a, b in zip(xs, ys))
    sxx = sum(a * a for a in xs)
    syy = sum(b * b for b in ys)
    cov = n * sxy - sx * sy
    varx = n * sxx - sx * sx
    vary = n * syy - sy * sy
    return cov, varx, vary


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Sample Pearson product-moment coefficient.

    Raises LengthMismatch for unequal lengths and DegenerateSeries for
    constant or too-short (< 3) input.
    """
    if len(x) != len(y):
        raise LengthMismatch(f"series lengths differ: {len(x)} vs {len(y)}")
    if len(x) < 3:
        raise DegenerateSeries(f"need at least 3 pairs, got {len(x)}")
    cov, varx, vary = _pearson_parts(x, y)
    if varx == 0 or vary == 0:
        raise DegenerateSeries("constant series has no correlation")
    if cov * cov == varx * vary:
        return 1.0 if cov > 0 else -1.0
    r = float(cov) / math.sqrt(float(varx) * float(vary))
    return max(-1.0, min(1.0, r))


def is_exact(x: Sequence[float], y: Sequence[float]) -> bool:
    """True when |r| = 1 holds in exact rational arithmetic."""
    cov, varx, vary = _pearson_parts(x, y)
    return varx != 0 and vary != 0 and cov * cov == varx * vary


def p_value_two_tailed(r: float, n: int) -> float:
    """p = 2·P(T_{n-2} ≥ |t|), t = r·√((n-2)/(1-r²)).

    Evaluated through the regularized incomplete beta function:
    p = I_{1-r²}((n-2)/2, 1/2).  |r| = 1 returns exactly 0.
    """
    if n < 3:
        raise DegenerateInput(f"p-value needs n ≥ 3, got {n}")
    if abs(r) > 1:
        raise DegenerateInput(f"|r| must not exceed 1, got {r}")
    if abs(r) == 1:
        return 0.0
    return float(betainc((n - 2) / 2.0, 0.5, 1.0 - r * r))


@dataclass(frozen=True)
class CorrelationResult:
    """One cell of the correlation grid; r/p are None when undefined."""

    metric_name: str
    target: str
    r: float | None
    p: float | None
    n: int
    significant: bool
    exact: bool = False


def correlate_all(vectors: Sequence[MetricVector], sats: Sequence[TeamSatisfaction],
                  *, alpha: float = ALPHA) -> list[CorrelationResult]:
    """The 8 metrics × {NPS, KPD} grid over eligible teams.

    Missing values are handled by pairwise deletion; cells with fewer than 3
    pairs or a constant series stay undefined instead of being dropped.
    """
    eligible: Mapping[str, TeamSatisfaction] = {
        s.team_id: s for s in sats if s.eligible
    }
    cells: list[CorrelationResult] = []
    for field in METRIC_FIELDS:
        for target in TARGETS:
            xs: list[float] = []
            ys: list[float] = []
            for vec in vectors:
                sat = eligible.get(vec.team_id)
                value = vec.value(field)
                if sat is None or value is None:
                    continue
                xs.append(value)
                ys.append(float(sat.nps if target == "NPS" else sat.kpd))
            try:
                r = pearson(xs, ys)
            except (DegenerateSeries, LengthMismatch):
                cells.append(CorrelationResult(field, target, None, None,
                                               len(xs), False))
                continue
            exact = is_exact(xs, ys)
            p = 0.0 if exact else p_value_two_tailed(r, len(xs))
            cells.append(CorrelationResult(field, target, r, p, len(xs),
                                           p < alpha, exact))
    return cells


def render_correlation_csv(cells: Sequence[CorrelationResult]) -> bytes:
    """CSV mirroring the report table: metric columns, per-target row groups.

    Each target contributes a group-header row followed by
    Pearson / Sig. (2-tailed) / N sub-rows; significant Pearson cells carry a
    trailing ``*``.  Undefined cells are empty.
    """
    by_cell = {(c.metric_name, c.target): c for c in cells}
    lines = [csv_line(("target",) + tuple(METRIC_LABELS[f] for f in METRIC_FIELDS))]
    for target in TARGETS:
        row_cells = [by_cell.get((f, target)) for f in METRIC_FIELDS]
        lines.append(csv_line((target,) + ("",) * len(METRIC_FIELDS)))
        pearson_row = []
        sig_row = []
        n_row = []
        for cell in row_cells:
            if cell is None or cell.r is None:
                pearson_row.append("")
                sig_row.append("")
                n_row.append(str(cell.n) if cell else "")
                continue
            star = "*" if cell.significant else ""
            pearson_row.append(f"{cell.r:.3f}{star}")
            sig_row.append(f"{cell.p:.3f}")
            n_row.append(str(cell.n))
        lines.append(csv_line(("Pearson",) + tuple(pearson_row)))
        lines.append(csv_line(("Sig. (2-tailed)",) + tuple(sig_row)))
        lines.append(csv_line(("N",) + tuple(n_row)))
    return "".join(lines).encode("utf-8")
