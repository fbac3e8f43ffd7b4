"""Cohort-relative score cards with expected-direction checks and alerts."""

from __future__ import annotations

import html
import json
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from ._text import csv_line, fmt3
from .errors import CohortTooSmall, UnsupportedFormat
from .metrics import METRIC_FIELDS, MetricVector

#: Expected correlation direction per metric (the score-card legend).
DIRECTIONS: dict[str, str] = {
    "avg_gbc": "+",
    "avg_gdc": "+",
    "avg_density": "+",
    "avg_new_actors": "-",
    "oscillation_sum": "-",
    "art_median": "-",
    "awvci": "+",
    "emotionality": "-",
}

#: Display names for the score-card rows, in fixed report order.
SCORECARD_LABELS: dict[str, str] = {
    "avg_gbc": "Group Betweenness Centrality",
    "avg_gdc": "Group Degree Centrality",
    "avg_density": "Group Density",
    "avg_new_actors": "Average new team members",
    "oscillation_sum": "Leadership Oscillation",
    "art_median": "ART (Median)",
    "awvci": "AWVCI (weighted by #actors)",
    "emotionality": "Emotionality",
}

DEFAULT_ALERT_SIGMA = 1.0


@dataclass(frozen=True)
class MetricScore:
    value: float | None
    z: float | None
    favorable: bool | None
    alert: bool | None


@dataclass(frozen=True)
class ScoreCard:
    team_id: str
    metrics: Mapping[str, MetricScore]
    survey_eligible: bool | None = None


def _cohort_stats(values: Sequence[float]) -> tuple[float, float]:
    n = len(values)
    mean = math.fsum(values) / n
    sigma = math.sqrt(math.fsum((v - mean) ** 2 for v in values) / n)
    return mean, sigma


def build_scorecard(team: MetricVector, cohort: Sequence[MetricVector],
                    *, alert_sigma: float = DEFAULT_ALERT_SIGMA,
                    survey_eligible: bool | None = None) -> ScoreCard:
    """Standardize one team's metrics against the cohort (population σ).

    z = 0 counts as favorable; an alert fires when z runs against the
    expected direction by more than ``alert_sigma``.  Metrics undefined for
    the team, or defined for fewer than two cohort members, stay unscored.
    """
    if len(cohort) < 2:
        raise CohortTooSmall(f"cohort of {len(cohort)} cannot be standardized")
    scores: dict[str, MetricScore] = {}
    for field in METRIC_FIELDS:
        value = team.value(field)
        cohort_values = [v for v in (m.value(field) for m in cohort) if v is not None]
        if value is None or len(cohort_values) < 2:
            scores[field] = MetricScore(value=value, z=None, favorable=None, alert=None)
            continue
        mean, sigma = _cohort_stats(cohort_values)
        z = 0.0 if sigma == 0 else (value - mean) / sigma
        direction = DIRECTIONS[field]
        favorable = z >= 0 if direction == "+" else z <= 0
        alert = (not favorable) and abs(z) > alert_sigma
        scores[field] = MetricScore(value=value, z=z, favorable=favorable, alert=alert)
    return ScoreCard(team_id=team.team_id, metrics=scores, survey_eligible=survey_eligible)


def build_scorecards(cohort: Sequence[MetricVector],
                     *, alert_sigma: float = DEFAULT_ALERT_SIGMA,
                     eligibility: Mapping[str, bool | None] | None = None) -> list[ScoreCard]:
    """Score every cohort member, sorted by team id."""
    eligibility = eligibility or {}
    return [
        build_scorecard(team, cohort, alert_sigma=alert_sigma,
                        survey_eligible=eligibility.get(team.team_id))
        for team in sorted(cohort, key=lambda m: m.team_id)
    ]


def _round3(value: float | None) -> float | None:
    return None if value is None else round(value, 3)


def render(scorecards: Sequence[ScoreCard], format: str = "json", *,
           generated_at: str, config: Mapping[str, object]) -> bytes:
    """Deterministic report bytes in json, csv, or html."""
    if not scorecards:
        raise CohortTooSmall("no scorecards to render")
    if format == "json":
        return _render_json(scorecards, generated_at, config)
    if format == "csv":
        return _render_csv(scorecards)
    if format == "html":
        return _render_html(scorecards, generated_at)
    raise UnsupportedFormat(f"unknown scorecard format: {format!r}")


def _card_payload(card: ScoreCard) -> dict:
    metrics = {}
    for field in METRIC_FIELDS:
        s = card.metrics[field]
        metrics[field] = {
            "value": _round3(s.value),
            "z": _round3(s.z),
            "favorable": s.favorable,
            "alert": s.alert,
        }
    return {
        "team_id": card.team_id,
        "survey_eligible": card.survey_eligible,
        "metrics": metrics,
    }


def _render_json(cards: Sequence[ScoreCard], generated_at: str,
                 config: Mapping[str, object]) -> bytes:
    payload = {
        "generated_at": generated_at,
        "config": dict(sorted(config.items())),
        "teams": [_card_payload(c) for c in cards],
    }
    return (json.dumps(payload, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def _bool_cell(flag: bool | None) -> str:
    return "" if flag is None else ("true" if flag else "false")


def _render_csv(cards: Sequence[ScoreCard]) -> bytes:
    lines = [csv_line(("team_id", "metric", "value", "z", "favorable", "alert"))]
    for card in cards:
        for field in METRIC_FIELDS:
            s = card.metrics[field]
            lines.append(csv_line((card.team_id, field, fmt3(s.value), fmt3(s.z),
                                   _bool_cell(s.favorable), _bool_cell(s.alert))))
    return "".join(lines).encode("utf-8")


_HTML_STYLE = (
    "body{font-family:sans-serif;margin:2em}"
    "table{border-collapse:collapse;margin:1em 0}"
    "td,th{border:1px solid #999;padding:4px 10px;text-align:left}"
    "tr.alert td{background:#fdd}"
    "caption{font-weight:bold;text-align:left;padding:4px 0}"
)


def _render_html(cards: Sequence[ScoreCard], generated_at: str) -> bytes:
    parts = [
        "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n",
        "<title>Communication score cards</title>\n",
        f"<style>{_HTML_STYLE}</style>\n</head>\n<body>\n",
        "<h1>Communication score cards</h1>\n",
        f"<p>Generated at {html.escape(generated_at)}</p>\n",
        "<table>\n<caption>Expected direction of correlation</caption>\n",
        "<tr><th>Social Network Metric</th><th>Direction</th></tr>\n",
    ]
    for field in METRIC_FIELDS:
        parts.append(
            f"<tr><td>{html.escape(SCORECARD_LABELS[field])}</td>"
            f"<td>{DIRECTIONS[field]}</td></tr>\n"
        )
    parts.append("</table>\n")
    for card in cards:
        caveat = ""
        if card.survey_eligible is False:
            caveat = " (survey ineligible)"
        parts.append(f"<h2>{html.escape(card.team_id)}{html.escape(caveat)}</h2>\n<table>\n")
        parts.append("<tr><th>Metric</th><th>Value</th><th>z</th>"
                     "<th>Favorable</th><th>Alert</th></tr>\n")
        for field in METRIC_FIELDS:
            s = card.metrics[field]
            row_class = ' class="alert"' if s.alert else ""
            parts.append(
                f"<tr{row_class}><td>{html.escape(SCORECARD_LABELS[field])}</td>"
                f"<td>{fmt3(s.value)}</td><td>{fmt3(s.z)}</td>"
                f"<td>{_bool_cell(s.favorable)}</td><td>{_bool_cell(s.alert)}</td></tr>\n"
            )
        parts.append("</table>\n")
    parts.append("</body>\n</html>\n")
    return "".join(parts).encode("utf-8")
