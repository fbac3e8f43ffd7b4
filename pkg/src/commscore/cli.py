"""Command-line pipeline: ingest → analyze → correlate → scorecard, plus synth.

Stages communicate through files (JSONL corpora, CSV tables, JSON reports) so
each is independently runnable and testable.  Fixed inputs plus fixed
configuration produce byte-identical outputs.

Exit codes: 0 success, 1 usage, 2 ingest failure, 3 analysis failure,
4 correlation/report failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
import warnings
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

from . import metrics as metrics_mod
from ._text import csv_line, fmt6
from .errors import (
    CohortTooSmall,
    CommscoreError,
    EmptyCorpusWarning,
    FormatError,
    MalformedRecord,
)
from .ingest import (
    EmailEvent,
    ParseIssue,
    Period,
    build_corpus,
    iso_utc,
    parse_events,
    parse_timestamp,
    serialize_events,
)
from .metrics import (
    METRIC_FIELDS,
    METRIC_LABELS,
    MetricConfig,
    MetricVector,
    load_lexicon,
)
from .satisfaction import (
    DEFAULT_ELIGIBILITY_MIN,
    group_by_team,
    load_survey,
    team_satisfaction,
)
from .scorecard import DEFAULT_ALERT_SIGMA, build_scorecards, render
from .stats import correlate_all, render_correlation_csv
from .synth import SynthSpec, planted_effects, write_outputs
from .tempograph import month_periods

DEFAULT_GENERATED_AT = "1970-01-01T00:00:00Z"

METRICS_CSV_HEADER = ("team_id",) + tuple(METRIC_LABELS[f] for f in METRIC_FIELDS)


@dataclass(frozen=True)
class RunConfig:
    """Effective settings for one pipeline invocation."""

    period: Period | None = None
    format: str = "csv"
    reply_cap: int = metrics_mod.DEFAULT_REPLY_CAP
    oscillation_window: str = "weekly"
    awvci_weighting: str = "edges"
    emotionality_mode: str = "cumulative"
    eligibility_min: int = DEFAULT_ELIGIBILITY_MIN
    alert_sigma: float = DEFAULT_ALERT_SIGMA
    strict: bool = False
    lexicon_path: Path | None = None
    generated_at: str = DEFAULT_GENERATED_AT

    def __post_init__(self) -> None:
        if self.reply_cap <= 0 or self.eligibility_min <= 0 or self.alert_sigma <= 0:
            raise ValueError("thresholds must be positive")

    def metric_config(self) -> MetricConfig:
        lexicon = None
        if self.lexicon_path is not None:
            with open(self.lexicon_path, encoding="utf-8") as fh:
                lexicon = load_lexicon(fh)
        return MetricConfig(
            oscillation_window=self.oscillation_window,
            reply_cap=self.reply_cap,
            awvci_weighting=self.awvci_weighting,
            emotionality_mode=self.emotionality_mode,
            lexicon=lexicon,
        )

    def as_dict(self) -> dict[str, object]:
        """Semantic configuration values (paths to inputs/outputs excluded)."""
        return {
            "period": None if self.period is None else
            {"start": iso_utc(self.period.start), "end": iso_utc(self.period.end)},
            "format": self.format,
            "reply_cap": self.reply_cap,
            "oscillation_window": self.oscillation_window,
            "awvci_weighting": self.awvci_weighting,
            "emotionality_mode": self.emotionality_mode,
            "eligibility_min": self.eligibility_min,
            "alert_sigma": self.alert_sigma,
            "strict": self.strict,
            "lexicon": "builtin" if self.lexicon_path is None else self.lexicon_path.name,
        }

    def fingerprint(self) -> str:
        blob = json.dumps(self.as_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:12]

    def config_payload(self) -> dict[str, object]:
        payload: dict[str, object] = {"fingerprint": self.fingerprint()}
        payload.update(self.as_dict())
        return payload


def parse_period(raw: str) -> Period:
    """``START..END`` with ISO dates (midnight UTC) or full instants, end exclusive."""
    parts = raw.split("..")
    if len(parts) != 2:
        raise ValueError(f"period must be START..END, got {raw!r}")
    bounds = []
    for part in parts:
        text = part.strip()
        if len(text) == 10:
            text += "T00:00:00Z"
        bounds.append(parse_timestamp(text))
    return Period(bounds[0], bounds[1])


# --------------------------------------------------------------------------
# stage implementations


def cmd_ingest(paths: Sequence[Path], config: RunConfig, out_dir: Path) -> int:
    assert config.period is not None
    all_events: list[EmailEvent] = []
    issues: list[ParseIssue] = []
    sources: list[dict[str, object]] = []
    for path in paths:
        team = path.stem if config.format in ("csv", "mbox") else ""
        try:
            with open(path, "rb") as fh:
                result = parse_events(fh, config.format, default_team=team,
                                      source_name=path.name, strict=config.strict)
        except OSError as exc:
            print(f"error: cannot read {path}: {exc}", file=sys.stderr)
            return 2
        all_events.extend(result.events)
        issues.extend(result.issues)
        sources.append({"path": path.name, "events": len(result.events),
                        "skipped": len(result.issues)})
    team_ids = sorted({ev.team_id for ev in all_events if ev.team_id})
    corpora_dir = out_dir / "corpora"
    corpora_dir.mkdir(parents=True, exist_ok=True)
    teams_report: dict[str, dict[str, object]] = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EmptyCorpusWarning)
        for team in team_ids:
            corpus = build_corpus(all_events, team, config.period)
            (corpora_dir / f"{team}.jsonl").write_bytes(
                serialize_events(corpus.events, "jsonl"))
            gaps = []
            for window in month_periods(config.period):
                if not any(ev.timestamp in window for ev in corpus.events):
                    gaps.append(window.start.strftime("%Y-%m"))
            teams_report[team] = {"events": len(corpus.events), "gap_months": gaps}
    manifest = {
        "format": config.format,
        "period": {"start": iso_utc(config.period.start),
                   "end": iso_utc(config.period.end)},
        "config": config.config_payload(),
        "sources": sources,
        "teams": teams_report,
        "issues": [{"source": i.source, "line": i.line, "message": i.message}
                   for i in issues],
    }
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    for team, report in teams_report.items():
        gaps = report["gap_months"]
        if gaps:
            print(f"{team}: {report['events']} events, "
                  f"months without e-mail: {', '.join(gaps)}")
        else:
            print(f"{team}: {report['events']} events")
    if issues:
        print(f"skipped {len(issues)} malformed record(s); see manifest.json")
    print(f"wrote {out_dir / 'manifest.json'}")
    return 0


def _read_archive_period(archive: Path) -> Period:
    manifest = json.loads((archive / "manifest.json").read_text(encoding="utf-8"))
    period = manifest["period"]
    return Period(parse_timestamp(period["start"]), parse_timestamp(period["end"]))


def cmd_analyze(archive: Path, config: RunConfig, out_dir: Path) -> int:
    try:
        period = _read_archive_period(archive)
    except (OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {archive} is not an ingest archive: {exc}", file=sys.stderr)
        return 3
    corpora = sorted((archive / "corpora").glob("*.jsonl"))
    metric_config = config.metric_config()
    vectors: list[MetricVector] = []
    analyzable = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EmptyCorpusWarning)
        for path in corpora:
            with open(path, "rb") as fh:
                result = parse_events(fh, "jsonl", default_team=path.stem,
                                      source_name=path.name, strict=True)
            corpus = build_corpus(result.events, path.stem, period)
            if corpus.events:
                analyzable += 1
            vectors.append(metrics_mod.compute_metric_vector(corpus, metric_config))
    if analyzable == 0:
        print("error: zero analyzable teams in archive", file=sys.stderr)
        return 3
    out_dir.mkdir(parents=True, exist_ok=True)
    lines = [csv_line(METRICS_CSV_HEADER)]
    for vec in sorted(vectors, key=lambda v: v.team_id):
        lines.append(csv_line((vec.team_id,) + tuple(
            fmt6(getattr(vec, f)) for f in METRIC_FIELDS)))
    effective = replace(config, period=period)
    (out_dir / "metrics.csv").write_bytes("".join(lines).encode("utf-8"))
    (out_dir / "analyze_config.json").write_text(
        json.dumps(effective.config_payload(), indent=2) + "\n", encoding="utf-8")
    print(f"analyzed {len(vectors)} team(s)")
    print(f"wrote {out_dir / 'metrics.csv'}")
    return 0


def read_metrics_csv(path: Path) -> list[MetricVector]:
    """Read a metrics CSV back into vectors (undefined cells stay None)."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader, ()))
        if header != METRICS_CSV_HEADER:
            raise FormatError(f"{path.name}: bad metrics header {header!r}")
        vectors = []
        for row in reader:
            if not row:
                continue
            if len(row) != len(METRICS_CSV_HEADER):
                raise MalformedRecord(
                    f"expected {len(METRICS_CSV_HEADER)} fields, got {len(row)}",
                    source=path.name, line=reader.line_num)
            values = {
                field: (None if cell == "" else float(cell))
                for field, cell in zip(METRIC_FIELDS, row[1:])
            }
            vectors.append(MetricVector(team_id=row[0], **values))
    return vectors


def cmd_correlate(metrics_path: Path, survey_path: Path, config: RunConfig,
                  out_dir: Path) -> int:
    try:
        vectors = read_metrics_csv(metrics_path)
        with open(survey_path, "rb") as fh:
            responses = load_survey(fh, source_name=survey_path.name)
    except (OSError, CommscoreError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    sats = [team_satisfaction(rows, team, config.eligibility_min)
            for team, rows in group_by_team(responses).items()]
    metric_teams = {v.team_id for v in vectors}
    eligible = [s for s in sats if s.eligible and s.team_id in metric_teams]
    if len(eligible) < 3:
        print(f"error: {len(eligible)} eligible team(s) with metrics; need ≥ 3",
              file=sys.stderr)
        return 4
    cells = correlate_all(vectors, sats)
    eligibility = {s.team_id: s.eligible for s in sats}
    try:
        cards = build_scorecards(vectors, alert_sigma=config.alert_sigma,
                                 eligibility=eligibility)
    except CohortTooSmall as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "correlation.csv").write_bytes(render_correlation_csv(cells))
    payload = config.config_payload()
    (out_dir / "scorecard.json").write_bytes(
        render(cards, "json", generated_at=config.generated_at, config=payload))
    (out_dir / "scorecard.html").write_bytes(
        render(cards, "html", generated_at=config.generated_at, config=payload))
    significant = [c for c in cells if c.significant]
    if significant:
        for cell in significant:
            print(f"significant: {METRIC_LABELS[cell.metric_name]} × {cell.target} "
                  f"r={cell.r:.3f} p={cell.p:.3f} n={cell.n}")
    else:
        print("no significant cells at the 0.05 level")
    print(f"wrote {out_dir / 'correlation.csv'}")
    print(f"wrote {out_dir / 'scorecard.json'}")
    print(f"wrote {out_dir / 'scorecard.html'}")
    return 0


def cmd_scorecard(metrics_path: Path, config: RunConfig, out_dir: Path,
                  render_format: str) -> int:
    try:
        vectors = read_metrics_csv(metrics_path)
        cards = build_scorecards(vectors, alert_sigma=config.alert_sigma)
        blob = render(cards, render_format, generated_at=config.generated_at,
                      config=config.config_payload())
    except (OSError, CommscoreError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    out_dir.mkdir(parents=True, exist_ok=True)
    target = out_dir / f"scorecard.{render_format}"
    target.write_bytes(blob)
    print(f"wrote {target}")
    return 0


def cmd_synth(spec: SynthSpec, out_dir: Path) -> int:
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = write_outputs(spec, out_dir)
    period = manifest["period"]
    print(f"wrote {spec.teams} team corpora under {out_dir / 'mail'}")
    print(f"wrote {out_dir / 'survey.csv'}")
    print(f"suggested --period {period['start'][:10]}..{period['end'][:10]}")  # type: ignore[index]
    return 0


# --------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="commscore",
        description="Communication score cards from team e-mail logs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="parse mail logs into a corpus archive")
    p_ingest.add_argument("paths", nargs="+", type=Path)
    p_ingest.add_argument("--format", choices=("csv", "jsonl", "mbox"), default="csv")
    p_ingest.add_argument("--period", required=True,
                          help="analysis interval START..END (end exclusive)")
    p_ingest.add_argument("--out", type=Path, required=True)
    p_ingest.add_argument("--strict", action="store_true",
                          help="abort on the first malformed record")

    p_analyze = sub.add_parser("analyze", help="compute per-team metric vectors")
    p_analyze.add_argument("archive", type=Path)
    p_analyze.add_argument("--out", type=Path, required=True)
    p_analyze.add_argument("--reply-cap", type=int,
                           default=metrics_mod.DEFAULT_REPLY_CAP,
                           help="max reply latency in seconds (default 7 days)")
    p_analyze.add_argument("--oscillation-window", choices=("weekly", "monthly"),
                           default="weekly")
    p_analyze.add_argument("--awvci-weighting", choices=("edges", "actors"),
                           default="edges")
    p_analyze.add_argument("--emotionality-mode", choices=("cumulative", "normalized"),
                           default="cumulative")
    p_analyze.add_argument("--lexicon", type=Path, default=None,
                           help="sentiment lexicon file (default: bundled)")

    p_corr = sub.add_parser("correlate",
                            help="correlate metrics with survey satisfaction")
    p_corr.add_argument("metrics_csv", type=Path)
    p_corr.add_argument("survey_csv", type=Path)
    p_corr.add_argument("--out", type=Path, required=True)
    p_corr.add_argument("--eligibility-min", type=int, default=DEFAULT_ELIGIBILITY_MIN,
                        help="respondents required (strictly more than this)")
    p_corr.add_argument("--alert-sigma", type=float, default=DEFAULT_ALERT_SIGMA)
    p_corr.add_argument("--generated-at", default=DEFAULT_GENERATED_AT,
                        help="UTC instant stamped into reports (fixed default "
                             "keeps reruns byte-identical)")

    p_card = sub.add_parser("scorecard", help="render score cards from a metrics CSV")
    p_card.add_argument("metrics_csv", type=Path)
    p_card.add_argument("--out", type=Path, required=True)
    p_card.add_argument("--format", choices=("json", "csv", "html"), default="json")
    p_card.add_argument("--alert-sigma", type=float, default=DEFAULT_ALERT_SIGMA)
    p_card.add_argument("--generated-at", default=DEFAULT_GENERATED_AT)

    p_synth = sub.add_parser("synth", help="generate a synthetic corpus + survey")
    p_synth.add_argument("--out", type=Path, required=True)
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--teams", type=int, default=13)
    p_synth.add_argument("--months", type=int, default=3)
    p_synth.add_argument("--actors", type=int, default=10)
    p_synth.add_argument("--respondents", type=int, default=25)
    p_synth.add_argument("--messages", type=int, default=70,
                         help="messages per team per month (before replies)")
    p_synth.add_argument("--effects", default="none",
                         help="'none', 'planted', inline JSON, or a JSON file path")
    return parser


def _parse_effects(raw: str) -> dict[str, float]:
    if raw == "none":
        return {}
    if raw == "planted":
        return planted_effects()
    if raw.lstrip().startswith("{"):
        return {str(k): float(v) for k, v in json.loads(raw).items()}
    blob = Path(raw).read_text(encoding="utf-8")
    return {str(k): float(v) for k, v in json.loads(blob).items()}


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        if args.command == "ingest":
            try:
                config = RunConfig(period=parse_period(args.period),
                                   format=args.format, strict=args.strict)
            except ValueError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return 1
            try:
                return cmd_ingest(args.paths, config, args.out)
            except (FormatError, MalformedRecord) as exc:
                print(f"error: {exc}", file=sys.stderr)
                return 2
        if args.command == "analyze":
            try:
                config = RunConfig(reply_cap=args.reply_cap,
                                   oscillation_window=args.oscillation_window,
                                   awvci_weighting=args.awvci_weighting,
                                   emotionality_mode=args.emotionality_mode,
                                   lexicon_path=args.lexicon)
            except ValueError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return 1
            try:
                return cmd_analyze(args.archive, config, args.out)
            except (CommscoreError, OSError, ValueError) as exc:
                print(f"error: {exc}", file=sys.stderr)
                return 3
        if args.command == "correlate":
            try:
                config = RunConfig(eligibility_min=args.eligibility_min,
                                   alert_sigma=args.alert_sigma,
                                   generated_at=args.generated_at)
            except ValueError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return 1
            return cmd_correlate(args.metrics_csv, args.survey_csv, config, args.out)
        if args.command == "scorecard":
            try:
                config = RunConfig(alert_sigma=args.alert_sigma,
                                   generated_at=args.generated_at)
            except ValueError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return 1
            return cmd_scorecard(args.metrics_csv, config, args.out, args.format)
        if args.command == "synth":
            try:
                spec = SynthSpec(teams=args.teams, months=args.months,
                                 actors=args.actors, respondents=args.respondents,
                                 messages_per_month=args.messages,
                                 effects=_parse_effects(args.effects), seed=args.seed)
            except (ValueError, json.JSONDecodeError, OSError) as exc:
                print(f"error: {exc}", file=sys.stderr)
                return 1
            return cmd_synth(spec, args.out)
    except KeyboardInterrupt:
        return 130
    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
