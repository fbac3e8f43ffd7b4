"""Parse e-mail logs into normalized, deduplicated, time-sorted per-team event streams.

Three wire formats are supported:

* CSV with header ``timestamp,from,to,cc,subject`` where ``to``/``cc`` are
  ``;``-separated address lists,
* JSONL with one object per line carrying
  ``timestamp,from,to,cc,subject,team_id`` (``to``/``cc`` arrays),
* classic ``From ``-delimited mbox, of which only the ``From``/``To``/``Cc``/
  ``Subject``/``Date`` headers are consumed.

Timestamps must carry an explicit UTC offset and are stored in UTC at second
resolution.  Addresses are lowercased with display names stripped.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import re
import warnings
from dataclasses import dataclass, field
from datetime import datetime, timezone
from email import message_from_bytes, policy
from email.utils import getaddresses, parsedate_to_datetime
from typing import BinaryIO, Iterable

from ._text import csv_line
from .errors import (
    EmptyCorpusWarning,
    FormatError,
    MalformedAddress,
    MalformedRecord,
    UnsupportedFormat,
)

#: Actor identity: a normalized lowercase e-mail address string.
ActorId = str

FORMATS = ("csv", "jsonl", "mbox")

CSV_HEADER = ("timestamp", "from", "to", "cc", "subject")

_ADDR_RE = re.compile(r"^[^@\s<>,;]+@[^@\s<>,;]+$")
_ANGLE_RE = re.compile(r"<([^<>]*)>")


def normalize_address(raw: str) -> ActorId:
    """Normalize one address to its lowercase ``local@domain`` form.

    Display names and angle brackets are stripped, surrounding whitespace and
    quotes removed, and the whole address lowercased.  Plus-addressing is
    deliberately not folded.

    Raises
    ------
    MalformedAddress
        If no ``local@domain`` token can be extracted.
    """
    candidate = raw.strip()
    angles = _ANGLE_RE.findall(candidate)
    if angles:
        candidate = angles[-1].strip()
    candidate = candidate.strip("'\" \t").lower()
    if not _ADDR_RE.match(candidate):
        raise MalformedAddress(f"not a local@domain address: {raw!r}")
    return candidate


def parse_timestamp(raw: str) -> datetime:
    """Parse an ISO-8601 instant with explicit offset into UTC, second resolution."""
    text = raw.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    try:
        stamp = datetime.fromisoformat(text)
    except ValueError as exc:
        raise ValueError(f"bad timestamp {raw!r}: {exc}") from None
    if stamp.tzinfo is None:
        raise ValueError(f"timestamp {raw!r} has no UTC offset")
    return stamp.astimezone(timezone.utc).replace(microsecond=0)


def iso_utc(stamp: datetime) -> str:
    return stamp.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass(frozen=True, slots=True)
class EmailEvent:
    """One logged message, fully normalized.

    ``to`` and ``cc`` are ordered and, taken together, duplicate-free.
    ``event_id`` is a stable digest of the event content.
    """

    event_id: str
    timestamp: datetime
    sender: ActorId
    to: tuple[ActorId, ...]
    cc: tuple[ActorId, ...]
    subject: str
    team_id: str

    def __post_init__(self) -> None:
        if not self.sender:
            raise ValueError("sender must be nonempty")
        if not self.to:
            raise ValueError("to must contain at least one recipient")
        combined = self.to + self.cc
        if len(set(combined)) != len(combined):
            raise ValueError("to ∪ cc contains duplicates")
        if self.timestamp.tzinfo is None:
            raise ValueError("timestamp must be timezone-aware")

    @property
    def recipients(self) -> tuple[ActorId, ...]:
        """All recipients (to then cc), duplicate-free by construction."""
        return self.to + self.cc


def _event_digest(timestamp: datetime, sender: str, to: tuple[str, ...],
                  cc: tuple[str, ...], subject: str, team_id: str) -> str:
    payload = "\x1f".join(
        (iso_utc(timestamp), sender, ",".join(to), ",".join(cc), subject, team_id)
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


def make_event(timestamp: datetime, sender: str, to: Iterable[str],
               cc: Iterable[str] = (), subject: str = "", team_id: str = "") -> EmailEvent:
    """Build an :class:`EmailEvent` from raw strings, normalizing as it goes.

    Recipient lists are normalized and deduplicated while preserving order;
    addresses already present in ``to`` are dropped from ``cc``.
    """
    sender_n = normalize_address(sender)
    seen: set[str] = set()
    to_n: list[str] = []
    for addr in to:
        norm = normalize_address(addr)
        if norm not in seen:
            seen.add(norm)
            to_n.append(norm)
    cc_n: list[str] = []
    for addr in cc:
        norm = normalize_address(addr)
        if norm not in seen:
            seen.add(norm)
            cc_n.append(norm)
    if not to_n:
        raise MalformedAddress("empty to list after normalization")
    stamp = timestamp.astimezone(timezone.utc).replace(microsecond=0)
    return EmailEvent(
        event_id=_event_digest(stamp, sender_n, tuple(to_n), tuple(cc_n), subject, team_id),
        timestamp=stamp,
        sender=sender_n,
        to=tuple(to_n),
        cc=tuple(cc_n),
        subject=subject,
        team_id=team_id,
    )


@dataclass(frozen=True, slots=True)
class ParseIssue:
    """One malformed record, reported rather than silently dropped."""

    source: str
    line: int
    message: str


@dataclass(slots=True)
class ParseResult:
    events: list[EmailEvent]
    issues: list[ParseIssue] = field(default_factory=list)


def parse_events(source: BinaryIO, format: str, *, default_team: str = "",
                 source_name: str = "<stream>", strict: bool = False) -> ParseResult:
    """Parse a byte stream of the given format into events.

    In lenient mode (default) malformed records are skipped and reported in
    ``ParseResult.issues`` with their line numbers; in strict mode the first
    malformed record raises :class:`MalformedRecord`.

    Raises
    ------
    UnsupportedFormat
        For a format name outside ``csv``/``jsonl``/``mbox``.
    FormatError
        When the stream framing itself is unparseable.
    """
    if format == "csv":
        return _parse_csv(source, default_team, source_name, strict)
    if format == "jsonl":
        return _parse_jsonl(source, default_team, source_name, strict)
    if format == "mbox":
        return _parse_mbox(source, default_team, source_name, strict)
    raise UnsupportedFormat(f"unknown mail format: {format!r}")


def _issue(result: ParseResult, strict: bool, source: str, line: int, message: str) -> None:
    if strict:
        raise MalformedRecord(message, source=source, line=line)
    result.issues.append(ParseIssue(source=source, line=line, message=message))


def _split_list(raw: str) -> list[str]:
    return [part for part in (p.strip() for p in raw.split(";")) if part]


def _parse_csv(source: BinaryIO, default_team: str, name: str, strict: bool) -> ParseResult:
    text = io.TextIOWrapper(source, encoding="utf-8-sig", newline="")
    reader = csv.reader(text)
    try:
        header = next(reader)
    except StopIteration:
        raise FormatError(f"{name}: empty CSV (header row required)") from None
    except csv.Error as exc:
        raise FormatError(f"{name}: {exc}") from None
    if tuple(h.strip() for h in header) != CSV_HEADER:
        raise FormatError(f"{name}: bad CSV header {header!r}")
    result = ParseResult(events=[])
    while True:
        try:
            row = next(reader)
        except StopIteration:
            break
        except csv.Error as exc:
            raise FormatError(f"{name}: line {reader.line_num}: {exc}") from None
        line = reader.line_num
        if not row:
            continue
        if len(row) != 5:
            _issue(result, strict, name, line, f"expected 5 fields, got {len(row)}")
            continue
        raw_ts, raw_from, raw_to, raw_cc, subject = row
        try:
            stamp = parse_timestamp(raw_ts)
            event = make_event(stamp, raw_from, _split_list(raw_to),
                               _split_list(raw_cc), subject, default_team)
        except (ValueError, MalformedAddress) as exc:
            _issue(result, strict, name, line, str(exc))
            continue
        result.events.append(event)
    return result


def _parse_jsonl(source: BinaryIO, default_team: str, name: str, strict: bool) -> ParseResult:
    result = ParseResult(events=[])
    for lineno, raw in enumerate(source, start=1):
        stripped = raw.strip()
        if not stripped:
            continue
        try:
            record = json.loads(stripped.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            _issue(result, strict, name, lineno, f"bad JSON: {exc}")
            continue
        if not isinstance(record, dict):
            _issue(result, strict, name, lineno, "record is not an object")
            continue
        team = str(record.get("team_id") or default_team)
        if not team:
            _issue(result, strict, name, lineno, "missing team_id")
            continue
        try:
            stamp = parse_timestamp(str(record["timestamp"]))
            to = record.get("to") or []
            cc = record.get("cc") or []
            if not isinstance(to, list) or not isinstance(cc, list):
                raise ValueError("to/cc must be arrays")
            event = make_event(stamp, str(record["from"]), [str(a) for a in to],
                               [str(a) for a in cc], str(record.get("subject", "")), team)
        except KeyError as exc:
            _issue(result, strict, name, lineno, f"missing key {exc}")
            continue
        except (ValueError, MalformedAddress) as exc:
            _issue(result, strict, name, lineno, str(exc))
            continue
        result.events.append(event)
    return result


def _parse_mbox(source: BinaryIO, default_team: str, name: str, strict: bool) -> ParseResult:
    messages: list[tuple[int, bytes]] = []
    current: list[bytes] = []
    start_line = 1
    saw_any = False
    for lineno, raw in enumerate(source, start=1):
        if raw.startswith(b"From "):
            if current:
                messages.append((start_line, b"".join(current)))
            current = []
            start_line = lineno
            saw_any = True
        elif not saw_any:
            if raw.strip():
                raise FormatError(f"{name}: line {lineno}: expected 'From ' delimiter")
        else:
            current.append(raw)
    if current:
        messages.append((start_line, b"".join(current)))
    result = ParseResult(events=[])
    for lineno, blob in messages:
        msg = message_from_bytes(blob, policy=policy.default)
        try:
            raw_date = msg.get("Date")
            if raw_date is None:
                raise ValueError("missing Date header")
            stamp = parsedate_to_datetime(str(raw_date))
            if stamp.tzinfo is None:
                raise ValueError(f"Date {raw_date!r} has no UTC offset")
            froms = getaddresses([str(msg.get("From", ""))])
            if not froms or not froms[0][1]:
                raise ValueError("missing From header")
            to = [addr for _, addr in getaddresses([str(msg.get("To", ""))]) if addr]
            cc = [addr for _, addr in getaddresses([str(msg.get("Cc", ""))]) if addr]
            event = make_event(stamp, froms[0][1], to, cc,
                               str(msg.get("Subject", "")), default_team)
        except (ValueError, MalformedAddress) as exc:
            _issue(result, strict, name, lineno, str(exc))
            continue
        result.events.append(event)
    return result


def serialize_events(events: Iterable[EmailEvent], format: str) -> bytes:
    """Serialize events back to CSV or JSONL wire bytes.

    Parsing the output reproduces the events (parse→serialize→parse is a
    fixed point).  Fields containing ``,``, ``;``, quotes, or newlines are
    double-quoted in CSV.
    """
    if format == "csv":
        out = [csv_line(CSV_HEADER)]
        for ev in events:
            out.append(csv_line((iso_utc(ev.timestamp), ev.sender,
                                 ";".join(ev.to), ";".join(ev.cc), ev.subject)))
        return "".join(out).encode("utf-8")
    if format == "jsonl":
        lines = []
        for ev in events:
            lines.append(json.dumps(
                {"timestamp": iso_utc(ev.timestamp), "from": ev.sender,
                 "to": list(ev.to), "cc": list(ev.cc),
                 "subject": ev.subject, "team_id": ev.team_id},
                ensure_ascii=False, separators=(",", ":")))
        return ("\n".join(lines) + ("\n" if lines else "")).encode("utf-8")
    raise UnsupportedFormat(f"cannot serialize format: {format!r}")


@dataclass(frozen=True, slots=True)
class Period:
    """Half-open UTC interval ``[start, end)``."""

    start: datetime
    end: datetime

    def __post_init__(self) -> None:
        if self.start.tzinfo is None or self.end.tzinfo is None:
            raise ValueError("period bounds must be timezone-aware")
        if not self.start < self.end:
            raise ValueError("period start must precede end")

    def __contains__(self, stamp: datetime) -> bool:
        return self.start <= stamp < self.end


@dataclass(frozen=True, slots=True)
class TeamCorpus:
    """Immutable, time-sorted event stream for one team within a period."""

    team_id: str
    events: tuple[EmailEvent, ...]
    period: Period


def build_corpus(events: Iterable[EmailEvent], team_id: str, period: Period) -> TeamCorpus:
    """Filter, deduplicate, and sort events into a :class:`TeamCorpus`.

    Deduplication key is ``(timestamp, sender, to-set, subject)``; among
    duplicates the record carrying the most cc information is retained
    (deterministically, independent of input order).  Zero surviving events
    emit an :class:`EmptyCorpusWarning` and still return a corpus.
    """
    chosen: dict[tuple, EmailEvent] = {}
    for ev in events:
        if ev.team_id != team_id or ev.timestamp not in period:
            continue
        key = (ev.timestamp, ev.sender, frozenset(ev.to), ev.subject)
        best = chosen.get(key)
        if best is None or _retention_rank(ev) > _retention_rank(best):
            chosen[key] = ev
    ordered = tuple(sorted(chosen.values(), key=lambda e: (e.timestamp, e.event_id)))
    if not ordered:
        warnings.warn(
            EmptyCorpusWarning(f"no events for team {team_id!r} within period"),
            stacklevel=2,
        )
    return TeamCorpus(team_id=team_id, events=ordered, period=period)


def _retention_rank(ev: EmailEvent) -> tuple:
    return (len(ev.cc), ev.cc, ev.to, ev.event_id)
