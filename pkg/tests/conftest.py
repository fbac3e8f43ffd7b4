"""Shared fixtures and compact builders for the test suite."""

from __future__ import annotations

import sys
from datetime import datetime, timezone
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from commscore.ingest import Period, TeamCorpus, build_corpus, make_event

UTC = timezone.utc


def ts(text: str) -> datetime:
    """'2012-06-04 09:00' → tz-aware UTC datetime."""
    return datetime.strptime(text, "%Y-%m-%d %H:%M").replace(tzinfo=UTC)


def addr(name: str) -> str:
    """Short actor names expand to full addresses; full addresses pass through."""
    return name if "@" in name else f"{name}@ex.com"


def ev(when: str, sender: str, to, cc=(), subject: str = "x", team: str = "t"):
    to = [to] if isinstance(to, str) else list(to)
    cc = [cc] if isinstance(cc, str) else list(cc)
    return make_event(ts(when), addr(sender), [addr(a) for a in to],
                      [addr(a) for a in cc], subject, team)


def corpus_of(events, team: str = "t",
              period: tuple[str, str] = ("2012-06-01 00:00", "2012-09-01 00:00")) -> TeamCorpus:
    return build_corpus(events, team, Period(ts(period[0]), ts(period[1])))


@pytest.fixture
def summer() -> Period:
    """The three-month window most tests run over."""
    return Period(ts("2012-06-01 00:00"), ts("2012-09-01 00:00"))
