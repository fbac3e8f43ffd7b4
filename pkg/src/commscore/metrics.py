"""The eight communication score-card metrics for one team corpus.

Graph-structural metrics (centralities, centralization, density) are computed
in exact rational arithmetic (:class:`fractions.Fraction`) on the directed
unweighted structure of each window graph; edge multiplicities never affect
them.  Reply latencies are in seconds.
"""

from __future__ import annotations

import re
import statistics
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import IO, Iterable, Mapping, Sequence

from .errors import FormatError, InsufficientWindows, NoActivity, OutOfRange
from .ingest import ActorId, EmailEvent, TeamCorpus
from .tempograph import (
    DailyActivity,
    WindowGraph,
    daily_activity,
    monthly_windows,
    weekly_windows,
)

#: Canonical metric field order and their fixed report column labels.
METRIC_LABELS: dict[str, str] = {
    "avg_gbc": "Avg GBC",
    "avg_gdc": "Avg GDC",
    "avg_density": "Avg Density",
    "avg_new_actors": "Avg. New Actors",
    "oscillation_sum": "Sum of Oscillation",
    "art_median": "ART Median",
    "awvci": "AWVCI (weighted by #actors)",
    "emotionality": "Emotionality (cumulated pos. sentiment)",
}

METRIC_FIELDS: tuple[str, ...] = tuple(METRIC_LABELS)

DEFAULT_REPLY_CAP = 7 * 86400  # seconds


# --------------------------------------------------------------------------
# centrality / structure


@dataclass(frozen=True)
class CentralityMap:
    """Normalized per-actor centralities in [0, 1] for one graph."""

    kind: str  # "betweenness" | "degree"
    values: Mapping[ActorId, Fraction]


def _adjacency(g: WindowGraph) -> dict[ActorId, list[ActorId]]:
    adj: dict[ActorId, list[ActorId]] = {v: [] for v in sorted(g.nodes)}
    for src, dst in sorted(g.edges):
        adj[src].append(dst)
    return adj


def betweenness_centrality(g: WindowGraph) -> CentralityMap:
    """Brandes-style betweenness on the directed unweighted graph.

    For each node, the fraction of ordered-pair shortest paths passing through
    it, normalized by ``(N-1)(N-2)``.  Fewer than three nodes yields all
    zeros.  Values are exact rationals.
    """
    adj = _adjacency(g)
    score: dict[ActorId, Fraction] = {v: Fraction(0) for v in adj}
    for source in adj:
        # single-source shortest paths with path counting
        dist: dict[ActorId, int] = {source: 0}
        sigma: dict[ActorId, int] = {source: 1}
        preds: dict[ActorId, list[ActorId]] = {v: [] for v in adj}
        order: list[ActorId] = []
        queue: deque[ActorId] = deque([source])
        while queue:
            v = queue.popleft()
            order.append(v)
            for w in adj[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] = sigma.get(w, 0) + sigma[v]
                    preds[w].append(v)
        # dependency accumulation, back to front
        delta: dict[ActorId, Fraction] = {v: Fraction(0) for v in order}
        for w in reversed(order):
            for v in preds[w]:
                delta[v] += Fraction(sigma[v], sigma[w]) * (1 + delta[w])
            if w != source:
                score[w] += delta[w]
    n = len(adj)
    if n < 3:
        return CentralityMap("betweenness", {v: Fraction(0) for v in adj})
    denom = (n - 1) * (n - 2)
    return CentralityMap("betweenness", {v: s / denom for v, s in score.items()})


def degree_centrality(g: WindowGraph) -> CentralityMap:
    """Distinct-neighbor count over ``N-1``; a single node scores 0."""
    neighbors: dict[ActorId, set[ActorId]] = {v: set() for v in g.nodes}
    for src, dst in g.edges:
        neighbors[src].add(dst)
        neighbors[dst].add(src)
    n = len(neighbors)
    if n <= 1:
        return CentralityMap("degree", {v: Fraction(0) for v in neighbors})
    return CentralityMap(
        "degree", {v: Fraction(len(nb), n - 1) for v, nb in neighbors.items()}
    )


def group_centralization(c: CentralityMap) -> Fraction:
    """Freeman centralization: Σ(c_max − c_v) over its star-graph maximum.

    The maximum sum is ``N-1`` for normalized betweenness and ``N-2`` for
    normalized degree.  Two or fewer nodes centralize to 0.
    """
    n = len(c.values)
    if n <= 2:
        return Fraction(0)
    c_max = max(c.values.values())
    spread = sum((c_max - v for v in c.values.values()), start=Fraction(0))
    denom = n - 1 if c.kind == "betweenness" else n - 2
    return spread / denom


def density(g: WindowGraph) -> Fraction:
    """Distinct directed edges over ``N(N-1)``; trivial graphs score 0."""
    n = len(g.nodes)
    if n <= 1:
        return Fraction(0)
    return Fraction(len(g.edges), n * (n - 1))


def avg_new_actors(windows: Sequence[WindowGraph]) -> Fraction:
    """Mean count of never-before-seen actors over windows 2..M.

    The first window is excluded — every actor there is trivially new.
    """
    if len(windows) < 2:
        raise InsufficientWindows("avg_new_actors needs at least 2 windows")
    seen = set(windows[0].nodes)
    total = 0
    for g in windows[1:]:
        total += len(g.nodes - seen)
        seen |= g.nodes
    return Fraction(total, len(windows) - 1)


# --------------------------------------------------------------------------
# leadership oscillation


@dataclass(frozen=True)
class OscillationResult:
    per_actor: Mapping[ActorId, int]
    total: int


def direction_changes(series: Sequence[Fraction | int | float]) -> int:
    """Count strict direction changes of a series; plateaus are not extrema."""
    last_sign = 0
    changes = 0
    for prev, cur in zip(series, series[1:]):
        if cur == prev:
            continue
        sign = 1 if cur > prev else -1
        if last_sign and sign != last_sign:
            changes += 1
        last_sign = sign
    return changes


def leadership_oscillation(corpus: TeamCorpus, granularity: str = "weekly") -> OscillationResult:
    """Direction changes of each actor's betweenness series across windows.

    An actor absent from a window has betweenness 0 there.  ``total`` sums the
    per-actor counts ("Sum of Oscillation").
    """
    if granularity == "weekly":
        windows = weekly_windows(corpus)
    elif granularity == "monthly":
        windows = monthly_windows(corpus)
    else:
        raise ValueError(f"unknown oscillation granularity: {granularity!r}")
    if len(windows) < 3:
        raise InsufficientWindows(
            f"oscillation needs ≥ 3 {granularity} windows, got {len(windows)}"
        )
    maps = [betweenness_centrality(g).values for g in windows]
    actors = sorted(set().union(*(g.nodes for g in windows)))
    per_actor: dict[ActorId, int] = {}
    for actor in actors:
        series = [m.get(actor, Fraction(0)) for m in maps]
        per_actor[actor] = direction_changes(series)
    return OscillationResult(per_actor=per_actor, total=sum(per_actor.values()))


# --------------------------------------------------------------------------
# responsiveness

_PREFIX_RE = re.compile(r"^\s*(re|fw|fwd)\s*:\s*", re.IGNORECASE)


def normalize_subject(subject: str) -> str:
    """Strip reply/forward prefixes repeatedly, collapse whitespace, lowercase."""
    text = subject
    while True:
        stripped = _PREFIX_RE.sub("", text, count=1)
        if stripped == text:
            break
        text = stripped
    return " ".join(text.split()).lower()


@dataclass(frozen=True)
class ReplyPair:
    original: EmailEvent
    reply: EmailEvent
    latency: int  # seconds


def match_replies(corpus: TeamCorpus, reply_cap: int = DEFAULT_REPLY_CAP) -> list[ReplyPair]:
    """Pair each reply with the latest eligible earlier original.

    B replies to A iff B's sender was addressed by A (to or cc), A's sender is
    in B's ``to``, B is strictly later, the normalized subjects match, and the
    latency does not exceed ``reply_cap`` seconds.  The matching is
    deterministic under any permutation of the input events.
    """
    by_subject: dict[str, list[EmailEvent]] = {}
    for ev in corpus.events:
        by_subject.setdefault(normalize_subject(ev.subject), []).append(ev)
    pairs: list[ReplyPair] = []
    for group in by_subject.values():
        for reply in group:
            best: EmailEvent | None = None
            for original in group:
                if original.timestamp >= reply.timestamp:
                    continue
                latency = int((reply.timestamp - original.timestamp).total_seconds())
                if latency > reply_cap:
                    continue
                if reply.sender not in original.to and reply.sender not in original.cc:
                    continue
                if original.sender not in reply.to:
                    continue
                if best is None or (original.timestamp, original.event_id) > (
                    best.timestamp, best.event_id
                ):
                    best = original
            if best is not None:
                latency = int((reply.timestamp - best.timestamp).total_seconds())
                pairs.append(ReplyPair(original=best, reply=reply, latency=latency))
    pairs.sort(key=lambda p: (p.reply.timestamp, p.reply.event_id))
    return pairs


@dataclass(frozen=True)
class ResponseTimes:
    art_mean: float | None
    art_median: float | None


def response_times(pairs: Sequence[ReplyPair]) -> ResponseTimes:
    """Mean and median reply latency; undefined (None) when there are no pairs."""
    if not pairs:
        return ResponseTimes(art_mean=None, art_median=None)
    latencies = [p.latency for p in pairs]
    return ResponseTimes(
        art_mean=statistics.mean(latencies),
        art_median=statistics.median(latencies),
    )


# --------------------------------------------------------------------------
# contribution index


def contribution_index(sent: int, received: int) -> Fraction:
    """(sent − received)/(sent + received): +1 pure sender, −1 pure receiver."""
    if sent < 0 or received < 0:
        raise OutOfRange("message counts must be non-negative")
    if sent + received == 0:
        raise NoActivity("contribution index undefined without activity")
    return Fraction(sent - received, sent + received)


def _population_variance(values: Sequence[Fraction]) -> Fraction:
    n = len(values)
    mean = sum(values, start=Fraction(0)) / n
    return sum(((v - mean) ** 2 for v in values), start=Fraction(0)) / n


def awvci(days: Sequence[DailyActivity], weighting: str = "edges") -> Fraction:
    """Weighted mean of daily contribution-index variances.

    Per day: the population variance of the contribution index across that
    day's active actors.  Day weights are the day's total edge count
    (``weighting="edges"``, the default) or its active-actor count
    (``weighting="actors"``).
    """
    if weighting not in ("edges", "actors"):
        raise ValueError(f"unknown AWVCI weighting: {weighting!r}")
    num = Fraction(0)
    den = Fraction(0)
    for day in days:
        actors = sorted(day.actors)
        if not actors:
            continue
        indices = [
            contribution_index(day.sent.get(a, 0), day.received.get(a, 0))
            for a in actors
        ]
        weight = day.total_edges if weighting == "edges" else len(actors)
        num += _population_variance(indices) * weight
        den += weight
    if den == 0:
        raise NoActivity("no day with active actors")
    return num / den


# --------------------------------------------------------------------------
# sentiment / emotionality


@dataclass(frozen=True)
class SentimentLexicon:
    """Disjoint lowercase positive/negative word sets."""

    positive: frozenset[str]
    negative: frozenset[str]

    def __post_init__(self) -> None:
        overlap = self.positive & self.negative
        if overlap:
            raise ValueError(f"lexicon words in both sections: {sorted(overlap)[:5]}")
        for word in self.positive | self.negative:
            if word != word.lower():
                raise ValueError(f"lexicon entry not lowercase: {word!r}")


def load_lexicon(stream: IO[str] | Iterable[str]) -> SentimentLexicon:
    """Read a lexicon file: one word per line under ``[positive]``/``[negative]``."""
    section = None
    positive: set[str] = set()
    negative: set[str] = set()
    for raw in stream:
        word = raw.strip()
        if not word or word.startswith("#"):
            continue
        if word.lower() == "[positive]":
            section = positive
            continue
        if word.lower() == "[negative]":
            section = negative
            continue
        if word.startswith("["):
            raise FormatError(f"unknown lexicon section: {word}")
        if section is None:
            raise FormatError("lexicon word before any section header")
        section.add(word.lower())
    return SentimentLexicon(positive=frozenset(positive), negative=frozenset(negative))


def default_lexicon() -> SentimentLexicon:
    text = resources.files("commscore").joinpath("data/default_lexicon.txt").read_text("utf-8")
    return load_lexicon(text.splitlines())


_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def sentiment(subject: str, lexicon: SentimentLexicon) -> str:
    """Classify a subject line as positive/negative/neutral by lexicon hits."""
    tokens = _TOKEN_RE.findall(subject.lower())
    pos = sum(1 for t in tokens if t in lexicon.positive)
    neg = sum(1 for t in tokens if t in lexicon.negative)
    if pos > neg:
        return "positive"
    if neg > pos:
        return "negative"
    return "neutral"


def emotionality(corpus: TeamCorpus, lexicon: SentimentLexicon,
                 mode: str = "cumulative") -> int | Fraction:
    """Count of positive-classified subjects; ``normalized`` divides by volume."""
    if mode not in ("cumulative", "normalized"):
        raise ValueError(f"unknown emotionality mode: {mode!r}")
    count = sum(1 for ev in corpus.events if sentiment(ev.subject, lexicon) == "positive")
    if mode == "cumulative":
        return count
    if not corpus.events:
        return 0
    return Fraction(count, len(corpus.events))


# --------------------------------------------------------------------------
# the full vector


@dataclass(frozen=True)
class MetricConfig:
    """Knobs for the configurable metric definitions (defaults as documented)."""

    oscillation_window: str = "weekly"
    reply_cap: int = DEFAULT_REPLY_CAP
    awvci_weighting: str = "edges"
    emotionality_mode: str = "cumulative"
    lexicon: SentimentLexicon | None = None

    def resolved_lexicon(self) -> SentimentLexicon:
        return self.lexicon if self.lexicon is not None else default_lexicon()


@dataclass(frozen=True)
class MetricVector:
    """The eight score-card metric values for one team; None marks undefined."""

    team_id: str
    avg_gbc: Fraction | None
    avg_gdc: Fraction | None
    avg_density: Fraction | None
    avg_new_actors: Fraction | None
    oscillation_sum: int | None
    art_median: float | None
    awvci: Fraction | None
    emotionality: int | Fraction | None

    def value(self, field_name: str) -> float | None:
        raw = getattr(self, field_name)
        return None if raw is None else float(raw)


def _mean(parts: Sequence[Fraction]) -> Fraction:
    return sum(parts, start=Fraction(0)) / len(parts)


def compute_metric_vector(corpus: TeamCorpus, config: MetricConfig = MetricConfig()) -> MetricVector:
    """All eight metrics for one corpus; per-metric boundary cases yield None.

    Monthly means (GBC, GDC, density) skip months without e-mail; a metric
    whose preconditions cannot be met is reported as undefined rather than
    aborting the vector.
    """
    months = monthly_windows(corpus)
    active = [g for g in months if g.nodes]
    gbc = gdc = dens = None
    if active:
        gbc = _mean([group_centralization(betweenness_centrality(g)) for g in active])
        gdc = _mean([group_centralization(degree_centrality(g)) for g in active])
        dens = _mean([density(g) for g in active])
    try:
        new_actors = avg_new_actors(months)
    except InsufficientWindows:
        new_actors = None
    try:
        oscillation = leadership_oscillation(corpus, config.oscillation_window).total
    except InsufficientWindows:
        oscillation = None
    art = response_times(match_replies(corpus, config.reply_cap)).art_median
    try:
        variance = awvci(daily_activity(corpus), config.awvci_weighting)
    except NoActivity:
        variance = None
    emo = emotionality(corpus, config.resolved_lexicon(), config.emotionality_mode)
    return MetricVector(
        team_id=corpus.team_id,
        avg_gbc=gbc,
        avg_gdc=gdc,
        avg_density=dens,
        avg_new_actors=new_actors,
        oscillation_sum=oscillation,
        art_median=art,
        awvci=variance,
        emotionality=emo,
    )
