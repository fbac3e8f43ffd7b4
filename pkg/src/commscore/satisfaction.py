"""Per-team NPS and KPD from survey responses, with eligibility filtering."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import BinaryIO, Sequence

from .errors import FormatError, MalformedRecord, NoResponses, OutOfRange

SURVEY_HEADER = (
    "team_id", "respondent_id", "nps",
    "kpd_1", "kpd_2", "kpd_3", "kpd_4", "kpd_5", "kpd_6", "kpd_7", "kpd_8",
)

#: Teams need strictly more than this many respondents to enter correlation.
DEFAULT_ELIGIBILITY_MIN = 20


@dataclass(frozen=True)
class SurveyResponse:
    team_id: str
    respondent_id: str
    nps_answer: int
    kpd_answers: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not 0 <= self.nps_answer <= 10:
            raise OutOfRange(f"nps answer {self.nps_answer} outside 0..10")
        if len(self.kpd_answers) != 8:
            raise ValueError("kpd_answers must have exactly 8 entries")


@dataclass(frozen=True)
class TeamSatisfaction:
    team_id: str
    nps: Fraction
    kpd: Fraction
    n_respondents: int
    eligible: bool


def classify_respondent(nps_answer: int) -> str:
    """9-10 promoter, 7-8 passive, 0-6 detractor."""
    if not isinstance(nps_answer, int) or not 0 <= nps_answer <= 10:
        raise OutOfRange(f"nps answer must be an integer in 0..10, got {nps_answer!r}")
    if nps_answer >= 9:
        return "promoter"
    if nps_answer >= 7:
        return "passive"
    return "detractor"


def nps(responses: Sequence[SurveyResponse]) -> Fraction:
    """100 · (#promoters − #detractors) / #responses."""
    if not responses:
        raise NoResponses("nps over zero responses")
    promoters = sum(1 for r in responses if classify_respondent(r.nps_answer) == "promoter")
    detractors = sum(1 for r in responses if classify_respondent(r.nps_answer) == "detractor")
    return Fraction(100 * (promoters - detractors), len(responses))


def kpd(responses: Sequence[SurveyResponse]) -> Fraction:
    """Mean over respondents of each respondent's mean of 8 answers."""
    if not responses:
        raise NoResponses("kpd over zero responses")
    per_respondent = [
        sum(r.kpd_answers, start=Fraction(0)) / 8 for r in responses
    ]
    return sum(per_respondent, start=Fraction(0)) / len(per_respondent)


def team_satisfaction(responses: Sequence[SurveyResponse], team_id: str,
                      eligibility_min: int = DEFAULT_ELIGIBILITY_MIN) -> TeamSatisfaction:
    """Combine NPS/KPD with the strict more-than-``eligibility_min`` rule."""
    if not responses:
        raise NoResponses(f"no survey responses for team {team_id!r}")
    for r in responses:
        if r.team_id != team_id:
            raise ValueError(f"response for {r.team_id!r} passed to team {team_id!r}")
    return TeamSatisfaction(
        team_id=team_id,
        nps=nps(responses),
        kpd=kpd(responses),
        n_respondents=len(responses),
        eligible=len(responses) > eligibility_min,
    )


def load_survey(source: BinaryIO, *, source_name: str = "<stream>") -> list[SurveyResponse]:
    """Parse the survey CSV; malformed or incomplete rows are rejected outright.

    Missing answers are treated as malformed, never imputed.
    """
    text = io.TextIOWrapper(source, encoding="utf-8-sig", newline="")
    reader = csv.reader(text)
    try:
        header = next(reader)
    except StopIteration:
        raise FormatError(f"{source_name}: empty survey CSV") from None
    if tuple(h.strip() for h in header) != SURVEY_HEADER:
        raise FormatError(f"{source_name}: bad survey header {header!r}")
    out: list[SurveyResponse] = []
    for row in reader:
        if not row:
            continue
        line = reader.line_num
        if len(row) != len(SURVEY_HEADER):
            raise MalformedRecord(
                f"expected {len(SURVEY_HEADER)} fields, got {len(row)}",
                source=source_name, line=line,
            )
        team, respondent, raw_nps, *raw_kpd = (f.strip() for f in row)
        if not team or not respondent:
            raise MalformedRecord("empty team_id or respondent_id",
                                  source=source_name, line=line)
        try:
            answer = int(raw_nps)
            answers = tuple(Fraction(v) for v in raw_kpd)
            response = SurveyResponse(team_id=team, respondent_id=respondent,
                                      nps_answer=answer, kpd_answers=answers)
        except (ValueError, ZeroDivisionError, OutOfRange) as exc:
            raise MalformedRecord(str(exc), source=source_name, line=line) from None
        out.append(response)
    return out


def group_by_team(responses: Sequence[SurveyResponse]) -> dict[str, list[SurveyResponse]]:
    grouped: dict[str, list[SurveyResponse]] = {}
    for r in responses:
        grouped.setdefault(r.team_id, []).append(r)
    return {team: grouped[team] for team in sorted(grouped)}
