"""Regenerate the bundled pipeline fixture (four teams, June-August 2012).

The mail archives are deliberately small enough to verify by hand:

* alpha -- the same three messages every Monday (an invoice, its reply after
  one hour, and an unanswered schedule note); two schedule subjects say
  "thanks".
* bravo -- the invoice/minutes pattern alternates direction week by week,
  so the weekly betweenness leader flips 13 times; four minutes subjects
  say "great"; replies arrive after two hours.
* carol -- a reciprocated star around h with unique subjects and no
  replies at all (median response time stays undefined).
* delta -- sparse traffic with an empty June, a cc'd recipient, a quoted
  subject containing a comma, an exact duplicate row, and one message
  outside the analysis period; only five survey respondents, so the team
  is ineligible for correlation.

Run from the repository root:  python3 tests/data/fixture/make_fixture.py
"""

from __future__ import annotations

import csv
from datetime import date, timedelta
from pathlib import Path

HERE = Path(__file__).resolve().parent
HEADER = ["timestamp", "from", "to", "cc", "subject"]

MONDAYS = [date(2012, 6, 4) + timedelta(weeks=i) for i in range(13)]


def stamp(day: date, hour: int, minute: int = 0, second: int = 0) -> str:
    return f"{day.isoformat()}T{hour:02d}:{minute:02d}:{second:02d}Z"


def write(name: str, rows: list[list[str]]) -> None:
    path = HERE / "mail" / f"{name}.csv"
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(HEADER)
        writer.writerows(rows)
    print(f"wrote {path} ({len(rows)} rows)")


def alpha() -> list[list[str]]:
    a, b, c = "a@alpha.example", "b@alpha.example", "c@alpha.example"
    rows = []
    for week, day in enumerate(MONDAYS, start=1):
        suffix = " thanks" if week in (4, 11) else ""
        rows.append([stamp(day, 9), a, b, "", f"invoice w{week}"])
        rows.append([stamp(day, 10), b, a, "", f"Re: invoice w{week}"])
        rows.append([stamp(day, 11), b, c, "", f"schedule w{week}{suffix}"])
    return rows


def bravo() -> list[list[str]]:
    a, b, c = "a@bravo.example", "b@bravo.example", "c@bravo.example"
    rows = []
    for week, day in enumerate(MONDAYS, start=1):
        suffix = " great" if week in (3, 6, 9, 12) else ""
        sender, replier, listener = (a, b, c) if week % 2 else (b, a, c)
        rows.append([stamp(day, 9), sender, replier, "", f"contract w{week}"])
        rows.append([stamp(day, 11), replier, sender, "", f"Re: contract w{week}"])
        rows.append([stamp(day, 12), replier, listener, "", f"minutes w{week}{suffix}"])
    return rows


def carol() -> list[list[str]]:
    hub = "h@carol.example"
    rows = []
    for week, day in enumerate(MONDAYS, start=1):
        for minute, spoke in enumerate(("x", "y", "z")):
            member = f"{spoke}@carol.example"
            rows.append([stamp(day, 9, minute), hub, member, "",
                         f"update {spoke} w{week}"])
            rows.append([stamp(day, 10, minute), member, hub, "",
                         f"note {spoke} w{week}"])
    return rows


def delta() -> list[list[str]]:
    d1, d2, d3 = "d1@delta.example", "d2@delta.example", "d3@delta.example"
    rows = [
        # outside the June-September analysis period; ingest must drop it
        [stamp(date(2012, 5, 20), 9), d1, d2, "", "kickoff"],
        # June intentionally empty: exercises the gap-month report
        [stamp(date(2012, 7, 3), 9), d1, d2, "", "planning j1"],
        [stamp(date(2012, 7, 3), 9, 30), d2, d1, "", "Re: planning j1"],
        [stamp(date(2012, 7, 12), 14), d1, d3, "", "forecast j2 thanks"],
        [stamp(date(2012, 8, 8), 9), d1, d2, d3, "planning a1"],
        [stamp(date(2012, 8, 8), 9, 30), d2, d1, "", "Re: planning a1"],
        [stamp(date(2012, 8, 17), 14), d1, d3, "", "forecast, final a2"],
        [stamp(date(2012, 8, 17), 14), d1, d3, "", "forecast, final a2"],
    ]
    return rows


def survey() -> None:
    header = ["team_id", "respondent_id", "nps"] + [f"kpd_{i}" for i in range(1, 9)]
    rows: list[list[str]] = []

    def team(team_id: str, nps_answers: list[int], kpd_row: list[int]) -> None:
        for i, answer in enumerate(nps_answers, start=1):
            rows.append([team_id, f"{team_id}-r{i:02d}", str(answer)]
                        + [str(v) for v in kpd_row])

    # alpha: 14 promoters, 5 passives, 2 detractors over 21 respondents
    team("alpha", [9] * 8 + [10] * 6 + [7] * 3 + [8] * 2 + [5, 6],
         [3] * 8)
    # bravo: 6 promoters, 6 passives, 9 detractors
    team("bravo", [9] * 4 + [10] * 2 + [7] * 4 + [8] * 2 + [3] * 5 + [6] * 4,
         [4] * 8)
    # carol: 18 promoters, 3 passives, no detractors.  The team KPD means
    # (3, 4, 2) sit exactly on a line against two metric columns, so the
    # correlation report must show perfect +-1.000 cells with stars.
    team("carol", [10] * 12 + [9] * 6 + [8] * 3,
         [2] * 8)
    # delta: five respondents -> below the 20-respondent eligibility bar
    team("delta", [9, 8, 7, 10, 6], [3] * 8)

    path = HERE / "survey.csv"
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    print(f"wrote {path} ({len(rows)} rows)")


def main() -> None:
    (HERE / "mail").mkdir(parents=True, exist_ok=True)
    write("alpha", alpha())
    write("bravo", bravo())
    write("carol", carol())
    write("delta", delta())
    survey()


if __name__ == "__main__":
    main()
