"""NPS, KPD, and the eligibility rule."""

from __future__ import annotations

import io
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from commscore.errors import FormatError, MalformedRecord, NoResponses, OutOfRange
from commscore.satisfaction import (
    SurveyResponse,
    classify_respondent,
    group_by_team,
    kpd,
    load_survey,
    nps,
    team_satisfaction,
)

import oracles


def resp(answer: int, team: str = "t", rid: str = "r1", kpd_value: float = 4.0):
    return SurveyResponse(team_id=team, respondent_id=rid, nps_answer=answer,
                          kpd_answers=tuple(Fraction(kpd_value).limit_denominator()
                                            for _ in range(8)))


# ---------------------------------------------------------------------------
# classification


@pytest.mark.parametrize("answer,expected", [
    (0, "detractor"), (5, "detractor"), (6, "detractor"),
    (7, "passive"), (8, "passive"),
    (9, "promoter"), (10, "promoter"),
])
def test_classification_boundaries(answer, expected):
    assert classify_respondent(answer) == expected


def test_every_answer_maps_to_exactly_one_class():
    classes = [classify_respondent(a) for a in range(11)]
    assert classes.count("detractor") == 7
    assert classes.count("passive") == 2
    assert classes.count("promoter") == 2


@pytest.mark.parametrize("bad", [-1, 11, 9.5, "9"])
def test_classification_rejects_out_of_range(bad):
    with pytest.raises(OutOfRange):
        classify_respondent(bad)


# ---------------------------------------------------------------------------
# NPS


def test_nps_extremes_and_mixture():
    assert nps([resp(9), resp(10), resp(10)]) == 100
    assert nps([resp(0), resp(3), resp(6)]) == -100
    assert nps([resp(9), resp(10), resp(7), resp(3)]) == 25


def test_nps_matches_reichheld_formula_on_samples():
    answers = [9, 10, 7, 3, 6, 8, 9, 0, 10]
    assert nps([resp(a) for a in answers]) == oracles.reichheld_nps(answers)


@given(st.lists(st.integers(0, 10), min_size=1, max_size=12),
       st.integers(2, 4))
def test_nps_invariant_under_duplication(answers, k):
    responses = [resp(a, rid=f"r{i}") for i, a in enumerate(answers)]
    assert nps(responses * k) == nps(responses)


@given(st.permutations([9, 10, 7, 3, 6, 8, 0, 5]))
def test_nps_is_order_invariant(answers):
    permuted = nps([resp(a, rid=f"r{i}") for i, a in enumerate(answers)])
    baseline = nps([resp(a, rid=f"r{i}") for i, a in enumerate(sorted(answers))])
    assert permuted == baseline == Fraction(100 * (2 - 4), 8)


def test_nps_requires_responses():
    with pytest.raises(NoResponses):
        nps([])


# ---------------------------------------------------------------------------
# KPD


def test_kpd_single_respondent_mean():
    r = SurveyResponse("t", "r1", 9, tuple(Fraction(k) for k in range(1, 9)))
    assert kpd([r]) == Fraction(9, 2)


def test_kpd_constant_answers():
    assert kpd([resp(9, kpd_value=5.0)]) == 5


def test_kpd_averages_respondent_means():
    low = SurveyResponse("t", "a", 9, tuple(Fraction(4) for _ in range(8)))
    high = SurveyResponse("t", "b", 9, tuple(Fraction(6) for _ in range(8)))
    assert kpd([low, high]) == 5


@given(st.permutations(list(range(6))))
def test_kpd_is_respondent_order_invariant(order):
    responses = [resp(9, rid=f"r{i}", kpd_value=1.0 + i * 0.5) for i in range(6)]
    assert kpd([responses[i] for i in order]) == kpd(responses)


def test_kpd_requires_eight_answers():
    with pytest.raises(ValueError):
        SurveyResponse("t", "r", 9, (Fraction(1),) * 7)


# ---------------------------------------------------------------------------
# team aggregation / eligibility


def test_eligibility_strict_boundary():
    twenty_one = [resp(9, rid=f"r{i}") for i in range(21)]
    twenty = twenty_one[:20]
    assert team_satisfaction(twenty_one, "t").eligible is True
    assert team_satisfaction(twenty, "t").eligible is False


def test_single_respondent_is_ineligible_but_scored():
    sat = team_satisfaction([resp(9)], "t")
    assert sat.eligible is False
    assert sat.nps == 100
    assert sat.n_respondents == 1


def test_eligibility_threshold_is_configurable():
    five = [resp(9, rid=f"r{i}") for i in range(5)]
    assert team_satisfaction(five, "t", eligibility_min=4).eligible is True
    assert team_satisfaction(five, "t", eligibility_min=5).eligible is False


def test_team_mismatch_rejected():
    with pytest.raises(ValueError):
        team_satisfaction([resp(9, team="other")], "t")
    with pytest.raises(NoResponses):
        team_satisfaction([], "t")


# ---------------------------------------------------------------------------
# survey file parsing


SURVEY = (b"team_id,respondent_id,nps,kpd_1,kpd_2,kpd_3,kpd_4,kpd_5,kpd_6,kpd_7,kpd_8\n"
          b"alpha,r1,9,4,4,4,4,4,4,4,4\n"
          b"alpha,r2,3,2.5,2.5,2.5,2.5,2.5,2.5,2.5,2.5\n"
          b"bravo,r1,7,3,3,3,3,3,3,3,3\n")


def test_survey_csv_parses_and_groups():
    rows = load_survey(io.BytesIO(SURVEY))
    grouped = group_by_team(rows)
    assert sorted(grouped) == ["alpha", "bravo"]
    assert nps(grouped["alpha"]) == 0        # one promoter, one detractor
    assert kpd(grouped["bravo"]) == 3


def test_survey_rejects_missing_answers():
    doc = SURVEY + b"bravo,r2,8,3,3,3\n"
    with pytest.raises(MalformedRecord):
        load_survey(io.BytesIO(doc))


def test_survey_rejects_bad_values():
    doc = SURVEY + b"bravo,r2,eleven,3,3,3,3,3,3,3,3\n"
    with pytest.raises(MalformedRecord):
        load_survey(io.BytesIO(doc))
    doc = SURVEY + b"bravo,r2,11,3,3,3,3,3,3,3,3\n"
    with pytest.raises(MalformedRecord):
        load_survey(io.BytesIO(doc))


def test_survey_rejects_wrong_header():
    with pytest.raises(FormatError):
        load_survey(io.BytesIO(b"team,who,nps\n"))
