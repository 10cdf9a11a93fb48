"""Acceptance suite: ten checks covering the package end to end.

Each test prints one [criterion N] PASS or FAIL line, so a plain
``pytest tests/test_acceptance.py -v -s`` reads as a checklist.  Three
strict-xfail companions at the bottom record reference-index behavior
that contradicts its traditional description; the violations themselves
are pinned by a separate always-green test.
"""
from __future__ import annotations

import random
from collections import Counter
from contextlib import contextmanager
from fractions import Fraction

import pytest

from streamshare import (
    EQUAL_SPLIT,
    PADDED_SHARE,
    PRO_RATA,
    ProblemGenerator,
    SQUARED_STREAMS,
    STREAM_SHARE,
    UNIFORM,
    USER_CENTRIC,
    banded_index,
    check_click_fraud_proofness,
    check_reasonable_lower_bound_all,
    decimal_display,
    harsanyi_dividends,
    in_core_direct,
    in_core_flow,
    is_supermodular,
    issue_size_weights,
    equal_issue_weights,
    parse_problem,
    recheck_witness,
    reconstruct_from_dividends,
    rewards,
    serialize_problem,
    standard_indices,
    streaming_game,
    streaming_to_claims,
    two_stage_rule,
    weighted_proportional,
)
from streamshare.axioms import (
    ADDITIVITY,
    CLICK_FRAUD_PROOFNESS,
    CORE_SELECTION,
    EQUAL_GLOBAL_IMPACT,
    EQUAL_INDIVIDUAL_IMPACT,
    HOMOGENEITY,
    REASONABLE_LOWER_BOUND,
    Status,
    axiom_matrix,
    reference_fraud_pairs,
)
from streamshare.game import listened_mask

from helpers import (
    perturbed_allocation,
    random_member,
    resampled_column,
    three_user_problem,
    two_user_problem,
)

F = Fraction


@contextmanager
def criterion(number: int, summary: str):
    """Print exactly one status line for the enclosing acceptance check."""
    try:
        yield
    except BaseException:
        print(f"[criterion {number}] FAIL: {summary}")
        raise
    print(f"[criterion {number}] PASS: {summary}")


def test_criterion_01_two_user_goldens():
    with criterion(1, "two-user instance pays (1/5, 9/5) pro-rata and (1, 1) user-centric"):
        p = two_user_problem()
        pro = rewards(p, PRO_RATA(p))
        assert pro.as_dict() == {"1": F(1, 5), "2": F(9, 5)}
        assert decimal_display(pro["1"], 1) == "0.2"
        assert decimal_display(pro["2"], 1) == "1.8"
        assert rewards(p, USER_CENTRIC(p)).as_dict() == {"1": 1, "2": 1}


def test_criterion_02_three_user_goldens():
    with criterion(2, "three-user indices and rewards are exact and round to the "
                      "familiar one-decimal table"):
        p = three_user_problem()
        pro_values = PRO_RATA(p)
        assert pro_values.as_dict() == {"1": 15, "2": 125}
        user_values = USER_CENTRIC(p)
        assert user_values.as_dict() == {"1": F(9, 8), "2": F(15, 8)}
        band_values = banded_index(20, 60)(p)
        assert band_values.as_dict() == {"1": F(5, 4), "2": F(19, 4)}

        pro = rewards(p, pro_values)
        assert pro.as_dict() == {"1": F(9, 28), "2": F(75, 28)}
        assert [decimal_display(pro[a], 1) for a in p.artists] == ["0.3", "2.7"]

        user = rewards(p, user_values)
        assert user.as_dict() == {"1": F(9, 8), "2": F(15, 8)}
        assert [decimal_display(user[a], 1) for a in p.artists] == ["1.1", "1.9"]

        band = rewards(p, band_values)
        assert band.as_dict() == {"1": F(5, 8), "2": F(19, 8)}
        assert [decimal_display(band[a], 1) for a in p.artists] == ["0.6", "2.4"]


def test_criterion_03_core_membership_of_the_two_schemes():
    with criterion(3, "pro-rata payout is blocked by {1} under both core oracles; "
                      "the user-centric payout decomposes and is accepted by both"):
        p = two_user_problem()
        g = streaming_game(p)

        pro = rewards(p, PRO_RATA(p))
        direct = in_core_direct(g, pro)
        flow = in_core_flow(p, pro)
        assert not direct and not flow
        assert direct.blocking_coalition == {"1"}
        assert pro["1"] == F(1, 5) < g.value(g.mask_of({"1"})) == 1

        user = rewards(p, USER_CENTRIC(p))
        assert in_core_direct(g, user)
        accepted = in_core_flow(p, user)
        assert accepted
        accepted.decomposition.validate(p)
        assert accepted.decomposition.allocation().as_dict() == user.as_dict()


def test_criterion_04_click_fraud():
    with criterion(4, "one deflated column moves a pro-rata payout by 22/15 > fee; "
                      "user-centric survives 1000+ seeded column rewrites"):
        base, deflated, user = reference_fraud_pairs()[0]
        verdict = check_click_fraud_proofness(PRO_RATA, base, deflated, user)
        assert verdict.failed
        assert Fraction(verdict.witness["difference"]) == F(22, 15) > base.fee

        rng = random.Random(4_004)
        rewrites = 0
        for problem in ProblemGenerator(seed=44, max_artists=6, max_users=6).problems():
            for u in problem.users:
                probe = resampled_column(problem, u, rng)
                assert check_click_fraud_proofness(USER_CENTRIC, problem, probe, u).passed
                rewrites += 1
            if rewrites >= 1000:
                break
        assert rewrites >= 1000


def test_criterion_05_core_oracles_agree():
    with criterion(5, "enumeration and flow core oracles agree on 5000 allocations "
                      "across 500 problems, and constructed members always pass"):
        member_rng = random.Random(505)
        probe_rng = random.Random(606)
        problems = ProblemGenerator(seed=500, max_artists=5, max_users=6).sample(500)
        agreements = 0
        members_accepted = 0
        for problem in problems:
            g = streaming_game(problem)
            for _ in range(5):
                member = random_member(problem, member_rng)
                d = in_core_direct(g, member)
                f = in_core_flow(problem, member)
                assert d.in_core and f.in_core
                members_accepted += 1
                agreements += 1
            for _ in range(5):
                probe = perturbed_allocation(problem, probe_rng)
                d = in_core_direct(g, probe)
                f = in_core_flow(problem, probe)
                assert d.in_core == f.in_core
                agreements += 1
        assert agreements == 5000
        assert members_accepted == 2500


def test_criterion_06_claims_identities():
    with criterion(6, "both streaming payouts drop out of the rationing rules on "
                      "1000 problems: issue-proportional and two-stage forms match"):
        checked = 0
        for problem in ProblemGenerator(seed=60, max_artists=5, max_users=6).sample(1000):
            pro = tuple(rewards(problem, PRO_RATA(problem))[a] for a in problem.artists)
            user = tuple(rewards(problem, USER_CENTRIC(problem))[a]
                         for a in problem.artists)
            multi = streaming_to_claims(problem)
            assert two_stage_rule(multi, "proportional", "proportional") == pro
            assert weighted_proportional(multi, issue_size_weights) == pro
            assert two_stage_rule(multi, "cea", "proportional") == user
            assert weighted_proportional(multi, equal_issue_weights) == user
            checked += 1
        assert checked == 1000


# The property matrix the implementation is expected to reproduce.  Each
# triple is (index, property, expected to hold).  Three further cells are
# handled by the strict-xfail tests at the bottom of this file.
MATRIX_CELLS = [
    (PRO_RATA, HOMOGENEITY, True),
    (PRO_RATA, ADDITIVITY, True),
    (PRO_RATA, EQUAL_INDIVIDUAL_IMPACT, True),
    (PRO_RATA, EQUAL_GLOBAL_IMPACT, False),
    (PRO_RATA, REASONABLE_LOWER_BOUND, False),
    (PRO_RATA, CLICK_FRAUD_PROOFNESS, False),
    (PRO_RATA, CORE_SELECTION, False),
    (USER_CENTRIC, HOMOGENEITY, True),
    (USER_CENTRIC, ADDITIVITY, True),
    (USER_CENTRIC, EQUAL_INDIVIDUAL_IMPACT, False),
    (USER_CENTRIC, EQUAL_GLOBAL_IMPACT, True),
    (USER_CENTRIC, REASONABLE_LOWER_BOUND, True),
    (USER_CENTRIC, CLICK_FRAUD_PROOFNESS, True),
    (USER_CENTRIC, CORE_SELECTION, True),
    (UNIFORM, HOMOGENEITY, False),
    (UNIFORM, EQUAL_GLOBAL_IMPACT, True),
    (PADDED_SHARE, HOMOGENEITY, True),
    (PADDED_SHARE, ADDITIVITY, False),
    (SQUARED_STREAMS, HOMOGENEITY, False),
    (SQUARED_STREAMS, ADDITIVITY, True),
    (SQUARED_STREAMS, EQUAL_INDIVIDUAL_IMPACT, True),
    (STREAM_SHARE, HOMOGENEITY, True),
    (STREAM_SHARE, ADDITIVITY, False),
    (STREAM_SHARE, EQUAL_GLOBAL_IMPACT, True),
    (EQUAL_SPLIT, HOMOGENEITY, False),
    (EQUAL_SPLIT, ADDITIVITY, True),
    (EQUAL_SPLIT, CORE_SELECTION, True),
]


def test_criterion_07_property_matrix():
    with criterion(7, "27 property-matrix cells reproduced at budget 1000 with "
                      "exhaustive premises; failures recheck from their witnesses "
                      "(3 contested cells live in the xfail companions)"):
        for index, axiom, expected in MATRIX_CELLS:
            matrix = axiom_matrix([index], [axiom], budget=1000)
            verdict = matrix[(index.name, axiom)]
            if expected:
                assert verdict.status is Status.PASS, (
                    f"{index.name} / {axiom}: {verdict.detail}")
            else:
                assert verdict.status is Status.FAIL, (
                    f"{index.name} / {axiom} did not fail: {verdict.detail}")
                assert recheck_witness(index, verdict), (
                    f"{index.name} / {axiom}: witness did not reproduce")


def test_criterion_08_game_structure():
    with criterion(8, "streaming games are supermodular; dividends equal the "
                      "fee-scaled audience histogram and rebuild the worth table"):
        problems = ProblemGenerator(seed=88, max_artists=6, max_users=6).sample(300)
        for problem in problems:
            g = streaming_game(problem)
            assert is_supermodular(g)
            dividends = harsanyi_dividends(g)
            histogram = Counter(listened_mask(problem, u) for u in problem.users)
            for mask in range(1 << problem.artist_count):
                value = dividends.of(mask)
                assert value == histogram.get(mask, 0) * problem.fee
                assert value >= 0
            assert reconstruct_from_dividends(dividends).values == g.values


def test_criterion_09_reasonable_lower_bound():
    with criterion(9, "user-centric clears the group floor for every user "
                      "coalition on 400 problems; pro-rata pays the lone fan's "
                      "artist 1/5 against a floor of 1"):
        for problem in ProblemGenerator(seed=99, max_artists=5, max_users=6).sample(400):
            assert check_reasonable_lower_bound_all(USER_CENTRIC, problem).passed

        p = two_user_problem()
        verdict = check_reasonable_lower_bound_all(PRO_RATA, p)
        assert verdict.failed
        assert verdict.witness["coalition"] == ["a"]
        assert Fraction(verdict.witness["reached_amount"]) == F(1, 5)
        assert Fraction(verdict.witness["floor"]) == 1


def test_criterion_10_scaling_and_roundtrip():
    with criterion(10, "rewards ignore index rescaling for every built-in method, "
                       "and parse/serialize is the identity in both formats"):
        rng = random.Random(1010)
        catalog = list(standard_indices(2, 5).values())
        for problem in ProblemGenerator(seed=1010, max_artists=5, max_users=6).sample(200):
            factor = F(rng.randint(1, 99), rng.randint(1, 99))
            for index in catalog:
                values = index(problem)
                assert rewards(problem, values.scaled(factor)).as_dict() == rewards(
                    problem, values).as_dict()
            assert parse_problem(serialize_problem(problem, "json"), "json") == problem
            assert parse_problem(serialize_problem(problem, "csv"), "csv") == problem


# -- contested reference-index cells -------------------------------------
#
# Three behaviors often ascribed to the reference indices do not hold.
# Each strict xfail below asserts the ascribed behavior, so the suite
# records the contradiction without going red; the test after them pins
# the violations as reproducible witnesses.

CONTESTED_CELLS = [
    (UNIFORM, ADDITIVITY,
     "splitting any market doubles the all-ones score: each part scores 1 "
     "per artist, the whole scores 1, and 1 != 2"),
    (PADDED_SHARE, EQUAL_INDIVIDUAL_IMPACT,
     "two users with equal counts for an artist can shift the padding "
     "denominators differently; streams [[1,1],[1,2]] is a witness"),
    (PADDED_SHARE, CORE_SELECTION,
     "a coalition can be paid less than its worth; one lopsided catalog "
     "with a dominant artist blocks the payout"),
]


@pytest.mark.parametrize(
    "index,axiom,reason",
    CONTESTED_CELLS,
    ids=[f"{ix.name}-{ax}" for ix, ax, _ in CONTESTED_CELLS],
)
@pytest.mark.xfail(strict=True,
                   reason="refuted by direct computation; see the pinning test")
def test_contested_cell_would_hold(index, axiom, reason):
    matrix = axiom_matrix([index], [axiom], budget=300)
    assert matrix[(index.name, axiom)].status is Status.PASS, reason


@pytest.mark.parametrize(
    "index,axiom,reason",
    CONTESTED_CELLS,
    ids=[f"{ix.name}-{ax}" for ix, ax, _ in CONTESTED_CELLS],
)
def test_contested_cell_violation_is_pinned(index, axiom, reason):
    matrix = axiom_matrix([index], [axiom], budget=300)
    verdict = matrix[(index.name, axiom)]
    assert verdict.status is Status.FAIL, reason
    assert recheck_witness(index, verdict)
