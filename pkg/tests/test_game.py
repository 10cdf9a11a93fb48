from __future__ import annotations

import random
from collections import Counter
from fractions import Fraction

import pytest

from streamshare import (
    Allocation,
    CoalitionalGame,
    NotInCore,
    PRO_RATA,
    TooManyPlayers,
    USER_CENTRIC,
    extract_decomposition,
    harsanyi_dividends,
    in_core_direct,
    in_core_flow,
    in_domain_pstar,
    is_supermodular,
    new_problem,
    reconstruct_from_dividends,
    rewards,
    streaming_game,
)
from streamshare.axioms import ProblemGenerator
from streamshare.game import (
    decomposition_to_dict,
    dividends_to_dict,
    game_to_dict,
    listened_mask,
)

from helpers import perturbed_allocation, random_member

F = Fraction


def brute_worth(problem, coalition: set[str]) -> Fraction:
    """Independent oracle: count users whose whole listening sits inside."""
    covered = sum(
        1 for u in problem.users if problem.listened_set(u) <= coalition
    )
    return covered * problem.fee


# -- game construction ----------------------------------------------------


def test_two_user_worth_table(two_user):
    g = streaming_game(two_user)
    assert g.players == ("1", "2")
    assert [g.values[m] for m in range(4)] == [0, 1, 1, 2]
    assert g.grand_value == two_user.revenue


def test_three_user_worth_table(three_user):
    g = streaming_game(three_user)
    assert g.value(g.mask_of({"1"})) == 1
    assert g.value(g.mask_of({"2"})) == 1
    assert g.grand_value == 3


def test_worth_matches_brute_force_generated():
    for problem in ProblemGenerator(seed=21, max_artists=5).sample(40):
        g = streaming_game(problem)
        for mask in range(1 << problem.artist_count):
            members = set(g.coalition_members(mask))
            assert g.value(mask) == brute_worth(problem, members)


def test_listened_mask(three_user):
    assert listened_mask(three_user, "a") == 0b01
    assert listened_mask(three_user, "b") == 0b10
    assert listened_mask(three_user, "c") == 0b11


def test_game_scales_with_fee(two_user):
    g = streaming_game(two_user.with_fee("1/2"))
    assert [g.values[m] for m in range(4)] == [0, F(1, 2), F(1, 2), 1]


def test_game_validation():
    with pytest.raises(ValueError):
        CoalitionalGame(("1",), (F(1), F(1)))  # empty coalition must be 0
    with pytest.raises(ValueError):
        CoalitionalGame(("1",), (F(0),))  # wrong table length
    with pytest.raises(ValueError):
        CoalitionalGame(("1", "1"), (F(0),) * 4)


def test_too_many_players():
    artists = [f"a{i}" for i in range(21)]
    streams = [[1] for _ in range(21)]
    problem = new_problem(artists, ["u"], streams)
    with pytest.raises(TooManyPlayers):
        streaming_game(problem)
    with pytest.raises(TooManyPlayers):
        CoalitionalGame(tuple(f"p{i}" for i in range(21)), (F(0),) * (1 << 21))


# -- supermodularity --------------------------------------------------------


def test_streaming_games_are_supermodular_generated():
    for problem in ProblemGenerator(seed=22).sample(60):
        assert is_supermodular(streaming_game(problem))


def test_supermodularity_witness_on_handmade_game():
    # v({1}) = v({2}) = v({1,2}) = 1 violates increasing returns
    g = CoalitionalGame(("1", "2"), (F(0), F(1), F(1), F(1)))
    result = is_supermodular(g)
    assert not result
    small, large, bit = result.witness
    assert bit & (bit - 1) == 0  # a single player, as a one-bit mask
    assert small & bit == 0 and large & bit == 0
    assert small & large == small  # small is a subset of large
    gain_small = g.values[small | bit] - g.values[small]
    gain_large = g.values[large | bit] - g.values[large]
    assert gain_large < gain_small


# -- dividends ----------------------------------------------------------------


def test_dividends_count_exact_audiences(three_user):
    dv = harsanyi_dividends(streaming_game(three_user))
    assert dv.of(0b01) == 1  # user a only
    assert dv.of(0b10) == 1  # user b only
    assert dv.of(0b11) == 1  # user c streams both
    assert dv.of(0b00) == 0


def test_dividends_match_histogram_generated():
    for problem in ProblemGenerator(seed=23).sample(60):
        g = streaming_game(problem)
        dv = harsanyi_dividends(g)
        hist = Counter(listened_mask(problem, u) for u in problem.users)
        for mask in range(1 << problem.artist_count):
            assert dv.of(mask) == hist.get(mask, 0) * problem.fee
        assert reconstruct_from_dividends(dv).values == g.values


def test_dividends_nonzero_listing(two_user):
    dv = harsanyi_dividends(streaming_game(two_user))
    assert dv.nonzero() == [(0b01, F(1)), (0b10, F(1))]


def test_reconstruct_from_mapping():
    g = reconstruct_from_dividends({0b11: F(1)}, players=("x", "y"))
    # a single joint dividend behaves like a unanimity game
    assert g.values == (F(0), F(0), F(0), F(1))
    with pytest.raises(ValueError):
        reconstruct_from_dividends({0b1: F(1)})


# -- core oracles ---------------------------------------------------------------


def test_pro_rata_two_user_rejected_by_both(two_user):
    g = streaming_game(two_user)
    pay = rewards(two_user, PRO_RATA(two_user))
    direct = in_core_direct(g, pay)
    assert not direct and direct.efficient
    assert direct.blocking_coalition == {"1"}
    flow = in_core_flow(two_user, pay)
    assert not flow and flow.decomposition is None
    with pytest.raises(NotInCore):
        extract_decomposition(two_user, pay)


def test_user_centric_two_user_accepted_by_both(two_user):
    g = streaming_game(two_user)
    pay = rewards(two_user, USER_CENTRIC(two_user))
    assert in_core_direct(g, pay)
    flow = in_core_flow(two_user, pay)
    assert flow
    flow.decomposition.validate(two_user)
    assert flow.decomposition.allocation().as_dict() == pay.as_dict()


def test_wrong_total_fails_efficiency(two_user):
    g = streaming_game(two_user)
    result = in_core_direct(g, [F(1), F(2)])
    assert not result and not result.efficient and result.blocking_mask is None
    flow = in_core_flow(two_user, [F(1), F(2)])
    assert not flow and "sum" in flow.reason


def test_negative_amount_screened(two_user):
    flow = in_core_flow(two_user, [F(-1), F(3)])
    assert not flow and flow.reason == "negative amount"


def test_direct_reports_smallest_blocking_mask():
    # artist 2 is underpaid; {2} has mask 0b10, smaller than {1,2}
    g = CoalitionalGame(("1", "2"), (F(0), F(0), F(1), F(2)))
    result = in_core_direct(g, [F(2), F(0)])
    assert result.blocking_mask == 0b10


def test_allocation_object_accepted(two_user):
    g = streaming_game(two_user)
    pay = Allocation(("1", "2"), (F(1), F(1)))
    assert in_core_direct(g, pay)
    assert in_core_flow(two_user, pay)


def test_oracles_agree_on_random_allocations():
    rng = random.Random(99)
    checked = 0
    for problem in ProblemGenerator(seed=24).sample(80):
        g = streaming_game(problem)
        for _ in range(4):
            member = random_member(problem, rng)
            assert in_core_direct(g, member)
            assert in_core_flow(problem, member)
            probe = perturbed_allocation(problem, rng)
            assert bool(in_core_direct(g, probe)) == bool(in_core_flow(problem, probe))
            checked += 2
    assert checked >= 300


def test_flow_decompositions_validate():
    rng = random.Random(5)
    for problem in ProblemGenerator(seed=25).sample(40):
        member = random_member(problem, rng)
        result = in_core_flow(problem, member)
        assert result
        result.decomposition.validate(problem)
        assert result.decomposition.allocation().as_dict() == dict(
            zip(problem.artists, member)
        )


def test_core_verdict_invariant_under_fee_scaling(two_user):
    pay = rewards(two_user, USER_CENTRIC(two_user))
    scaled = two_user.with_fee(3)
    tripled = [3 * x for x in (pay["1"], pay["2"])]
    assert in_core_flow(scaled, tripled)
    assert in_core_direct(streaming_game(scaled), tripled)


def test_decomposition_validate_rejects_mismatch(two_user, three_user):
    result = in_core_flow(two_user, [F(1), F(1)])
    with pytest.raises(ValueError):
        result.decomposition.validate(three_user)
    with pytest.raises(ValueError):
        result.decomposition.validate(two_user.with_fee(2))


def test_fractional_fee_flow(two_user):
    p = two_user.with_fee("1/3")
    pay = rewards(p, USER_CENTRIC(p))
    result = in_core_flow(p, pay)
    assert result
    result.decomposition.validate(p)


# -- restricted domain ----------------------------------------------------------


def test_domain_membership(two_user, three_user):
    assert not in_domain_pstar(two_user)  # only two users
    assert not in_domain_pstar(three_user)  # user c reaches everyone
    wide = new_problem(
        ["1", "2", "3"],
        ["a", "b", "c"],
        [[1, 0, 0], [0, 1, 1], [0, 1, 0]],
    )
    assert in_domain_pstar(wide)


# -- serialization ----------------------------------------------------------------


def test_game_to_dict(two_user):
    payload = game_to_dict(streaming_game(two_user))
    assert payload["values"] == {"1": "1", "2": "1", "1,2": "2"}


def test_dividends_to_dict(three_user):
    payload = dividends_to_dict(harsanyi_dividends(streaming_game(three_user)))
    assert payload["dividends"] == {"1": "1", "2": "1", "1,2": "1"}


def test_decomposition_to_dict(two_user):
    result = in_core_flow(two_user, [F(1), F(1)])
    payload = decomposition_to_dict(result.decomposition)
    assert payload["shares"]["a"] == ["1", "0"]
    assert payload["shares"]["b"] == ["0", "1"]
