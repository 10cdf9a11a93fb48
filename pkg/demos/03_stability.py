"""Coalitions, dividends, and two independent stability oracles.

Give each artist coalition S the revenue of the users it fully covers:
v(S) counts users whose entire listening happened inside S.  An
allocation is stable ("in the core") when no coalition is paid less than
its own worth, so nobody gains by walking out together.

Two oracles decide membership here.  One enumerates every coalition.
The other never looks at coalitions at all: it tries to route each
user's fee through a flow network to the artists that user streamed.
They always agree, and the test suite hammers on that agreement with
thousands of random allocations.
"""
from streamshare import (
    PRO_RATA,
    USER_CENTRIC,
    harsanyi_dividends,
    in_core_direct,
    in_core_flow,
    is_supermodular,
    new_problem,
    rewards,
    streaming_game,
)

problem = new_problem(["1", "2"], ["a", "b"], [[10, 0], [0, 90]])
game = streaming_game(problem)

print("coalition worths:")
for mask in range(1, 1 << game.player_count):
    members = ", ".join(game.coalition_members(mask))
    print(f"  v({{{members}}}) = {game.value(mask)}")

print()
print("harsanyi dividends (one per exact audience):")
for mask, value in harsanyi_dividends(game).nonzero():
    members = ", ".join(game.coalition_members(mask))
    print(f"  {{{members}}}: {value}")

print()
print(f"supermodular: {bool(is_supermodular(game))}")
print()

for index in (PRO_RATA, USER_CENTRIC):
    payout = rewards(problem, index(problem))
    direct = in_core_direct(game, payout)
    flow = in_core_flow(problem, payout)
    assert direct.in_core == flow.in_core
    print(f"{index.name} pays {dict(payout.as_dict())}")
    if direct.in_core:
        print("  stable; per-user fee routing found by the flow oracle:")
        for user, row in zip(problem.users, flow.decomposition.shares):
            parts = ", ".join(f"{a}={x}" for a, x in zip(problem.artists, row) if x)
            print(f"    {user}: {parts}")
    else:
        blockers = sorted(direct.blocking_coalition)
        worth = game.value(game.mask_of(blockers))
        paid = sum(payout[a] for a in blockers)
        print(f"  blocked by {blockers}: paid {paid}, worth {worth}")
    print()
