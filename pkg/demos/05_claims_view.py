"""The same payouts, rediscovered as rationing rules.

Forget streaming for a moment.  A bankrupt estate E faces claims c with
sum(c) >= E.  The proportional rule pays everyone the same fraction of
their claim; constrained equal awards (CEA) pays min(level, claim) with
the level chosen to exhaust the estate, favoring small claimants.

A streaming problem is a claims problem in disguise: users are issues,
stream counts are claims, the revenue is the estate.  Ration in two
stages (first across users, then within each user's column) and the two
standard payouts drop out:

    proportional, then proportional  ->  pro-rata
    CEA, then proportional           ->  user-centric

The second line works because every user claims at least the fee in
total, so CEA's water level across users IS the fee.
"""
from fractions import Fraction

from streamshare import (
    BankruptcyProblem,
    PRO_RATA,
    USER_CENTRIC,
    cea_rule,
    new_problem,
    proportional_rule,
    rewards,
    streaming_to_claims,
    two_stage_rule,
)

# -- plain rationing ------------------------------------------------------
estate = BankruptcyProblem(agents=("x", "y"), claims=(Fraction(1), Fraction(5)),
                           endowment=Fraction(4))
print("claims (1, 5) on an estate of 4:")
print(f"  proportional: {proportional_rule(estate)}")
awards, level = cea_rule(estate)
print(f"  CEA: {awards} (water level {level})")
print()

# -- streaming as rationing -------------------------------------------------
problem = new_problem(["1", "2"], ["a", "b", "c"], [[10, 0, 5], [0, 90, 35]])
multi = streaming_to_claims(problem)
print(f"streaming problem: issues {multi.issues}, estate {multi.endowment}")

pro_rata = tuple(rewards(problem, PRO_RATA(problem))[a] for a in problem.artists)
user_centric = tuple(rewards(problem, USER_CENTRIC(problem))[a]
                     for a in problem.artists)

pp = two_stage_rule(multi, "proportional", "proportional")
cp = two_stage_rule(multi, "cea", "proportional")

print(f"  proportional then proportional: {pp}")
print(f"  matches pro-rata rewards:       {pp == pro_rata}")
print(f"  CEA then proportional:          {cp}")
print(f"  matches user-centric rewards:   {cp == user_centric}")
print()

stage_one = BankruptcyProblem(multi.issues, multi.issue_totals(), multi.endowment)
_, level = cea_rule(stage_one)
print(f"CEA water level across users: {level} (exactly the fee {problem.fee})")
