"""Between the two extremes: weights per user.

Every scheme here is a weighted index: artist i scores the sum over users
of (weight of the user) x (streams by that user).  Weight 1 for everyone
recovers pro-rata; weight 1/total recovers user-centric.  The banded
system interpolates with two thresholds alpha <= beta:

    light users  (total <= alpha)          keep weight 1/total
    medium users (alpha < total <= beta)   get the flat weight 1/alpha
    heavy users  (total > beta)            are damped to beta/(alpha*total)

so a bot spinning one track a million times stops dominating the pool.
"""
from streamshare import (
    PRO_RATA,
    USER_CENTRIC,
    WeightSystem,
    banded_index,
    decimal_display,
    new_problem,
    rewards,
    weighted_index,
)

problem = new_problem(
    artists=["1", "2"],
    users=["a", "b", "c"],
    streams=[[10, 0, 5], [0, 90, 35]],
)

banded = banded_index(20, 60)

print("user totals:", {u: problem.user_total(u) for u in problem.users})
print("with alpha=20 and beta=60: a is light, c is medium, b is heavy")
print()

header = f"{'method':<14} {'artist 1':>12} {'artist 2':>12}"
print(header)
print("-" * len(header))
for index in (PRO_RATA, banded, USER_CENTRIC):
    payout = rewards(problem, index(problem))
    print(f"{index.name:<14} {str(payout['1']):>12} {str(payout['2']):>12}")
print()

payout = rewards(problem, banded(problem))
print("banded rewards in decimals:",
      ", ".join(decimal_display(payout[a], 2) for a in problem.artists))
print()

# The reductions are exact, not approximate: plugging the constant weight
# into the machinery reproduces pro-rata to the last digit.
ones = WeightSystem("ones", lambda user, profile: 1)
assert weighted_index(problem, ones).as_dict() == PRO_RATA(problem).as_dict()

inverse = WeightSystem("inverse-total", lambda user, profile: 1 / sum(profile))
try:
    weighted_index(problem, inverse)
except Exception as exc:  # 1 / int is a float, and floats are banned
    print(f"floats are rejected outright: {exc}")

from fractions import Fraction

inverse = WeightSystem("inverse-total",
                       lambda user, profile: Fraction(1, sum(profile)))
assert weighted_index(problem, inverse).as_dict() == USER_CENTRIC(problem).as_dict()
print("weight 1 == pro-rata and weight 1/total == user-centric, exactly")
