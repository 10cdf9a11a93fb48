"""A first tour: one catalog, two ways to pay the artists.

Artist 1 has a single devoted fan; artist 2 has one heavy listener.  Both
users pay the same subscription fee, so how should the pot be split?  The
pro-rata scheme pools every stream into one big pool; the user-centric
scheme splits each user's own fee across what that user actually played.
"""
from fractions import Fraction

from streamshare import (
    PRO_RATA,
    USER_CENTRIC,
    decimal_display,
    new_problem,
    rewards,
    serialize_problem,
)

problem = new_problem(
    artists=["1", "2"],
    users=["a", "b"],
    streams=[[10, 0], [0, 90]],
    fee=1,
)

print("the catalog, as CSV:")
print(serialize_problem(problem, "csv"))

print(f"revenue to divide: {problem.revenue} (two users, fee {problem.fee})")
print()

for index in (PRO_RATA, USER_CENTRIC):
    values = index(problem)
    payout = rewards(problem, values)
    print(f"{index.name}:")
    for artist in problem.artists:
        share = decimal_display(payout[artist], 2)
        print(f"  artist {artist}: index {values[artist]}, reward {payout[artist]} ({share})")
    print()

print("Note the swing: artist 1's lone fan pays a full fee, but pro-rata")
print("hands most of it to artist 2's heavy listener.  User-centric keeps")
print("each fee with the artists its payer actually streamed.")

# Everything above is exact rational arithmetic; the decimals are display
# only.  Try editing the matrix and re-running.
assert rewards(problem, PRO_RATA(problem))["1"] == Fraction(1, 5)
assert rewards(problem, USER_CENTRIC(problem))["1"] == 1
