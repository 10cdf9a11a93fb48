"""Shared builders and samplers for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

from streamshare import StreamingProblem, new_problem


def two_user_problem(fee: int | Fraction = 1) -> StreamingProblem:
    """Two artists, two users: artist 1 has a lone fan, artist 2 a heavy one."""
    return new_problem(["1", "2"], ["a", "b"], [[10, 0], [0, 90]], fee=fee)


def three_user_problem(fee: int | Fraction = 1) -> StreamingProblem:
    """The two-user matrix plus a third user who streams both artists."""
    return new_problem(["1", "2"], ["a", "b", "c"], [[10, 0, 5], [0, 90, 35]], fee=fee)


def random_member(problem: StreamingProblem, rng: random.Random) -> list[Fraction]:
    """A random allocation built user by user, so it sits in the core.

    Each user's fee is split across the artists that user listened to,
    with random nonnegative integer weights (at least one positive).
    """
    amounts = [Fraction(0)] * problem.artist_count
    for user in problem.users:
        listened = [
            i for i, a in enumerate(problem.artists) if a in problem.listened_set(user)
        ]
        weights = [rng.randint(0, 5) for _ in listened]
        if not any(weights):
            weights[rng.randrange(len(listened))] = 1
        total = sum(weights)
        for i, w in zip(listened, weights):
            amounts[i] += Fraction(w, total) * problem.fee
    return amounts


def perturbed_allocation(problem: StreamingProblem, rng: random.Random) -> list[Fraction]:
    """A core member with a few random transfers applied; may leave the core."""
    amounts = random_member(problem, rng)
    n = len(amounts)
    for _ in range(rng.randint(1, 3)):
        i, k = rng.randrange(n), rng.randrange(n)
        shift = Fraction(rng.randint(1, 4), rng.randint(1, 7))
        amounts[i] += shift
        amounts[k] -= shift
    return amounts


def resampled_column(
    problem: StreamingProblem, user: str, rng: random.Random
) -> StreamingProblem:
    """Replace one user's column with a fresh random nonzero column."""
    j = problem.user_index(user)
    high = max(9, max(max(row) for row in problem.streams))
    while True:
        column = [
            rng.randint(1, high) if rng.random() < 0.5 else 0
            for _ in range(problem.artist_count)
        ]
        if any(column):
            break
    streams = tuple(
        tuple(column[i] if k == j else cell for k, cell in enumerate(row))
        for i, row in enumerate(problem.streams)
    )
    return StreamingProblem(problem.artists, problem.users, streams, problem.fee)
