"""Allocation indices and the reward rule that turns scores into money.

An index assigns every artist a nonnegative score; rewards are the scores
normalized to the platform revenue.  Two indices with proportional scores
therefore pay identically.  Besides the two standard schemes (pro-rata and
user-centric) this module ships a parametric family driven by per-user
weight functions, the banded compromise weights, and five deliberately
flawed reference indices used by the fairness checks in
:mod:`streamshare.axioms`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, Mapping

from .model import Allocation, IndexValues, StreamingProblem, UnknownUser, as_rational


class NonPositiveWeight(ValueError):
    """A weight function returned a weight that is not a positive rational."""


class ZeroIndexSum(ValueError):
    """Rewards are undefined when every artist scores zero."""


@dataclass(frozen=True)
class Index:
    """A named allocation index: problem in, per-artist scores out."""

    name: str
    compute: Callable[[StreamingProblem], IndexValues]

    def __call__(self, problem: StreamingProblem) -> IndexValues:
        return self.compute(problem)

    def __repr__(self) -> str:
        return f"Index({self.name!r})"


@dataclass(frozen=True)
class WeightSystem:
    """Per-user weights for the weighted index family.

    ``weight(user, profile)`` receives the user's identifier and their
    column of stream counts and must return a strictly positive rational.
    The profile argument lets a weight depend on listening volume without
    seeing the rest of the matrix.
    """

    name: str
    weight: Callable[[str, tuple[int, ...]], Fraction | int]

    def __call__(self, user: str, profile: tuple[int, ...]) -> Fraction:
        value = self.weight(user, profile)
        if isinstance(value, bool) or not isinstance(value, Rational):
            raise NonPositiveWeight(
                f"weight system {self.name!r} returned non-rational {value!r} for user {user!r}")
        value = Fraction(value)
        if value <= 0:
            raise NonPositiveWeight(
                f"weight system {self.name!r} returned {value} for user {user!r}")
        return value


@dataclass(frozen=True)
class BandedWeightParams:
    """Band edges for the banded weight system.  Requires 0 < alpha <= beta."""

    alpha: int
    beta: int

    def __post_init__(self):
        for name, value in (("alpha", self.alpha), ("beta", self.beta)):
            if isinstance(value, bool) or not isinstance(value, int):
                raise ValueError(f"{name} must be an integer, got {value!r}")
        if not 0 < self.alpha <= self.beta:
            raise ValueError(
                f"need 0 < alpha <= beta, got alpha={self.alpha}, beta={self.beta}")


def pro_rata_index(problem: StreamingProblem) -> IndexValues:
    """Score each artist by their total stream count."""
    scores = tuple(Fraction(sum(row)) for row in problem.streams)
    return IndexValues(problem.artists, scores)


def user_centric_index(problem: StreamingProblem) -> IndexValues:
    """Give each artist the sum of their shares of each user's listening.

    Every user contributes exactly one unit, split over the artists they
    streamed in proportion to their own counts, so the scores total the
    number of users.
    """
    totals = [problem.user_total(u) for u in problem.users]
    scores = []
    for row in problem.streams:
        scores.append(sum((Fraction(c, t) for c, t in zip(row, totals) if c), Fraction(0)))
    return IndexValues(problem.artists, tuple(scores))


def weighted_index(problem: StreamingProblem, weights: WeightSystem) -> IndexValues:
    """Score artists by weighted stream counts, one weight per user."""
    per_user = [weights(u, problem.profile(u)) for u in problem.users]
    scores = []
    for row in problem.streams:
        scores.append(sum((w * c for w, c in zip(per_user, row) if c), Fraction(0)))
    return IndexValues(problem.artists, tuple(scores))


def banded_weight_system(params: BandedWeightParams) -> WeightSystem:
    """Weights that mute both very light and very heavy listeners.

    With band edges ``alpha <= beta`` and a user whose streams total ``s``:
    below the band each stream carries ``1/s`` (the user splits one unit,
    as in the user-centric index); inside the band it carries ``1/alpha``
    (pure per-stream pay, as in pro-rata up to scale); above the band it
    carries ``beta/(alpha*s)``, capping how much weight heavy listeners
    can pour onto their artists.
    """
    alpha, beta = params.alpha, params.beta

    def weight(user: str, profile: tuple[int, ...]) -> Fraction:
        s = sum(profile)
        if s <= alpha:
            return Fraction(1, s)
        if s <= beta:
            return Fraction(1, alpha)
        return Fraction(beta, alpha * s)

    return WeightSystem(f"banded({alpha},{beta})", weight)


def table_weight_system(table: Mapping[str, int | str | Fraction]) -> WeightSystem:
    """Fixed per-user weights looked up from a mapping."""
    converted = {u: as_rational(w, f"weight for user {u!r}") for u, w in table.items()}

    def weight(user: str, profile: tuple[int, ...]) -> Fraction:
        try:
            return converted[user]
        except KeyError:
            raise UnknownUser(user) from None

    return WeightSystem("table", weight)


def rewards(problem: StreamingProblem, values: IndexValues) -> Allocation:
    """Divide the revenue in proportion to the index scores.

    The payout vector is ``revenue * score / total_score``, so it is
    invariant under scaling all scores by the same positive rational.
    """
    if values.artists != problem.artists:
        raise ValueError("index values computed for different artists")
    total = values.total
    if total <= 0:
        raise ZeroIndexSum("cannot divide revenue over an all-zero index")
    revenue = problem.revenue
    return Allocation(problem.artists,
                      tuple(s * revenue / total for s in values.scores))


# -- reference indices with known defects --------------------------------
#
# Each of these is a plausible-looking scheme that breaks at least one of
# the fairness properties in streamshare.axioms.  They exist to exercise
# the checkers, not to be used for payment.

def uniform_index(problem: StreamingProblem) -> IndexValues:
    """Every artist scores 1, no matter what anybody streamed."""
    return IndexValues(problem.artists, tuple(Fraction(1) for _ in problem.artists))


def padded_share_index(problem: StreamingProblem) -> IndexValues:
    """Each cell is padded with the artist's total before normalizing.

    Score of artist i is the sum over users j of
    ``(count(i,j) + total(i)) / (user_total(j) + grand_total)``.
    """
    grand = problem.total_streams
    row_totals = [sum(row) for row in problem.streams]
    col_totals = [problem.user_total(u) for u in problem.users]
    scores = []
    for row, rt in zip(problem.streams, row_totals):
        scores.append(sum((Fraction(c + rt, ct + grand) for c, ct in zip(row, col_totals)),
                          Fraction(0)))
    return IndexValues(problem.artists, tuple(scores))


def squared_streams_index(problem: StreamingProblem) -> IndexValues:
    """Score each artist by the sum of squared per-user counts."""
    scores = tuple(Fraction(sum(c * c for c in row)) for row in problem.streams)
    return IndexValues(problem.artists, scores)


def stream_share_index(problem: StreamingProblem) -> IndexValues:
    """The artist's share of all streams, scaled by the user count."""
    grand = problem.total_streams
    m = problem.user_count
    scores = tuple(Fraction(sum(row) * m, grand) for row in problem.streams)
    return IndexValues(problem.artists, scores)


def equal_split_index(problem: StreamingProblem) -> IndexValues:
    """Each user splits one unit equally over the artists they streamed."""
    sizes = [len(problem.listened_set(u)) for u in problem.users]
    scores = []
    for row in problem.streams:
        scores.append(sum((Fraction(1, k) for c, k in zip(row, sizes) if c), Fraction(0)))
    return IndexValues(problem.artists, tuple(scores))


PRO_RATA = Index("pro-rata", pro_rata_index)
USER_CENTRIC = Index("user-centric", user_centric_index)
UNIFORM = Index("uniform", uniform_index)
PADDED_SHARE = Index("padded-share", padded_share_index)
SQUARED_STREAMS = Index("squared-streams", squared_streams_index)
STREAM_SHARE = Index("stream-share", stream_share_index)
EQUAL_SPLIT = Index("equal-split", equal_split_index)

REFERENCE_INDICES: tuple[Index, ...] = (
    UNIFORM, PADDED_SHARE, SQUARED_STREAMS, STREAM_SHARE, EQUAL_SPLIT)


def banded_index(alpha: int, beta: int) -> Index:
    """First-class banded index for a fixed pair of band edges."""
    system = banded_weight_system(BandedWeightParams(alpha, beta))
    return Index(system.name, lambda p: weighted_index(p, system))


def index_from_weights(weights: WeightSystem) -> Index:
    """Wrap a weight system as a named index."""
    return Index(f"weighted[{weights.name}]", lambda p: weighted_index(p, weights))


def standard_indices(alpha: int | None = None, beta: int | None = None) -> dict[str, Index]:
    """All built-in indices by name, including banded when edges are given."""
    catalog = {idx.name: idx for idx in (PRO_RATA, USER_CENTRIC, *REFERENCE_INDICES)}
    if alpha is not None and beta is not None:
        banded = banded_index(alpha, beta)
        catalog[banded.name] = banded
        catalog["banded"] = banded
    return catalog
