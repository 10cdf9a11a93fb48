"""Fairness properties of allocation indices, checked by direct computation.

Every property here is universally quantified over problems, so a checker
can refute an index (by exhibiting a concrete witness) but can only report
that no violation was found within a search budget.  Failed verdicts carry
a witness payload complete enough to re-run the violated inequality from
scratch; see :func:`recheck_witness`.

On any single instance, premise-bearing properties are checked against
every premise tuple the instance supports (all proportional row pairs, all
user splits, and so on).  Instances too small to state a property count as
not-applicable, never as passes.
"""
from __future__ import annotations

import random
import string
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from itertools import islice
from typing import Iterator, Mapping, Sequence

from . import game as game_mod
from .indices import Index, rewards
from .model import (
    InvalidPartition,
    StreamingProblem,
    new_problem,
    problem_from_dict,
    problem_to_dict,
)

HOMOGENEITY = "homogeneity"
ADDITIVITY = "additivity"
EQUAL_INDIVIDUAL_IMPACT = "equal-individual-impact"
EQUAL_GLOBAL_IMPACT = "equal-global-impact"
REASONABLE_LOWER_BOUND = "reasonable-lower-bound"
CLICK_FRAUD_PROOFNESS = "click-fraud-proofness"
CORE_SELECTION = "core-selection"

AXIOM_NAMES: tuple[str, ...] = (
    HOMOGENEITY,
    ADDITIVITY,
    EQUAL_INDIVIDUAL_IMPACT,
    EQUAL_GLOBAL_IMPACT,
    REASONABLE_LOWER_BOUND,
    CLICK_FRAUD_PROOFNESS,
    CORE_SELECTION,
)

_AXIOM_ALIASES = {
    "click-fraud": CLICK_FRAUD_PROOFNESS,
    "eii": EQUAL_INDIVIDUAL_IMPACT,
    "egi": EQUAL_GLOBAL_IMPACT,
    "rlb": REASONABLE_LOWER_BOUND,
}


def normalize_axiom(name: str) -> str:
    canon = _AXIOM_ALIASES.get(name, name)
    if canon not in AXIOM_NAMES:
        raise ValueError(f"unknown axiom {name!r}; expected one of {AXIOM_NAMES}")
    return canon


class PremiseViolated(ValueError):
    """The supplied arguments do not satisfy the property's premise."""


class Status(Enum):
    PASS = "pass"
    FAIL = "fail"
    NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class AxiomVerdict:
    """Outcome of checking one property for one index.

    A FAIL verdict always carries a witness: the problem (and any other
    inputs) plus the two sides of the violated relation, rendered as
    strings so the payload is JSON-ready.
    """

    axiom: str
    index: str
    status: Status
    witness: Mapping | None = None
    detail: str = ""
    instances: int = 1

    @property
    def passed(self) -> bool:
        return self.status is Status.PASS

    @property
    def failed(self) -> bool:
        return self.status is Status.FAIL


def verdict_to_dict(verdict: AxiomVerdict) -> dict:
    return {
        "axiom": verdict.axiom,
        "index": verdict.index,
        "status": verdict.status.value,
        "instances": verdict.instances,
        "detail": verdict.detail,
        "witness": dict(verdict.witness) if verdict.witness is not None else None,
    }


def _pass(axiom: str, index: Index, detail: str = "") -> AxiomVerdict:
    return AxiomVerdict(axiom, index.name, Status.PASS, None, detail)


def _fail(axiom: str, index: Index, witness: Mapping, detail: str = "") -> AxiomVerdict:
    return AxiomVerdict(axiom, index.name, Status.FAIL, witness, detail)


def _na(axiom: str, index: Index, detail: str) -> AxiomVerdict:
    return AxiomVerdict(axiom, index.name, Status.NOT_APPLICABLE, None, detail)


# -- single-premise checks ----------------------------------------------

def check_homogeneity(index: Index, problem: StreamingProblem,
                      artist: str, other: str, factor: Fraction) -> AxiomVerdict:
    """One artist's row is ``factor`` times another's; their scores must be too."""
    factor = Fraction(factor)
    if factor < 0:
        raise PremiseViolated("factor must be nonnegative")
    if artist == other:
        raise PremiseViolated("need two distinct artists")
    row = problem.streams[problem.artist_index(artist)]
    row2 = problem.streams[problem.artist_index(other)]
    if any(c != factor * c2 for c, c2 in zip(row, row2)):
        raise PremiseViolated(
            f"row of {artist!r} is not {factor} times the row of {other!r}")
    values = index(problem)
    got, expected = values[artist], factor * values[other]
    if got == expected:
        return _pass(HOMOGENEITY, index)
    witness = {
        "problem": problem_to_dict(problem),
        "artist": artist,
        "other": other,
        "factor": str(factor),
        "score": str(got),
        "expected": str(expected),
    }
    return _fail(HOMOGENEITY, index, witness,
                 f"score of {artist!r} is {got}, expected {expected}")


def check_additivity(index: Index, problem: StreamingProblem,
                     first_group: Sequence[str]) -> AxiomVerdict:
    """Splitting the users into two markets must split the scores additively."""
    chosen = set(first_group)
    rest = [u for u in problem.users if u not in chosen]
    if not chosen or not rest:
        raise InvalidPartition("both sides of the user split must be nonempty")
    for u in chosen:
        problem.user_index(u)
    part1 = problem.select_users(chosen)
    part2 = problem.select_users(rest)
    whole = index(problem)
    left = index(part1)
    right = index(part2)
    for artist in problem.artists:
        total = left[artist] + right[artist]
        if whole[artist] != total:
            witness = {
                "problem": problem_to_dict(problem),
                "first_group": sorted(chosen),
                "artist": artist,
                "whole": str(whole[artist]),
                "parts_sum": str(total),
            }
            return _fail(ADDITIVITY, index, witness,
                         f"score of {artist!r} is {whole[artist]}, parts sum to {total}")
    return _pass(ADDITIVITY, index)


def check_equal_individual_impact(index: Index, problem: StreamingProblem,
                                  artist: str, user: str, other_user: str) -> AxiomVerdict:
    """Two users with the same count for an artist must matter equally to them.

    Removing either user from the problem must leave the artist with the
    same score.
    """
    if user == other_user:
        raise PremiseViolated("need two distinct users")
    i = problem.artist_index(artist)
    if (problem.streams[i][problem.user_index(user)]
            != problem.streams[i][problem.user_index(other_user)]):
        raise PremiseViolated(
            f"users {user!r} and {other_user!r} stream {artist!r} unequally")
    without_user = index(problem.remove_user(user))[artist]
    without_other = index(problem.remove_user(other_user))[artist]
    if without_user == without_other:
        return _pass(EQUAL_INDIVIDUAL_IMPACT, index)
    witness = {
        "problem": problem_to_dict(problem),
        "artist": artist,
        "user": user,
        "other_user": other_user,
        "without_user": str(without_user),
        "without_other": str(without_other),
    }
    return _fail(EQUAL_INDIVIDUAL_IMPACT, index, witness,
                 f"removing {user!r} leaves {without_user}, "
                 f"removing {other_user!r} leaves {without_other}")


def check_equal_global_impact(index: Index, problem: StreamingProblem,
                              user: str, other_user: str) -> AxiomVerdict:
    """Removing any one user must shift the total score by the same amount."""
    if user == other_user:
        raise PremiseViolated("need two distinct users")
    sum_without_user = index(problem.remove_user(user)).total
    sum_without_other = index(problem.remove_user(other_user)).total
    if sum_without_user == sum_without_other:
        return _pass(EQUAL_GLOBAL_IMPACT, index)
    witness = {
        "problem": problem_to_dict(problem),
        "user": user,
        "other_user": other_user,
        "sum_without_user": str(sum_without_user),
        "sum_without_other": str(sum_without_other),
    }
    return _fail(EQUAL_GLOBAL_IMPACT, index, witness,
                 f"total without {user!r} is {sum_without_user}, "
                 f"without {other_user!r} it is {sum_without_other}")


def check_reasonable_lower_bound(index: Index, problem: StreamingProblem,
                                 coalition: Sequence[str]) -> AxiomVerdict:
    """Artists reached by a user group must collect at least the group's fees."""
    users = list(dict.fromkeys(coalition))
    if not users:
        raise PremiseViolated("the user coalition must be nonempty")
    reached: set[str] = set()
    for user in users:
        reached |= problem.listened_set(user)
    payout = rewards(problem, index(problem))
    amount = sum((payout[a] for a in reached), Fraction(0))
    floor = len(users) * problem.fee
    if amount >= floor:
        return _pass(REASONABLE_LOWER_BOUND, index)
    witness = {
        "problem": problem_to_dict(problem),
        "coalition": sorted(users),
        "reached_amount": str(amount),
        "floor": str(floor),
    }
    return _fail(REASONABLE_LOWER_BOUND, index, witness,
                 f"artists reached by {sorted(users)} collect {amount} < {floor}")


def check_reasonable_lower_bound_all(index: Index,
                                     problem: StreamingProblem) -> AxiomVerdict:
    """Exhaust every nonempty user coalition; return the first shortfall."""
    m = problem.user_count
    payout = rewards(problem, index(problem))
    amounts = dict(zip(problem.artists, payout.amounts))
    masks = [game_mod.listened_mask(problem, u) for u in problem.users]
    for mask in range(1, 1 << m):
        reached = 0
        size = 0
        for j in range(m):
            if mask >> j & 1:
                reached |= masks[j]
                size += 1
        amount = Fraction(0)
        for i, artist in enumerate(problem.artists):
            if reached >> i & 1:
                amount += amounts[artist]
        if amount < size * problem.fee:
            coalition = [problem.users[j] for j in range(m) if mask >> j & 1]
            witness = {
                "problem": problem_to_dict(problem),
                "coalition": coalition,
                "reached_amount": str(amount),
                "floor": str(size * problem.fee),
            }
            return _fail(REASONABLE_LOWER_BOUND, index, witness,
                         f"artists reached by {coalition} collect {amount} "
                         f"< {size * problem.fee}")
    return _pass(REASONABLE_LOWER_BOUND, index)


def check_click_fraud_proofness(index: Index, problem: StreamingProblem,
                                perturbed: StreamingProblem, user: str) -> AxiomVerdict:
    """Rewriting one user's counts must not move any payout by more than a fee."""
    if (problem.artists != perturbed.artists or problem.users != perturbed.users
            or problem.fee != perturbed.fee):
        raise PremiseViolated("problems must share artists, users and fee")
    j = problem.user_index(user)
    for row, row2 in zip(problem.streams, perturbed.streams):
        changed = [k for k in range(problem.user_count)
                   if row[k] != row2[k] and k != j]
        if changed:
            raise PremiseViolated(
                f"problems differ outside the column of user {user!r}")
    before = rewards(problem, index(problem))
    after = rewards(perturbed, index(perturbed))
    for artist in problem.artists:
        shift = abs(before[artist] - after[artist])
        if shift > problem.fee:
            witness = {
                "problem": problem_to_dict(problem),
                "perturbed": problem_to_dict(perturbed),
                "user": user,
                "artist": artist,
                "difference": str(shift),
                "bound": str(problem.fee),
            }
            return _fail(CLICK_FRAUD_PROOFNESS, index, witness,
                         f"payout of {artist!r} moves by {shift} > fee {problem.fee}")
    return _pass(CLICK_FRAUD_PROOFNESS, index)


def check_core_selection(index: Index, problem: StreamingProblem) -> AxiomVerdict:
    """The index's payout must be stable against every artist coalition."""
    payout = rewards(problem, index(problem))
    verdict = game_mod.in_core_direct(game_mod.streaming_game(problem), payout)
    if verdict.in_core:
        return _pass(CORE_SELECTION, index)
    blocking = verdict.blocking_coalition
    witness = {
        "problem": problem_to_dict(problem),
        "allocation": {a: str(x) for a, x in payout.as_dict().items()},
        "blocking": sorted(blocking) if blocking is not None else None,
    }
    if blocking is None:
        detail = "payout does not sum to the revenue"
    else:
        detail = f"coalition {sorted(blocking)} is paid less than it is worth"
    return _fail(CORE_SELECTION, index, witness, detail)


# -- exhaustive per-instance evaluation ----------------------------------

def _proportional_factors(row: Sequence[int], row2: Sequence[int]) -> list[Fraction]:
    """All factors lam with row == lam * row2.

    When both rows are zero any factor qualifies; a fixed sample including
    a factor other than one keeps the check meaningful in that case.
    """
    if not any(row2):
        if not any(row):
            return [Fraction(0), Fraction(1), Fraction(2)]
        return []
    if not any(row):
        return [Fraction(0)]
    pivot = next(j for j, c in enumerate(row2) if c)
    lam = Fraction(row[pivot], row2[pivot])
    if all(c == lam * c2 for c, c2 in zip(row, row2)):
        return [lam]
    return []


def _eval_homogeneity(index: Index, problem: StreamingProblem,
                      rng: random.Random) -> AxiomVerdict:
    found = 0
    for artist in problem.artists:
        row = problem.streams[problem.artist_index(artist)]
        for other in problem.artists:
            if artist == other:
                continue
            row2 = problem.streams[problem.artist_index(other)]
            for lam in _proportional_factors(row, row2):
                found += 1
                verdict = check_homogeneity(index, problem, artist, other, lam)
                if verdict.failed:
                    return verdict
    if not found:
        return _na(HOMOGENEITY, index, "no proportional artist pair")
    return _pass(HOMOGENEITY, index, f"{found} proportional pairs checked")


def _eval_additivity(index: Index, problem: StreamingProblem,
                     rng: random.Random) -> AxiomVerdict:
    m = problem.user_count
    if m < 2:
        return _na(ADDITIVITY, index, "needs at least two users")
    first = problem.users[0]
    others = problem.users[1:]
    checked = 0
    # Every unordered split is visited once by keeping the first user on
    # the left side and varying the rest.
    for mask in range(0, (1 << (m - 1)) - 1):
        group = [first] + [u for j, u in enumerate(others) if mask >> j & 1]
        verdict = check_additivity(index, problem, group)
        checked += 1
        if verdict.failed:
            return verdict
    return _pass(ADDITIVITY, index, f"{checked} splits checked")


def _eval_equal_individual_impact(index: Index, problem: StreamingProblem,
                                  rng: random.Random) -> AxiomVerdict:
    m = problem.user_count
    if m < 2:
        return _na(EQUAL_INDIVIDUAL_IMPACT, index, "needs at least two users")
    reduced = {u: index(problem.remove_user(u)) for u in problem.users}
    found = 0
    for i, artist in enumerate(problem.artists):
        row = problem.streams[i]
        for a in range(m):
            for b in range(a + 1, m):
                if row[a] != row[b]:
                    continue
                found += 1
                user, other_user = problem.users[a], problem.users[b]
                left = reduced[user][artist]
                right = reduced[other_user][artist]
                if left != right:
                    witness = {
                        "problem": problem_to_dict(problem),
                        "artist": artist,
                        "user": user,
                        "other_user": other_user,
                        "without_user": str(left),
                        "without_other": str(right),
                    }
                    return _fail(EQUAL_INDIVIDUAL_IMPACT, index, witness,
                                 f"removing {user!r} leaves {left}, "
                                 f"removing {other_user!r} leaves {right}")
    if not found:
        return _na(EQUAL_INDIVIDUAL_IMPACT, index, "no equal-count user pair")
    return _pass(EQUAL_INDIVIDUAL_IMPACT, index, f"{found} user pairs checked")


def _eval_equal_global_impact(index: Index, problem: StreamingProblem,
                              rng: random.Random) -> AxiomVerdict:
    m = problem.user_count
    if m < 2:
        return _na(EQUAL_GLOBAL_IMPACT, index, "needs at least two users")
    totals = {u: index(problem.remove_user(u)).total for u in problem.users}
    baseline_user = problem.users[0]
    for user in problem.users[1:]:
        if totals[user] != totals[baseline_user]:
            witness = {
                "problem": problem_to_dict(problem),
                "user": baseline_user,
                "other_user": user,
                "sum_without_user": str(totals[baseline_user]),
                "sum_without_other": str(totals[user]),
            }
            return _fail(EQUAL_GLOBAL_IMPACT, index, witness,
                         f"total without {baseline_user!r} is {totals[baseline_user]}, "
                         f"without {user!r} it is {totals[user]}")
    return _pass(EQUAL_GLOBAL_IMPACT, index, f"{m} removals checked")


def _eval_reasonable_lower_bound(index: Index, problem: StreamingProblem,
                                 rng: random.Random) -> AxiomVerdict:
    return check_reasonable_lower_bound_all(index, problem)


def _resampled_column(problem: StreamingProblem, user: str,
                      rng: random.Random) -> StreamingProblem:
    """The same problem with one user's counts drawn fresh (never all zero)."""
    j = problem.user_index(user)
    n = problem.artist_count
    high = max(9, *(max(row) for row in problem.streams))
    while True:
        column = [0 if rng.random() < 0.35 else rng.randint(1, high) for _ in range(n)]
        if any(column):
            break
    streams = tuple(
        tuple(column[i] if k == j else row[k] for k in range(problem.user_count))
        for i, row in enumerate(problem.streams))
    return StreamingProblem(problem.artists, problem.users, streams, problem.fee)


def _eval_click_fraud(index: Index, problem: StreamingProblem,
                      rng: random.Random) -> AxiomVerdict:
    for user in problem.users:
        perturbed = _resampled_column(problem, user, rng)
        verdict = check_click_fraud_proofness(index, problem, perturbed, user)
        if verdict.failed:
            return verdict
    return _pass(CLICK_FRAUD_PROOFNESS, index,
                 f"{problem.user_count} single-column rewrites checked")


def _eval_core_selection(index: Index, problem: StreamingProblem,
                         rng: random.Random) -> AxiomVerdict:
    return check_core_selection(index, problem)


_DRIVERS = {
    HOMOGENEITY: _eval_homogeneity,
    ADDITIVITY: _eval_additivity,
    EQUAL_INDIVIDUAL_IMPACT: _eval_equal_individual_impact,
    EQUAL_GLOBAL_IMPACT: _eval_equal_global_impact,
    REASONABLE_LOWER_BOUND: _eval_reasonable_lower_bound,
    CLICK_FRAUD_PROOFNESS: _eval_click_fraud,
    CORE_SELECTION: _eval_core_selection,
}


def evaluate_axiom(index: Index, axiom: str, problem: StreamingProblem,
                   rng: random.Random | None = None) -> AxiomVerdict:
    """Check one property on one instance, exhausting its premise tuples."""
    driver = _DRIVERS[normalize_axiom(axiom)]
    return driver(index, problem, rng if rng is not None else random.Random(0))


# -- random instances and search -----------------------------------------

@dataclass(frozen=True)
class ProblemGenerator:
    """Deterministic stream of small random problems.

    The same seed always yields the same sequence.  Columns are patched to
    stay nonempty, so every emitted problem is valid; rows may still be all
    zero, which keeps artists nobody streams in the mix.
    """

    seed: int = 0
    max_artists: int = 5
    max_users: int = 6
    max_streams: int = 9
    sparsity: float = 0.35
    min_artists: int = 1
    min_users: int = 1
    fee: int | Fraction = 1

    def __post_init__(self):
        if not (1 <= self.min_artists <= self.max_artists):
            raise ValueError("need 1 <= min_artists <= max_artists")
        if not (1 <= self.min_users <= self.max_users):
            raise ValueError("need 1 <= min_users <= max_users")
        if self.max_streams < 1:
            raise ValueError("max_streams must be at least 1")
        if not (0 <= self.sparsity < 1):
            raise ValueError("sparsity must be in [0, 1)")

    def problems(self) -> Iterator[StreamingProblem]:
        rng = random.Random(self.seed)
        while True:
            yield self._draw(rng)

    def sample(self, count: int) -> list[StreamingProblem]:
        return list(islice(self.problems(), count))

    def _draw(self, rng: random.Random) -> StreamingProblem:
        n = rng.randint(self.min_artists, self.max_artists)
        m = rng.randint(self.min_users, self.max_users)
        artists = tuple(str(i + 1) for i in range(n))
        users = tuple(string.ascii_lowercase[j] if j < 26 else f"u{j}"
                      for j in range(m))
        columns = []
        for _ in range(m):
            column = [0 if rng.random() < self.sparsity else
                      rng.randint(1, self.max_streams) for _ in range(n)]
            if not any(column):
                column[rng.randrange(n)] = rng.randint(1, self.max_streams)
            columns.append(column)
        streams = tuple(tuple(columns[j][i] for j in range(m)) for i in range(n))
        return new_problem(artists, users, streams, self.fee)


def reference_problems() -> tuple[StreamingProblem, ...]:
    """Small fixed instances every property check runs before searching.

    Chosen so that each property's premise enumeration is non-vacuous: a
    lopsided two-user split, its three-user extension, a pair of exactly
    proportional rows, an unstreamed artist next to equal counts, and a
    single-user edge case.
    """
    two_user_split = new_problem(("1", "2"), ("a", "b"), ((10, 0), (0, 90)))
    three_user_mix = new_problem(("1", "2"), ("a", "b", "c"), ((10, 0, 5), (0, 90, 35)))
    proportional_pair = new_problem(("1", "2", "3"), ("a", "b"), ((2, 4), (1, 2), (3, 1)))
    silent_artist = new_problem(("1", "2", "3"), ("a", "b", "c"),
                                ((3, 3, 1), (0, 0, 0), (1, 2, 3)))
    solo_listener = new_problem(("1", "2"), ("a",), ((1,), (2,)))
    return (two_user_split, three_user_mix, proportional_pair,
            silent_artist, solo_listener)


def reference_fraud_pairs() -> tuple[tuple[StreamingProblem, StreamingProblem, str], ...]:
    """Fixed one-column rewrites checked alongside random perturbations."""
    base = new_problem(("1", "2"), ("a", "b"), ((10, 0), (0, 90)))
    deflated = new_problem(("1", "2"), ("a", "b"), ((10, 0), (0, 2)))
    return ((base, deflated, "b"),)


def search_witness(index: Index, axiom: str, generator: ProblemGenerator,
                   budget: int) -> AxiomVerdict:
    """Hunt for a violation over ``budget`` generated instances.

    Returns the first failing verdict, or a pass verdict recording how many
    instances were applicable.  Deterministic in (seed, index, axiom).
    """
    axiom = normalize_axiom(axiom)
    rng = random.Random(f"{generator.seed}:{index.name}:{axiom}")
    applicable = 0
    total = 0
    for problem in islice(generator.problems(), budget):
        total += 1
        verdict = evaluate_axiom(index, axiom, problem, rng)
        if verdict.failed:
            return replace(verdict, instances=total)
        if verdict.status is Status.PASS:
            applicable += 1
    return AxiomVerdict(axiom, index.name, Status.PASS, None,
                        f"no violation in {total} instances ({applicable} applicable)",
                        instances=total)


def axiom_matrix(indices: Sequence[Index],
                 axioms: Sequence[str] | None = None,
                 generator: ProblemGenerator | None = None,
                 budget: int = 200) -> dict[tuple[str, str], AxiomVerdict]:
    """Check every (index, property) pair on goldens plus random search.

    The fixed reference instances run first, so well-known violations are
    caught even at budget zero; the random search then takes over.  Keys of
    the result are (index name, axiom name).
    """
    axioms = AXIOM_NAMES if axioms is None else tuple(normalize_axiom(a) for a in axioms)
    generator = generator if generator is not None else ProblemGenerator()
    goldens = reference_problems()
    fraud_pairs = reference_fraud_pairs()
    matrix: dict[tuple[str, str], AxiomVerdict] = {}
    for index in indices:
        for axiom in axioms:
            rng = random.Random(f"{generator.seed}:{index.name}:{axiom}:golden")
            verdict = None
            examined = 0
            for problem in goldens:
                examined += 1
                candidate = evaluate_axiom(index, axiom, problem, rng)
                if candidate.failed:
                    verdict = replace(candidate, instances=examined,
                                      detail=candidate.detail + " (reference instance)")
                    break
            if verdict is None and axiom == CLICK_FRAUD_PROOFNESS:
                for base, perturbed, user in fraud_pairs:
                    examined += 1
                    candidate = check_click_fraud_proofness(index, base, perturbed, user)
                    if candidate.failed:
                        verdict = replace(candidate, instances=examined,
                                          detail=candidate.detail + " (reference instance)")
                        break
            if verdict is None and budget > 0:
                searched = search_witness(index, axiom, generator, budget)
                verdict = replace(searched, instances=searched.instances + examined)
            if verdict is None:
                verdict = AxiomVerdict(axiom, index.name, Status.PASS, None,
                                       f"no violation in {examined} reference instances",
                                       instances=examined)
            matrix[(index.name, axiom)] = verdict
    return matrix


def matrix_to_rows(matrix: Mapping[tuple[str, str], AxiomVerdict]) -> list[dict]:
    """Flatten a matrix into JSON-ready rows, in insertion order."""
    return [verdict_to_dict(v) for v in matrix.values()]


def recheck_witness(index: Index, verdict: AxiomVerdict) -> bool:
    """Re-run a failed check from its own witness payload.

    Returns True when the violation reproduces.  Raises KeyError on a
    malformed payload, and returns False for verdicts that are not
    failures.
    """
    if verdict.status is not Status.FAIL or verdict.witness is None:
        return False
    w = verdict.witness
    problem = problem_from_dict(w["problem"])
    axiom = verdict.axiom
    if axiom == HOMOGENEITY:
        again = check_homogeneity(index, problem, w["artist"], w["other"],
                                  Fraction(w["factor"]))
    elif axiom == ADDITIVITY:
        again = check_additivity(index, problem, tuple(w["first_group"]))
    elif axiom == EQUAL_INDIVIDUAL_IMPACT:
        again = check_equal_individual_impact(index, problem, w["artist"],
                                              w["user"], w["other_user"])
    elif axiom == EQUAL_GLOBAL_IMPACT:
        again = check_equal_global_impact(index, problem, w["user"], w["other_user"])
    elif axiom == REASONABLE_LOWER_BOUND:
        again = check_reasonable_lower_bound(index, problem, tuple(w["coalition"]))
    elif axiom == CLICK_FRAUD_PROOFNESS:
        again = check_click_fraud_proofness(index, problem,
                                            problem_from_dict(w["perturbed"]), w["user"])
    elif axiom == CORE_SELECTION:
        again = check_core_selection(index, problem)
    else:
        raise ValueError(f"unknown axiom {axiom!r}")
    return again.failed
