"""Rationing rules: dividing an endowment that is smaller than the claims.

The single-issue problem is the classic one (agents, claims, endowment).
The multi-issue form groups claims by issue; here an issue is a user and an
agent's claim on that issue is their stream count, so a streaming problem
translates directly.  Rules come in two flavors: weighted proportional
rules, which fix a budget per issue and split it proportionally, and
two-stage rules, which first ration the endowment across issues and then
ration each issue's award across agents.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, NamedTuple, Sequence, Union

from .model import StreamingProblem, as_rational


class InvalidProblem(ValueError):
    """Claims data violating the model: negative claims, short endowment, ..."""


class WeightContractViolated(ValueError):
    """An issue-weight function must return a probability vector."""


def _rational_tuple(values: Sequence, what: str) -> tuple[Fraction, ...]:
    out = []
    for v in values:
        if isinstance(v, bool) or not isinstance(v, (int, str, Rational)):
            raise InvalidProblem(f"{what} must be exact rationals, got {v!r}")
        out.append(Fraction(v))
    return tuple(out)


@dataclass(frozen=True)
class BankruptcyProblem:
    """Agents with claims on an endowment too small to honor them all."""

    agents: tuple[str, ...]
    claims: tuple[Fraction, ...]
    endowment: Fraction

    def __post_init__(self):
        object.__setattr__(self, "agents", tuple(self.agents))
        object.__setattr__(self, "claims", _rational_tuple(self.claims, "claims"))
        object.__setattr__(self, "endowment", as_rational(self.endowment, "endowment"))
        if not self.agents:
            raise InvalidProblem("need at least one agent")
        if len(set(self.agents)) != len(self.agents):
            raise InvalidProblem("duplicate agent identifier")
        if len(self.claims) != len(self.agents):
            raise InvalidProblem("one claim per agent required")
        if any(c < 0 for c in self.claims):
            raise InvalidProblem("claims must be nonnegative")
        if self.endowment < 0:
            raise InvalidProblem("endowment must be nonnegative")
        if sum(self.claims) < self.endowment:
            raise InvalidProblem(
                f"endowment {self.endowment} exceeds total claims {sum(self.claims)}")


def proportional_rule(problem: BankruptcyProblem) -> tuple[Fraction, ...]:
    """Award everyone the same fraction of their claim."""
    total = sum(problem.claims)
    if total == 0:
        # The endowment is zero too (it never exceeds the claims).
        return tuple(Fraction(0) for _ in problem.claims)
    return tuple(c * problem.endowment / total for c in problem.claims)


class CeaAwards(NamedTuple):
    """Constrained-equal awards plus the common water level."""

    awards: tuple[Fraction, ...]
    level: Fraction


def cea_rule(problem: BankruptcyProblem) -> CeaAwards:
    """Equalize awards subject to nobody exceeding their claim.

    Awards are ``min(level, claim)`` where the level is chosen so the
    awards exhaust the endowment.  Computed by filling claims in ascending
    order, which pins the level exactly in rational arithmetic.
    """
    n = len(problem.claims)
    order = sorted(range(n), key=lambda i: problem.claims[i])
    awards = [Fraction(0)] * n
    remaining = problem.endowment
    for position, agent in enumerate(order):
        level = remaining / (n - position)
        if problem.claims[agent] >= level:
            for other in order[position:]:
                awards[other] = level
            return CeaAwards(tuple(awards), level)
        awards[agent] = problem.claims[agent]
        remaining -= problem.claims[agent]
    # Everyone was paid in full, which means the endowment equals the
    # total claims; the largest claim is the smallest valid level.
    return CeaAwards(tuple(awards), max(problem.claims, default=Fraction(0)))


def cea_awards(problem: BankruptcyProblem) -> tuple[Fraction, ...]:
    return cea_rule(problem).awards


BankruptcyRule = Callable[[BankruptcyProblem], tuple[Fraction, ...]]

BANKRUPTCY_RULES: dict[str, BankruptcyRule] = {
    "proportional": proportional_rule,
    "cea": cea_awards,
}


def resolve_rule(rule: Union[str, BankruptcyRule]) -> BankruptcyRule:
    if callable(rule):
        return rule
    try:
        return BANKRUPTCY_RULES[rule]
    except KeyError:
        raise InvalidProblem(
            f"unknown rule {rule!r}; expected one of {sorted(BANKRUPTCY_RULES)}") from None


@dataclass(frozen=True)
class MultiIssueClaims:
    """Claims broken down by issue.

    ``claims[i][j]`` is agent i's claim on issue j.  Every issue must carry
    at least one positive claim, and the endowment may not exceed the grand
    total.
    """

    agents: tuple[str, ...]
    issues: tuple[str, ...]
    claims: tuple[tuple[Fraction, ...], ...]
    endowment: Fraction

    def __post_init__(self):
        object.__setattr__(self, "agents", tuple(self.agents))
        object.__setattr__(self, "issues", tuple(self.issues))
        object.__setattr__(self, "claims",
                           tuple(_rational_tuple(row, "claims") for row in self.claims))
        object.__setattr__(self, "endowment", as_rational(self.endowment, "endowment"))
        if not self.agents or not self.issues:
            raise InvalidProblem("need at least one agent and one issue")
        if len(set(self.agents)) != len(self.agents):
            raise InvalidProblem("duplicate agent identifier")
        if len(set(self.issues)) != len(self.issues):
            raise InvalidProblem("duplicate issue identifier")
        if len(self.claims) != len(self.agents):
            raise InvalidProblem("one claim row per agent required")
        for row in self.claims:
            if len(row) != len(self.issues):
                raise InvalidProblem("one claim per issue required in every row")
            if any(c < 0 for c in row):
                raise InvalidProblem("claims must be nonnegative")
        if self.endowment < 0:
            raise InvalidProblem("endowment must be nonnegative")
        for j, issue in enumerate(self.issues):
            if self.issue_total(j) == 0:
                raise InvalidProblem(f"issue {issue!r} carries no claims")
        if sum(self.issue_totals()) < self.endowment:
            raise InvalidProblem(
                f"endowment {self.endowment} exceeds total claims")

    def issue_total(self, j: int) -> Fraction:
        return sum(row[j] for row in self.claims)

    def issue_totals(self) -> tuple[Fraction, ...]:
        return tuple(self.issue_total(j) for j in range(len(self.issues)))


@dataclass(frozen=True)
class IssueWeightFunction:
    """Allots a probability weight to each issue.

    ``weights(issue_totals, endowment)`` must return one weight per issue,
    each in [0, 1], summing to exactly 1.  The result is validated on every
    call and any violation raises WeightContractViolated.
    """

    name: str
    weights: Callable[[tuple[Fraction, ...], Fraction], Sequence[Fraction]]

    def __call__(self, issue_totals: tuple[Fraction, ...],
                 endowment: Fraction) -> tuple[Fraction, ...]:
        raw = self.weights(issue_totals, endowment)
        out = []
        for w in raw:
            if isinstance(w, bool) or not isinstance(w, Rational):
                raise WeightContractViolated(
                    f"{self.name!r} produced non-rational weight {w!r}")
            out.append(Fraction(w))
        if len(out) != len(issue_totals):
            raise WeightContractViolated(
                f"{self.name!r} produced {len(out)} weights for {len(issue_totals)} issues")
        if any(w < 0 or w > 1 for w in out):
            raise WeightContractViolated(f"{self.name!r} produced a weight outside [0, 1]")
        if sum(out) != 1:
            raise WeightContractViolated(
                f"{self.name!r} weights sum to {sum(out)}, not 1")
        return tuple(out)


issue_size_weights = IssueWeightFunction(
    "issue-size",
    lambda totals, endowment: tuple(t / sum(totals) for t in totals),
)

equal_issue_weights = IssueWeightFunction(
    "equal-issues",
    lambda totals, endowment: tuple(Fraction(1, len(totals)) for _ in totals),
)


def weighted_proportional(problem: MultiIssueClaims,
                          weight_function: IssueWeightFunction) -> tuple[Fraction, ...]:
    """Give each issue a budget share and split it proportionally.

    Agent i receives, per issue j, their share of the issue's claims times
    the issue's weight times the endowment.
    """
    totals = problem.issue_totals()
    weights = weight_function(totals, problem.endowment)
    awards = []
    for row in problem.claims:
        awards.append(sum(
            (c / t * w * problem.endowment for c, t, w in zip(row, totals, weights) if c),
            Fraction(0)))
    return tuple(awards)


def two_stage_rule(problem: MultiIssueClaims,
                   issue_stage: Union[str, BankruptcyRule],
                   agent_stage: Union[str, BankruptcyRule]) -> tuple[Fraction, ...]:
    """Ration across issues first, then within each issue.

    Stage one treats the issues as agents claiming their column totals and
    divides the endowment with ``issue_stage``.  Stage two divides each
    issue's award among the agents with ``agent_stage``, using the original
    claims on that issue.  Any InvalidProblem raised inside a stage is
    re-raised tagged with the stage that produced it.
    """
    psi = resolve_rule(issue_stage)
    phi = resolve_rule(agent_stage)
    totals = problem.issue_totals()
    try:
        issue_budgets = psi(BankruptcyProblem(problem.issues, totals, problem.endowment))
    except InvalidProblem as exc:
        raise InvalidProblem(f"issue stage: {exc}") from exc
    awards = [Fraction(0)] * len(problem.agents)
    for j, budget in enumerate(issue_budgets):
        column = tuple(row[j] for row in problem.claims)
        try:
            column_awards = phi(BankruptcyProblem(problem.agents, column, budget))
        except InvalidProblem as exc:
            raise InvalidProblem(
                f"agent stage, issue {problem.issues[j]!r}: {exc}") from exc
        for i, award in enumerate(column_awards):
            awards[i] += award
    return tuple(awards)


def streaming_to_claims(problem: StreamingProblem) -> MultiIssueClaims:
    """View a streaming problem as multi-issue claims.

    Users become issues, stream counts become claims, and the endowment is
    the platform revenue.  Solvency holds whenever each user averages at
    least the fee in streams; otherwise construction fails.
    """
    return MultiIssueClaims(
        agents=problem.artists,
        issues=problem.users,
        claims=tuple(tuple(Fraction(c) for c in row) for row in problem.streams),
        endowment=problem.revenue,
    )


def streaming_to_bankruptcy(problem: StreamingProblem) -> BankruptcyProblem:
    """Collapse a streaming problem to single-issue claims on the revenue."""
    return BankruptcyProblem(
        agents=problem.artists,
        claims=tuple(Fraction(sum(row)) for row in problem.streams),
        endowment=problem.revenue,
    )


def multi_issue_to_dict(problem: MultiIssueClaims) -> dict:
    """JSON-ready dict form, mirroring the streaming problem layout."""
    return {
        "agents": list(problem.agents),
        "issues": list(problem.issues),
        "claims": [[str(c) for c in row] for row in problem.claims],
        "endowment": str(problem.endowment),
    }


def multi_issue_from_dict(data) -> MultiIssueClaims:
    for key in ("agents", "issues", "claims", "endowment"):
        if key not in data:
            raise InvalidProblem(f"missing key {key!r}")
    return MultiIssueClaims(
        agents=tuple(data["agents"]),
        issues=tuple(data["issues"]),
        claims=tuple(tuple(Fraction(c) for c in row) for row in data["claims"]),
        endowment=Fraction(data["endowment"]),
    )
