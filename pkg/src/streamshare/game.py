"""The cooperative game behind a streaming problem and its core.

A coalition of artists is worth the fees of every user who streams only
artists inside the coalition: those users would still be fully served (and
fully billed) if the rest of the catalog vanished.  An allocation is stable
when no coalition is paid less than it is worth on its own.

Stability has a second, equivalent reading: an allocation is stable exactly
when it can be assembled user by user, with each user's fee split only among
the artists that user actually streamed.  Since the two characterizations
are implemented along completely different routes (exhaustive coalition
enumeration versus a max-flow feasibility test) they double-check each
other; any disagreement is a bug, never a judgment call.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from numbers import Rational
from typing import Iterable, Mapping, Sequence

from .model import Allocation, StreamingProblem

MAX_ENUMERABLE_PLAYERS = 20


class TooManyPlayers(ValueError):
    """Coalition enumeration is capped to keep 2**n tables in memory."""


class NotInCore(ValueError):
    """No per-user decomposition exists for this allocation."""


def _amounts(allocation: Allocation | Sequence[Fraction], n: int) -> tuple[Fraction, ...]:
    values = allocation.amounts if isinstance(allocation, Allocation) else tuple(
        Fraction(a) for a in allocation)
    if len(values) != n:
        raise ValueError(f"expected {n} amounts, got {len(values)}")
    return values


@dataclass(frozen=True)
class CoalitionalGame:
    """A transferable-utility game over at most 20 players.

    Coalitions are bitmasks over the player tuple; ``values[mask]`` is the
    coalition's worth.  The empty coalition is worth zero.
    """

    players: tuple[str, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "players", tuple(self.players))
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))
        n = len(self.players)
        if n == 0:
            raise ValueError("need at least one player")
        if n > MAX_ENUMERABLE_PLAYERS:
            raise TooManyPlayers(f"{n} players exceeds the {MAX_ENUMERABLE_PLAYERS}-player cap")
        if len(set(self.players)) != n:
            raise ValueError("duplicate player identifier")
        if len(self.values) != 1 << n:
            raise ValueError(f"need {1 << n} coalition values, got {len(self.values)}")
        if self.values[0] != 0:
            raise ValueError("the empty coalition must be worth zero")

    @property
    def player_count(self) -> int:
        return len(self.players)

    def value(self, mask: int) -> Fraction:
        return self.values[mask]

    def mask_of(self, coalition: Iterable[str]) -> int:
        mask = 0
        for player in coalition:
            mask |= 1 << self.players.index(player)
        return mask

    def coalition_members(self, mask: int) -> tuple[str, ...]:
        return tuple(p for i, p in enumerate(self.players) if mask >> i & 1)

    @property
    def grand_value(self) -> Fraction:
        return self.values[-1]


def listened_mask(problem: StreamingProblem, user: str) -> int:
    """The user's listened set as a bitmask over the artist tuple."""
    j = problem.user_index(user)
    mask = 0
    for i, row in enumerate(problem.streams):
        if row[j] > 0:
            mask |= 1 << i
    return mask


def streaming_game(problem: StreamingProblem) -> CoalitionalGame:
    """Build the coalition-worth table for a streaming problem.

    A user pays into every coalition containing their whole listened set,
    so the table is the subset-sum transform of the listened-set histogram
    scaled by the fee.
    """
    n = problem.artist_count
    if n > MAX_ENUMERABLE_PLAYERS:
        raise TooManyPlayers(
            f"{n} artists exceeds the {MAX_ENUMERABLE_PLAYERS}-player cap")
    counts = [0] * (1 << n)
    for user in problem.users:
        counts[listened_mask(problem, user)] += 1
    for bit in range(n):
        step = 1 << bit
        for mask in range(1 << n):
            if mask & step:
                counts[mask] += counts[mask ^ step]
    return CoalitionalGame(problem.artists, tuple(c * problem.fee for c in counts))


@dataclass(frozen=True)
class SupermodularityResult:
    """Outcome of the supermodularity check, with a witness on failure.

    The witness is a triple of masks ``(small, large, player_bit)`` where
    the marginal contribution of the player to the small coalition exceeds
    its contribution to the large one.
    """

    holds: bool
    witness: tuple[int, int, int] | None = None

    def __bool__(self) -> bool:
        return self.holds


def is_supermodular(game: CoalitionalGame) -> SupermodularityResult:
    """Check v(S + i) - v(S) <= v(T + i) - v(T) for every S inside T.

    Exhaustive over all nested coalition pairs and joining players, so the
    verdict needs no convexity theory to trust.
    """
    v = game.values
    n = game.player_count
    full = (1 << n) - 1
    for large in range(1 << n):
        small = large
        while True:
            outside = full & ~large
            while outside:
                bit = outside & -outside
                if v[small | bit] - v[small] > v[large | bit] - v[large]:
                    return SupermodularityResult(False, (small, large, bit))
                outside ^= bit
            if small == 0:
                break
            small = (small - 1) & large
    return SupermodularityResult(True)


@dataclass(frozen=True)
class DividendTable:
    """Per-coalition dividends: the game rewritten in the unanimity basis.

    ``dividends[mask]`` is the coefficient of the unanimity game on that
    coalition; summing dividends over all subsets of a coalition recovers
    its worth exactly.
    """

    players: tuple[str, ...]
    dividends: tuple[Fraction, ...]

    def of(self, mask: int) -> Fraction:
        return self.dividends[mask]

    def nonzero(self) -> list[tuple[int, Fraction]]:
        return [(mask, d) for mask, d in enumerate(self.dividends) if d != 0]


def harsanyi_dividends(game: CoalitionalGame) -> DividendTable:
    """Invert the subset-sum relation between worths and dividends."""
    table = list(game.values)
    n = game.player_count
    for bit in range(n):
        step = 1 << bit
        for mask in range(1 << n):
            if mask & step:
                table[mask] -= table[mask ^ step]
    return DividendTable(game.players, tuple(table))


def reconstruct_from_dividends(
    dividends: DividendTable | Mapping[int, Fraction],
    players: Sequence[str] | None = None,
) -> CoalitionalGame:
    """Rebuild the worth table from dividends.  Inverse of harsanyi_dividends."""
    if isinstance(dividends, DividendTable):
        players = dividends.players
        table = list(dividends.dividends)
    else:
        if players is None:
            raise ValueError("players required when dividends come as a mapping")
        table = [Fraction(0)] * (1 << len(players))
        for mask, value in dividends.items():
            table[mask] = Fraction(value)
    n = len(players)
    for bit in range(n):
        step = 1 << bit
        for mask in range(1 << n):
            if mask & step:
                table[mask] += table[mask ^ step]
    return CoalitionalGame(tuple(players), tuple(table))


@dataclass(frozen=True)
class DirectCoreResult:
    """Verdict of the enumeration oracle.

    ``blocking_mask`` is the numerically smallest coalition paid less than
    its worth, or None.  ``efficient`` records whether the allocation sums
    to the grand coalition's worth (a wrong total always fails).
    """

    in_core: bool
    efficient: bool
    blocking_mask: int | None
    players: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.in_core

    @property
    def blocking_coalition(self) -> frozenset[str] | None:
        if self.blocking_mask is None:
            return None
        return frozenset(p for i, p in enumerate(self.players) if self.blocking_mask >> i & 1)


def in_core_direct(game: CoalitionalGame,
                   allocation: Allocation | Sequence[Fraction]) -> DirectCoreResult:
    """Check core membership by enumerating every coalition."""
    amounts = _amounts(allocation, game.player_count)
    n = game.player_count
    if sum(amounts) != game.grand_value:
        return DirectCoreResult(False, False, None, game.players)
    totals = [Fraction(0)] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        totals[mask] = totals[mask ^ low] + amounts[low.bit_length() - 1]
        if totals[mask] < game.values[mask]:
            return DirectCoreResult(False, True, mask, game.players)
    return DirectCoreResult(True, True, None, game.players)


@dataclass(frozen=True)
class CoreDecomposition:
    """An allocation assembled user by user.

    ``shares[j][i]`` is what user j's fee contributes to artist i.  Each
    user's row is nonnegative, sums to the fee, and is supported on the
    artists that user streamed.
    """

    artists: tuple[str, ...]
    users: tuple[str, ...]
    shares: tuple[tuple[Fraction, ...], ...]
    fee: Fraction

    def allocation(self) -> Allocation:
        amounts = [sum(row[i] for row in self.shares)
                   for i in range(len(self.artists))]
        return Allocation(self.artists, tuple(amounts))

    def validate(self, problem: StreamingProblem) -> None:
        """Raise if any decomposition invariant fails against the problem."""
        if self.artists != problem.artists or self.users != problem.users:
            raise ValueError("decomposition indexed by different artists or users")
        if self.fee != problem.fee:
            raise ValueError("decomposition built for a different fee")
        for user, row in zip(self.users, self.shares):
            if len(row) != len(self.artists):
                raise ValueError("ragged decomposition row")
            if any(x < 0 for x in row):
                raise ValueError(f"negative share for user {user!r}")
            if sum(row) != self.fee:
                raise ValueError(f"user {user!r} shares do not sum to the fee")
            listened = problem.listened_set(user)
            for artist, x in zip(self.artists, row):
                if x > 0 and artist not in listened:
                    raise ValueError(
                        f"user {user!r} pays artist {artist!r} they never streamed")


@dataclass(frozen=True)
class FlowCoreResult:
    """Verdict of the flow oracle, with the decomposition when it exists."""

    in_core: bool
    decomposition: CoreDecomposition | None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.in_core


class _FlowNetwork:
    """Minimal integer max-flow with shortest augmenting paths."""

    def __init__(self, nodes: int):
        self.adj: list[list[int]] = [[] for _ in range(nodes)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add_edge(self, u: int, v: int, capacity: int) -> int:
        idx = len(self.to)
        self.adj[u].append(idx)
        self.to.append(v)
        self.cap.append(capacity)
        self.adj[v].append(idx + 1)
        self.to.append(u)
        self.cap.append(0)
        return idx

    def max_flow(self, source: int, sink: int) -> int:
        total = 0
        while True:
            parent_edge = [-1] * len(self.adj)
            parent_edge[source] = -2
            queue = [source]
            for u in queue:
                if u == sink:
                    break
                for idx in self.adj[u]:
                    v = self.to[idx]
                    if parent_edge[v] == -1 and self.cap[idx] > 0:
                        parent_edge[v] = idx
                        queue.append(v)
            if parent_edge[sink] == -1:
                return total
            bottleneck = None
            v = sink
            while v != source:
                idx = parent_edge[v]
                if bottleneck is None or self.cap[idx] < bottleneck:
                    bottleneck = self.cap[idx]
                v = self.to[idx ^ 1]
            v = sink
            while v != source:
                idx = parent_edge[v]
                self.cap[idx] -= bottleneck
                self.cap[idx ^ 1] += bottleneck
                v = self.to[idx ^ 1]
            total += bottleneck

    def flow_through(self, idx: int) -> int:
        return self.cap[idx ^ 1]


def _solve_flow(problem: StreamingProblem, amounts: tuple[Fraction, ...]):
    """Build and solve the fee-routing network after clearing denominators.

    Returns (network, edge index per (user, artist) arc, scale, target).
    Feasibility of routing every fee means the allocation is in the core.
    """
    n, m = problem.artist_count, problem.user_count
    scale = lcm(problem.fee.denominator, *(a.denominator for a in amounts))
    fee_units = problem.fee * scale
    source, sink = 0, 1 + m + n
    net = _FlowNetwork(n + m + 2)
    for j in range(m):
        net.add_edge(source, 1 + j, int(fee_units))
    arc_index: dict[tuple[int, int], int] = {}
    for i, row in enumerate(problem.streams):
        for j, count in enumerate(row):
            if count > 0:
                arc_index[(j, i)] = net.add_edge(1 + j, 1 + m + i, int(fee_units))
    for i, amount in enumerate(amounts):
        net.add_edge(1 + m + i, sink, int(amount * scale))
    target = int(m * fee_units)
    value = net.max_flow(source, sink)
    return net, arc_index, scale, value == target


def in_core_flow(problem: StreamingProblem,
                 allocation: Allocation | Sequence[Fraction]) -> FlowCoreResult:
    """Check core membership by trying to route every user's fee.

    The allocation is stable exactly when each user's fee can flow to
    artists that user streamed, filling each artist's payout exactly.
    Negative entries and wrong totals are screened out before the network
    is built.
    """
    amounts = _amounts(allocation, problem.artist_count)
    if any(a < 0 for a in amounts):
        return FlowCoreResult(False, None, "negative amount")
    if sum(amounts) != problem.revenue:
        return FlowCoreResult(False, None, "amounts do not sum to the revenue")
    net, arc_index, scale, feasible = _solve_flow(problem, amounts)
    if not feasible:
        return FlowCoreResult(False, None, "some user's fee cannot reach their artists")
    shares = []
    for j, user in enumerate(problem.users):
        row = [Fraction(0)] * problem.artist_count
        for i in range(problem.artist_count):
            idx = arc_index.get((j, i))
            if idx is not None:
                row[i] = Fraction(net.flow_through(idx), scale)
        shares.append(tuple(row))
    decomposition = CoreDecomposition(
        problem.artists, problem.users, tuple(shares), problem.fee)
    return FlowCoreResult(True, decomposition)


def extract_decomposition(problem: StreamingProblem,
                          allocation: Allocation | Sequence[Fraction]) -> CoreDecomposition:
    """Return a per-user decomposition of the allocation, or raise NotInCore."""
    result = in_core_flow(problem, allocation)
    if not result.in_core:
        raise NotInCore(result.reason)
    return result.decomposition


def in_domain_pstar(problem: StreamingProblem) -> bool:
    """True when the problem has at least three users, none with full reach.

    This is the restricted domain on which stability plus the scaling and
    market-merge properties single out the user-centric payout.
    """
    if problem.user_count < 3:
        return False
    full = frozenset(problem.artists)
    return all(problem.listened_set(u) != full for u in problem.users)


# -- serialization -----------------------------------------------------

def _coalition_key(game_players: tuple[str, ...], mask: int) -> str:
    return ",".join(p for i, p in enumerate(game_players) if mask >> i & 1)


def game_to_dict(game: CoalitionalGame) -> dict:
    """JSON-ready dict: players plus a worth per nonempty coalition."""
    return {
        "players": list(game.players),
        "values": {
            _coalition_key(game.players, mask): str(game.values[mask])
            for mask in range(1, 1 << game.player_count)
        },
    }


def dividends_to_dict(table: DividendTable) -> dict:
    """JSON-ready dict of the nonzero dividends."""
    return {
        "players": list(table.players),
        "dividends": {
            _coalition_key(table.players, mask): str(value)
            for mask, value in table.nonzero()
        },
    }


def decomposition_to_dict(decomposition: CoreDecomposition) -> dict:
    """JSON-ready dict: per-user share vectors in artist order."""
    return {
        "artists": list(decomposition.artists),
        "fee": str(decomposition.fee),
        "shares": {
            user: [str(x) for x in row]
            for user, row in zip(decomposition.users, decomposition.shares)
        },
    }
