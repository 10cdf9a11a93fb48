"""Streaming problems and allocation containers.

A streaming problem records how many times each user streamed each artist
during one period, together with the per-user subscription fee.  Everything
downstream (allocation indices, fairness checks, core membership, claims
rules) consumes the immutable :class:`StreamingProblem` defined here.

All arithmetic is exact: stream counts are integers and money amounts are
`fractions.Fraction` values.  Floats are rejected at every boundary.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence


class ModelError(ValueError):
    """Base class for invalid streaming-problem inputs."""


class DimensionMismatch(ModelError):
    """Matrix shape does not match the artist and user lists."""


class DuplicateIdentifier(ModelError):
    """An artist or user identifier appears more than once."""


class EmptyUserColumn(ModelError):
    """A user streamed nothing at all, which the model does not allow."""

    def __init__(self, user: str):
        super().__init__(f"user {user!r} has no positive stream count")
        self.user = user


class NonPositiveFee(ModelError):
    """The subscription fee must be a strictly positive rational."""


class AllZeroMatrix(ModelError):
    """Every entry of the stream matrix is zero."""


class UnknownArtist(ModelError):
    def __init__(self, artist: str):
        super().__init__(f"unknown artist {artist!r}")
        self.artist = artist


class UnknownUser(ModelError):
    def __init__(self, user: str):
        super().__init__(f"unknown user {user!r}")
        self.user = user


class WouldBeEmpty(ModelError):
    """Removing the user would leave a problem with no users."""


class ArtistMismatch(ModelError):
    """Two problems cannot be merged unless their artist lists agree."""


class OverlappingUsers(ModelError):
    """Two problems cannot be merged when they share a user."""


class FeeMismatch(ModelError):
    """Two problems cannot be merged when their fees differ."""


class InvalidPartition(ModelError):
    """A user split must name a nonempty proper subset of existing users."""


class ParseError(ModelError):
    """Malformed serialized problem, with a location when one is known."""

    def __init__(self, message: str, line: int | None = None, field: int | None = None):
        loc = ""
        if line is not None:
            loc = f"line {line}"
            if field is not None:
                loc += f", field {field}"
            loc += ": "
        super().__init__(loc + message)
        self.line = line
        self.field = field


def as_rational(value: int | str | Fraction, what: str = "value") -> Fraction:
    """Coerce ``value`` to an exact Fraction.

    Accepts ints, Fractions, and strings like ``"3/4"`` or ``"2"``.  Floats
    are rejected so that no inexact number can leak into a computation.
    """
    if isinstance(value, bool) or not isinstance(value, (int, str, Rational)):
        raise TypeError(f"{what} must be an exact rational (int, Fraction, or 'p/q' string), "
                        f"got {type(value).__name__}")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {what} {value!r}: {exc}") from None


def decimal_display(value: Fraction, places: int) -> str:
    """Render ``value`` with ``places`` decimals, rounding halves away from zero.

    Pure integer arithmetic, so ties like 1.875 -> 1.9 are exact.
    """
    if places < 0:
        raise ValueError("places must be nonnegative")
    sign = "-" if value < 0 else ""
    scaled = abs(value) * 10 ** places
    q, r = divmod(scaled.numerator, scaled.denominator)
    if 2 * r >= scaled.denominator:
        q += 1
    if places == 0:
        return f"{sign}{q}"
    whole, frac = divmod(q, 10 ** places)
    return f"{sign}{whole}.{frac:0{places}d}"


@dataclass(frozen=True)
class StreamingProblem:
    """One period of platform data: who streamed whom, and the fee.

    ``streams[i][j]`` is the number of times user ``users[j]`` streamed
    artist ``artists[i]``.  Rows may be all zero (an artist nobody played)
    but columns may not: a paying user with no streams has no defined way
    to split their fee.  Instances are immutable and validated on
    construction, so any reachable problem is well formed.
    """

    artists: tuple[str, ...]
    users: tuple[str, ...]
    streams: tuple[tuple[int, ...], ...]
    fee: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "artists", tuple(self.artists))
        object.__setattr__(self, "users", tuple(self.users))
        object.__setattr__(self, "streams", tuple(tuple(row) for row in self.streams))
        if isinstance(self.fee, bool) or not isinstance(self.fee, (int, str, Rational)):
            raise NonPositiveFee("fee must be an exact rational (int, Fraction, or 'p/q' string)")
        object.__setattr__(self, "fee", Fraction(self.fee))

        for name, ids in (("artist", self.artists), ("user", self.users)):
            for ident in ids:
                if not isinstance(ident, str) or not ident:
                    raise DimensionMismatch(f"every {name} identifier must be a nonempty string")
            if len(set(ids)) != len(ids):
                raise DuplicateIdentifier(f"duplicate {name} identifier")
        if not self.artists:
            raise DimensionMismatch("need at least one artist")
        if not self.users:
            raise DimensionMismatch("need at least one user")
        if len(self.streams) != len(self.artists):
            raise DimensionMismatch(
                f"{len(self.artists)} artists but {len(self.streams)} matrix rows")
        for row in self.streams:
            if len(row) != len(self.users):
                raise DimensionMismatch(
                    f"{len(self.users)} users but a matrix row of length {len(row)}")
            for cell in row:
                if isinstance(cell, bool) or not isinstance(cell, int):
                    raise DimensionMismatch(f"stream counts must be integers, got {cell!r}")
                if cell < 0:
                    raise DimensionMismatch(f"stream counts must be nonnegative, got {cell}")
        if self.fee <= 0:
            raise NonPositiveFee(f"fee must be positive, got {self.fee}")
        if self.total_streams == 0:
            raise AllZeroMatrix("every stream count is zero")
        for j, user in enumerate(self.users):
            if all(row[j] == 0 for row in self.streams):
                raise EmptyUserColumn(user)

    # -- aggregates ----------------------------------------------------

    @property
    def artist_count(self) -> int:
        return len(self.artists)

    @property
    def user_count(self) -> int:
        return len(self.users)

    @property
    def total_streams(self) -> int:
        return sum(sum(row) for row in self.streams)

    @property
    def revenue(self) -> Fraction:
        """Total money to divide: one fee per user."""
        return self.user_count * self.fee

    def artist_index(self, artist: str) -> int:
        try:
            return self.artists.index(artist)
        except ValueError:
            raise UnknownArtist(artist) from None

    def user_index(self, user: str) -> int:
        try:
            return self.users.index(user)
        except ValueError:
            raise UnknownUser(user) from None

    def count(self, artist: str, user: str) -> int:
        return self.streams[self.artist_index(artist)][self.user_index(user)]

    def artist_total(self, artist: str) -> int:
        """Total streams of one artist across all users."""
        return sum(self.streams[self.artist_index(artist)])

    def user_total(self, user: str) -> int:
        """Total streams of one user across all artists."""
        j = self.user_index(user)
        return sum(row[j] for row in self.streams)

    def profile(self, user: str) -> tuple[int, ...]:
        """The user's column of the matrix, in artist order."""
        j = self.user_index(user)
        return tuple(row[j] for row in self.streams)

    def listened_set(self, user: str) -> frozenset[str]:
        """Artists this user streamed at least once.  Never empty."""
        j = self.user_index(user)
        return frozenset(a for i, a in enumerate(self.artists) if self.streams[i][j] > 0)

    def fans(self, artist: str) -> frozenset[str]:
        """Users who streamed this artist at least once.  May be empty."""
        i = self.artist_index(artist)
        return frozenset(u for j, u in enumerate(self.users) if self.streams[i][j] > 0)

    # -- derived problems ----------------------------------------------

    def remove_user(self, user: str) -> "StreamingProblem":
        """The same problem without one user's column."""
        j = self.user_index(user)
        if self.user_count == 1:
            raise WouldBeEmpty("removing the only user leaves nothing to divide")
        users = self.users[:j] + self.users[j + 1:]
        streams = tuple(row[:j] + row[j + 1:] for row in self.streams)
        return StreamingProblem(self.artists, users, streams, self.fee)

    def with_fee(self, fee: int | str | Fraction) -> "StreamingProblem":
        return StreamingProblem(self.artists, self.users, self.streams, fee)

    def select_users(self, subset: Iterable[str]) -> "StreamingProblem":
        """Restriction to a nonempty subset of users (input order preserved)."""
        wanted = set(subset)
        for u in wanted:
            self.user_index(u)
        cols = [j for j, u in enumerate(self.users) if u in wanted]
        if not cols:
            raise InvalidPartition("user subset is empty")
        users = tuple(self.users[j] for j in cols)
        streams = tuple(tuple(row[j] for j in cols) for row in self.streams)
        return StreamingProblem(self.artists, users, streams, self.fee)


def new_problem(
    artists: Sequence[str],
    users: Sequence[str],
    streams: Sequence[Sequence[int]],
    fee: int | str | Fraction = 1,
) -> StreamingProblem:
    """Build a validated streaming problem.  See :class:`StreamingProblem`."""
    return StreamingProblem(tuple(artists), tuple(users), tuple(tuple(r) for r in streams), fee)


def reorder_users(problem: StreamingProblem, users: Sequence[str]) -> StreamingProblem:
    """The same problem with its user columns in the given order.

    ``users`` must be a permutation of the problem's users.  Useful for
    comparing problems that differ only in column order, such as a merge
    of two split halves against the original.
    """
    if sorted(users) != sorted(problem.users):
        raise InvalidPartition("user order must be a permutation of the users")
    positions = [problem.user_index(u) for u in users]
    streams = tuple(tuple(row[j] for j in positions) for row in problem.streams)
    return StreamingProblem(problem.artists, tuple(users), streams, problem.fee)


def merge_problems(first: StreamingProblem, second: StreamingProblem) -> StreamingProblem:
    """Combine two periods over the same artists into one problem.

    The artist lists must match exactly (same names, same order), the fees
    must agree, and the user sets must be disjoint.  The result carries the
    first problem's users followed by the second's.
    """
    if first.artists != second.artists:
        raise ArtistMismatch("problems list different artists")
    if first.fee != second.fee:
        raise FeeMismatch(f"fees differ: {first.fee} vs {second.fee}")
    if set(first.users) & set(second.users):
        raise OverlappingUsers(f"shared users: {sorted(set(first.users) & set(second.users))}")
    users = first.users + second.users
    streams = tuple(a + b for a, b in zip(first.streams, second.streams))
    return StreamingProblem(first.artists, users, streams, first.fee)


def split_problem(
    problem: StreamingProblem, first_users: Iterable[str]
) -> tuple[StreamingProblem, StreamingProblem]:
    """Split a problem into two user groups.  Inverse of :func:`merge_problems`.

    ``first_users`` must be a nonempty proper subset of the users; the
    complement forms the second part.  Column order is preserved on both
    sides, so ``merge_problems(*split_problem(p, g))`` returns a problem
    equal to ``p`` up to user ordering.
    """
    chosen = set(first_users)
    for u in chosen:
        problem.user_index(u)
    rest = [u for u in problem.users if u not in chosen]
    if not chosen:
        raise InvalidPartition("first part of the split is empty")
    if not rest:
        raise InvalidPartition("second part of the split is empty")
    return problem.select_users(chosen), problem.select_users(rest)


@dataclass(frozen=True)
class IndexValues:
    """Nonnegative per-artist scores produced by an allocation index.

    Scores are meaningful only up to positive scaling; :func:`indices.rewards`
    turns them into money.  The sum must be strictly positive so that the
    normalization is defined.
    """

    artists: tuple[str, ...]
    scores: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "artists", tuple(self.artists))
        object.__setattr__(self, "scores", tuple(Fraction(s) for s in self.scores))
        if len(self.artists) != len(self.scores):
            raise DimensionMismatch("one score per artist required")
        if any(s < 0 for s in self.scores):
            raise ModelError("index scores must be nonnegative")
        if sum(self.scores) <= 0:
            raise ModelError("index scores must not all be zero")

    def __getitem__(self, artist: str) -> Fraction:
        try:
            return self.scores[self.artists.index(artist)]
        except ValueError:
            raise UnknownArtist(artist) from None

    @property
    def total(self) -> Fraction:
        return sum(self.scores, Fraction(0))

    def scaled(self, factor: int | str | Fraction) -> "IndexValues":
        """The same scores multiplied by a positive rational factor."""
        lam = as_rational(factor, "scale factor")
        if lam <= 0:
            raise ModelError("scale factor must be positive")
        return IndexValues(self.artists, tuple(lam * s for s in self.scores))

    def as_dict(self) -> dict[str, Fraction]:
        return dict(zip(self.artists, self.scores))


@dataclass(frozen=True)
class Allocation:
    """A division of the platform's revenue among the artists.

    Entries are nonnegative exact rationals.  For an allocation produced by
    :func:`indices.rewards` the entries always sum to the problem revenue
    (user count times fee).
    """

    artists: tuple[str, ...]
    amounts: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "artists", tuple(self.artists))
        object.__setattr__(self, "amounts", tuple(Fraction(a) for a in self.amounts))
        if len(self.artists) != len(self.amounts):
            raise DimensionMismatch("one amount per artist required")
        if any(a < 0 for a in self.amounts):
            raise ModelError("allocation amounts must be nonnegative")

    def __getitem__(self, artist: str) -> Fraction:
        try:
            return self.amounts[self.artists.index(artist)]
        except ValueError:
            raise UnknownArtist(artist) from None

    @property
    def total(self) -> Fraction:
        return sum(self.amounts, Fraction(0))

    def as_dict(self) -> dict[str, Fraction]:
        return dict(zip(self.artists, self.amounts))


# -- serialization -----------------------------------------------------

_FORMATS = ("csv", "json")


def problem_to_dict(problem: StreamingProblem) -> dict:
    """JSON-ready dict form of a problem.  Rationals become 'p/q' strings."""
    return {
        "artists": list(problem.artists),
        "users": list(problem.users),
        "streams": [list(row) for row in problem.streams],
        "fee": str(problem.fee),
    }


def problem_from_dict(data: Mapping) -> StreamingProblem:
    if not isinstance(data, Mapping):
        raise ParseError("top level must be an object")
    for key in ("artists", "users", "streams"):
        if key not in data:
            raise ParseError(f"missing key {key!r}")
    artists = data["artists"]
    users = data["users"]
    streams = data["streams"]
    if (not isinstance(artists, list) or not isinstance(users, list)
            or not isinstance(streams, list)):
        raise ParseError("'artists', 'users' and 'streams' must be arrays")
    for row in streams:
        if not isinstance(row, list):
            raise ParseError("'streams' must be an array of arrays")
        for cell in row:
            if isinstance(cell, bool) or not isinstance(cell, int):
                raise ParseError(f"stream counts must be integers, got {cell!r}")
    fee = data.get("fee", 1)
    if isinstance(fee, bool) or not isinstance(fee, (int, str)):
        raise ParseError(f"fee must be an integer or a 'p/q' string, got {fee!r}")
    return new_problem(artists, users, streams, as_rational(fee, "fee"))


def _parse_csv(text: str) -> StreamingProblem:
    lines = [ln for ln in text.replace("\r\n", "\n").replace("\r", "\n").split("\n")]
    while lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError("empty input", line=1)
    header = [cell.strip() for cell in lines[0].split(",")]
    if not header or header[0] != "artist":
        raise ParseError("header must start with 'artist'", line=1, field=1)
    users = header[1:]
    if not users:
        raise ParseError("header names no users", line=1)
    artists: list[str] = []
    rows: list[list[int]] = []
    for lineno, raw in enumerate(lines[1:], start=2):
        cells = [cell.strip() for cell in raw.split(",")]
        if len(cells) != len(header):
            raise ParseError(
                f"expected {len(header)} fields, got {len(cells)}", line=lineno)
        artists.append(cells[0])
        row = []
        for fieldno, cell in enumerate(cells[1:], start=2):
            try:
                value = int(cell)
            except ValueError:
                raise ParseError(f"not an integer: {cell!r}",
                                 line=lineno, field=fieldno) from None
            if value < 0:
                raise ParseError(f"negative stream count: {value}",
                                 line=lineno, field=fieldno)
            row.append(value)
        rows.append(row)
    if not artists:
        raise ParseError("no artist rows", line=2)
    return new_problem(artists, users, rows)


def _serialize_csv(problem: StreamingProblem) -> str:
    for ident in problem.artists + problem.users:
        if "," in ident or "\n" in ident or "\r" in ident:
            raise ParseError(f"identifier {ident!r} cannot be written as CSV")
    lines = ["artist," + ",".join(problem.users)]
    for artist, row in zip(problem.artists, problem.streams):
        lines.append(artist + "," + ",".join(str(c) for c in row))
    return "\n".join(lines) + "\n"


def parse_problem(data: str | bytes, format: str) -> StreamingProblem:
    """Parse a problem from ``csv`` or ``json`` text.

    The CSV form carries no fee (use :meth:`StreamingProblem.with_fee` for a
    fee other than 1).  Raises :class:`ParseError` with a line and field
    where that is meaningful, and the usual construction errors otherwise.
    """
    if format not in _FORMATS:
        raise ParseError(f"unknown format {format!r}; expected one of {_FORMATS}")
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc}") from None
    if format == "csv":
        return _parse_csv(data)
    try:
        payload = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad JSON: {exc.msg}", line=exc.lineno, field=exc.colno) from None
    return problem_from_dict(payload)


def serialize_problem(problem: StreamingProblem, format: str) -> str:
    """Serialize to ``csv`` or ``json``.  ``parse_problem`` inverts both forms."""
    if format not in _FORMATS:
        raise ParseError(f"unknown format {format!r}; expected one of {_FORMATS}")
    if format == "csv":
        return _serialize_csv(problem)
    return json.dumps(problem_to_dict(problem), indent=2) + "\n"
