"""Finite strategic games and their altruistic extensions.

A game couples per-player direct cost (or payoff) evaluators with a
sum-bounded social evaluator. The altruistic extension replaces player
``i``'s objective with the convex combination

    (1 - a_i) * direct_i(s)  +  a_i * social(s)

where ``a_i`` is that player's altruism level in ``[0, 1]``. Level 0
recovers the original selfish game, level 1 a fully altruistic player.

Everything here is exact: evaluators must return ``Fraction`` values and
profiles are plain tuples of strategy indices.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterator, Sequence

Profile = tuple[int, ...]

DEFAULT_PROFILE_CAP = 10_000_000
CAP_ENV_VAR = "GAMELAB_CAP"


class CapExceededError(Exception):
    """Raised when an operation would enumerate more profiles than allowed."""


class UndefinedRatioError(Exception):
    """Raised when a price-of-anarchy style ratio has a zero denominator side."""


class Orientation(Enum):
    COST = "cost"
    PAYOFF = "payoff"


def profile_cap() -> int:
    """Active profile-enumeration cap (``GAMELAB_CAP`` overrides the default)."""
    raw = os.environ.get(CAP_ENV_VAR)
    if raw is None:
        return DEFAULT_PROFILE_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ValueError(f"{CAP_ENV_VAR} must be an integer, got {raw!r}") from exc
    if cap <= 0:
        raise ValueError(f"{CAP_ENV_VAR} must be positive, got {cap}")
    return cap


@dataclass(frozen=True)
class Altruism:
    """Per-player altruism levels, each an exact rational in [0, 1]."""

    levels: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(Fraction(a) for a in self.levels))
        for i, a in enumerate(self.levels):
            if not (0 <= a <= 1):
                raise ValueError(f"altruism level of player {i} out of [0, 1]: {a}")

    @classmethod
    def uniform(cls, level, player_count: int) -> "Altruism":
        return cls((Fraction(level),) * player_count)

    @classmethod
    def selfish(cls, player_count: int) -> "Altruism":
        return cls.uniform(0, player_count)

    @property
    def max_level(self) -> Fraction:
        return max(self.levels)

    @property
    def min_level(self) -> Fraction:
        return min(self.levels)

    @property
    def is_uniform(self) -> bool:
        return self.max_level == self.min_level

    def __len__(self) -> int:
        return len(self.levels)

    def __getitem__(self, player: int) -> Fraction:
        return self.levels[player]


@dataclass(frozen=True)
class Game:
    """Immutable finite game with exact evaluators.

    ``direct_value(i, s)`` and ``social_value(s)`` must be pure functions of
    their arguments returning Fractions; they are closures over family data
    rather than materialized tables, so the profile space can exceed what a
    table would hold. ``from_tables`` builds the explicit-table variant.

    Invariant (checked property-style in tests, not per call): the social
    value is sum-bounded by the players' direct values — ``social <= sum``
    for cost games, ``social >= sum`` for payoff games.
    """

    player_count: int
    strategy_counts: tuple[int, ...]
    orientation: Orientation
    direct_value: Callable[[int, Profile], Fraction] = field(compare=False)
    social_value: Callable[[Profile], Fraction] = field(compare=False)
    family_tag: str | None = None
    family_spec: object | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.player_count < 1:
            raise ValueError("games need at least one player")
        if len(self.strategy_counts) != self.player_count:
            raise ValueError("strategy_counts length must equal player_count")
        if any(k < 1 for k in self.strategy_counts):
            raise ValueError("every player needs at least one strategy")

    def profile_space_size(self) -> int:
        size = 1
        for k in self.strategy_counts:
            size *= k
        return size

    def check_profile(self, s: Sequence[int]) -> Profile:
        s = tuple(s)
        if len(s) != self.player_count:
            raise IndexError(f"profile length {len(s)} != {self.player_count} players")
        for i, a in enumerate(s):
            if not (0 <= a < self.strategy_counts[i]):
                raise IndexError(f"strategy {a} out of range for player {i}")
        return s

    def check_player(self, i: int) -> int:
        if not (0 <= i < self.player_count):
            raise IndexError(f"player {i} out of range")
        return i


def perceived_value(game: Game, alpha: Altruism, i: int, s: Profile) -> Fraction:
    """Player ``i``'s perceived cost (or payoff) under the altruistic extension."""
    game.check_player(i)
    a = alpha[i]
    if a == 0:
        return game.direct_value(i, s)
    if a == 1:
        return game.social_value(s)
    return (1 - a) * game.direct_value(i, s) + a * game.social_value(s)


def residual_value(game: Game, i: int, s: Profile) -> Fraction:
    """Social value minus player ``i``'s direct value at ``s``."""
    game.check_player(i)
    return game.social_value(s) - game.direct_value(i, s)


def deviate(s: Profile, i: int, new_strategy: int, game: Game | None = None) -> Profile:
    """Profile with player ``i`` moved to ``new_strategy``; ``s`` unchanged."""
    if not (0 <= i < len(s)):
        raise IndexError(f"player {i} out of range")
    if new_strategy < 0:
        raise IndexError(f"strategy {new_strategy} out of range for player {i}")
    if game is not None:
        game.check_player(i)
        if new_strategy >= game.strategy_counts[i]:
            raise IndexError(f"strategy {new_strategy} out of range for player {i}")
    return s[:i] + (new_strategy,) + s[i + 1 :]


def enumerate_profiles(game: Game, cap: int | None = None) -> Iterator[Profile]:
    """Yield every profile exactly once, in lexicographic order.

    Raises :class:`CapExceededError` up front when the profile space exceeds
    the cap (argument, else ``GAMELAB_CAP``, else the default).
    """
    limit = profile_cap() if cap is None else cap
    size = game.profile_space_size()
    if size > limit:
        raise CapExceededError(
            f"instance too large: {size} profiles exceed the cap of {limit}"
        )
    return itertools.product(*(range(k) for k in game.strategy_counts))


def from_tables(
    direct_tables: Sequence[Sequence],
    social_table: Sequence,
    strategy_counts: Sequence[int],
    orientation: Orientation = Orientation.COST,
) -> Game:
    """Explicit-table game for hand-written instances.

    Tables are flat, in lexicographic profile order: ``direct_tables[i][r]``
    is player ``i``'s value at the profile of rank ``r``, ``social_table[r]``
    the social value.
    """
    counts = tuple(int(k) for k in strategy_counts)
    n = len(counts)
    size = 1
    for k in counts:
        size *= k
    if len(social_table) != size:
        raise ValueError(f"social table has {len(social_table)} entries, expected {size}")
    if len(direct_tables) != n:
        raise ValueError(f"need one direct table per player ({n})")
    direct = tuple(tuple(Fraction(v) for v in row) for row in direct_tables)
    social = tuple(Fraction(v) for v in social_table)
    for i, row in enumerate(direct):
        if len(row) != size:
            raise ValueError(f"direct table of player {i} has wrong size")

    strides = [0] * n
    acc = 1
    for i in reversed(range(n)):
        strides[i] = acc
        acc *= counts[i]
    strides_t = tuple(strides)

    def rank(s: Profile) -> int:
        return sum(a * w for a, w in zip(s, strides_t))

    return Game(
        player_count=n,
        strategy_counts=counts,
        orientation=orientation,
        direct_value=lambda i, s: direct[i][rank(s)],
        social_value=lambda s: social[rank(s)],
        family_tag="explicit",
    )
