"""Exact equilibrium analysis: enumeration, verification, and ratios.

Pure equilibria are defined through the perceived (altruistic) objectives
with strict improvement as the deviation test, so indifferent profiles stay
equilibria. Prices of anarchy/stability are always measured on the original
social objective.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence

from .families import CongestionSpec, CostSharingSpec, SingletonTableSpec
from .game import (
    Altruism,
    CapExceededError,
    Game,
    Orientation,
    Profile,
    UndefinedRatioError,
    deviate,
    enumerate_profiles,
    perceived_value,
)
from .rationals import INFINITY, Extended


class _Tables:
    """Memoized exact evaluations over an enumerable profile space."""

    def __init__(self, game: Game, alpha: Altruism | None = None):
        self.game = game
        self.alpha = alpha
        self._social: dict[Profile, Fraction] = {}
        self._direct: dict[tuple[int, Profile], Fraction] = {}
        self._perceived: dict[tuple[int, Profile], Fraction] = {}

    def social(self, s: Profile) -> Fraction:
        v = self._social.get(s)
        if v is None:
            v = self.game.social_value(s)
            self._social[s] = v
        return v

    def direct(self, i: int, s: Profile) -> Fraction:
        key = (i, s)
        v = self._direct.get(key)
        if v is None:
            v = self.game.direct_value(i, s)
            self._direct[key] = v
        return v

    def perceived(self, i: int, s: Profile) -> Fraction:
        key = (i, s)
        v = self._perceived.get(key)
        if v is None:
            a = self.alpha[i]
            if a == 0:
                v = self.direct(i, s)
            elif a == 1:
                v = self.social(s)
            else:
                v = (1 - a) * self.direct(i, s) + a * self.social(s)
            self._perceived[key] = v
        return v


def _improves(game: Game, current: Fraction, candidate: Fraction) -> bool:
    if game.orientation is Orientation.COST:
        return candidate < current
    return candidate > current


class PureNeCheck(NamedTuple):
    is_ne: bool
    deviation: Optional[tuple[int, int]]  # (player, strategy) of first strict gain


def is_pure_ne(
    game: Game, alpha: Altruism, s: Profile, _tables: _Tables | None = None
) -> PureNeCheck:
    """Check the profile against every unilateral deviation, exactly.

    Returns the first strictly profitable deviation (lowest player, then
    lowest strategy index) when the profile is not an equilibrium.
    """
    s = game.check_profile(s)
    t = _tables if _tables is not None else _Tables(game, alpha)
    for i in range(game.player_count):
        current = t.perceived(i, s)
        for a in range(game.strategy_counts[i]):
            if a == s[i]:
                continue
            if _improves(game, current, t.perceived(i, deviate(s, i, a))):
                return PureNeCheck(False, (i, a))
    return PureNeCheck(True, None)


def _chunked(seq: Sequence, parts: int) -> list[Sequence]:
    if parts <= 1 or len(seq) <= 1:
        return [seq]
    step = (len(seq) + parts - 1) // parts
    return [seq[k : k + step] for k in range(0, len(seq), step)]


def enumerate_pure_ne(
    game: Game, alpha: Altruism, cap: int | None = None, workers: int = 1
) -> list[Profile]:
    """All pure equilibria of the altruistic extension, in lexicographic order.

    ``workers`` > 1 partitions the profile scan across a thread pool; chunks
    are merged in order, so the result is identical for any worker count.
    """
    profiles = list(enumerate_profiles(game, cap))
    tables = _Tables(game, alpha)
    # warm the shared tables before fanning out so worker threads only read
    if workers > 1:
        for s in profiles:
            for i in range(game.player_count):
                tables.perceived(i, s)

    def scan(chunk: Sequence[Profile]) -> list[Profile]:
        return [s for s in chunk if is_pure_ne(game, alpha, s, tables).is_ne]

    if workers <= 1:
        return scan(profiles)

    from concurrent.futures import ThreadPoolExecutor

    chunks = _chunked(profiles, workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(scan, chunks))
    merged: list[Profile] = []
    for part in results:
        merged.extend(part)
    return merged


def optimum(game: Game, cap: int | None = None) -> tuple[Profile, Fraction]:
    """Socially best profile (min cost / max payoff), lexicographic tie-break."""
    best_profile: Profile | None = None
    best_value: Fraction | None = None
    minimize = game.orientation is Orientation.COST
    for s in enumerate_profiles(game, cap):
        v = game.social_value(s)
        if best_value is None or (v < best_value if minimize else v > best_value):
            best_profile, best_value = s, v
    assert best_profile is not None and best_value is not None
    return best_profile, best_value


@dataclass(frozen=True)
class EquilibriumReport:
    """Pure equilibria with optimum and the induced anarchy/stability ratios.

    ``pure_poa``/``pure_pos`` are ``None`` when no pure equilibrium exists
    (a marked absence, not infinity); in payoff games a zero-welfare worst
    equilibrium yields the tagged infinity.
    """

    pure_ne: tuple[Profile, ...]
    optimum_profile: Profile
    optimum_value: Fraction
    pure_poa: Optional[Extended]
    pure_pos: Optional[Extended]
    orientation: Orientation

    @property
    def has_pure_ne(self) -> bool:
        return bool(self.pure_ne)


def pure_poa_pos(
    game: Game, alpha: Altruism, cap: int | None = None, workers: int = 1
) -> EquilibriumReport:
    opt_profile, opt_value = optimum(game, cap)
    if opt_value == 0:
        raise UndefinedRatioError(
            "undefined ratio: the optimum social value is zero"
        )
    equilibria = tuple(enumerate_pure_ne(game, alpha, cap, workers))
    if not equilibria:
        return EquilibriumReport(
            equilibria, opt_profile, opt_value, None, None, game.orientation
        )
    values = [game.social_value(s) for s in equilibria]
    if game.orientation is Orientation.COST:
        poa: Extended = max(values) / opt_value
        pos: Extended = min(values) / opt_value
    else:
        worst, best = min(values), max(values)
        poa = INFINITY if worst == 0 else opt_value / worst
        pos = INFINITY if best == 0 else opt_value / best
    return EquilibriumReport(
        equilibria, opt_profile, opt_value, poa, pos, game.orientation
    )


class BrdStatus(Enum):
    CONVERGED = "converged"
    CYCLE = "cycle"
    STEP_LIMIT = "step-limit"


@dataclass(frozen=True)
class BrdResult:
    profile: Profile
    steps: int
    status: BrdStatus
    path: tuple[Profile, ...]


def best_response_dynamics(
    game: Game,
    alpha: Altruism,
    start: Profile,
    max_steps: int = 100_000,
) -> BrdResult:
    """Deterministic best-response walk from ``start``.

    Each step moves the lowest-index player who can strictly improve to his
    exact best response (ties broken by lowest strategy index). Stops at an
    equilibrium, on revisiting a profile (cycle), or at the step limit.
    """
    s = game.check_profile(start)
    tables = _Tables(game, alpha)
    visited = {s}
    path = [s]
    for step in range(max_steps):
        mover: tuple[int, int] | None = None
        for i in range(game.player_count):
            current = tables.perceived(i, s)
            best_a, best_v = s[i], current
            for a in range(game.strategy_counts[i]):
                v = tables.perceived(i, deviate(s, i, a))
                if _improves(game, best_v, v):
                    best_a, best_v = a, v
            if best_a != s[i] and _improves(game, current, best_v):
                mover = (i, best_a)
                break
        if mover is None:
            return BrdResult(s, step, BrdStatus.CONVERGED, tuple(path))
        s = deviate(s, mover[0], mover[1])
        path.append(s)
        if s in visited:
            return BrdResult(s, step + 1, BrdStatus.CYCLE, tuple(path))
        visited.add(s)
    return BrdResult(s, max_steps, BrdStatus.STEP_LIMIT, tuple(path))


@dataclass(frozen=True)
class MixedProfile:
    """Independent per-player probability vectors, exact rationals."""

    distributions: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        dists = tuple(
            tuple(Fraction(p) for p in row) for row in self.distributions
        )
        object.__setattr__(self, "distributions", dists)
        for i, row in enumerate(dists):
            if any(p < 0 for p in row):
                raise ValueError(f"negative probability for player {i}")
            if sum(row) != 1:
                raise ValueError(f"probabilities of player {i} do not sum to 1")

    @classmethod
    def point_mass(cls, profile: Profile, strategy_counts: Sequence[int]) -> "MixedProfile":
        rows = []
        for a, k in zip(profile, strategy_counts):
            row = [Fraction(0)] * k
            row[a] = Fraction(1)
            rows.append(tuple(row))
        return cls(tuple(rows))

    def probability(self, s: Profile) -> Fraction:
        p = Fraction(1)
        for row, a in zip(self.distributions, s):
            p *= row[a]
        return p


@dataclass(frozen=True)
class JointDistribution:
    """Exact distribution over full strategy profiles."""

    weights: tuple[tuple[Profile, Fraction], ...]

    def __post_init__(self):
        items = tuple(
            (tuple(s), Fraction(w)) for s, w in self.weights
        )
        object.__setattr__(self, "weights", tuple(sorted(items)))
        if any(w < 0 for _, w in self.weights):
            raise ValueError("negative profile weight")
        if sum((w for _, w in self.weights), Fraction(0)) != 1:
            raise ValueError("profile weights do not sum to 1")

    @classmethod
    def from_mapping(cls, mapping) -> "JointDistribution":
        return cls(tuple(mapping.items()))

    def support(self) -> tuple[Profile, ...]:
        return tuple(s for s, w in self.weights if w > 0)


def verify_mixed_ne(
    game: Game, alpha: Altruism, mixed: MixedProfile, cap: int | None = None
) -> PureNeCheck:
    """Exact expected-value check of the mixed-equilibrium conditions.

    Compares each player's expected perceived value on path against every
    pure deviation, with expectations taken over the product distribution.
    """
    if len(mixed.distributions) != game.player_count:
        raise ValueError("mixed profile has wrong number of players")
    for i, row in enumerate(mixed.distributions):
        if len(row) != game.strategy_counts[i]:
            raise ValueError(f"mixed profile of player {i} has wrong length")
    size = game.profile_space_size()
    from .game import profile_cap

    limit = profile_cap() if cap is None else cap
    if size > limit:
        raise CapExceededError(
            f"instance too large: {size} profiles exceed the cap of {limit}"
        )

    import itertools

    tables = _Tables(game, alpha)
    for i in range(game.player_count):
        others = [
            range(k) for j, k in enumerate(game.strategy_counts) if j != i
        ]
        k_i = game.strategy_counts[i]
        dev_expect = [Fraction(0)] * k_i
        for rest in itertools.product(*others):
            prob = Fraction(1)
            pos = 0
            for j in range(game.player_count):
                if j == i:
                    continue
                prob *= mixed.distributions[j][rest[pos]]
                pos += 1
            if prob == 0:
                continue
            for a in range(k_i):
                s = rest[:i] + (a,) + rest[i:]
                dev_expect[a] += prob * tables.perceived(i, s)
        on_path = sum(
            (mixed.distributions[i][a] * dev_expect[a] for a in range(k_i)),
            Fraction(0),
        )
        for a in range(k_i):
            if _improves(game, on_path, dev_expect[a]):
                return PureNeCheck(False, (i, a))
    return PureNeCheck(True, None)


def _facility_marginals(
    strategy_sets, mixed: MixedProfile, facility_count: int
) -> list[list[Fraction]]:
    """Per player, probability of using each facility under the product mix."""
    out = []
    for i, strategies in enumerate(strategy_sets):
        probs = [Fraction(0)] * facility_count
        for a, strategy in enumerate(strategies):
            p = mixed.distributions[i][a]
            if p:
                for e in strategy:
                    probs[e] += p
        out.append(probs)
    return out


def _load_distribution(probabilities: Iterable[Fraction]) -> list[Fraction]:
    """Exact distribution of a sum of independent 0/1 variables."""
    dist = [Fraction(1)]
    for p in probabilities:
        nxt = [Fraction(0)] * (len(dist) + 1)
        q = 1 - p
        for k, w in enumerate(dist):
            if w:
                nxt[k] += w * q
                nxt[k + 1] += w * p
        dist = nxt
    return dist


def expected_social_cost(
    game: Game,
    distribution: MixedProfile | JointDistribution,
    cap: int | None = None,
) -> Fraction:
    """Exact expectation of the social value under the distribution.

    Joint distributions are summed over their support. Product distributions
    use closed forms for congestion and cost-sharing families (per-facility
    load moments), falling back to profile enumeration (within the cap) for
    everything else.
    """
    if isinstance(distribution, JointDistribution):
        total = Fraction(0)
        for s, w in distribution.weights:
            if w:
                total += w * game.social_value(game.check_profile(s))
        return total

    mixed = distribution
    if len(mixed.distributions) != game.player_count:
        raise ValueError("mixed profile has wrong number of players")
    for i, row in enumerate(mixed.distributions):
        if len(row) != game.strategy_counts[i]:
            raise ValueError(f"mixed profile of player {i} has wrong length")

    spec = game.family_spec
    if isinstance(spec, CongestionSpec):
        m = len(spec.delay_coeffs)
        marginals = _facility_marginals(spec.strategy_sets, mixed, m)
        total = Fraction(0)
        for e in range(m):
            a, b = spec.delay_coeffs[e]
            if a == 0 and b == 0:
                continue
            probs = [marginals[i][e] for i in range(game.player_count)]
            mean = sum(probs, Fraction(0))
            variance = sum((p * (1 - p) for p in probs), Fraction(0))
            total += a * (variance + mean * mean) + b * mean
        return total
    if isinstance(spec, CostSharingSpec):
        m = len(spec.facility_costs)
        marginals = _facility_marginals(spec.strategy_sets, mixed, m)
        total = Fraction(0)
        for e in range(m):
            c = spec.facility_costs[e]
            if c == 0:
                continue
            unused = Fraction(1)
            for i in range(game.player_count):
                unused *= 1 - marginals[i][e]
            total += c * (1 - unused)
        return total
    if isinstance(spec, SingletonTableSpec):
        m = len(spec.delay_tables)
        total = Fraction(0)
        for e in range(m):
            probs = [mixed.distributions[i][e] for i in range(game.player_count)]
            dist = _load_distribution(probs)
            table = spec.delay_tables[e]
            for x, w in enumerate(dist):
                if x and w:
                    total += w * x * table[x - 1]
        return total

    total = Fraction(0)
    for s in enumerate_profiles(game, cap):
        p = mixed.probability(s)
        if p:
            total += p * game.social_value(s)
    return total


def empirical_profile_counts(profiles: Iterable[Profile]) -> Counter:
    """Multiplicity of each profile in a played sequence."""
    return Counter(tuple(s) for s in profiles)
