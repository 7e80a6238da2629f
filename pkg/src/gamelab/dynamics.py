"""No-regret play in altruistic games and the total-anarchy consequence.

Learners run in floating point (exponential weights are irrational), but
everything that is *checked* — per-round social cost, cumulative perceived
cost, external regret, the average-cost bound — is recomputed in exact
rationals from the logged integer profile sequence, so given a trajectory
the verified inequalities are exact.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import NamedTuple, Optional

from .equilibria import _Tables
from .game import Altruism, Game, Orientation, Profile, deviate, enumerate_profiles
from .rationals import INFINITY
from .smoothness import RpoaResult


class LearnerKind(Enum):
    MULTIPLICATIVE_WEIGHTS = "mw"
    REGRET_MATCHING = "rm"


@dataclass(frozen=True)
class LearnerConfig:
    """Learner choice plus the (descriptive) step-size schedule.

    Multiplicative weights uses eta_t = sqrt(ln k / t) per player with k
    strategies; regret matching needs no step size. Losses are perceived
    values scaled into [0, 1] by the instance-wide maximum perceived value.
    """

    kind: LearnerKind = LearnerKind.MULTIPLICATIVE_WEIGHTS
    eta_schedule: str = "sqrt(ln k / t)"


@dataclass(frozen=True)
class Trajectory:
    profiles: tuple[Profile, ...]
    social_costs: tuple[Fraction, ...]
    cumulative_perceived: tuple[Fraction, ...]
    seed: int
    config: LearnerConfig
    normalizer: Fraction

    @property
    def rounds(self) -> int:
        return len(self.profiles)

    def average_social_cost(self) -> Fraction:
        return sum(self.social_costs, Fraction(0)) / len(self.social_costs)


def _max_perceived(game: Game, alpha: Altruism, cap: int | None) -> Fraction:
    best = Fraction(0)
    tables = _Tables(game, alpha)
    for s in enumerate_profiles(game, cap):
        for i in range(game.player_count):
            v = abs(tables.perceived(i, s))
            if v > best:
                best = v
    return best


def run_no_regret(
    game: Game,
    alpha: Altruism,
    rounds: int,
    config: LearnerConfig = LearnerConfig(),
    seed: int = 0,
    cap: int | None = None,
) -> Trajectory:
    """Independent per-player no-regret play against perceived values.

    Deterministic for fixed (game, alpha, rounds, config, seed): each player
    owns a generator derived from the master seed, profiles are sampled by
    inverse CDF in strategy-index order.
    """
    if rounds < 1:
        raise ValueError("need at least one round")
    normalizer = _max_perceived(game, alpha, cap)
    scale = float(normalizer) if normalizer else 1.0
    cost_view = game.orientation is Orientation.COST

    master = random.Random(seed)
    rngs = [random.Random(master.getrandbits(64)) for _ in range(game.player_count)]
    counts = game.strategy_counts

    weights = [[1.0] * k for k in counts]
    regrets = [[0.0] * k for k in counts]

    tables = _Tables(game, alpha)
    loss_cache: dict[tuple[int, Profile], float] = {}

    def loss(i: int, s: Profile) -> float:
        key = (i, s)
        v = loss_cache.get(key)
        if v is None:
            exact = tables.perceived(i, s)
            v = float(exact) / scale if cost_view else 1.0 - float(exact) / scale
            loss_cache[key] = v
        return v

    profiles: list[Profile] = []
    social: list[Fraction] = []
    cumulative = [Fraction(0)] * game.player_count

    for t in range(1, rounds + 1):
        chosen = []
        for i in range(game.player_count):
            k = counts[i]
            if config.kind is LearnerKind.MULTIPLICATIVE_WEIGHTS:
                row = weights[i]
            else:
                positive = [max(r, 0.0) for r in regrets[i]]
                row = positive if sum(positive) > 0 else [1.0] * k
            total = sum(row)
            draw = rngs[i].random() * total
            acc = 0.0
            pick = k - 1
            for a in range(k):
                acc += row[a]
                if draw < acc:
                    pick = a
                    break
            chosen.append(pick)
        s = tuple(chosen)
        profiles.append(s)
        social.append(tables.social(s))

        for i in range(game.player_count):
            cumulative[i] += tables.perceived(i, s)
            k = counts[i]
            row_losses = [loss(i, deviate(s, i, a)) for a in range(k)]
            if config.kind is LearnerKind.MULTIPLICATIVE_WEIGHTS:
                if k > 1:
                    eta = math.sqrt(math.log(k) / t)
                    w = weights[i]
                    for a in range(k):
                        w[a] *= math.exp(-eta * row_losses[a])
                    top = max(w)
                    if top < 1e-100 or top > 1e100:
                        weights[i] = [v / top for v in w]
            else:
                played = row_losses[s[i]]
                r = regrets[i]
                for a in range(k):
                    r[a] += played - row_losses[a]

    return Trajectory(
        profiles=tuple(profiles),
        social_costs=tuple(social),
        cumulative_perceived=tuple(cumulative),
        seed=seed,
        config=config,
        normalizer=normalizer,
    )


class PlayerRegret(NamedTuple):
    exact: Fraction  # in perceived-value units
    normalized: float  # divided by the trajectory normalizer


def average_external_regret(
    game: Game, alpha: Altruism, trajectory: Trajectory
) -> tuple[PlayerRegret, ...]:
    """Average regret against the best fixed own strategy in hindsight.

    Computed exactly from the logged profiles: (played total minus the best
    fixed-deviation total) / T for cost games, mirrored for payoff games.
    """
    tables = _Tables(game, alpha)
    counts = Counter(trajectory.profiles)
    rounds = trajectory.rounds
    cost_view = game.orientation is Orientation.COST
    out = []
    for i in range(game.player_count):
        played = Fraction(0)
        totals = [Fraction(0)] * game.strategy_counts[i]
        for s, multiplicity in counts.items():
            played += multiplicity * tables.perceived(i, s)
            for a in range(game.strategy_counts[i]):
                totals[a] += multiplicity * tables.perceived(i, deviate(s, i, a))
        if cost_view:
            exact = (played - min(totals)) / rounds
        else:
            exact = (max(totals) - played) / rounds
        scale = trajectory.normalizer
        normalized = float(exact / scale) if scale else float(exact)
        out.append(PlayerRegret(exact, normalized))
    return tuple(out)


@dataclass(frozen=True)
class TotalAnarchyReport:
    """Average played cost against the certificate bound with finite-T slack.

    The slack term (max player average regret) * n / ((1 - mu) * optimum)
    follows the per-round deviation-gap decomposition of the certificate
    argument; it is implementation-derived for finite T, the guarantee
    itself is asymptotic.
    """

    average_cost: Fraction
    bound: Fraction
    slack: Fraction
    rpoa_value: Fraction
    optimum_value: Fraction
    max_regret: Fraction
    holds: bool


def total_anarchy_check(
    game: Game,
    alpha: Altruism,
    trajectory: Trajectory,
    rpoa_result: RpoaResult,
    optimum_value: Fraction,
) -> TotalAnarchyReport:
    if game.orientation is not Orientation.COST:
        raise ValueError("the total-anarchy check is defined for cost games")
    if rpoa_result.value is INFINITY or rpoa_result.certificate is None:
        raise ValueError("the total-anarchy check needs a finite attained rpoa")
    if optimum_value <= 0:
        raise ValueError("the total-anarchy check needs a positive optimum")
    regrets = average_external_regret(game, alpha, trajectory)
    max_regret = max(r.exact for r in regrets)
    mu = rpoa_result.certificate.mu
    slack = max_regret * game.player_count / ((1 - mu) * optimum_value)
    bound = rpoa_result.value * optimum_value * (1 + slack)
    average = trajectory.average_social_cost()
    return TotalAnarchyReport(
        average_cost=average,
        bound=bound,
        slack=slack,
        rpoa_value=rpoa_result.value,
        optimum_value=optimum_value,
        max_regret=max_regret,
        holds=average <= bound,
    )
