"""Closed-form bound catalog, altruism-model conversion, comparison tables.

Each entry evaluates one known worst-case formula for a game family as an
exact rational (or the tagged infinity) so computed instance quantities can
be checked against it. Lower-bound entries describe class-level worst cases
(an existential statement), so they are compared informationally against
worst mixed/coarse values and never gate a pass/fail verdict on pure PoA.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Optional

from .game import Altruism, Game
from .rationals import INFINITY, Extended


def harmonic(n: int) -> Fraction:
    """Exact n-th harmonic number."""
    if n < 1:
        raise ValueError("harmonic numbers start at n = 1")
    return sum((Fraction(1, k) for k in range(1, n + 1)), Fraction(0))


def xi_to_alpha(xi) -> Fraction:
    """Convert the "weight on the others" parameterization to an altruism level.

    The source model weights the others' cost by xi and own cost by 1 - xi;
    for xi in [0, 1/2] this is equivalent to an altruism level
    alpha = xi / (1 - xi). Beyond 1/2 a player would care about the others
    strictly more than about himself, which this model does not represent.
    """
    xi = Fraction(xi)
    if not (0 <= xi <= Fraction(1, 2)):
        raise ValueError(
            f"xi = {xi} is outside [0, 1/2]: a player weighting others' costs "
            "more than his own has no altruism-level equivalent here"
        )
    return xi / (1 - xi)


def alpha_to_xi(alpha) -> Fraction:
    """Inverse conversion: xi = alpha / (1 + alpha), exact round trip."""
    alpha = Fraction(alpha)
    if not (0 <= alpha <= 1):
        raise ValueError(f"alpha = {alpha} is outside [0, 1]")
    return alpha / (1 + alpha)


class Direction(Enum):
    UPPER_POA = "upper-poa"
    UPPER_POS = "upper-pos"
    LOWER_POA = "lower-poa"
    EXACT_RPOA = "exact-rpoa"


@dataclass(frozen=True)
class BoundEntry:
    id: str
    description: str
    families: frozenset[str]
    direction: Direction
    params: tuple[str, ...]
    evaluate: Callable[[dict], Extended]
    requires_uniform: bool = False
    requires_zero_one: bool = False


def _check_level(params: dict, key: str) -> Fraction:
    value = Fraction(params[key])
    if not (0 <= value <= 1):
        raise ValueError(f"{key} = {value} is outside [0, 1]")
    return value


def _cost_sharing_rpoa(params: dict) -> Extended:
    n = int(params["n"])
    if n < 1:
        raise ValueError("n must be at least 1")
    a_hat = _check_level(params, "alpha_hat")
    if a_hat == 1:
        return INFINITY
    return Fraction(n) / (1 - a_hat)


def _cost_sharing_pos(params: dict) -> Extended:
    n = int(params["n"])
    if n < 1:
        raise ValueError("n must be at least 1")
    a = _check_level(params, "alpha")
    return (1 - a) * harmonic(n) + a


def _congestion_rpoa_uniform(params: dict) -> Extended:
    a = _check_level(params, "alpha")
    return (5 + 4 * a) / (2 + a)


def _congestion_rpoa_split(params: dict) -> Extended:
    a_hat = _check_level(params, "alpha_hat")
    a_check = _check_level(params, "alpha_check")
    if a_check > a_hat:
        raise ValueError("alpha_check cannot exceed alpha_hat")
    return (5 + 2 * a_hat + 2 * a_check) / (2 - a_hat + 2 * a_check)


def _congestion_pos(params: dict) -> Extended:
    a = _check_level(params, "alpha")
    return Fraction(2) / (1 + a)


def _singleton_poa_uniform(params: dict) -> Extended:
    a = _check_level(params, "alpha")
    return Fraction(4) / (3 + a)


def _singleton_poa_altruist_share(params: dict) -> Extended:
    a = _check_level(params, "alpha")
    return (4 - 2 * a) / (3 - a)


_CONGESTION_FAMILIES = frozenset({"linear_congestion", "singleton_linear"})

CATALOG: dict[str, BoundEntry] = {
    entry.id: entry
    for entry in (
        BoundEntry(
            id="cost-sharing-rpoa",
            description="n / (1 - max altruism level), infinite at 1",
            families=frozenset({"cost_sharing"}),
            direction=Direction.EXACT_RPOA,
            params=("n", "alpha_hat"),
            evaluate=_cost_sharing_rpoa,
        ),
        BoundEntry(
            id="cost-sharing-pos",
            description="(1 - alpha) * H_n + alpha",
            families=frozenset({"cost_sharing"}),
            direction=Direction.UPPER_POS,
            params=("n", "alpha"),
            evaluate=_cost_sharing_pos,
            requires_uniform=True,
        ),
        BoundEntry(
            id="valid-utility-rpoa",
            description="constant 2 for every altruism vector",
            families=frozenset({"valid_utility"}),
            direction=Direction.EXACT_RPOA,
            params=(),
            evaluate=lambda params: Fraction(2),
        ),
        BoundEntry(
            id="congestion-rpoa-uniform",
            description="(5 + 4 alpha) / (2 + alpha)",
            families=_CONGESTION_FAMILIES,
            direction=Direction.EXACT_RPOA,
            params=("alpha",),
            evaluate=_congestion_rpoa_uniform,
            requires_uniform=True,
        ),
        BoundEntry(
            id="congestion-rpoa-split",
            description="(5 + 2 max + 2 min) / (2 - max + 2 min) over altruism levels",
            families=_CONGESTION_FAMILIES,
            direction=Direction.UPPER_POA,
            params=("alpha_hat", "alpha_check"),
            evaluate=_congestion_rpoa_split,
        ),
        BoundEntry(
            id="congestion-pos",
            description="2 / (1 + alpha)",
            families=_CONGESTION_FAMILIES,
            direction=Direction.UPPER_POS,
            params=("alpha",),
            evaluate=_congestion_pos,
            requires_uniform=True,
        ),
        BoundEntry(
            id="singleton-poa-uniform",
            description="4 / (3 + alpha) for pure equilibria",
            families=frozenset({"singleton_linear"}),
            direction=Direction.UPPER_POA,
            params=("alpha",),
            evaluate=_singleton_poa_uniform,
            requires_uniform=True,
        ),
        BoundEntry(
            id="singleton-mixed-poa-floor",
            description="worst-case mixed price of anarchy approaches 2",
            families=frozenset({"singleton_linear"}),
            direction=Direction.LOWER_POA,
            params=(),
            evaluate=lambda params: Fraction(2),
        ),
        BoundEntry(
            id="singleton-poa-01",
            description="(4 - 2 alpha) / (3 - alpha), alpha the fully-altruistic share",
            families=frozenset({"singleton_linear"}),
            direction=Direction.UPPER_POA,
            params=("alpha",),
            evaluate=_singleton_poa_altruist_share,
            requires_zero_one=True,
        ),
    )
}


def eval_bound(bound_id: str, params: Optional[dict] = None) -> Extended:
    """Evaluate a catalog formula on validated parameters."""
    entry = CATALOG.get(bound_id)
    if entry is None:
        raise KeyError(f"unknown bound id: {bound_id!r}")
    params = dict(params or {})
    missing = [p for p in entry.params if p not in params]
    if missing:
        raise ValueError(f"bound {bound_id} needs parameters {missing}")
    return entry.evaluate(params)


@dataclass(frozen=True)
class ComputedQuantities:
    """Instance-level quantities to compare against the catalog."""

    pure_poa: Optional[Extended] = None
    pure_pos: Optional[Extended] = None
    rpoa: Optional[Extended] = None
    coarse_ratio: Optional[Extended] = None


@dataclass(frozen=True)
class ComparisonRow:
    bound_id: str
    direction: Direction
    bound_value: Extended
    quantity: str
    computed: Extended
    verdict: str  # "pass" | "tight" | "fail"


def _ext_le(a: Extended, b: Extended) -> bool:
    if b is INFINITY:
        return True
    if a is INFINITY:
        return False
    return a <= b


def _verdict_upper(computed: Extended, bound: Extended) -> str:
    if computed == bound:
        return "tight"
    return "pass" if _ext_le(computed, bound) else "fail"


def _entry_params(entry: BoundEntry, game: Game, alpha: Altruism) -> Optional[dict]:
    """Parameter dict for the instance, or None when the shape does not apply."""
    levels = alpha.levels
    if entry.requires_uniform and alpha.max_level != alpha.min_level:
        return None
    if entry.requires_zero_one:
        if any(a not in (0, 1) for a in levels):
            return None
        share = Fraction(sum(1 for a in levels if a == 1), len(levels))
        return {"alpha": share}
    params: dict = {}
    if "n" in entry.params:
        params["n"] = game.player_count
    if "alpha" in entry.params:
        params["alpha"] = alpha.levels[0]
    if "alpha_hat" in entry.params:
        params["alpha_hat"] = alpha.max_level
    if "alpha_check" in entry.params:
        params["alpha_check"] = alpha.min_level
    return params


def applicable_bounds(family_tag: Optional[str]) -> list[BoundEntry]:
    if family_tag is None:
        return []
    return [entry for entry in CATALOG.values() if family_tag in entry.families]


def compare_report(
    game: Game, alpha: Altruism, computed: ComputedQuantities
) -> list[ComparisonRow]:
    """Pair every applicable catalog bound with the computed quantities.

    Upper/exact entries produce one row per available PoA-type quantity
    (pure PoA, rpoa, coarse ratio) or the PoS; a row is "tight" on exact
    equality. Lower bounds are informational: "tight" on equality, else
    "pass" (a single instance cannot contradict a class-level lower bound).
    """
    rows: list[ComparisonRow] = []
    for entry in applicable_bounds(game.family_tag):
        params = _entry_params(entry, game, alpha)
        if params is None:
            continue
        bound_value = entry.evaluate(params)
        if entry.direction is Direction.UPPER_POS:
            quantities = [("pure_pos", computed.pure_pos)]
        elif entry.direction is Direction.LOWER_POA:
            quantities = [("coarse_ratio", computed.coarse_ratio)]
        else:
            quantities = [
                ("pure_poa", computed.pure_poa),
                ("rpoa", computed.rpoa),
                ("coarse_ratio", computed.coarse_ratio),
            ]
        for name, value in quantities:
            if value is None:
                continue
            if entry.direction is Direction.LOWER_POA:
                verdict = "tight" if value == bound_value else "pass"
            else:
                verdict = _verdict_upper(value, bound_value)
            rows.append(
                ComparisonRow(
                    bound_id=entry.id,
                    direction=entry.direction,
                    bound_value=bound_value,
                    quantity=name,
                    computed=value,
                    verdict=verdict,
                )
            )
    return rows
