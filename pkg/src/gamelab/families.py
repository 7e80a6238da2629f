"""Game family constructors, validators, potentials, and named instances.

Four families are supported:

* fair cost sharing — facility costs split evenly among users, social cost
  is the total cost of used facilities;
* linear congestion — per-facility delay ``a*x + b``, player cost sums the
  delays of chosen facilities, social cost is the sum of player costs;
* symmetric singleton congestion — the special case where every player
  picks exactly one facility from a common set (``singleton`` flag, plus an
  explicit per-count delay-table variant for non-linear delays);
* valid utility — payoff maximization against a submodular welfare function
  of the union of chosen sets.

Constructors return :class:`~gamelab.game.Game` values whose evaluators
close over the spec; the spec rides along as ``family_spec`` so analysis
code can use structure-aware fast paths.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .game import Altruism, Game, Orientation, Profile

COST_SHARING = "cost_sharing"
LINEAR_CONGESTION = "linear_congestion"
SINGLETON_LINEAR = "singleton_linear"
SINGLETON_TABLE = "singleton_table"
VALID_UTILITY = "valid_utility"


class FamilyError(ValueError):
    """Invalid family specification."""


class ValidationError(FamilyError):
    """A validator failed; carries the condition name and a witness."""

    def __init__(self, condition: str, witness, message: str):
        super().__init__(message)
        self.condition = condition
        self.witness = witness


def _freeze_strategy_sets(strategy_sets, allow_empty=False):
    out = []
    for i, strategies in enumerate(strategy_sets):
        frozen = tuple(frozenset(int(e) for e in s) for s in strategies)
        if not frozen:
            raise FamilyError(f"player {i} has no strategies")
        if not allow_empty:
            for s in frozen:
                if not s:
                    raise FamilyError(f"player {i} has an empty strategy")
        out.append(frozen)
    return tuple(out)


def _usage_counts(strategy_sets, s: Profile, facility_count: int) -> list[int]:
    counts = [0] * facility_count
    for i, a in enumerate(s):
        for e in strategy_sets[i][a]:
            counts[e] += 1
    return counts


@dataclass(frozen=True)
class CostSharingSpec:
    """Facility costs plus per-player strategy sets (non-empty facility subsets)."""

    facility_costs: tuple[Fraction, ...]
    strategy_sets: tuple[tuple[frozenset[int], ...], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "facility_costs", tuple(Fraction(c) for c in self.facility_costs)
        )
        if any(c < 0 for c in self.facility_costs):
            raise FamilyError("facility costs must be non-negative")
        object.__setattr__(
            self, "strategy_sets", _freeze_strategy_sets(self.strategy_sets)
        )
        m = len(self.facility_costs)
        for i, strategies in enumerate(self.strategy_sets):
            for s in strategies:
                if any(not (0 <= e < m) for e in s):
                    raise FamilyError(f"player {i} references an unknown facility")

    @property
    def player_count(self) -> int:
        return len(self.strategy_sets)


@dataclass(frozen=True)
class CongestionSpec:
    """Linear delays ``a*x + b`` per facility plus strategy sets.

    With ``singleton=True`` every strategy must be a single facility and all
    players share the same strategy set.
    """

    delay_coeffs: tuple[tuple[Fraction, Fraction], ...]
    strategy_sets: tuple[tuple[frozenset[int], ...], ...]
    singleton: bool = False

    def __post_init__(self):
        coeffs = tuple((Fraction(a), Fraction(b)) for a, b in self.delay_coeffs)
        object.__setattr__(self, "delay_coeffs", coeffs)
        if any(a < 0 or b < 0 for a, b in coeffs):
            raise FamilyError("delay coefficients must be non-negative")
        object.__setattr__(
            self, "strategy_sets", _freeze_strategy_sets(self.strategy_sets)
        )
        m = len(coeffs)
        for i, strategies in enumerate(self.strategy_sets):
            for s in strategies:
                if any(not (0 <= e < m) for e in s):
                    raise FamilyError(f"player {i} references an unknown facility")
        if self.singleton:
            first = self.strategy_sets[0]
            for i, strategies in enumerate(self.strategy_sets):
                if strategies != first:
                    raise FamilyError("singleton games must have a common strategy set")
                if any(len(s) != 1 for s in strategies):
                    raise FamilyError("singleton strategies must be single facilities")

    @property
    def player_count(self) -> int:
        return len(self.strategy_sets)

    @property
    def is_unit(self) -> bool:
        return all(a == 1 and b == 0 for a, b in self.delay_coeffs)


@dataclass(frozen=True)
class UtilitySpec:
    """Submodular-welfare payoff game data.

    ``set_function`` lists the welfare of every subset of the ground set,
    indexed by bitmask (length ``2 ** ground_set_size``). Strategies are
    subsets of the ground set (empty allowed). ``payoff_tables[i]`` is flat
    over profiles in lexicographic rank order.
    """

    ground_set_size: int
    set_function: tuple[Fraction, ...]
    strategy_sets: tuple[tuple[frozenset[int], ...], ...]
    payoff_tables: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        g = self.ground_set_size
        if not (1 <= g <= 16):
            raise FamilyError("ground set size must be in 1..16")
        values = tuple(Fraction(v) for v in self.set_function)
        if len(values) != 1 << g:
            raise FamilyError(f"set function needs {1 << g} entries, got {len(values)}")
        object.__setattr__(self, "set_function", values)
        object.__setattr__(
            self,
            "strategy_sets",
            _freeze_strategy_sets(self.strategy_sets, allow_empty=True),
        )
        for i, strategies in enumerate(self.strategy_sets):
            for s in strategies:
                if any(not (0 <= e < g) for e in s):
                    raise FamilyError(f"player {i} references an unknown element")
        tables = tuple(tuple(Fraction(v) for v in row) for row in self.payoff_tables)
        object.__setattr__(self, "payoff_tables", tables)
        if len(tables) != self.player_count:
            raise FamilyError("need one payoff table per player")
        size = 1
        for strategies in self.strategy_sets:
            size *= len(strategies)
        for i, row in enumerate(tables):
            if len(row) != size:
                raise FamilyError(f"payoff table of player {i} has wrong size")

    @property
    def player_count(self) -> int:
        return len(self.strategy_sets)


@dataclass(frozen=True)
class SingletonTableSpec:
    """Symmetric singleton game with explicit per-count delay tables.

    ``delay_tables[e][x-1]`` is the delay of facility ``e`` carrying ``x``
    players. Used for non-linear (e.g. semi-convex) delays.
    """

    delay_tables: tuple[tuple[Fraction, ...], ...]
    player_count: int

    def __post_init__(self):
        tables = tuple(tuple(Fraction(v) for v in t) for t in self.delay_tables)
        object.__setattr__(self, "delay_tables", tables)
        if self.player_count < 1:
            raise FamilyError("need at least one player")
        for e, table in enumerate(tables):
            if len(table) != self.player_count:
                raise FamilyError(f"facility {e} needs {self.player_count} delay entries")
            if any(v < 0 for v in table):
                raise FamilyError(f"facility {e} has a negative delay")


def _rank_fn(strategy_counts: Sequence[int]) -> Callable[[Profile], int]:
    strides = []
    acc = 1
    for k in reversed(strategy_counts):
        strides.append(acc)
        acc *= k
    strides = tuple(reversed(strides))

    def rank(s: Profile) -> int:
        return sum(a * w for a, w in zip(s, strides))

    return rank


def build_cost_sharing(spec: CostSharingSpec) -> Game:
    """Game with C_i(s) = sum of c_e / x_e(s) over i's facilities and
    C(s) = total cost of used facilities (sum-bounded with equality)."""
    costs = spec.facility_costs
    sets = spec.strategy_sets
    m = len(costs)

    def direct(i: int, s: Profile) -> Fraction:
        counts = _usage_counts(sets, s, m)
        return sum((costs[e] / counts[e] for e in sets[i][s[i]]), Fraction(0))

    def social(s: Profile) -> Fraction:
        used = set()
        for i, a in enumerate(s):
            used.update(sets[i][a])
        return sum((costs[e] for e in used), Fraction(0))

    return Game(
        player_count=spec.player_count,
        strategy_counts=tuple(len(st) for st in sets),
        orientation=Orientation.COST,
        direct_value=direct,
        social_value=social,
        family_tag=COST_SHARING,
        family_spec=spec,
    )


def build_linear_congestion(spec: CongestionSpec) -> Game:
    """Game with C_i(s) = sum of a_e*x_e + b_e over i's facilities and
    C(s) = sum over facilities of x_e * (a_e*x_e + b_e)."""
    coeffs = spec.delay_coeffs
    sets = spec.strategy_sets
    m = len(coeffs)

    def direct(i: int, s: Profile) -> Fraction:
        counts = _usage_counts(sets, s, m)
        total = Fraction(0)
        for e in sets[i][s[i]]:
            a, b = coeffs[e]
            total += a * counts[e] + b
        return total

    def social(s: Profile) -> Fraction:
        counts = _usage_counts(sets, s, m)
        total = Fraction(0)
        for e, x in enumerate(counts):
            if x:
                a, b = coeffs[e]
                total += x * (a * x + b)
        return total

    return Game(
        player_count=spec.player_count,
        strategy_counts=tuple(len(st) for st in sets),
        orientation=Orientation.COST,
        direct_value=direct,
        social_value=social,
        family_tag=SINGLETON_LINEAR if spec.singleton else LINEAR_CONGESTION,
        family_spec=spec,
    )


def singleton_congestion(delay_coeffs, player_count: int) -> CongestionSpec:
    """Symmetric singleton spec: every player picks one of the facilities."""
    m = len(delay_coeffs)
    strategies = tuple(frozenset({e}) for e in range(m))
    return CongestionSpec(
        delay_coeffs=tuple(delay_coeffs),
        strategy_sets=(strategies,) * player_count,
        singleton=True,
    )


def build_singleton_table(spec: SingletonTableSpec) -> Game:
    """Symmetric singleton game with explicit per-count delays."""
    tables = spec.delay_tables
    n = spec.player_count
    m = len(tables)

    def loads(s: Profile) -> list[int]:
        counts = [0] * m
        for e in s:
            counts[e] += 1
        return counts

    def direct(i: int, s: Profile) -> Fraction:
        counts = loads(s)
        e = s[i]
        return tables[e][counts[e] - 1]

    def social(s: Profile) -> Fraction:
        counts = loads(s)
        return sum(
            (x * tables[e][x - 1] for e, x in enumerate(counts) if x), Fraction(0)
        )

    return Game(
        player_count=n,
        strategy_counts=(m,) * n,
        orientation=Orientation.COST,
        direct_value=direct,
        social_value=social,
        family_tag=SINGLETON_TABLE,
        family_spec=spec,
    )


def is_semi_convex(table: Sequence[Fraction]) -> bool:
    """True when x*d(x) has non-decreasing differences over integer loads.

    Working definition adopted for per-count delay tables; ``table[x-1]`` is
    the delay at load x.
    """
    totals = [Fraction(0)] + [x * Fraction(table[x - 1]) for x in range(1, len(table) + 1)]
    diffs = [totals[x] - totals[x - 1] for x in range(1, len(totals))]
    return all(diffs[j] <= diffs[j + 1] for j in range(len(diffs) - 1))


def validate_submodular(set_function: Sequence[Fraction], ground_set_size: int):
    """Exhaustively check submodularity over all A ⊆ B, x ∉ B.

    Returns ``None`` when the function is submodular, else the first
    violating triple ``(A_mask, B_mask, x)`` in iteration order (B ascending,
    then A over submasks of B descending, then x ascending).
    """
    g = ground_set_size
    values = set_function
    for b_mask in range(1 << g):
        outside = [x for x in range(g) if not (b_mask >> x) & 1]
        a_mask = b_mask
        while True:
            for x in outside:
                bit = 1 << x
                if values[a_mask | bit] - values[a_mask] < values[b_mask | bit] - values[b_mask]:
                    return (a_mask, b_mask, x)
            if a_mask == 0:
                break
            a_mask = (a_mask - 1) & b_mask
    return None


def build_valid_utility(spec: UtilitySpec) -> Game:
    """Payoff-maximization game with welfare V(union of strategies).

    Validates, exhaustively: V non-negative, V non-decreasing, V submodular,
    and on every profile both payoff conditions — each player earns at least
    his marginal contribution to the welfare, and payoffs sum to at most the
    welfare. Each violated condition raises :class:`ValidationError` with a
    witness.
    """
    g = spec.ground_set_size
    values = spec.set_function

    for mask, v in enumerate(values):
        if v < 0:
            raise ValidationError(
                "non_negative", mask, f"set function negative on mask {mask:#x}"
            )
    for mask in range(1 << g):
        for x in range(g):
            if not (mask >> x) & 1:
                if values[mask | (1 << x)] < values[mask]:
                    raise ValidationError(
                        "non_decreasing",
                        (mask, x),
                        f"set function decreases when adding element {x} to mask {mask:#x}",
                    )
    witness = validate_submodular(values, g)
    if witness is not None:
        a_mask, b_mask, x = witness
        raise ValidationError(
            "submodular",
            witness,
            f"submodularity fails for A={a_mask:#x}, B={b_mask:#x}, x={x}",
        )

    sets = spec.strategy_sets
    masks = tuple(
        tuple(sum(1 << e for e in strategy) for strategy in strategies)
        for strategies in sets
    )
    counts = tuple(len(st) for st in sets)
    rank = _rank_fn(counts)
    tables = spec.payoff_tables

    def union_mask(s: Profile) -> int:
        u = 0
        for i, a in enumerate(s):
            u |= masks[i][a]
        return u

    def direct(i: int, s: Profile) -> Fraction:
        return tables[i][rank(s)]

    def social(s: Profile) -> Fraction:
        return values[union_mask(s)]

    import itertools

    for s in itertools.product(*(range(k) for k in counts)):
        total = social(s)
        payoff_sum = Fraction(0)
        for i in range(spec.player_count):
            pi = direct(i, s)
            payoff_sum += pi
            # welfare with player i absent: union of the others' strategies
            others = 0
            for j, a in enumerate(s):
                if j != i:
                    others |= masks[j][a]
            if pi < total - values[others]:
                raise ValidationError(
                    "marginal_contribution",
                    (i, s),
                    f"player {i} earns less than his contribution at profile {s}",
                )
        if payoff_sum > total:
            raise ValidationError(
                "payoff_sum",
                s,
                f"payoffs exceed welfare at profile {s}",
            )

    return Game(
        player_count=spec.player_count,
        strategy_counts=counts,
        orientation=Orientation.PAYOFF,
        direct_value=direct,
        social_value=social,
        family_tag=VALID_UTILITY,
        family_spec=spec,
    )


@dataclass(frozen=True)
class NormalizedCongestion:
    """Result of rewriting a linear congestion game into unit delays.

    ``scale`` is the integer multiplier applied to clear denominators;
    every player's direct cost in the normalized game equals ``scale``
    times the original, profile by profile. The profile bijection is the
    identity on strategy index tuples (strategy lists keep their order).

    ``shared_copies[e]`` lists the unit facilities replacing the ``a*x``
    part of facility ``e``; ``private_copies[e][i]`` those replacing the
    constant part for player ``i`` (only ever used by that player).
    """

    spec: CongestionSpec
    scale: int
    shared_copies: tuple[tuple[int, ...], ...]
    private_copies: tuple[tuple[tuple[int, ...], ...], ...]

    def map_profile(self, s: Profile) -> Profile:
        return tuple(s)


def normalize_congestion(original: CongestionSpec) -> NormalizedCongestion:
    """Rewrite so that every delay is d(x) = x, preserving costs up to scale.

    Three steps: multiply all coefficients by the least common multiple M of
    their denominators (costs scale by M); replace each facility a*x + b by
    a shared facility with delay a*x plus one private facility per player
    with delay b*x; split every remaining facility with slope a into a unit
    facilities. Relies on unit player weights.
    """
    n = original.player_count
    denoms = [1]
    for a, b in original.delay_coeffs:
        denoms.append(a.denominator)
        denoms.append(b.denominator)
    from math import lcm

    scale = lcm(*denoms)
    ints = [
        (int(a * scale), int(b * scale)) for a, b in original.delay_coeffs
    ]

    shared: list[tuple[int, ...]] = []
    private: list[tuple[tuple[int, ...], ...]] = []
    next_idx = 0
    for a, b in ints:
        shared.append(tuple(range(next_idx, next_idx + a)))
        next_idx += a
        per_player = []
        for _ in range(n):
            per_player.append(tuple(range(next_idx, next_idx + b)))
            next_idx += b
        private.append(tuple(per_player))

    new_sets = []
    for i, strategies in enumerate(original.strategy_sets):
        rewritten = []
        for strategy in strategies:
            facilities: set[int] = set()
            for e in strategy:
                facilities.update(shared[e])
                facilities.update(private[e][i])
            if not facilities:
                raise FamilyError(
                    f"strategy {sorted(strategy)} of player {i} collapses to an "
                    "empty set (all its facilities have zero delay)"
                )
            rewritten.append(frozenset(facilities))
        new_sets.append(tuple(rewritten))

    unit = CongestionSpec(
        delay_coeffs=((Fraction(1), Fraction(0)),) * next_idx,
        strategy_sets=tuple(new_sets),
        singleton=False,
    )
    return NormalizedCongestion(
        spec=unit,
        scale=scale,
        shared_copies=tuple(shared),
        private_copies=tuple(private),
    )


class PotentialKind(Enum):
    COST_SHARING_HARMONIC = "cost_sharing_harmonic"
    ROSENTHAL = "rosenthal"


def _uniform_level(alpha) -> Fraction:
    if isinstance(alpha, Altruism):
        if not alpha.is_uniform:
            raise FamilyError("potential requires a uniform altruism level")
        return alpha.levels[0]
    return Fraction(alpha)


def potential(kind: PotentialKind, game: Game, alpha, s: Profile) -> Fraction:
    """Exact potential of the altruistic extension at uniform level alpha.

    Cost sharing uses the harmonic-share potential (sum over facilities of
    c_e times the x_e-th harmonic number); congestion uses the load-prefix
    potential (sum over facilities of d_e(1) + ... + d_e(x_e), stated for
    unit delays and property-tested for general linear ones). The altruistic
    potential blends: (1 - alpha) * potential + alpha * social cost.
    """
    level = _uniform_level(alpha)
    if not (0 <= level <= 1):
        raise FamilyError(f"altruism level out of [0, 1]: {level}")
    spec = game.family_spec
    s = game.check_profile(s)

    if kind is PotentialKind.COST_SHARING_HARMONIC:
        if not isinstance(spec, CostSharingSpec):
            raise FamilyError("harmonic potential applies to cost-sharing games only")
        counts = _usage_counts(spec.strategy_sets, s, len(spec.facility_costs))
        base = Fraction(0)
        for e, x in enumerate(counts):
            c = spec.facility_costs[e]
            for k in range(1, x + 1):
                base += c / k
    elif kind is PotentialKind.ROSENTHAL:
        if isinstance(spec, CongestionSpec):
            counts = _usage_counts(spec.strategy_sets, s, len(spec.delay_coeffs))
            base = Fraction(0)
            for e, x in enumerate(counts):
                a, b = spec.delay_coeffs[e]
                for k in range(1, x + 1):
                    base += a * k + b
        elif isinstance(spec, SingletonTableSpec):
            counts = [0] * len(spec.delay_tables)
            for e in s:
                counts[e] += 1
            base = Fraction(0)
            for e, x in enumerate(counts):
                for k in range(1, x + 1):
                    base += spec.delay_tables[e][k - 1]
        else:
            raise FamilyError("load-prefix potential applies to congestion games only")
    else:  # pragma: no cover - enum is exhaustive
        raise FamilyError(f"unknown potential kind: {kind}")

    if level == 0:
        return base
    return (1 - level) * base + level * game.social_value(s)


@dataclass(frozen=True)
class ExampleInstance:
    """A named instance with its altruism vector and annotated profiles."""

    name: str
    game: Game
    altruism: Altruism
    fixtures: dict[str, Profile] = field(default_factory=dict)
    mixed_fixture: tuple[tuple[Fraction, ...], ...] | None = None
    params: dict = field(default_factory=dict)


def _alpha_vector(alpha, player_count: int) -> Altruism:
    if isinstance(alpha, Altruism):
        if len(alpha) != player_count:
            raise FamilyError("altruism vector length mismatch")
        return alpha
    if isinstance(alpha, (tuple, list)):
        if len(alpha) != player_count:
            raise FamilyError("altruism vector length mismatch")
        return Altruism(tuple(Fraction(a) for a in alpha))
    return Altruism.uniform(Fraction(alpha), player_count)


def cost_sharing_lower_bound(player_count: int, alpha) -> ExampleInstance:
    """Two facilities of cost 1 and n/(1-alpha); everyone-on-the-expensive
    facility is a pure equilibrium by indifference, the cheap one is optimal."""
    n = int(player_count)
    if n < 1:
        raise FamilyError("need at least one player")
    a = Fraction(alpha)
    if not (0 <= a < 1):
        raise FamilyError(f"alpha must be in [0, 1) for this instance, got {a}")
    expensive = Fraction(n, 1) / (1 - a)
    spec = CostSharingSpec(
        facility_costs=(Fraction(1), expensive),
        strategy_sets=((frozenset({0}), frozenset({1})),) * n,
    )
    return ExampleInstance(
        name="cost-sharing-lb",
        game=build_cost_sharing(spec),
        altruism=Altruism.uniform(a, n),
        fixtures={"ne": (1,) * n, "opt": (0,) * n},
        params={"n": n, "alpha": a},
    )


def valid_utility_tight(alpha=0) -> ExampleInstance:
    """Two-player cardinality-welfare game whose worst equilibrium covers one
    element while the optimum covers both, for every altruism vector."""
    spec = UtilitySpec(
        ground_set_size=2,
        set_function=(Fraction(0), Fraction(1), Fraction(1), Fraction(2)),
        strategy_sets=(
            (frozenset({0}), frozenset({1})),
            (frozenset(), frozenset({0})),
        ),
        # rank order over (s1, s2) with counts (2, 2)
        payoff_tables=(
            (Fraction(1), Fraction(1), Fraction(1), Fraction(1)),
            (Fraction(0), Fraction(0), Fraction(0), Fraction(1)),
        ),
    )
    game = build_valid_utility(spec)
    return ExampleInstance(
        name="valid-utility-tight",
        game=game,
        altruism=_alpha_vector(alpha, 2),
        fixtures={"ne": (0, 0), "opt": (1, 1)},
        params={},
    )


def congestion_lower_bound(alpha) -> ExampleInstance:
    """Three players over two facility triples; the all-second-strategy
    profile is an equilibrium by indifference with cost 3*(5+4*alpha), while
    the all-first profile is optimal with cost 3*(2+alpha)."""
    a = Fraction(alpha)
    if not (0 <= a <= 1):
        raise FamilyError(f"alpha must be in [0, 1], got {a}")
    heavy = ((1 + a, Fraction(0)),) * 3  # facilities 0..2
    light = ((Fraction(1), Fraction(0)),) * 3  # facilities 3..5
    strategy_sets = []
    for j in range(3):
        first = frozenset({j, 3 + j})
        second = frozenset({(j - 1) % 3, (j + 1) % 3, 3 + (j + 1) % 3})
        strategy_sets.append((first, second))
    spec = CongestionSpec(
        delay_coeffs=heavy + light,
        strategy_sets=tuple(strategy_sets),
    )
    return ExampleInstance(
        name="congestion-lb",
        game=build_linear_congestion(spec),
        altruism=Altruism.uniform(a, 3),
        fixtures={"ne": (1, 1, 1), "opt": (0, 0, 0)},
        params={"alpha": a},
    )


def singleton_mixed(m: int, alpha=0) -> ExampleInstance:
    """m players and m unit-delay facilities; the uniform mixed profile is an
    equilibrium for every altruism vector, with expected cost 2m - 1."""
    m = int(m)
    if m < 2:
        raise FamilyError("need at least two players/facilities")
    spec = singleton_congestion(((Fraction(1), Fraction(0)),) * m, m)
    uniform = tuple((Fraction(1, m),) * m for _ in range(m))
    return ExampleInstance(
        name="singleton-mixed",
        game=build_linear_congestion(spec),
        altruism=_alpha_vector(alpha, m),
        fixtures={"ne": tuple(range(m)), "opt": tuple(range(m))},
        mixed_fixture=uniform,
        params={"m": m},
    )


def singleton_tight_2p(alpha) -> ExampleInstance:
    """Two players, facilities with delays x and 2+alpha; sharing the first
    facility is an equilibrium of cost 4 against the split optimum 3+alpha."""
    a = Fraction(alpha)
    if not (0 <= a <= 1):
        raise FamilyError(f"alpha must be in [0, 1], got {a}")
    spec = singleton_congestion(
        ((Fraction(1), Fraction(0)), (Fraction(0), 2 + a)), 2
    )
    return ExampleInstance(
        name="singleton-tight-2p",
        game=build_linear_congestion(spec),
        altruism=Altruism.uniform(a, 2),
        fixtures={"ne": (0, 0), "opt": (0, 1)},
        params={"alpha": a},
    )


EXAMPLE_NAMES = (
    "cost-sharing-lb",
    "valid-utility-tight",
    "congestion-lb",
    "singleton-mixed",
    "singleton-tight-2p",
)


def example_instance(name: str, **params) -> ExampleInstance:
    """Build a named instance. Accepts hyphen or underscore spellings."""
    key = name.replace("_", "-")
    if key == "cost-sharing-lb":
        return cost_sharing_lower_bound(params.pop("n"), params.pop("alpha"))
    if key == "valid-utility-tight":
        return valid_utility_tight(params.pop("alpha", 0))
    if key == "congestion-lb":
        return congestion_lower_bound(params.pop("alpha"))
    if key == "singleton-mixed":
        return singleton_mixed(params.pop("m"), params.pop("alpha", 0))
    if key == "singleton-tight-2p":
        return singleton_tight_2p(params.pop("alpha"))
    raise FamilyError(f"unknown example name: {name!r}")
