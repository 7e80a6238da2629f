"""Exact-rational linear programming and worst-case (coarse) correlated equilibria.

The solver is a dense two-phase simplex over ``Fraction`` entries using
Bland's anti-cycling rule, so tight instances sitting exactly on constraint
boundaries are classified correctly. Returned points are re-verified by
substitution before they leave this module.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from .equilibria import JointDistribution, _Tables
from .game import Altruism, CapExceededError, Game, Orientation, Profile, deviate
from .rationals import Extended


class Relation(Enum):
    LE = "<="
    EQ = "="
    GE = ">="


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[Fraction, ...]
    relation: Relation
    rhs: Fraction

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))
        object.__setattr__(self, "rhs", Fraction(self.rhs))

    def satisfied_by(self, point: Sequence[Fraction]) -> bool:
        value = sum((c * x for c, x in zip(self.coeffs, point)), Fraction(0))
        if self.relation is Relation.LE:
            return value <= self.rhs
        if self.relation is Relation.GE:
            return value >= self.rhs
        return value == self.rhs


@dataclass
class LinearProgram:
    """min/max of a linear objective over linear constraints.

    Variables default to lower bound 0 and no upper bound; per-variable
    bounds can be supplied. Row lengths must equal ``variable_count``.
    """

    objective: tuple[Fraction, ...]
    sense: str  # "min" | "max"
    constraints: list[Constraint] = field(default_factory=list)
    lower_bounds: Optional[tuple[Fraction, ...]] = None
    upper_bounds: Optional[tuple[Optional[Fraction], ...]] = None

    def __post_init__(self):
        self.objective = tuple(Fraction(c) for c in self.objective)
        if self.sense not in ("min", "max"):
            raise ValueError(f"sense must be 'min' or 'max', got {self.sense!r}")
        n = self.variable_count
        for k, row in enumerate(self.constraints):
            if len(row.coeffs) != n:
                raise ValueError(f"constraint {k} has wrong width")
        if self.lower_bounds is not None and len(self.lower_bounds) != n:
            raise ValueError("lower_bounds has wrong length")
        if self.upper_bounds is not None and len(self.upper_bounds) != n:
            raise ValueError("upper_bounds has wrong length")

    @property
    def variable_count(self) -> int:
        return len(self.objective)


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpSolution:
    status: LpStatus
    value: Optional[Fraction] = None
    point: Optional[tuple[Fraction, ...]] = None


def _pivot(rows: list[list[Fraction]], rhs: list[Fraction], r: int, c: int) -> None:
    inv = 1 / rows[r][c]
    rows[r] = [v * inv for v in rows[r]]
    rhs[r] *= inv
    for k in range(len(rows)):
        if k != r and rows[k][c] != 0:
            factor = rows[k][c]
            rows[k] = [v - factor * p for v, p in zip(rows[k], rows[r])]
            rhs[k] -= factor * rhs[r]


def _simplex(
    rows: list[list[Fraction]],
    rhs: list[Fraction],
    basis: list[int],
    costs: list[Fraction],
    allowed: list[bool],
) -> bool:
    """Minimize costs over the canonical tableau in place (Bland's rule).

    Returns False when the objective is unbounded below. ``allowed`` masks
    columns eligible to enter the basis.
    """
    m = len(rows)
    ncols = len(costs)
    while True:
        in_basis = set(basis)
        # reduced costs relative to the current basis
        duals = [costs[basis[r]] for r in range(m)]
        entering = -1
        for j in range(ncols):
            if not allowed[j] or j in in_basis:
                continue
            reduced = costs[j]
            for r in range(m):
                if duals[r] != 0 and rows[r][j] != 0:
                    reduced -= duals[r] * rows[r][j]
            if reduced < 0:
                entering = j
                break  # Bland: lowest index
        if entering < 0:
            return True
        leaving = -1
        best_ratio: Fraction | None = None
        for r in range(m):
            a = rows[r][entering]
            if a > 0:
                ratio = rhs[r] / a
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[r] < basis[leaving])
                ):
                    best_ratio = ratio
                    leaving = r
        if leaving < 0:
            return False
        _pivot(rows, rhs, leaving, entering)
        basis[leaving] = entering


def solve(lp: LinearProgram) -> LpSolution:
    """Exact optimum of the program via two-phase simplex.

    The optimal point is substituted back into every constraint (and bound)
    before returning; infeasible/unbounded are reported as statuses.
    """
    n = lp.variable_count
    lower = list(lp.lower_bounds) if lp.lower_bounds is not None else [Fraction(0)] * n
    lower = [Fraction(v) for v in lower]
    uppers = list(lp.upper_bounds) if lp.upper_bounds is not None else [None] * n

    # shift to y = x - lb >= 0
    constraints: list[tuple[list[Fraction], Relation, Fraction]] = []
    for row in lp.constraints:
        shift = sum((c * l for c, l in zip(row.coeffs, lower)), Fraction(0))
        constraints.append((list(row.coeffs), row.relation, row.rhs - shift))
    for j, ub in enumerate(uppers):
        if ub is not None:
            coeffs = [Fraction(0)] * n
            coeffs[j] = Fraction(1)
            constraints.append((coeffs, Relation.LE, Fraction(ub) - lower[j]))

    minimize = lp.sense == "min"
    objective = [c if minimize else -c for c in lp.objective]

    # rhs >= 0 with slack/surplus/artificial augmentation
    m = len(constraints)
    slack_cols: list[tuple[int, int]] = []  # (row, column)
    artificial_cols: list[tuple[int, int]] = []
    ncols = n
    rows_spec = []
    for r, (coeffs, rel, b) in enumerate(constraints):
        if b < 0:
            coeffs = [-c for c in coeffs]
            b = -b
            rel = {Relation.LE: Relation.GE, Relation.GE: Relation.LE, Relation.EQ: Relation.EQ}[rel]
        rows_spec.append((coeffs, rel, b))
    for r, (coeffs, rel, b) in enumerate(rows_spec):
        if rel is Relation.LE:
            slack_cols.append((r, ncols))
            ncols += 1
        elif rel is Relation.GE:
            slack_cols.append((r, ncols))
            artificial_cols.append((r, ncols + 1))
            ncols += 2
        else:
            artificial_cols.append((r, ncols))
            ncols += 1

    rows = [[Fraction(0)] * ncols for _ in range(m)]
    rhs = [Fraction(0)] * m
    basis = [-1] * m
    slack_sign: dict[tuple[int, int], int] = {}
    for r, (coeffs, rel, b) in enumerate(rows_spec):
        rows[r][:n] = [Fraction(c) for c in coeffs]
        rhs[r] = Fraction(b)
    for r, col in slack_cols:
        rel = rows_spec[r][1]
        sign = 1 if rel is Relation.LE else -1
        rows[r][col] = Fraction(sign)
        slack_sign[(r, col)] = sign
        if sign == 1:
            basis[r] = col
    artificial_set = set()
    for r, col in artificial_cols:
        rows[r][col] = Fraction(1)
        basis[r] = col
        artificial_set.add(col)
    assert all(b >= 0 for b in basis)

    allowed = [True] * ncols
    if artificial_set:
        phase1_costs = [
            Fraction(1) if j in artificial_set else Fraction(0) for j in range(ncols)
        ]
        _simplex(rows, rhs, basis, phase1_costs, allowed)
        infeasibility = sum(
            (rhs[r] for r in range(m) if basis[r] in artificial_set), Fraction(0)
        )
        if infeasibility > 0:
            return LpSolution(LpStatus.INFEASIBLE)
        # drive remaining (degenerate) artificials out of the basis
        drop_rows = []
        for r in range(m):
            if basis[r] in artificial_set:
                pivot_col = -1
                for j in range(ncols):
                    if j not in artificial_set and rows[r][j] != 0:
                        pivot_col = j
                        break
                if pivot_col < 0:
                    drop_rows.append(r)  # redundant row
                else:
                    _pivot(rows, rhs, r, pivot_col)
                    basis[r] = pivot_col
        for r in sorted(drop_rows, reverse=True):
            del rows[r], rhs[r], basis[r]
        m = len(rows)
        for j in artificial_set:
            allowed[j] = False

    phase2_costs = [Fraction(0)] * ncols
    phase2_costs[:n] = objective
    bounded = _simplex(rows, rhs, basis, phase2_costs, allowed)
    if not bounded:
        return LpSolution(LpStatus.UNBOUNDED)

    y = [Fraction(0)] * ncols
    for r in range(m):
        y[basis[r]] = rhs[r]
    point = tuple(y[j] + lower[j] for j in range(n))
    value = sum((c * x for c, x in zip(lp.objective, point)), Fraction(0))

    for k, row in enumerate(lp.constraints):
        if not row.satisfied_by(point):
            raise AssertionError(f"solver returned a point violating constraint {k}")
    for j in range(n):
        if point[j] < lower[j]:
            raise AssertionError(f"solver violated the lower bound of variable {j}")
        if uppers[j] is not None and point[j] > uppers[j]:
            raise AssertionError(f"solver violated the upper bound of variable {j}")
    return LpSolution(LpStatus.OPTIMAL, value, point)


DEFAULT_LP_CAP = 5000


@dataclass(frozen=True)
class CoarseResult:
    """Worst-case equilibrium value with its witnessing distribution."""

    value: Fraction
    distribution: JointDistribution
    concept: str  # "cce" | "ce"


def _profiles_and_tables(game: Game, alpha: Altruism, cap: int | None):
    limit = DEFAULT_LP_CAP if cap is None else cap
    size = game.profile_space_size()
    if size > limit:
        raise CapExceededError(
            f"instance too large for the LP: {size} profiles exceed the cap of {limit}"
        )
    profiles = list(itertools.product(*(range(k) for k in game.strategy_counts)))
    tables = _Tables(game, alpha)
    return profiles, tables


def _equilibrium_rows(game, alpha, profiles, tables, per_signal: bool):
    """Deviation constraints: E[perceived - perceived after deviation] vs 0.

    Coarse rows quantify over (player, deviation); correlated rows also
    condition on the player's drawn strategy.
    """
    index = {s: k for k, s in enumerate(profiles)}
    rows = []
    nvars = len(profiles)
    rel = Relation.LE if game.orientation is Orientation.COST else Relation.GE
    for i in range(game.player_count):
        k_i = game.strategy_counts[i]
        signals = range(k_i) if per_signal else (None,)
        for signal in signals:
            for a_star in range(k_i):
                coeffs = [Fraction(0)] * nvars
                nonzero = False
                for s in profiles:
                    if signal is not None and s[i] != signal:
                        continue
                    diff = tables.perceived(i, s) - tables.perceived(
                        i, deviate(s, i, a_star)
                    )
                    if diff != 0:
                        coeffs[index[s]] = diff
                        nonzero = True
                if nonzero:
                    rows.append(Constraint(tuple(coeffs), rel, Fraction(0)))
    return rows


def _worst_case(game, alpha, cap, per_signal: bool, concept: str) -> CoarseResult:
    profiles, tables = _profiles_and_tables(game, alpha, cap)
    nvars = len(profiles)
    rows = _equilibrium_rows(game, alpha, profiles, tables, per_signal)
    rows.append(
        Constraint((Fraction(1),) * nvars, Relation.EQ, Fraction(1))
    )
    objective = tuple(tables.social(s) for s in profiles)
    sense = "max" if game.orientation is Orientation.COST else "min"
    solution = solve(LinearProgram(objective=objective, sense=sense, constraints=rows))
    if solution.status is not LpStatus.OPTIMAL:
        # point masses on pure equilibria are feasible whenever any exist,
        # and the simplex of distributions is bounded
        raise AssertionError(f"equilibrium program unexpectedly {solution.status.value}")
    weights = {
        s: w for s, w in zip(profiles, solution.point) if w != 0
    }
    witness = JointDistribution.from_mapping(weights)
    _verify_witness(game, alpha, tables, witness, per_signal)
    return CoarseResult(solution.value, witness, concept)


def _verify_witness(game, alpha, tables, witness: JointDistribution, per_signal: bool):
    """Re-check every equilibrium constraint by direct substitution."""
    cost = game.orientation is Orientation.COST
    for i in range(game.player_count):
        k_i = game.strategy_counts[i]
        signals = range(k_i) if per_signal else (None,)
        for signal in signals:
            for a_star in range(k_i):
                total = Fraction(0)
                for s, w in witness.weights:
                    if signal is not None and s[i] != signal:
                        continue
                    if w:
                        total += w * (
                            tables.perceived(i, s)
                            - tables.perceived(i, deviate(s, i, a_star))
                        )
                if cost and total > 0:
                    raise AssertionError("witness violates a deviation constraint")
                if not cost and total < 0:
                    raise AssertionError("witness violates a deviation constraint")


def worst_cce(game: Game, alpha: Altruism, cap: int | None = None) -> CoarseResult:
    """Most expensive (cost) or least valuable (payoff) coarse correlated
    equilibrium of the altruistic extension, solved exactly."""
    return _worst_case(game, alpha, cap, per_signal=False, concept="cce")


def worst_ce(game: Game, alpha: Altruism, cap: int | None = None) -> CoarseResult:
    """Worst correlated equilibrium: coarse constraints refined per signal."""
    return _worst_case(game, alpha, cap, per_signal=True, concept="ce")
