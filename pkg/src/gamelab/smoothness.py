"""Smoothness certificates and the exact instance-level robust price of anarchy.

A certificate ``(lam, mu)`` for a cost game asserts, for every ordered pair
of profiles ``(s, s*)``::

    sum_i [ direct_i(s*_i, s_-i) + a_i * (residual_i(s*_i, s_-i) - residual_i(s)) ]
        <=  lam * social(s*) + mu * social(s)

where ``residual_i = social - direct_i``. Payoff games use the mirrored
inequality (``>= lam * social(s*) - mu * social(s)``). Any verified
certificate with ``mu < 1`` (cost) bounds the worst coarse correlated
equilibrium by ``lam / (1 - mu)`` times the optimum; the robust price of
anarchy is the best such bound, computed here exactly.

The optimization is a two-variable linear-fractional program. Substituting
``u = lam/(1-mu)``, ``v = mu/(1-mu)`` turns every pair constraint into a
half-plane ``u*C(s*) + v*(C(s) - lhs) >= lhs``, so minimizing ``u`` is a
piecewise-linear convex minimization over the upper envelope of lines,
solved by an exact envelope walk (payoff games analogously with
``p = 1/lam``, ``q = mu/lam`` and objective ``p + q``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .equilibria import _Tables
from .game import Altruism, Game, Orientation, Profile, deviate, enumerate_profiles
from .rationals import INFINITY, Extended

#: Floor on the substitution variable (mu/(1-mu), resp. mu/lam), guarding the
#: projective transform; reported on results via ``guard_active``.
SUBSTITUTION_GUARD = Fraction(-1) + Fraction(1, 10**6)


class PairDomain(Enum):
    ALL_PAIRS = "all"
    OPTIMUM_TARGETS = "opt"


@dataclass(frozen=True)
class SmoothnessCertificate:
    lam: Fraction
    mu: Fraction
    orientation: Orientation
    pair_domain: PairDomain = PairDomain.ALL_PAIRS

    def __post_init__(self):
        object.__setattr__(self, "lam", Fraction(self.lam))
        object.__setattr__(self, "mu", Fraction(self.mu))

    def poa_bound(self) -> Extended:
        """Coarse-equilibrium bound implied by the certificate."""
        if self.orientation is Orientation.COST:
            if self.mu >= 1:
                return INFINITY
            return self.lam / (1 - self.mu)
        if self.lam <= 0 or self.mu <= -1:
            return INFINITY
        return (1 + self.mu) / self.lam


def _pair_lhs(game: Game, alpha: Altruism, tables: _Tables, s: Profile, s_star: Profile) -> Fraction:
    total = Fraction(0)
    for i in range(game.player_count):
        dev = deviate(s, i, s_star[i])
        a = alpha[i]
        contribution = tables.direct(i, dev)
        if a != 0:
            residual_dev = tables.social(dev) - tables.direct(i, dev)
            residual_here = tables.social(s) - tables.direct(i, s)
            contribution += a * (residual_dev - residual_here)
        total += contribution
    return total


def smoothness_lhs(game: Game, alpha: Altruism, s: Profile, s_star: Profile) -> Fraction:
    """Exact left-hand side of the smoothness inequality for one pair."""
    s = game.check_profile(s)
    s_star = game.check_profile(s_star)
    return _pair_lhs(game, alpha, _Tables(game, alpha), s, s_star)


def _pair_targets(
    game: Game, domain: PairDomain, profiles: Sequence[Profile], tables: _Tables
) -> Sequence[Profile]:
    if domain is PairDomain.ALL_PAIRS:
        return profiles
    best = None
    minimize = game.orientation is Orientation.COST
    for s in profiles:
        v = tables.social(s)
        if best is None or (v < best if minimize else v > best):
            best = v
    return [s for s in profiles if tables.social(s) == best]


def _holds(game: Game, cert: SmoothnessCertificate, lhs, social_s, social_t) -> bool:
    if game.orientation is Orientation.COST:
        return cert.lam * social_t + cert.mu * social_s >= lhs
    return lhs >= cert.lam * social_t - cert.mu * social_s


def is_smooth(
    game: Game,
    alpha: Altruism,
    cert: SmoothnessCertificate,
    cap: int | None = None,
) -> tuple[bool, Optional[tuple[Profile, Profile]]]:
    """Verify the certificate on its pair domain; returns the first violation."""
    if cert.orientation is not game.orientation:
        raise ValueError("certificate orientation does not match the game")
    profiles = list(enumerate_profiles(game, cap))
    tables = _Tables(game, alpha)
    targets = _pair_targets(game, cert.pair_domain, profiles, tables)
    for s in profiles:
        social_s = tables.social(s)
        for t in targets:
            lhs = _pair_lhs(game, alpha, tables, s, t)
            if not _holds(game, cert, lhs, social_s, tables.social(t)):
                return False, (s, t)
    return True, None


@dataclass(frozen=True)
class RpoaResult:
    """Outcome of the exact robust-price-of-anarchy program.

    ``value`` is the infimum of the certificate bound over the searched
    domain (lam >= 0, substitution variable floored at the guard). When
    ``attained`` the certificate realizes the value exactly; the untagged
    infinity value means no certificate exists in the domain. Binding pairs
    are the constraints tight at the optimum.
    """

    value: Extended
    certificate: Optional[SmoothnessCertificate]
    binding_pairs: tuple[tuple[Profile, Profile], ...]
    pair_domain: PairDomain
    attained: bool
    guard_active: bool
    mu_floor: Fraction = SUBSTITUTION_GUARD


def _upper_envelope(lines: Iterable[tuple[Fraction, Fraction]]):
    """Upper envelope of lines ``u = A + B v`` as slope-ascending segments.

    Returns (envelope lines, breakpoints) with ``len(breakpoints) ==
    len(envelope) - 1``; segment k is maximal on [bp[k-1], bp[k]].
    """
    best: dict[Fraction, Fraction] = {}
    for a, b in lines:
        if b not in best or a > best[b]:
            best[b] = a
    ordered = sorted(((a, b) for b, a in best.items()), key=lambda t: t[1])

    def cross(p, q):
        # v where the two lines meet; valid for distinct slopes
        return (p[0] - q[0]) / (q[1] - p[1])

    stack: list[tuple[Fraction, Fraction]] = []
    for line in ordered:
        while len(stack) >= 2 and cross(stack[-2], line) <= cross(stack[-2], stack[-1]):
            stack.pop()
        if len(stack) == 1 and stack[0][1] == line[1]:  # pragma: no cover
            stack.pop()
        stack.append(line)
    breakpoints = [cross(stack[k], stack[k + 1]) for k in range(len(stack) - 1)]
    return stack, breakpoints


def _minimize_envelope(
    lines: Sequence[tuple[Fraction, Fraction]],
    v_lo: Fraction,
    v_hi: Optional[Fraction],
    objective_slope: Fraction,
):
    """Leftmost minimizer of ``env(v) + objective_slope * v`` on [v_lo, v_hi].

    Returns ``(v_star, env(v_star), flat, flat_until)``: when ``flat`` the
    objective stays at its minimum on a run starting at ``v_star`` and ending
    at ``flat_until`` (``None`` meaning the run is unbounded to the right).
    Raises if the objective is unbounded below (cannot happen with the
    domain lines the callers install).
    """
    env, breakpoints = _upper_envelope(lines)

    def env_at(v: Fraction) -> Fraction:
        # envelope is the max of all its lines; exact and safe at this size
        return max(a + b * v for a, b in env)

    def flat_end(seg: int):
        # slopes strictly ascend, so a zero-objective-slope run is one segment
        end = breakpoints[seg] if seg < len(breakpoints) else None
        if v_hi is not None and (end is None or end > v_hi):
            end = v_hi
        return end

    # segment index containing v_lo
    k = 0
    while k < len(breakpoints) and breakpoints[k] <= v_lo:
        k += 1

    slope = env[k][1] + objective_slope
    if slope >= 0:
        if slope == 0:
            return v_lo, env_at(v_lo), True, flat_end(k)
        return v_lo, env_at(v_lo), False, None

    while True:
        if k >= len(breakpoints):
            if v_hi is None:
                raise ArithmeticError("objective unbounded below over the envelope")
            return v_hi, env_at(v_hi), False, None
        bp = breakpoints[k]
        if v_hi is not None and bp >= v_hi:
            return v_hi, env_at(v_hi), False, None
        k += 1
        slope = env[k][1] + objective_slope
        if slope > 0:
            return bp, env_at(bp), False, None
        if slope == 0:
            return bp, env_at(bp), True, flat_end(k)


def _pair_constraints(game, alpha, profiles, targets, tables):
    for s in profiles:
        for t in targets:
            yield s, t, _pair_lhs(game, alpha, tables, s, t), tables.social(s), tables.social(t)


def _infinite_result(domain: PairDomain) -> RpoaResult:
    return RpoaResult(INFINITY, None, (), domain, attained=False, guard_active=False)


def rpoa_from_pairs(
    game: Game,
    alpha: Altruism,
    pairs: Sequence[tuple[Profile, Profile]],
    pair_domain: PairDomain = PairDomain.ALL_PAIRS,
) -> RpoaResult:
    """Robust price of anarchy restricted to an explicit list of pairs.

    The main entry :func:`rpoa` delegates here with the full pair grid; tests
    use it to confirm that dropping non-binding pairs preserves the value.
    """
    tables = _Tables(game, alpha)
    rows = []
    for s, t in pairs:
        s = game.check_profile(s)
        t = game.check_profile(t)
        rows.append((s, t, _pair_lhs(game, alpha, tables, s, t), tables.social(s), tables.social(t)))
    return _solve_rpoa(game, rows, pair_domain)


def rpoa(
    game: Game,
    alpha: Altruism,
    pair_domain: PairDomain = PairDomain.ALL_PAIRS,
    cap: int | None = None,
) -> RpoaResult:
    """Best certificate bound over the pair domain, solved exactly.

    Infeasibility of every ``mu`` below 1 (cost) is reported as the tagged
    infinity. The emitted certificate is re-verified against the full pair
    domain before returning.
    """
    profiles = list(enumerate_profiles(game, cap))
    tables = _Tables(game, alpha)
    targets = _pair_targets(game, pair_domain, profiles, tables)
    rows = list(_pair_constraints(game, alpha, profiles, targets, tables))
    result = _solve_rpoa(game, rows, pair_domain)
    if result.certificate is not None:
        ok, violation = is_smooth(game, alpha, result.certificate, cap)
        if not ok:  # pragma: no cover - internal consistency
            raise AssertionError(f"emitted certificate fails on pair {violation}")
    return result


def _solve_rpoa(game: Game, rows, pair_domain: PairDomain) -> RpoaResult:
    if game.orientation is Orientation.COST:
        return _solve_rpoa_cost(game, rows, pair_domain)
    return _solve_rpoa_payoff(game, rows, pair_domain)


def _solve_rpoa_cost(game, rows, pair_domain) -> RpoaResult:
    guard = SUBSTITUTION_GUARD
    v_lo, v_hi = guard, None
    lines = [(Fraction(0), Fraction(0))]  # lam >= 0  <=>  u >= 0
    for _, _, lhs, social_s, social_t in rows:
        a, b, c = social_t, social_s - lhs, lhs
        if a > 0:
            lines.append((c / a, -b / a))
        elif b > 0:
            v_lo = max(v_lo, c / b)
        elif b < 0:
            bound = c / b
            v_hi = bound if v_hi is None else min(v_hi, bound)
        elif c > 0:
            return _infinite_result(pair_domain)
    if v_hi is not None and v_hi < v_lo:
        return _infinite_result(pair_domain)

    v_star, u_star, flat, flat_until = _minimize_envelope(lines, v_lo, v_hi, Fraction(0))
    if flat and v_star < 0 and (flat_until is None or flat_until >= 0):
        v_star = Fraction(0)  # mu = 0 is the canonical point of a flat optimum
    lam = u_star / (1 + v_star)
    mu = v_star / (1 + v_star)
    cert = SmoothnessCertificate(lam, mu, Orientation.COST, pair_domain)
    binding = tuple(
        (s, t)
        for s, t, lhs, social_s, social_t in rows
        if lam * social_t + mu * social_s == lhs
    )
    return RpoaResult(
        value=u_star,
        certificate=cert,
        binding_pairs=binding,
        pair_domain=pair_domain,
        attained=True,
        guard_active=v_star == guard,
    )


def _solve_rpoa_payoff(game, rows, pair_domain) -> RpoaResult:
    guard = SUBSTITUTION_GUARD
    p_lo, p_hi = Fraction(0), None
    lines = [(Fraction(0), guard)]  # mu >= guard  <=>  q >= guard * p
    for _, _, lhs, social_s, social_t in rows:
        if social_s > 0:
            lines.append((social_t / social_s, -lhs / social_s))
        elif lhs > 0:
            p_lo = max(p_lo, social_t / lhs)
        elif lhs < 0:
            if social_t > 0:
                return _infinite_result(pair_domain)
            bound = Fraction(0)  # lhs * p >= 0 with lhs < 0 forces p <= 0
            p_hi = bound if p_hi is None else min(p_hi, bound)
        elif social_t > 0:
            return _infinite_result(pair_domain)
    if p_hi is not None and p_hi < p_lo:
        return _infinite_result(pair_domain)

    p_star, q_star, flat, flat_until = _minimize_envelope(lines, p_lo, p_hi, Fraction(1))
    if flat:
        # same objective anywhere on the flat run; lam = 1 is the canonical
        # point when reachable, else the far end keeps lam finite
        if p_star <= 1 and (flat_until is None or flat_until >= 1):
            p_star = Fraction(1)
        elif p_star == 0 and flat_until is not None:
            p_star = flat_until
        elif p_star == 0:
            p_star = Fraction(1)
        q_star = max(a + b * p_star for a, b in lines)
    value = p_star + q_star
    if p_star == 0:
        # the infimum is approached only as lam grows without bound
        binding = tuple(
            (s, t)
            for s, t, lhs, social_s, social_t in rows
            if lhs * p_star + social_s * q_star == social_t
        )
        return RpoaResult(value, None, binding, pair_domain, attained=False,
                          guard_active=q_star == guard * p_star)
    lam = 1 / p_star
    mu = q_star / p_star
    cert = SmoothnessCertificate(lam, mu, Orientation.PAYOFF, pair_domain)
    binding = tuple(
        (s, t)
        for s, t, lhs, social_s, social_t in rows
        if lhs * p_star + social_s * q_star == social_t
    )
    return RpoaResult(
        value=value,
        certificate=cert,
        binding_pairs=binding,
        pair_domain=pair_domain,
        attained=True,
        guard_active=q_star == guard * p_star,
    )


@dataclass(frozen=True)
class ConvexityProbeReport:
    checked: int
    violations: tuple[tuple[int, int, Fraction], ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def convexity_probe(
    game: Game,
    triples: Sequence[tuple[Fraction, Fraction, Altruism]],
    gammas: Sequence[Fraction] = (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1)),
    cap: int | None = None,
) -> ConvexityProbeReport:
    """Check that convex combinations of verified certificates stay smooth.

    Every input triple is first verified individually (a failing input is a
    caller error); then each pair of triples is blended across the gamma
    grid and re-verified. Violations would falsify this implementation, not
    the theory.
    """
    normalized = []
    for lam, mu, alpha in triples:
        if not isinstance(alpha, Altruism):
            alpha = Altruism.uniform(alpha, game.player_count)
        cert = SmoothnessCertificate(lam, mu, game.orientation)
        ok, violation = is_smooth(game, alpha, cert, cap)
        if not ok:
            raise ValueError(f"input triple {(lam, mu)} is not smooth, e.g. on {violation}")
        normalized.append((Fraction(lam), Fraction(mu), alpha))

    violations = []
    checked = 0
    for i1 in range(len(normalized)):
        for i2 in range(i1, len(normalized)):
            lam1, mu1, a1 = normalized[i1]
            lam2, mu2, a2 = normalized[i2]
            for g in gammas:
                g = Fraction(g)
                lam = g * lam1 + (1 - g) * lam2
                mu = g * mu1 + (1 - g) * mu2
                alpha = Altruism(tuple(
                    g * x + (1 - g) * y for x, y in zip(a1.levels, a2.levels)
                ))
                checked += 1
                ok, _ = is_smooth(game, alpha, SmoothnessCertificate(lam, mu, game.orientation), cap)
                if not ok:
                    violations.append((i1, i2, g))
    return ConvexityProbeReport(checked, tuple(violations))


@dataclass(frozen=True)
class ExtremesReport:
    """Where the sampled robust price of anarchy peaks over altruism space."""

    samples: int
    max_value: Extended
    argmax: tuple[Fraction, ...]
    max_at_zero_one: bool


@dataclass(frozen=True)
class QuasiconvexityReport:
    endpoint_values: tuple[Extended, Extended]
    grid: tuple[tuple[Fraction, Extended], ...]
    violations: tuple[Fraction, ...]
    extremes: Optional[ExtremesReport]

    @property
    def ok(self) -> bool:
        if self.violations:
            return False
        return self.extremes is None or self.extremes.max_at_zero_one


def _is_zero_one(vector: Sequence[Fraction]) -> bool:
    return all(x == 0 or x == 1 for x in vector)


def rpoa_extremes(
    game: Game,
    alpha_axis: Sequence[Fraction] = (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1)),
    cap: int | None = None,
    sample_limit: int = 1000,
) -> ExtremesReport:
    """Sample the robust price of anarchy over a grid of altruism vectors and
    locate its maximum; quasi-convexity predicts a 0-1 maximizer."""
    n = game.player_count
    axis = tuple(Fraction(x) for x in alpha_axis)
    if len(axis) ** n > sample_limit:
        axis = (Fraction(0), Fraction(1, 2), Fraction(1))
    if len(axis) ** n > sample_limit:
        vectors = list(itertools.product((Fraction(0), Fraction(1)), repeat=n))
    else:
        vectors = list(itertools.product(axis, repeat=n))
    best_value: Extended | None = None
    best_vector: tuple[Fraction, ...] | None = None
    zero_one_max: Extended | None = None
    for vector in vectors:
        value = rpoa(game, Altruism(vector), cap=cap).value
        if best_value is None or value > best_value:
            best_value, best_vector = value, vector
        if _is_zero_one(vector):
            if zero_one_max is None or value > zero_one_max:
                zero_one_max = value
    assert best_value is not None and best_vector is not None
    return ExtremesReport(
        samples=len(vectors),
        max_value=best_value,
        argmax=best_vector,
        max_at_zero_one=zero_one_max == best_value,
    )


def quasiconvexity_probe(
    game: Game,
    alpha1: Altruism,
    alpha2: Altruism,
    grid_size: int = 9,
    include_extremes: bool = True,
    cap: int | None = None,
) -> QuasiconvexityReport:
    """Exact check of rpoa(blend) <= max(rpoa(ends)) along the segment.

    Requires finite endpoint values. With ``include_extremes`` the report
    also samples altruism space and records whether the maximum is attained
    at a sampled 0-1 vector.
    """
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    end1 = rpoa(game, alpha1, cap=cap).value
    end2 = rpoa(game, alpha2, cap=cap).value
    if end1 is INFINITY or end2 is INFINITY:
        raise ValueError("quasi-convexity probe needs finite endpoint values")
    ceiling = max(end1, end2)
    grid = []
    violations = []
    for j in range(grid_size):
        g = Fraction(j, grid_size - 1)
        blended = Altruism(tuple(
            g * x + (1 - g) * y for x, y in zip(alpha1.levels, alpha2.levels)
        ))
        value = rpoa(game, blended, cap=cap).value
        grid.append((g, value))
        if value > ceiling:
            violations.append(g)
    extremes = rpoa_extremes(game, cap=cap) if include_extremes else None
    return QuasiconvexityReport(
        endpoint_values=(end1, end2),
        grid=tuple(grid),
        violations=tuple(violations),
        extremes=extremes,
    )
