"""Full-instance analysis reports and their renderings.

The machine format is versioned, line-oriented text with a fixed section
and key order; re-running the same command on the same document reproduces
it byte for byte. The table format is for humans and carries no stability
guarantee.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import __version__
from .bounds import ComparisonRow, ComputedQuantities, compare_report
from .dynamics import (
    LearnerConfig,
    PlayerRegret,
    TotalAnarchyReport,
    Trajectory,
    average_external_regret,
    run_no_regret,
    total_anarchy_check,
)
from .equilibria import EquilibriumReport, pure_poa_pos
from .game import Altruism, CapExceededError, Game, Orientation
from .lp import DEFAULT_LP_CAP, CoarseResult, worst_cce, worst_ce
from .rationals import INFINITY, Extended, rational_str
from .smoothness import PairDomain, RpoaResult, rpoa

MACHINE_FORMAT_VERSION = 1


@dataclass(frozen=True)
class AnalysisOptions:
    pair_domain: PairDomain = PairDomain.ALL_PAIRS
    skip: frozenset[str] = frozenset()
    workers: int = 1
    lp_cap: int = DEFAULT_LP_CAP
    profile_cap: Optional[int] = None


@dataclass
class AnalysisReport:
    digest: str
    kind: str
    altruism: Altruism
    game: Game
    equilibrium: EquilibriumReport
    rpoa_result: RpoaResult
    cce: Optional[CoarseResult]
    ce: Optional[CoarseResult]
    coarse_note: Optional[str]
    cce_ratio: Optional[Extended]
    ce_ratio: Optional[Extended]
    comparisons: list[ComparisonRow] = field(default_factory=list)


def _coarse_ratio(game: Game, value: Fraction, optimum: Fraction) -> Extended:
    if game.orientation is Orientation.COST:
        return value / optimum
    if value == 0:
        return INFINITY
    return optimum / value


def analyze(
    game: Game,
    altruism: Altruism,
    digest: str = "-",
    kind: str = "explicit",
    options: AnalysisOptions = AnalysisOptions(),
) -> AnalysisReport:
    """Equilibria, robust price of anarchy, worst coarse values, bound table.

    The coarse section is skipped on request ("cce" in ``options.skip``);
    a cap overflow without that skip propagates as :class:`CapExceededError`.
    """
    equilibrium = pure_poa_pos(
        game, altruism, cap=options.profile_cap, workers=options.workers
    )
    rpoa_result = rpoa(
        game, altruism, pair_domain=options.pair_domain, cap=options.profile_cap
    )

    cce = ce = None
    cce_ratio = ce_ratio = None
    note = None
    if "cce" in options.skip:
        note = "skipped by request"
    else:
        cce = worst_cce(game, altruism, cap=options.lp_cap)
        cce_ratio = _coarse_ratio(game, cce.value, equilibrium.optimum_value)
        if "ce" in options.skip:
            note = "correlated program skipped by request"
        else:
            ce = worst_ce(game, altruism, cap=options.lp_cap)
            ce_ratio = _coarse_ratio(game, ce.value, equilibrium.optimum_value)

    comparisons = compare_report(
        game,
        altruism,
        ComputedQuantities(
            pure_poa=equilibrium.pure_poa,
            pure_pos=equilibrium.pure_pos,
            rpoa=rpoa_result.value,
            coarse_ratio=cce_ratio,
        ),
    )
    return AnalysisReport(
        digest=digest,
        kind=kind,
        altruism=altruism,
        game=game,
        equilibrium=equilibrium,
        rpoa_result=rpoa_result,
        cce=cce,
        ce=ce,
        coarse_note=note,
        cce_ratio=cce_ratio,
        ce_ratio=ce_ratio,
        comparisons=comparisons,
    )


def _profile_str(profile) -> str:
    return " ".join(str(a) for a in profile)


def _opt_str(value) -> str:
    return "none" if value is None else rational_str(value)


def render_machine(report: AnalysisReport) -> str:
    lines = [
        f"gamelab-report {MACHINE_FORMAT_VERSION}",
        f"tool-version {__version__}",
        "section instance",
        f"digest {report.digest}",
        f"kind {report.kind}",
        f"players {report.game.player_count}",
        f"orientation {report.game.orientation.value}",
        "altruism " + " ".join(rational_str(a) for a in report.altruism.levels),
    ]
    eq = report.equilibrium
    lines.append("section equilibria")
    lines.append(f"optimum-profile {_profile_str(eq.optimum_profile)}")
    lines.append(f"optimum-value {rational_str(eq.optimum_value)}")
    lines.append(f"pure-ne-count {len(eq.pure_ne)}")
    for s in eq.pure_ne:
        lines.append(f"pure-ne {_profile_str(s)}")
    lines.append(f"pure-poa {_opt_str(eq.pure_poa)}")
    lines.append(f"pure-pos {_opt_str(eq.pure_pos)}")

    rr = report.rpoa_result
    lines.append("section smoothness")
    lines.append(f"pair-domain {rr.pair_domain.value}")
    lines.append(f"rpoa {rational_str(rr.value)}")
    lines.append(f"rpoa-attained {'true' if rr.attained else 'false'}")
    lines.append(f"rpoa-guard-active {'true' if rr.guard_active else 'false'}")
    if rr.certificate is not None:
        lines.append(f"certificate-lambda {rational_str(rr.certificate.lam)}")
        lines.append(f"certificate-mu {rational_str(rr.certificate.mu)}")
    lines.append(f"binding-pair-count {len(rr.binding_pairs)}")
    for s, t in rr.binding_pairs:
        lines.append(f"binding-pair {_profile_str(s)} -> {_profile_str(t)}")

    lines.append("section coarse")
    if report.coarse_note is not None and report.cce is None:
        lines.append(f"skipped {report.coarse_note}")
    else:
        assert report.cce is not None
        lines.append(f"cce-value {rational_str(report.cce.value)}")
        lines.append(f"cce-ratio {rational_str(report.cce_ratio)}")
        support = report.cce.distribution.weights
        positive = [(s, w) for s, w in support if w]
        lines.append(f"cce-support-size {len(positive)}")
        for s, w in positive:
            lines.append(f"cce-weight {_profile_str(s)} : {rational_str(w)}")
        if report.ce is not None:
            lines.append(f"ce-value {rational_str(report.ce.value)}")
            lines.append(f"ce-ratio {rational_str(report.ce_ratio)}")
            positive = [(s, w) for s, w in report.ce.distribution.weights if w]
            lines.append(f"ce-support-size {len(positive)}")
            for s, w in positive:
                lines.append(f"ce-weight {_profile_str(s)} : {rational_str(w)}")
        elif report.coarse_note is not None:
            lines.append(f"ce-skipped {report.coarse_note}")

    lines.append("section bounds")
    for row in report.comparisons:
        lines.append(
            f"bound {row.bound_id} {row.direction.value} "
            f"{rational_str(row.bound_value)} {row.quantity} "
            f"{rational_str(row.computed)} {row.verdict}"
        )
    lines.append("end")
    return "\n".join(lines) + "\n"


def render_table(report: AnalysisReport) -> str:
    eq = report.equilibrium
    rr = report.rpoa_result
    out = []
    out.append(
        f"Instance {report.digest[:12]}  kind={report.kind}  "
        f"players={report.game.player_count}  orientation={report.game.orientation.value}"
    )
    out.append("Altruism: " + ", ".join(rational_str(a) for a in report.altruism.levels))
    out.append("")
    out.append(f"Optimum: profile ({', '.join(map(str, eq.optimum_profile))}) "
               f"value {rational_str(eq.optimum_value)}")
    out.append(f"Pure equilibria: {len(eq.pure_ne)}")
    for s in eq.pure_ne:
        out.append(f"  ({', '.join(map(str, s))})  social {rational_str(report.game.social_value(s))}")
    out.append(f"Pure PoA: {_opt_str(eq.pure_poa)}    Pure PoS: {_opt_str(eq.pure_pos)}")
    out.append("")
    cert = rr.certificate
    cert_text = (
        f"lambda={rational_str(cert.lam)} mu={rational_str(cert.mu)}"
        if cert is not None
        else "none"
    )
    out.append(
        f"Robust PoA ({rr.pair_domain.value} pairs): {rational_str(rr.value)}  "
        f"certificate {cert_text}  binding pairs {len(rr.binding_pairs)}"
    )
    if report.cce is not None:
        out.append(
            f"Worst CCE value: {rational_str(report.cce.value)}  "
            f"ratio {rational_str(report.cce_ratio)}"
        )
        if report.ce is not None:
            out.append(
                f"Worst CE value:  {rational_str(report.ce.value)}  "
                f"ratio {rational_str(report.ce_ratio)}"
            )
    if report.coarse_note:
        out.append(f"Coarse section: {report.coarse_note}")
    if report.comparisons:
        out.append("")
        out.append(f"{'bound':28} {'direction':12} {'value':>10} {'quantity':14} {'computed':>10} verdict")
        for row in report.comparisons:
            out.append(
                f"{row.bound_id:28} {row.direction.value:12} "
                f"{rational_str(row.bound_value):>10} {row.quantity:14} "
                f"{rational_str(row.computed):>10} {row.verdict}"
            )
    return "\n".join(out) + "\n"


@dataclass
class DynamicsAnalysis:
    digest: str
    kind: str
    altruism: Altruism
    game: Game
    trajectory: Trajectory
    regrets: tuple[PlayerRegret, ...]
    anarchy: Optional[TotalAnarchyReport]
    anarchy_note: Optional[str]


def analyze_dynamics(
    game: Game,
    altruism: Altruism,
    rounds: int,
    seed: int,
    config: LearnerConfig = LearnerConfig(),
    digest: str = "-",
    kind: str = "explicit",
    profile_cap: Optional[int] = None,
) -> DynamicsAnalysis:
    trajectory = run_no_regret(game, altruism, rounds, config, seed, cap=profile_cap)
    regrets = average_external_regret(game, altruism, trajectory)
    anarchy = None
    note = None
    if game.orientation is not Orientation.COST:
        note = "total-anarchy check applies to cost games only"
    else:
        from .equilibria import optimum

        opt_profile, opt_value = optimum(game, cap=profile_cap)
        rpoa_result = rpoa(game, altruism, cap=profile_cap)
        if rpoa_result.value is INFINITY or rpoa_result.certificate is None:
            note = "robust price of anarchy is not finite"
        elif opt_value <= 0:
            note = "optimum social value is not positive"
        else:
            anarchy = total_anarchy_check(game, altruism, trajectory, rpoa_result, opt_value)
    return DynamicsAnalysis(
        digest=digest,
        kind=kind,
        altruism=altruism,
        game=game,
        trajectory=trajectory,
        regrets=regrets,
        anarchy=anarchy,
        anarchy_note=note,
    )


def render_dynamics_machine(analysis: DynamicsAnalysis) -> str:
    t = analysis.trajectory
    lines = [
        f"gamelab-report {MACHINE_FORMAT_VERSION}",
        f"tool-version {__version__}",
        "section dynamics",
        f"digest {analysis.digest}",
        f"kind {analysis.kind}",
        f"players {analysis.game.player_count}",
        "altruism " + " ".join(rational_str(a) for a in analysis.altruism.levels),
        f"learner {t.config.kind.value}",
        f"eta-schedule {t.config.eta_schedule}",
        f"rounds {t.rounds}",
        f"seed {t.seed}",
        f"loss-normalizer {rational_str(t.normalizer)}",
        f"average-cost {rational_str(t.average_social_cost())}",
    ]
    for i, r in enumerate(analysis.regrets):
        lines.append(f"regret {i} exact {rational_str(r.exact)} normalized {r.normalized!r}")
    lines.append("section total-anarchy")
    if analysis.anarchy is None:
        lines.append(f"skipped {analysis.anarchy_note}")
    else:
        a = analysis.anarchy
        lines.append(f"rpoa {rational_str(a.rpoa_value)}")
        lines.append(f"optimum-value {rational_str(a.optimum_value)}")
        lines.append(f"max-regret {rational_str(a.max_regret)}")
        lines.append(f"slack {rational_str(a.slack)}")
        lines.append(f"bound {rational_str(a.bound)}")
        lines.append(f"average-cost {rational_str(a.average_cost)}")
        lines.append(f"holds {'true' if a.holds else 'false'}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def render_dynamics_table(analysis: DynamicsAnalysis) -> str:
    t = analysis.trajectory
    out = [
        f"Dynamics on {analysis.digest[:12]}  kind={analysis.kind}  "
        f"learner={t.config.kind.value}  rounds={t.rounds}  seed={t.seed}",
        f"Average social cost: {rational_str(t.average_social_cost())} "
        f"(~{float(t.average_social_cost()):.4f})",
        "Average external regret per player (exact, normalized):",
    ]
    for i, r in enumerate(analysis.regrets):
        out.append(f"  player {i}: {rational_str(r.exact)}  ({r.normalized:.6f})")
    if analysis.anarchy is not None:
        a = analysis.anarchy
        out.append(
            f"Average-cost bound: rpoa {rational_str(a.rpoa_value)} * optimum "
            f"{rational_str(a.optimum_value)} * (1 + slack {float(a.slack):.6f}) "
            f"= {float(a.bound):.4f} -> {'holds' if a.holds else 'VIOLATED'}"
        )
    else:
        out.append(f"Total-anarchy check skipped: {analysis.anarchy_note}")
    return "\n".join(out) + "\n"
