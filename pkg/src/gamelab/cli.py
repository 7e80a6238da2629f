"""Command-line interface: gen, analyze, dynamics, bounds.

Exit codes: 0 success, 1 input error, 2 enumeration/LP cap exceeded without
the matching --skip. Reports go to stdout, diagnostics to stderr. The
environment variable GAMELAB_CAP overrides the profile-enumeration cap.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .analysis import (
    AnalysisOptions,
    analyze,
    analyze_dynamics,
    render_dynamics_machine,
    render_dynamics_table,
    render_machine,
    render_table,
)
from .bounds import CATALOG, applicable_bounds
from .documents import (
    DocumentError,
    canonical_text,
    document_from_example,
    instance_digest,
    parse_instance_text,
)
from .dynamics import LearnerConfig, LearnerKind
from .families import EXAMPLE_NAMES, FamilyError, example_instance
from .game import Altruism, CapExceededError, UndefinedRatioError
from .rationals import parse_rational, rational_str
from .smoothness import PairDomain


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on bad flags, not argparse's default 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gamelab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="emit a named instance document",
                         parents=[], add_help=True)
    gen.add_argument("name", help=f"one of: {', '.join(EXAMPLE_NAMES)}")
    gen.add_argument("--alpha", default="0", help="altruism level p/q (default 0)")
    gen.add_argument("--n", type=int, default=2, help="player count where applicable")
    gen.add_argument("--m", type=int, default=3, help="facility count where applicable")
    gen.set_defaults(func=cmd_gen)

    an = sub.add_parser("analyze", help="full report for an instance file")
    an.add_argument("file", help="instance document path, or - for stdin")
    an.add_argument("--alpha", help="override altruism: p/q or comma-separated levels")
    an.add_argument("--pairs", choices=("all", "opt"), default="all",
                    help="smoothness pair domain (default all)")
    an.add_argument("--skip", action="append", default=[], choices=("cce", "ce"),
                    help="skip the coarse section (cce) or only the correlated program (ce)")
    an.add_argument("--parallel", type=int, default=1, metavar="N",
                    help="worker threads for the equilibrium scan")
    an.add_argument("--format", choices=("table", "machine"), default="table")
    an.set_defaults(func=cmd_analyze)

    dyn = sub.add_parser("dynamics", help="no-regret play on an instance file")
    dyn.add_argument("file")
    dyn.add_argument("--alpha", help="override altruism: p/q or comma-separated levels")
    dyn.add_argument("--T", type=int, default=10_000, dest="rounds")
    dyn.add_argument("--seed", type=int, default=0)
    dyn.add_argument("--learner", choices=("mw", "rm"), default="mw")
    dyn.add_argument("--format", choices=("table", "machine"), default="table")
    dyn.set_defaults(func=cmd_dynamics)

    bounds = sub.add_parser("bounds", help="evaluate the closed-form bound catalog")
    bounds.add_argument("--family", required=True,
                        choices=("cost-sharing", "congestion", "singleton", "valid-utility"))
    bounds.add_argument("--alpha", default="0", help="uniform altruism level p/q")
    bounds.add_argument("--alpha-hat", help="maximum altruism level (defaults to --alpha)")
    bounds.add_argument("--alpha-check", help="minimum altruism level (defaults to --alpha)")
    bounds.add_argument("--n", type=int, default=2, help="player count")
    bounds.set_defaults(func=cmd_bounds)
    return parser


def _parse_alpha_arg(raw: str, players: int) -> Altruism:
    if "," in raw:
        levels = tuple(parse_rational(part) for part in raw.split(","))
        if len(levels) != players:
            raise ValueError(
                f"altruism override has {len(levels)} levels for {players} players"
            )
        return Altruism(levels)
    return Altruism.uniform(parse_rational(raw), players)


def _read_instance(path: str):
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, "r", encoding="utf-8") as handle:
                text = handle.read()
        except OSError as exc:
            raise DocumentError(f"cannot read {path}: {exc}") from exc
    return parse_instance_text(text)


def cmd_gen(args) -> int:
    params = {}
    if args.name.replace("_", "-") in ("cost-sharing-lb",):
        params = {"n": args.n, "alpha": parse_rational(args.alpha)}
    elif args.name.replace("_", "-") in ("congestion-lb", "singleton-tight-2p"):
        params = {"alpha": parse_rational(args.alpha)}
    elif args.name.replace("_", "-") == "singleton-mixed":
        params = {"m": args.m, "alpha": parse_rational(args.alpha)}
    elif args.name.replace("_", "-") == "valid-utility-tight":
        params = {"alpha": parse_rational(args.alpha)}
    example = example_instance(args.name, **params)
    sys.stdout.write(canonical_text(document_from_example(example)))
    return 0


def cmd_analyze(args) -> int:
    instance = _read_instance(args.file)
    altruism = instance.altruism
    if args.alpha is not None:
        altruism = _parse_alpha_arg(args.alpha, instance.game.player_count)
    options = AnalysisOptions(
        pair_domain=PairDomain.ALL_PAIRS if args.pairs == "all" else PairDomain.OPTIMUM_TARGETS,
        skip=frozenset(args.skip),
        workers=max(1, args.parallel),
    )
    try:
        report = analyze(
            instance.game,
            altruism,
            digest=instance.digest(),
            kind=instance.kind,
            options=options,
        )
    except CapExceededError as exc:
        if "cce" in options.skip:
            raise  # enumeration itself is over the cap; nothing to skip
        print(f"gamelab: {exc} (rerun with --skip cce to omit the LP section)",
              file=sys.stderr)
        return 2
    render = render_machine if args.format == "machine" else render_table
    sys.stdout.write(render(report))
    return 0


def cmd_dynamics(args) -> int:
    instance = _read_instance(args.file)
    altruism = instance.altruism
    if args.alpha is not None:
        altruism = _parse_alpha_arg(args.alpha, instance.game.player_count)
    config = LearnerConfig(
        kind=LearnerKind.MULTIPLICATIVE_WEIGHTS if args.learner == "mw"
        else LearnerKind.REGRET_MATCHING
    )
    analysis = analyze_dynamics(
        instance.game,
        altruism,
        rounds=args.rounds,
        seed=args.seed,
        config=config,
        digest=instance.digest(),
        kind=instance.kind,
    )
    render = render_dynamics_machine if args.format == "machine" else render_dynamics_table
    sys.stdout.write(render(analysis))
    return 0


_FAMILY_TAGS = {
    "cost-sharing": "cost_sharing",
    "congestion": "linear_congestion",
    "singleton": "singleton_linear",
    "valid-utility": "valid_utility",
}


def cmd_bounds(args) -> int:
    tag = _FAMILY_TAGS[args.family]
    alpha = parse_rational(args.alpha)
    alpha_hat = parse_rational(args.alpha_hat) if args.alpha_hat else alpha
    alpha_check = parse_rational(args.alpha_check) if args.alpha_check else alpha
    params = {
        "n": args.n,
        "alpha": alpha,
        "alpha_hat": alpha_hat,
        "alpha_check": alpha_check,
    }
    rows = []
    for entry in applicable_bounds(tag):
        value = entry.evaluate({k: params[k] for k in entry.params} if entry.params else {})
        rows.append((entry.id, entry.direction.value, value, entry.description))
    width = max(len(r[0]) for r in rows)
    for bound_id, direction, value, description in rows:
        sys.stdout.write(
            f"{bound_id:<{width}}  {direction:<10}  {rational_str(value):>10}  {description}\n"
        )
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CapExceededError as exc:
        print(f"gamelab: {exc}", file=sys.stderr)
        return 2
    except (DocumentError, FamilyError, UndefinedRatioError, ValueError, KeyError) as exc:
        print(f"gamelab: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
