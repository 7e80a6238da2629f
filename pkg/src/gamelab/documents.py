"""Instance documents: a JSON format for games, exact end to end.

Rationals are written as plain integers or "p/q" strings so values survive
serialization unchanged. ``canonical_text`` fixes key order and layout;
parse-then-serialize is the identity on canonical documents.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .families import (
    CongestionSpec,
    CostSharingSpec,
    ExampleInstance,
    UtilitySpec,
    build_cost_sharing,
    build_linear_congestion,
    build_valid_utility,
    singleton_congestion,
)
from .game import Altruism, Game, Orientation, Profile, from_tables
from .rationals import format_rational, parse_rational

FORMAT_NAME = "gamelab-instance"
FORMAT_VERSION = 1

KINDS = ("cost_sharing", "linear_congestion", "singleton", "valid_utility", "explicit")


class DocumentError(ValueError):
    """Malformed instance document; message names the offending field."""


@dataclass
class ParsedInstance:
    game: Game
    altruism: Altruism
    kind: str
    fixtures: dict[str, Profile] = field(default_factory=dict)
    mixed_fixture: Optional[tuple[tuple[Fraction, ...], ...]] = None
    document: dict = field(default_factory=dict)

    def digest(self) -> str:
        return instance_digest(self.document)


def canonical_text(document: dict) -> str:
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def instance_digest(document: dict) -> str:
    return hashlib.sha256(canonical_text(document).encode("utf-8")).hexdigest()


def _altruism_payload(alpha: Altruism):
    if alpha.is_uniform:
        return format_rational(alpha.levels[0])
    return [format_rational(a) for a in alpha.levels]


def _strategies_payload(strategy_sets):
    return [[sorted(s) for s in strategies] for strategies in strategy_sets]


def _fixtures_payload(fixtures: dict, mixed) -> dict:
    out = {}
    if fixtures:
        out["fixtures"] = {name: list(profile) for name, profile in sorted(fixtures.items())}
    if mixed is not None:
        out["mixed"] = [[format_rational(p) for p in row] for row in mixed]
    return out


def document_from_example(example: ExampleInstance) -> dict:
    """Canonical document for a named instance, fixtures included."""
    game = example.game
    spec = game.family_spec
    doc: dict = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "players": game.player_count,
        "altruism": _altruism_payload(example.altruism),
    }
    if isinstance(spec, CostSharingSpec):
        doc["kind"] = "cost_sharing"
        doc["facility_costs"] = [format_rational(c) for c in spec.facility_costs]
        doc["strategies"] = _strategies_payload(spec.strategy_sets)
    elif isinstance(spec, CongestionSpec):
        delays = [[format_rational(a), format_rational(b)] for a, b in spec.delay_coeffs]
        if spec.singleton:
            doc["kind"] = "singleton"
            doc["delays"] = delays
        else:
            doc["kind"] = "linear_congestion"
            doc["delays"] = delays
            doc["strategies"] = _strategies_payload(spec.strategy_sets)
    elif isinstance(spec, UtilitySpec):
        doc["kind"] = "valid_utility"
        doc["ground_set_size"] = spec.ground_set_size
        doc["set_function"] = [format_rational(v) for v in spec.set_function]
        doc["strategies"] = _strategies_payload(spec.strategy_sets)
        doc["payoffs"] = [[format_rational(v) for v in row] for row in spec.payoff_tables]
    else:
        raise DocumentError(f"cannot serialize family {game.family_tag!r}")
    doc.update(_fixtures_payload(example.fixtures, example.mixed_fixture))
    return doc


def _require(document: dict, key: str):
    if key not in document:
        raise DocumentError(f"missing field: {key!r}")
    return document[key]


def _parse_rationals(values, where: str) -> list[Fraction]:
    if not isinstance(values, list):
        raise DocumentError(f"field {where!r} must be a list")
    out = []
    for k, v in enumerate(values):
        try:
            out.append(parse_rational(v))
        except ValueError as exc:
            raise DocumentError(f"field {where}[{k}]: {exc}") from exc
    return out


def _parse_strategies(raw, players: int, where: str = "strategies"):
    if not isinstance(raw, list) or len(raw) != players:
        raise DocumentError(f"field {where!r} must list one strategy set per player")
    sets = []
    for i, strategies in enumerate(raw):
        if not isinstance(strategies, list) or not strategies:
            raise DocumentError(f"field {where}[{i}] must be a non-empty list")
        rows = []
        for j, strategy in enumerate(strategies):
            if not isinstance(strategy, list):
                raise DocumentError(f"field {where}[{i}][{j}] must be a list of indices")
            rows.append(frozenset(int(e) for e in strategy))
        sets.append(tuple(rows))
    return tuple(sets)


def _parse_altruism(raw, players: int) -> Altruism:
    if isinstance(raw, list):
        if len(raw) != players:
            raise DocumentError("field 'altruism' must have one level per player")
        return Altruism(tuple(parse_rational(v) for v in raw))
    return Altruism.uniform(parse_rational(raw), players)


def _parse_fixtures(document: dict, game: Game) -> dict[str, Profile]:
    raw = document.get("fixtures", {})
    if not isinstance(raw, dict):
        raise DocumentError("field 'fixtures' must be an object")
    fixtures = {}
    for name, profile in raw.items():
        if not isinstance(profile, list):
            raise DocumentError(f"fixture {name!r} must be a profile (list of indices)")
        try:
            fixtures[name] = game.check_profile(tuple(int(a) for a in profile))
        except IndexError as exc:
            raise DocumentError(f"fixture {name!r}: {exc}") from exc
    return fixtures


def _parse_mixed(document: dict, game: Game):
    raw = document.get("mixed")
    if raw is None:
        return None
    if not isinstance(raw, list) or len(raw) != game.player_count:
        raise DocumentError("field 'mixed' must list one distribution per player")
    rows = []
    for i, row in enumerate(raw):
        probs = tuple(parse_rational(v) for v in row)
        if len(probs) != game.strategy_counts[i]:
            raise DocumentError(f"field mixed[{i}] has the wrong length")
        rows.append(probs)
    return tuple(rows)


def parse_instance(document: dict) -> ParsedInstance:
    """Validate a document and construct the game it describes."""
    if not isinstance(document, dict):
        raise DocumentError("instance document must be a JSON object")
    fmt = document.get("format", FORMAT_NAME)
    if fmt != FORMAT_NAME:
        raise DocumentError(f"unknown document format: {fmt!r}")
    version = document.get("version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise DocumentError(f"unsupported document version: {version!r}")
    kind = _require(document, "kind")
    if kind not in KINDS:
        raise DocumentError(f"unknown kind: {kind!r}")
    players = _require(document, "players")
    if not isinstance(players, int) or players < 1:
        raise DocumentError("field 'players' must be a positive integer")

    if kind == "cost_sharing":
        costs = _parse_rationals(_require(document, "facility_costs"), "facility_costs")
        sets = _parse_strategies(_require(document, "strategies"), players)
        try:
            game = build_cost_sharing(CostSharingSpec(tuple(costs), sets))
        except ValueError as exc:
            raise DocumentError(str(exc)) from exc
    elif kind in ("linear_congestion", "singleton"):
        raw_delays = _require(document, "delays")
        if not isinstance(raw_delays, list):
            raise DocumentError("field 'delays' must be a list of [a, b] pairs")
        delays = []
        for k, pair in enumerate(raw_delays):
            if not isinstance(pair, list) or len(pair) != 2:
                raise DocumentError(f"field delays[{k}] must be an [a, b] pair")
            delays.append((parse_rational(pair[0]), parse_rational(pair[1])))
        try:
            if kind == "singleton":
                spec = singleton_congestion(tuple(delays), players)
            else:
                sets = _parse_strategies(_require(document, "strategies"), players)
                spec = CongestionSpec(tuple(delays), sets)
            game = build_linear_congestion(spec)
        except ValueError as exc:
            raise DocumentError(str(exc)) from exc
    elif kind == "valid_utility":
        ground = _require(document, "ground_set_size")
        if not isinstance(ground, int):
            raise DocumentError("field 'ground_set_size' must be an integer")
        values = _parse_rationals(_require(document, "set_function"), "set_function")
        sets = _parse_strategies(_require(document, "strategies"), players)
        payoffs_raw = _require(document, "payoffs")
        if not isinstance(payoffs_raw, list) or len(payoffs_raw) != players:
            raise DocumentError("field 'payoffs' must list one table per player")
        payoffs = tuple(
            tuple(_parse_rationals(row, f"payoffs[{i}]")) for i, row in enumerate(payoffs_raw)
        )
        try:
            spec = UtilitySpec(ground, tuple(values), sets, payoffs)
            game = build_valid_utility(spec)
        except ValueError as exc:
            raise DocumentError(str(exc)) from exc
    else:  # explicit
        orientation_raw = _require(document, "orientation")
        try:
            orientation = Orientation(orientation_raw)
        except ValueError as exc:
            raise DocumentError(f"unknown orientation: {orientation_raw!r}") from exc
        counts = _require(document, "strategy_counts")
        if not isinstance(counts, list) or len(counts) != players:
            raise DocumentError("field 'strategy_counts' must have one entry per player")
        direct_raw = _require(document, "direct_values")
        if not isinstance(direct_raw, list) or len(direct_raw) != players:
            raise DocumentError("field 'direct_values' must list one table per player")
        direct = [
            _parse_rationals(row, f"direct_values[{i}]") for i, row in enumerate(direct_raw)
        ]
        social = _parse_rationals(_require(document, "social_values"), "social_values")
        try:
            game = from_tables(direct, social, counts, orientation)
        except ValueError as exc:
            raise DocumentError(str(exc)) from exc

    altruism = _parse_altruism(_require(document, "altruism"), players)
    fixtures = _parse_fixtures(document, game)
    mixed = _parse_mixed(document, game)
    normalized = _normalize_document(kind, players, game, altruism, fixtures, mixed)
    return ParsedInstance(
        game=game,
        altruism=altruism,
        kind=kind,
        fixtures=fixtures,
        mixed_fixture=mixed,
        document=normalized,
    )


def _normalize_document(kind, players, game, altruism, fixtures, mixed) -> dict:
    """Re-emit the canonical dict from the parsed values."""
    doc: dict = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "kind": kind,
        "players": players,
        "altruism": _altruism_payload(altruism),
    }
    spec = game.family_spec
    if kind == "cost_sharing":
        doc["facility_costs"] = [format_rational(c) for c in spec.facility_costs]
        doc["strategies"] = _strategies_payload(spec.strategy_sets)
    elif kind == "singleton":
        doc["delays"] = [[format_rational(a), format_rational(b)] for a, b in spec.delay_coeffs]
    elif kind == "linear_congestion":
        doc["delays"] = [[format_rational(a), format_rational(b)] for a, b in spec.delay_coeffs]
        doc["strategies"] = _strategies_payload(spec.strategy_sets)
    elif kind == "valid_utility":
        doc["ground_set_size"] = spec.ground_set_size
        doc["set_function"] = [format_rational(v) for v in spec.set_function]
        doc["strategies"] = _strategies_payload(spec.strategy_sets)
        doc["payoffs"] = [[format_rational(v) for v in row] for row in spec.payoff_tables]
    else:  # explicit
        doc["orientation"] = game.orientation.value
        doc["strategy_counts"] = list(game.strategy_counts)
        size = game.profile_space_size()
        import itertools

        profiles = list(itertools.product(*(range(k) for k in game.strategy_counts)))
        assert len(profiles) == size
        doc["direct_values"] = [
            [format_rational(game.direct_value(i, s)) for s in profiles]
            for i in range(players)
        ]
        doc["social_values"] = [format_rational(game.social_value(s)) for s in profiles]
    doc.update(_fixtures_payload(fixtures, mixed))
    return doc


def parse_instance_text(text: str) -> ParsedInstance:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return parse_instance(document)
