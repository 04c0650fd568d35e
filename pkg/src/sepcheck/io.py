"""JSON readers and writers.  Every rational is written as ``"num/den"``."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .axioms import BalancedCertificate
from .crs import LinearCanonicalForm
from .errors import GameError, ParseError
from .game import Game, PreferenceFamily
from .rationals import format_rational, parse_rational
from .separability import Mode, Representation


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")


def read_json(path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError("<file>", f"invalid JSON: {exc}") from exc


def _rational(key, value) -> Fraction:
    try:
        return parse_rational(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(key, f"not a rational: {value!r}") from exc


def _index_list(key, value) -> list[int]:
    if not isinstance(value, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
        raise ParseError(key, "expected an array of integers")
    return value


def game_from_dict(data) -> Game:
    if not isinstance(data, dict):
        raise ParseError("<root>", "expected a JSON object")
    players = data.get("players")
    if not isinstance(players, list) or not players or not all(isinstance(p, list) for p in players):
        raise ParseError("players", "expected a non-empty array of action arrays")
    actions = [
        tuple(None if v is None else _rational(f"players[{i}][{k}]", v) for k, v in enumerate(p))
        for i, p in enumerate(players)
    ]
    focal = data.get("focal", 0)
    if not isinstance(focal, int) or isinstance(focal, bool):
        raise ParseError("focal", "expected an integer")
    has_u, has_o = "utility" in data, "orders" in data
    if has_u == has_o:
        raise ParseError("utility", "exactly one of 'utility' or 'orders' is required")
    if not 0 <= focal < len(actions):
        raise ParseError("focal", f"index {focal} out of range")
    opps = [i for i in range(len(actions)) if i != focal]
    shape = (len(actions[focal]),) + tuple(len(actions[i]) for i in opps)
    try:
        if has_u:
            flat = data["utility"]
            if not isinstance(flat, list):
                raise ParseError("utility", "expected a flat array")
            if len(flat) != int(np.prod(shape)):
                raise ParseError("utility", f"{len(flat)} entries, expected {int(np.prod(shape))}")
            vals = [_rational(f"utility[{k}]", v) for k, v in enumerate(flat)]
            return Game(tuple(actions), focal, utility=np.array(vals, dtype=object).reshape(shape))
        orders = data["orders"]
        if not isinstance(orders, dict):
            raise ParseError("orders", "expected an object keyed by opponent profile")
        ranks = np.zeros(shape, dtype=np.int64)
        seen = set()
        for key, vec in orders.items():
            try:
                prof = tuple(int(v) for v in key.split(",")) if key else ()
            except ValueError as exc:
                raise ParseError(f"orders[{key}]", "key must be comma-separated indices") from exc
            if len(prof) != len(opps) or any(not 0 <= p < k for p, k in zip(prof, shape[1:])):
                raise ParseError(f"orders[{key}]", "profile does not index the opponents")
            vec = _index_list(f"orders[{key}]", vec)
            if len(vec) != shape[0]:
                raise ParseError(f"orders[{key}]", f"expected {shape[0]} ranks")
            ranks[(slice(None), *prof)] = vec
            seen.add(prof)
        missing = int(np.prod(shape[1:])) - len(seen)
        if missing:
            raise ParseError("orders", f"{missing} opponent profiles have no rank vector")
        return Game(tuple(actions), focal, orders=PreferenceFamily(ranks))
    except GameError as exc:
        raise ParseError("players", str(exc)) from exc


def load_game(path) -> Game:
    return game_from_dict(read_json(path))


def _value_str(v):
    return None if v is None else format_rational(v)


def game_to_dict(game: Game) -> dict:
    out = {
        "players": [[_value_str(v) for v in acts] for acts in game.actions],
        "focal": game.focal,
    }
    if game.utility is not None:
        out["utility"] = [format_rational(v) for v in game.utility.ravel()]
    else:
        out["orders"] = {
            ",".join(map(str, s_plus)): [int(r) for r in game.orders.ranks[(slice(None), *s_plus)]]
            for s_plus in game.opponent_profiles()
        }
    return out


def cert_to_dict(cert: BalancedCertificate) -> dict:
    return {"pairs": [{"r": list(r), "t": list(t)} for r, t in cert.pairs]}


def cert_from_dict(data) -> BalancedCertificate:
    pairs = data.get("pairs") if isinstance(data, dict) else None
    if not isinstance(pairs, list):
        raise ParseError("pairs", "expected an array of {r, t} objects")
    out = []
    for k, item in enumerate(pairs):
        if not isinstance(item, dict) or "r" not in item or "t" not in item:
            raise ParseError(f"pairs[{k}]", "expected an object with 'r' and 't'")
        out.append((_index_list(f"pairs[{k}].r", item["r"]), _index_list(f"pairs[{k}].t", item["t"])))
    return BalancedCertificate(tuple(out))


def rep_to_dict(rep: Representation) -> dict:
    return {
        "mode": rep.mode.value,
        "g": {f"{j}|{s0}|{sj}": format_rational(v) for (j, s0, sj), v in rep.g.items()},
    }


def rep_from_dict(data, game: Game) -> Representation:
    if not isinstance(data, dict):
        raise ParseError("<root>", "expected a JSON object")
    try:
        mode = Mode(data.get("mode", "strategic"))
    except ValueError as exc:
        raise ParseError("mode", "expected 'strategic' or 'full'") from exc
    g = data.get("g")
    if not isinstance(g, dict):
        raise ParseError("g", "expected an object keyed 'j|s0|sj'")
    blocks = [np.full((game.shape[0], k), None, dtype=object) for k in game.opponent_shape]
    for key, val in g.items():
        try:
            j, s0, sj = (int(v) for v in key.split("|"))
            pos = game.opponent_position(j)
            blocks[pos][s0, sj] = _rational(f"g[{key}]", val)
        except (ValueError, IndexError) as exc:
            raise ParseError(f"g[{key}]", "key does not index the game") from exc
    for pos, blk in enumerate(blocks):
        if any(v is None for v in blk.ravel()):
            raise ParseError("g", f"missing entries for opponent {game.opponents[pos]}")
    return Representation(mode, game.opponents, tuple(blocks))


def form_to_dict(form: LinearCanonicalForm) -> dict:
    return form.to_dict()


def form_from_dict(data) -> LinearCanonicalForm:
    try:
        return LinearCanonicalForm(
            tuple(_rational("f", v) for v in data["f"]),
            tuple(_rational("gamma", v) for v in data["gamma"]),
            {int(j): _rational(f"weights[{j}]", w) for j, w in data["weights"].items()},
        )
    except (KeyError, TypeError, AttributeError) as exc:
        raise ParseError("f", "canonical form needs 'f', 'gamma' and 'weights'") from exc
