"""JSON game specifications, bundled fixtures and result serialization."""

from __future__ import annotations

import json
import os
from fractions import Fraction
from pathlib import Path

from ._exact import as_fraction, fmt
from .game import (
    Game,
    GameError,
    LinearCost,
    Message,
    RatioCost,
    finite_game,
    mean_game,
    validate_game,
)

FIXTURE_DIR = Path(__file__).parent / "fixtures"


class SchemaError(ValueError):
    def __init__(self, path: str, reason: str):
        super().__init__(f"{path}: {reason}")
        self.path = path
        self.reason = reason


class NumericError(ValueError):
    pass


def _num(x, path: str) -> Fraction:
    try:
        return as_fraction(x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise NumericError(f"{path}: {x!r} is not a finite number ({exc})") from None


def _need(obj: dict, key: str, path: str):
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    if key not in obj:
        raise SchemaError(f"{path}.{key}", "missing required field")
    return obj[key]


def _list(x, path: str) -> list:
    if not isinstance(x, list):
        raise SchemaError(path, "expected a list")
    return x


def encode(x):
    """JSON value for an exact number: int, a round-tripping float, or a "p/q" string."""
    if x is None:
        return None
    x = Fraction(x)
    if x.denominator == 1:
        return x.numerator
    s = fmt(x)
    return float(s) if "/" not in s else s


def _cost(obj, path: str, n: int):
    kind = _need(obj, "kind", path)
    if kind == "ratio":
        return RatioCost()
    if kind == "linear":
        coefs = _list(_need(obj, "coefficients", path), f"{path}.coefficients")
        if len(coefs) != n:
            raise SchemaError(f"{path}.coefficients", f"expected {n} coefficients")
        return LinearCost(tuple(_num(c, f"{path}.coefficients[{i}]") for i, c in enumerate(coefs)))
    raise SchemaError(f"{path}.kind", f"unknown cost kind {kind!r}")


def _prior(raw, path: str, n: int) -> list:
    prior = [_num(p, f"{path}[{i}]") for i, p in enumerate(_list(raw, path))]
    if len(prior) != n:
        raise SchemaError(path, f"expected {n} probabilities, got {len(prior)}")
    if any(p < 0 for p in prior) or sum(prior) != 1:
        raise SchemaError(path, f"not a probability distribution (sums to {fmt(sum(prior))})")
    return prior


def _types(raw, path: str):
    labels, values = [], []
    for i, t in enumerate(_list(raw, path)):
        p = f"{path}[{i}]"
        if isinstance(t, dict):
            labels.append(str(_need(t, "label", p)))
            values.append(_num(t.get("value", i + 1), f"{p}.value"))
        else:
            v = _num(t, p)
            labels.append(f"t{i + 1}")
            values.append(v)
    return labels, values


def game_from_dict(data: dict, path: str = "$"):
    """Build a Game (or a SpenceSpec for monotone specs) from parsed JSON."""
    if not isinstance(data, dict):
        raise SchemaError(path, "expected an object")
    if "action_model" not in data:
        if "cost" in data:
            from .spence import spence_from_dict

            return spence_from_dict(data, path)
        raise SchemaError(f"{path}.action_model", "missing required field")
    name = str(data.get("name", "game"))
    labels, values = _types(_need(data, "types", path), f"{path}.types")
    prior = _prior(_need(data, "prior", path), f"{path}.prior", len(labels))
    msgs = []
    for i, m in enumerate(_list(_need(data, "messages", path), f"{path}.messages")):
        p = f"{path}.messages[{i}]"
        if isinstance(m, str):
            msgs.append(Message(m))
            continue
        level = m.get("level") if isinstance(m, dict) else None
        msgs.append(Message(str(_need(m, "label", p)),
                            None if level is None else _num(level, f"{p}.level"),
                            bool(m.get("terminal", False))))
    mlabels = {m.label for m in msgs}
    tlabels = set(labels)
    terminal = {}
    for i, row in enumerate(_list(data.get("terminal_payoffs", []), f"{path}.terminal_payoffs")):
        p = f"{path}.terminal_payoffs[{i}]"
        if not isinstance(row, list) or len(row) != 4:
            raise SchemaError(p, "expected [type, message, u_S, u_R]")
        t, m, us, ur = row
        _check_label(t, tlabels, f"{p}[0]", "type")
        _check_label(m, mlabels, f"{p}[1]", "message")
        terminal[(t, m)] = (_num(us, f"{p}[2]"), _num(ur, f"{p}[3]"))
    model = data["action_model"]
    if model == "mean":
        sp = _need(data, "sender_payoff", path)
        if not isinstance(sp, dict) or sp.get("form") != "quasilinear":
            raise SchemaError(f"{path}.sender_payoff", "mean-action games need {\"form\": \"quasilinear\"}")
        cost = _cost(_need(sp, "cost", f"{path}.sender_payoff"), f"{path}.sender_payoff.cost", len(labels))
        interval = data.get("message_interval")
        if interval is not None:
            interval = [_num(v, f"{path}.message_interval[{i}]") for i, v in enumerate(_list(interval, f"{path}.message_interval"))]
        game = mean_game(name, labels, values, prior, msgs, cost, terminal, interval)
    elif model == "finite":
        actions = [str(a) for a in _list(_need(data, "actions", path), f"{path}.actions")]
        sender = _table(_need(data, "sender_payoff", path), f"{path}.sender_payoff", tlabels, mlabels, set(actions))
        receiver = _table(_need(data, "receiver_payoff", path), f"{path}.receiver_payoff", tlabels, mlabels, set(actions))
        game = finite_game(name, labels, prior, msgs, actions, sender, receiver, terminal, values)
    else:
        raise SchemaError(f"{path}.action_model", f"expected 'finite' or 'mean', got {model!r}")
    validate_game(game)
    return game


def _check_label(x, known, path, kind):
    if x not in known:
        raise SchemaError(path, f"unknown {kind} label {x!r}")


def _table(rows, path, tlabels, mlabels, alabels) -> dict:
    out = {}
    for i, row in enumerate(_list(rows, path)):
        p = f"{path}[{i}]"
        if not isinstance(row, list) or len(row) != 4:
            raise SchemaError(p, "expected [type, message, action, value]")
        t, m, a, v = row
        _check_label(t, tlabels, f"{p}[0]", "type")
        _check_label(m, mlabels, f"{p}[1]", "message")
        _check_label(a, alabels, f"{p}[2]", "action")
        out[(t, m, a)] = _num(v, f"{p}[3]")
    return out


def parse_game_spec(text: str):
    """Parse JSON text into a Game or SpenceSpec.

    Decimal literals are read exactly; strings such as ``"1/3"`` are accepted
    wherever a number is expected.
    """
    try:
        data = json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON: {exc.msg} at line {exc.lineno}") from None
    return game_from_dict(data)


def load_game(path) -> object:
    return parse_game_spec(Path(path).read_text())


def fixture_path(name: str) -> Path:
    root = Path(os.environ.get("SIGREF_FIXTURES", FIXTURE_DIR))
    p = root / (name if name.endswith(".json") else f"{name}.json")
    if not p.exists() and root != FIXTURE_DIR:
        p = FIXTURE_DIR / p.name
    return p


def load_fixture(name: str):
    """Load a bundled game by name, honoring the SIGREF_FIXTURES override directory."""
    return load_game(fixture_path(name))


def fixture_names() -> list:
    return sorted(p.stem for p in FIXTURE_DIR.glob("*.json"))


def game_to_dict(game: Game) -> dict:
    out = {
        "name": game.name,
        "types": [{"label": l, "value": encode(v)} for l, v in zip(game.type_labels, game.type_values)],
        "prior": [encode(p) for p in game.prior],
        "messages": [],
    }
    for m in game.messages:
        d = {"label": m.label}
        if m.level is not None:
            d["level"] = encode(m.level)
        if m.terminal:
            d["terminal"] = True
        out["messages"].append(d)
    term = []
    for t, tl in enumerate(game.type_labels):
        for j, m in enumerate(game.messages):
            if m.terminal:
                us, ur = game.terminal[t][j]
                term.append([tl, m.label, encode(us), encode(ur)])
    if game.is_mean:
        out["action_model"] = "mean"
        c = game.sender_payoff
        cost = {"kind": c.kind}
        if isinstance(c, LinearCost):
            cost["coefficients"] = [encode(x) for x in c.coefficients]
        out["sender_payoff"] = {"form": "quasilinear", "cost": cost}
        if game.message_interval is not None:
            out["message_interval"] = [encode(x) for x in game.message_interval]
    else:
        out["action_model"] = "finite"
        out["actions"] = list(game.actions)
        s, r = [], []
        for t, tl in enumerate(game.type_labels):
            for j, m in enumerate(game.messages):
                if m.terminal:
                    continue
                for a, al in enumerate(game.actions):
                    s.append([tl, m.label, al, encode(game.sender_payoff[t][j][a])])
                    r.append([tl, m.label, al, encode(game.action_model.receiver_payoff[t][j][a])])
        out["sender_payoff"] = s
        out["receiver_payoff"] = r
    if term:
        out["terminal_payoffs"] = term
    return out


def _dist(labels, vec) -> dict:
    return {l: encode(p) for l, p in zip(labels, vec) if p}


def class_to_dict(game: Game, cls) -> dict:
    """JSON row for an equilibrium class; off-path parts are included for re-verification."""
    prof = cls.profile
    on = set(prof.on_path())
    mlabels = [m.label for m in game.messages]

    def response(m):
        r = prof.receiver[m]
        if r is None:
            return None
        return encode(r) if game.is_mean else _dist(game.actions, r)

    row = {
        "label": cls.label,
        "sender_strategy": {tl: _dist(mlabels, prof.sender[t]) for t, tl in enumerate(game.type_labels)},
        "receiver_on_path": {mlabels[m]: response(m) for m in sorted(on) if not game.messages[m].terminal},
        "beliefs_on_path": {mlabels[m]: _dist(game.type_labels, prof.beliefs[m]) for m in sorted(on)},
        "payoffs": {tl: encode(v) for tl, v in zip(game.type_labels, prof.payoffs)},
        "receiver_off_path": {mlabels[m]: response(m) for m in range(game.n_messages)
                              if m not in on and not game.messages[m].terminal},
        "beliefs_off_path": {mlabels[m]: _dist(game.type_labels, prof.beliefs[m]) for m in range(game.n_messages)
                             if m not in on and prof.beliefs[m] is not None},
    }
    return row


def class_from_dict(game: Game, row: dict):
    """Rebuild an EquilibriumClass from ``class_to_dict`` output."""
    from .equilibria import EquilibriumClass, find_deterrent
    from .game import make_profile

    T, M = game.n_types, game.n_messages
    sender = [[Fraction(0)] * M for _ in range(T)]
    for tl, dist in row["sender_strategy"].items():
        for ml, p in dist.items():
            sender[game.type_index(tl)][game.message_index(ml)] = as_fraction(p)
    receiver = [None] * M
    beliefs = [None] * M
    responses = dict(row.get("receiver_on_path", {}))
    responses.update(row.get("receiver_off_path", {}))
    for ml, r in responses.items():
        m = game.message_index(ml)
        if r is None:
            continue
        if game.is_mean:
            receiver[m] = as_fraction(r)
        else:
            vec = [Fraction(0)] * len(game.actions)
            for al, p in r.items():
                vec[game.action_index(al)] = as_fraction(p)
            receiver[m] = tuple(vec)
    for key in ("beliefs_on_path", "beliefs_off_path"):
        for ml, dist in row.get(key, {}).items():
            vec = [Fraction(0)] * T
            for tl, p in dist.items():
                vec[game.type_index(tl)] = as_fraction(p)
            beliefs[game.message_index(ml)] = tuple(vec)
    prof = make_profile(game, sender, receiver, beliefs)
    missing = [m for m in range(M) if prof.receiver[m] is None and not game.messages[m].terminal]
    if missing:
        for m in missing:
            found = find_deterrent(game, m, prof.payoffs)
            if found is not None:
                receiver[m], beliefs[m] = found
        prof = make_profile(game, sender, receiver, beliefs)
    return EquilibriumClass(row.get("label", ""), prof)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"
