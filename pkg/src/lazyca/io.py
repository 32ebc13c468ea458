"""JSON file formats: rule files, configuration files, reports."""

from __future__ import annotations

import json
from pathlib import Path

from .engine import Configuration, Trajectory
from .groups import Element, Group, GroupError, group_from_spec
from .results import OrderResult
from .rules import LazyRule, LocalMap, NotLazy, Pattern, RuleError, is_lazy


class FormatError(ValueError):
    pass


def _load(path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise FormatError(f"{path}: no such file") from None
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise FormatError(f"{path}: expected a JSON object")
    return data


def _symbol(v, q: int, what: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise FormatError(f"{what} must be an integer symbol, got {v!r}")
    if not 0 <= v < q:
        raise FormatError(f"{what} {v} is outside the alphabet 0..{q - 1}")
    return v


def parse_rule(data: dict) -> LazyRule | NotLazy:
    """Build a rule from the rule-file object.

    Either ``pattern`` + ``write`` (a lazy rule given directly) or
    ``table`` (a full local map, reduced and tested for laziness).
    """
    try:
        group = group_from_spec(data.get("group", "Z"))
    except GroupError as exc:
        raise FormatError(f"group: {exc}") from None
    q = data.get("alphabet", 2)
    if isinstance(q, bool) or not isinstance(q, int) or q < 2:
        raise FormatError(f"alphabet must be an integer >= 2, got {q!r}")
    if "neighborhood" not in data:
        raise FormatError("missing 'neighborhood'")
    try:
        S = tuple(group.element(s) for s in data["neighborhood"])
    except GroupError as exc:
        raise FormatError(f"neighborhood: {exc}") from None
    if len(set(S)) != len(S):
        raise FormatError("neighborhood lists an element twice")
    if "table" in data:
        table = tuple(_symbol(v, q, "table entry") for v in data["table"])
        try:
            return is_lazy(LocalMap(group, q, S, table))
        except RuleError as exc:
            raise FormatError(str(exc)) from None
    for key in ("pattern", "write"):
        if key not in data:
            raise FormatError(f"missing '{key}' (or give a full 'table')")
    values = data["pattern"]
    if isinstance(values, str):
        values = [int(c, 36) for c in values]
    if len(values) != len(S):
        raise FormatError(f"pattern has {len(values)} symbols but the neighborhood has {len(S)}")
    values = tuple(_symbol(v, q, "pattern symbol") for v in values)
    write = _symbol(data["write"], q, "writing symbol")
    if group.identity not in S:
        raise FormatError(f"neighborhood must contain the identity {group.identity}")
    try:
        return LazyRule(group, q, Pattern(S, values), write)
    except (RuleError, GroupError) as exc:
        raise FormatError(str(exc)) from None


def load_rule(path) -> LazyRule | NotLazy:
    try:
        return parse_rule(_load(path))
    except FormatError as exc:
        raise FormatError(f"{path}: {exc}") from None


def rule_to_json(rule: LazyRule) -> dict:
    G = rule.group
    return {
        "group": G.spec(),
        "alphabet": rule.q,
        "neighborhood": [G.to_json(s) for s in rule.neighborhood],
        "pattern": list(rule.pattern.values),
        "write": rule.write,
    }


def parse_configuration(data: dict, group: Group, q: int) -> Configuration:
    bg = _symbol(data.get("background", 0), q, "background")
    cells = []
    for item in data.get("cells", []):
        if not isinstance(item, (list, tuple)) or len(item) != 2:
            raise FormatError(f"cells must be [element, symbol] pairs, got {item!r}")
        try:
            g = group.element(item[0])
        except GroupError as exc:
            raise FormatError(f"cell {item!r}: {exc}") from None
        cells.append((g, _symbol(item[1], q, "cell symbol")))
    if len({g for g, _ in cells}) != len(cells):
        raise FormatError("a cell position is listed twice")
    return Configuration.make(group, bg, cells)


def load_configuration(path, group: Group, q: int) -> Configuration:
    try:
        return parse_configuration(_load(path), group, q)
    except FormatError as exc:
        raise FormatError(f"{path}: {exc}") from None


def configuration_to_json(x: Configuration) -> dict:
    G = x.group
    return {"background": x.background,
            "cells": [[G.to_json(g), v] for g, v in x.sorted_cells()]}


def trajectory_to_json(tr: Trajectory) -> dict:
    return {"rule": rule_to_json(tr.rule),
            "states": [configuration_to_json(x) for x in tr.states],
            "fixed_at": tr.fixed_at}


def to_jsonable(obj):
    """Recursively turn elements and results into JSON values."""
    if isinstance(obj, Element):
        return obj.group.to_json(obj)
    if isinstance(obj, OrderResult):
        return {"value": obj.to_json(), "method": obj.method,
                "witness": to_jsonable(obj.witness), "note": obj.note}
    if isinstance(obj, dict):
        return {str(to_jsonable(k)) if not isinstance(k, str) else k: to_jsonable(v)
                for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "to_json"):
        return obj.to_json()
    return obj


def report_to_json(report) -> dict:
    window = None
    if report.oracle is not None and isinstance(report.oracle.witness, dict):
        w = report.oracle.witness
        window = [[to_jsonable(g), v] for g, v in sorted(w.items(), key=lambda kv: kv[0].sort_key())]
    oracle = None
    if report.oracle is not None:
        oracle = to_jsonable(report.oracle)
        oracle["witness"] = window
    return {
        "rule": rule_to_json(report.rule),
        "cap": report.cap,
        "order": report.order.to_json(),
        "method": report.order.method,
        "bound": report.bound.to_json(),
        "idempotency_condition": report.condition.to_json() if report.condition else None,
        "witness": to_jsonable(report.order.witness) if report.order.method != "oracle" else window,
        "theory": to_jsonable(report.theory) if report.theory else None,
        "oracle": oracle,
        "consistent": report.consistent,
        "violations": report.violations,
        "notes": report.notes,
    }


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)
