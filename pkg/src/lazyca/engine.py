"""Applying lazy rules to configurations with finite deviation from a
uniform background."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .groups import Element, Group, inverse, op
from .rules import LazyRule, Pattern


class InfiniteOccurrences(ValueError):
    """The pattern equals the constant background, so it appears everywhere."""


@dataclass(frozen=True, eq=False)
class Configuration:
    """``x(g) = cells.get(g, background)``; no cell stores the background."""

    group: Group
    background: int
    cells: Mapping[Element, int]

    @classmethod
    def make(cls, group: Group, background: int,
             cells: Mapping[Element, int] | Iterable[tuple[Element, int]] = ()) -> "Configuration":
        items = cells.items() if isinstance(cells, Mapping) else cells
        norm = {}
        for g, v in items:
            g = group.element(g)
            if v != background:
                norm[g] = v
        return cls(group, background, norm)

    def __call__(self, g: Element) -> int:
        return self.cells.get(g, self.background)

    def __eq__(self, other):
        if not isinstance(other, Configuration):
            return NotImplemented
        return (self.group == other.group and self.background == other.background
                and self.cells == other.cells)

    def __hash__(self):
        return hash((self.background, frozenset(self.cells.items())))

    def shift(self, g: Element) -> "Configuration":
        """``g . x`` with ``(g . x)(h) = x(h g)``."""
        gi = inverse(g)
        return Configuration(self.group, self.background,
                             {op(k, gi): v for k, v in self.cells.items()})

    def sorted_cells(self) -> list[tuple[Element, int]]:
        return sorted(self.cells.items(), key=lambda kv: kv[0].sort_key())


@dataclass(frozen=True)
class Support:
    """``supp_b(x)``: a finite set, or the complement of a finite set."""

    elements: frozenset
    cofinite: bool = False

    def issubset(self, other: "Support") -> bool:
        if not self.cofinite and not other.cofinite:
            return self.elements <= other.elements
        if not self.cofinite and other.cofinite:
            return not (self.elements & other.elements)
        if self.cofinite and other.cofinite:
            return other.elements <= self.elements
        return False  # a cofinite set never fits in a finite one


def read_window(x: Configuration, g: Element, S: Iterable[Element]) -> tuple[int, ...]:
    """``(g . x)|_S``, i.e. ``s -> x(s g)``."""
    return tuple(x(op(s, g)) for s in S)


def _check_background(p: Pattern, background: int) -> None:
    if all(v == background for v in p.values):
        others = "another symbol" if len(set(p.values)) == 1 else "a different symbol"
        raise InfiniteOccurrences(
            f"pattern {p} is constant and equal to the background {background}; "
            f"it appears at every position. Re-run with {others} as background.")


def appears(p: Pattern, x: Configuration) -> set[Element]:
    """All g with ``(g . x)|_S = p``.

    Any occurrence puts some non-background value of p onto a deviation,
    so candidates are ``s^-1 k`` for such s and deviation keys k.
    """
    _check_background(p, x.background)
    S = p.neighborhood
    cands = {op(inverse(s), k) for s, v in p.items() if v != x.background for k in x.cells}
    return {g for g in cands if read_window(x, g, S) == p.values}


def apply(rule: LazyRule, x: Configuration) -> Configuration:
    hits = appears(rule.pattern, x)
    if not hits:
        return x
    cells = dict(x.cells)
    for g in hits:
        if rule.write == x.background:
            cells.pop(g, None)
        else:
            cells[g] = rule.write
    return Configuration(x.group, x.background, cells)


@dataclass(frozen=True)
class Trajectory:
    rule: LazyRule
    states: tuple[Configuration, ...]
    fixed_at: int | None = None

    def __len__(self):
        return len(self.states)


def iterate(rule: LazyRule, x: Configuration, n: int, stop_at_fixed: bool = True) -> Trajectory:
    """States ``x, tau(x), ..., tau^n(x)``; with ``stop_at_fixed`` the run
    ends at the first state that tau leaves unchanged."""
    states = [x]
    fixed_at = None
    for _ in range(n):
        nxt = apply(rule, states[-1])
        if nxt == states[-1] and fixed_at is None:
            fixed_at = len(states) - 1
            if stop_at_fixed:
                break
        states.append(nxt)
    return Trajectory(rule, tuple(states), fixed_at)


def support(x: Configuration, b: int) -> Support:
    if b == x.background:
        return Support(frozenset(x.cells), cofinite=True)
    return Support(frozenset(g for g, v in x.cells.items() if v == b))
