"""Local maps, patterns and lazy rules.

Tables of a :class:`LocalMap` are indexed lexicographically by the
neighborhood listing order, first element most significant, with symbol
0 < 1 < ... < q-1.  For ``S = (-1, 0, 1)`` and ``q = 2`` this makes the
index of ``(x_-1, x_0, x_1)`` equal to ``4 x_-1 + 2 x_0 + x_1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .groups import Element, Group, GroupError, Integers, inverse, subset


class RuleError(ValueError):
    """A rule or pattern violates its invariants."""


def pattern_index(values: Sequence[int], q: int) -> int:
    idx = 0
    for v in values:
        idx = idx * q + v
    return idx


def index_pattern(idx: int, q: int, k: int) -> tuple[int, ...]:
    out = [0] * k
    for i in range(k - 1, -1, -1):
        idx, out[i] = divmod(idx, q)
    return tuple(out)


def all_patterns(q: int, k: int):
    """Every pattern of length k, in table order."""
    return itertools.product(range(q), repeat=k)


@dataclass(frozen=True)
class Pattern:
    neighborhood: tuple[Element, ...]
    values: tuple[int, ...]

    def __post_init__(self):
        subset(self.neighborhood)
        if len(self.values) != len(self.neighborhood):
            raise RuleError(
                f"pattern has {len(self.values)} symbols for a neighborhood of {len(self.neighborhood)}")

    def __getitem__(self, s: Element) -> int:
        return self.values[self.neighborhood.index(s)]

    def items(self):
        return zip(self.neighborhood, self.values)

    def __str__(self):
        return "".join(_glyph(v) for v in self.values)


def _glyph(v: int) -> str:
    return "0123456789abcdefghijklmnopqrstuvwxyz"[v] if v < 36 else f"<{v}>"


@dataclass(frozen=True)
class LocalMap:
    group: Group
    q: int
    neighborhood: tuple[Element, ...]
    table: tuple[int, ...]

    def __post_init__(self):
        if self.q < 2:
            raise RuleError(f"alphabet needs at least two symbols, got q={self.q}")
        subset(self.neighborhood)
        for s in self.neighborhood:
            if s.group != self.group:
                raise GroupError(f"neighborhood element {s} is not in {self.group}")
        if len(self.table) != self.q ** len(self.neighborhood):
            raise RuleError(
                f"table needs q^|S| = {self.q ** len(self.neighborhood)} entries, got {len(self.table)}")
        if any(not 0 <= v < self.q for v in self.table):
            raise RuleError("table contains symbols outside the alphabet")

    def __call__(self, values: Sequence[int]) -> int:
        return self.table[pattern_index(values, self.q)]

    def center(self) -> int | None:
        try:
            return self.neighborhood.index(self.group.identity)
        except ValueError:
            return None


@dataclass(frozen=True)
class LazyRule:
    """A lazy CA: copy the center cell unless the window equals ``pattern``,
    in which case write ``write``."""

    group: Group
    q: int
    pattern: Pattern
    write: int

    def __post_init__(self):
        if self.q < 2:
            raise RuleError(f"alphabet needs at least two symbols, got q={self.q}")
        S = self.pattern.neighborhood
        for s in S:
            if s.group != self.group:
                raise GroupError(f"neighborhood element {s} is not in {self.group}")
        if self.group.identity not in S:
            raise RuleError("the identity must belong to the neighborhood")
        if any(not 0 <= v < self.q for v in self.pattern.values):
            raise RuleError(f"pattern symbols must lie in 0..{self.q - 1}")
        if not 0 <= self.write < self.q:
            raise RuleError(f"writing symbol must lie in 0..{self.q - 1}")
        if self.write == self.pattern[self.group.identity]:
            raise RuleError(
                f"writing symbol {self.write} equals the pattern's center value; "
                "a lazy rule must change the center")

    @property
    def neighborhood(self) -> tuple[Element, ...]:
        return self.pattern.neighborhood

    @property
    def center_index(self) -> int:
        return self.neighborhood.index(self.group.identity)

    def local_map(self) -> LocalMap:
        k = len(self.neighborhood)
        c = self.center_index
        target = pattern_index(self.pattern.values, self.q)
        table = tuple(self.write if i == target else z[c]
                      for i, z in enumerate(all_patterns(self.q, k)))
        return LocalMap(self.group, self.q, self.neighborhood, table)

    def fiber(self, b: int) -> tuple[Element, ...]:
        return fiber(self.pattern, b)

    def __str__(self):
        S = ",".join(str(s) for s in self.neighborhood)
        return f"S={{{S}}} p={self.pattern} a={self.write}"


@dataclass(frozen=True)
class NotLazy:
    reason: str
    activity: int
    neighborhood: tuple[Element, ...] = ()

    def __bool__(self):
        return False


@dataclass(frozen=True)
class PatternClass:
    constant: bool
    symmetric: bool
    quasi_constant: tuple[Element, ...] = field(default=())

    @property
    def general(self) -> bool:
        return not (self.constant or self.symmetric or self.quasi_constant)

    def flags(self) -> list[str]:
        out = []
        if self.constant:
            out.append("constant")
        if self.symmetric:
            out.append("symmetric")
        for r in self.quasi_constant:
            out.append(f"quasi-constant(r={r})")
        if self.general:
            out.append("general")
        return out


def active_transitions(mu: LocalMap) -> list[Pattern]:
    """Patterns z with mu(z) != z(e); their count is the activity value."""
    c = mu.center()
    if c is None:
        raise RuleError("active transitions need the identity in the neighborhood")
    return [Pattern(mu.neighborhood, z)
            for z, out in zip(all_patterns(mu.q, len(mu.neighborhood)), mu.table)
            if out != z[c]]


def _essential(mu: LocalMap, i: int) -> bool:
    q, k = mu.q, len(mu.neighborhood)
    stride = q ** (k - 1 - i)
    for idx in range(len(mu.table)):
        if (idx // stride) % q:
            continue
        base = mu.table[idx]
        if any(mu.table[idx + v * stride] != base for v in range(1, q)):
            return True
    return False


def minimal_neighborhood(mu: LocalMap) -> LocalMap:
    """Restrict ``mu`` to its essential coordinates."""
    keep = [i for i in range(len(mu.neighborhood)) if _essential(mu, i)]
    if len(keep) == len(mu.neighborhood):
        return mu
    k = len(mu.neighborhood)
    table = []
    for z in all_patterns(mu.q, len(keep)):
        full = [0] * k
        for i, v in zip(keep, z):
            full[i] = v
        table.append(mu(full))
    return LocalMap(mu.group, mu.q, tuple(mu.neighborhood[i] for i in keep), tuple(table))


def is_lazy(mu: LocalMap) -> LazyRule | NotLazy:
    """Lazy iff the minimal local map has e in its neighborhood and exactly
    one active transition."""
    red = minimal_neighborhood(mu)
    if not red.neighborhood:
        return NotLazy("constant map (empty minimal neighborhood)", 0, ())
    if red.center() is None:
        return NotLazy("identity not in minimal neighborhood", -1, red.neighborhood)
    act = active_transitions(red)
    if len(act) != 1:
        return NotLazy(f"activity {len(act)}", len(act), red.neighborhood)
    p = act[0]
    return LazyRule(mu.group, mu.q, p, red(p.values))


def classify_pattern(p: Pattern) -> PatternClass:
    S = p.neighborhood
    if not S or S[0].group.identity not in S:
        raise RuleError("classification needs the identity in the neighborhood")
    constant = len(set(p.values)) == 1
    inv = {s: inverse(s) for s in S}
    symmetric = set(inv.values()) == set(S) and all(p[s] == p[inv[s]] for s in S)
    qc: tuple[Element, ...] = ()
    if not constant:
        qc = tuple(r for i, r in enumerate(S)
                   if len(set(p.values[:i] + p.values[i + 1:])) <= 1)
    return PatternClass(constant, symmetric, qc)


def fiber(p: Pattern, b: int) -> tuple[Element, ...]:
    return tuple(s for s, v in p.items() if v == b)


ECA_NEIGHBORHOOD = (-1, 0, 1)


def eca_rule(number: int) -> LocalMap:
    """Wolfram-numbered elementary CA as a local map on Z with S = {-1, 0, 1}."""
    if not 0 <= number <= 255:
        raise RuleError(f"ECA rule number must be in 0..255, got {number}")
    Z = Integers()
    S = tuple(Z.element(v) for v in ECA_NEIGHBORHOOD)
    return LocalMap(Z, 2, S, tuple((number >> i) & 1 for i in range(8)))


def make_rule(group: Group, q: int, neighborhood, pattern, write: int) -> LazyRule:
    """Convenience constructor from raw element encodings."""
    S = tuple(group.element(s) for s in neighborhood)
    if isinstance(pattern, str):
        pattern = [int(c, 36) for c in pattern]
    return LazyRule(group, q, Pattern(S, tuple(int(v) for v in pattern)), int(write))
