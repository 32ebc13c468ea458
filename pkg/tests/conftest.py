import random

import pytest

from lazyca.engine import Configuration
from lazyca.groups import Cyclic, FreeGroup, Integers, symmetric_group
from lazyca.rules import LazyRule, Pattern

Z = Integers()
C12 = Cyclic(12)
S3 = symmetric_group(3)
F2 = FreeGroup(2)

UNIVERSES = {"Z": Z, "C12": C12, "S3": S3, "F2": F2}

_POOLS = {
    "Z": [Z.element(v) for v in range(-3, 4)],
    "C12": C12.elements(),
    "S3": S3.elements(),
    "F2": [F2.element(w) for w in ["e", "a", "b", "A", "B", "ab", "aB", "ba", "Ab", "aa", "BB"]],
}


def pool(name):
    return _POOLS[name]


def random_rule(rng: random.Random, name: str, max_size: int = 4, q: int | None = None) -> LazyRule:
    G = UNIVERSES[name]
    q = q or rng.choice([2, 2, 3])
    others = [g for g in pool(name) if g != G.identity]
    k = rng.randint(0, min(max_size - 1, len(others)))
    S = [G.identity] + rng.sample(others, k)
    rng.shuffle(S)
    values = tuple(rng.randrange(q) for _ in S)
    center = values[S.index(G.identity)]
    write = rng.choice([v for v in range(q) if v != center])
    return LazyRule(G, q, Pattern(tuple(S), values), write)


def random_configuration(rng: random.Random, name: str, rule: LazyRule, spread: int = 6) -> Configuration:
    """Finite deviation from a background that never equals a constant pattern."""
    G = UNIVERSES[name]
    q = rule.q
    bad = set(rule.pattern.values) if len(set(rule.pattern.values)) == 1 else set()
    bg = rng.choice([v for v in range(q) if v not in bad])
    cells = {}
    positions = _positions(name, rng, spread)
    for g in positions:
        cells[g] = rng.randrange(q)
    # plant the pattern sometimes so occurrences are common
    if rng.random() < 0.5:
        h = rng.choice(positions) if positions else G.identity
        for s, v in rule.pattern.items():
            cells[s * h] = v
    return Configuration.make(G, bg, cells)


def _positions(name, rng, spread):
    G = UNIVERSES[name]
    if name == "Z":
        return [G.element(v) for v in rng.sample(range(-spread, spread + 1), rng.randint(0, spread))]
    if name == "F2":
        out = []
        for _ in range(rng.randint(0, spread)):
            w = "".join(rng.choice("aAbB") for _ in range(rng.randint(0, 3)))
            out.append(G.element(w))
        return list(dict.fromkeys(out))
    els = G.elements()
    return rng.sample(els, rng.randint(0, len(els)))


@pytest.fixture
def rng():
    return random.Random(20261015)


# lines printed by the acceptance suite, repeated in the terminal summary
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
