import itertools
import random

import pytest

from conftest import UNIVERSES, random_rule
from lazyca.engine import Configuration, iterate
from lazyca.groups import Cyclic, Integers, iterated_neighborhood
from lazyca.oracle import (OracleBudgetExceeded, evaluate_power, neighborhood_layers,
                           oracle_order, oracle_power_equal, power_witness)
from lazyca.rules import eca_rule, is_lazy, make_rule

Z = Integers()
RULE_236 = is_lazy(eca_rule(236))
RULE_136 = is_lazy(eca_rule(136))
RULE_11010 = make_rule(Z, 2, [-3, -1, 0, 3, 4], "11010", 1)


def power_at_e(rule, window, k, background=0):
    """tau^k(x)(e) via the configuration engine."""
    x = Configuration.make(rule.group, background, window)
    return iterate(rule, x, k, stop_at_fixed=False).states[k](rule.group.identity)


def engine_power_equal(rule, n):
    cells = iterated_neighborhood(rule.neighborhood, n)
    bg = next(b for b in range(rule.q) if len(set(rule.pattern.values)) > 1
              or b != rule.pattern.values[0])
    for values in itertools.product(range(rule.q), repeat=len(cells)):
        window = dict(zip(cells, values))
        if power_at_e(rule, window, n - 1, bg) != power_at_e(rule, window, n, bg):
            return False
    return True


def test_layers():
    layers = neighborhood_layers(RULE_236.neighborhood, 2)
    assert [sorted(g.value for g in L) for L in layers] == [[0], [-1, 0, 1], [-2, -1, 0, 1, 2]]


def test_power_equal_examples():
    assert oracle_power_equal(RULE_236, 2)
    assert not any(oracle_power_equal(RULE_136, n) for n in range(2, 7))
    assert oracle_power_equal(RULE_11010, 2)


def test_oracle_order_examples():
    assert oracle_order(RULE_236, 8).value == 2
    r = make_rule(Z, 2, [0, 1, 3], "010", 1)
    res = oracle_order(r, 8)
    assert res.is_finite and res.value == 3
    res = oracle_order(RULE_136, 6)
    assert res.kind == "exceeds_cap" and res.value == 6


@pytest.mark.parametrize("rule,n", [(RULE_236, 2), (RULE_136, 2), (RULE_136, 3),
                                    (make_rule(Z, 2, [0, 1, 3], "010", 1), 2),
                                    (make_rule(Z, 2, [0, 1, 3], "010", 1), 3)])
def test_power_equal_matches_engine(rule, n):
    assert oracle_power_equal(rule, n) == engine_power_equal(rule, n)


def test_power_equal_matches_engine_random():
    rng = random.Random(3)
    checked = 0
    for name in ["Z", "C12", "S3", "F2"]:
        for _ in range(12):
            rule = random_rule(rng, name, max_size=3, q=2)
            if len(iterated_neighborhood(rule.neighborhood, 2)) > 9:
                continue
            assert oracle_power_equal(rule, 2) == engine_power_equal(rule, 2), rule
            checked += 1
    assert checked >= 20


def test_witness_distinguishes_powers():
    w = power_witness(RULE_136, 4)
    assert w is not None
    assert power_at_e(RULE_136, w, 3) != power_at_e(RULE_136, w, 4)


def test_budget():
    with pytest.raises(OracleBudgetExceeded):
        oracle_power_equal(RULE_136, 6, budget=2 ** 6)
    with pytest.raises(OracleBudgetExceeded):
        oracle_order(RULE_136, 12, budget=2 ** 10)


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("LAZYCA_BUDGET", "16")
    with pytest.raises(OracleBudgetExceeded):
        oracle_power_equal(RULE_236, 2)


@pytest.mark.parametrize("name", ["Z", "C12", "S3", "F2"])
def test_locality(name):
    """tau^k at e from a window on S^(k) equals the engine's value on any
    configuration extending that window."""
    rng = random.Random(list(UNIVERSES).index(name))
    G = UNIVERSES[name]
    for _ in range(40):
        rule = random_rule(rng, name, max_size=3)
        k = rng.randint(1, 3)
        cells = iterated_neighborhood(rule.neighborhood, k)
        if len(cells) > 40:
            continue
        window = {g: rng.randrange(rule.q) for g in cells}
        constant = len(set(rule.pattern.values)) == 1
        bg = rng.choice([b for b in range(rule.q) if not (constant and b == rule.pattern.values[0])])
        extra = {}
        for g in cells:
            for s in rule.neighborhood:
                h = s * g
                if h not in window and rng.random() < 0.5:
                    extra[h] = rng.randrange(rule.q)
        x = {**extra, **window}
        assert evaluate_power(rule, k, window) == power_at_e(rule, x, k, bg)


def test_cyclic_universe():
    r = make_rule(Cyclic(10), 2, [0, 1, 3], "010", 1)
    assert oracle_order(r, 6).value == 3
