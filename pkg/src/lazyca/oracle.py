"""Brute-force order oracle.

``tau^k(x)(e)`` depends only on ``x`` restricted to ``S^(k) = S S ... S``.
To decide ``tau^(n-1) == tau^n`` every assignment of symbols to ``S^(n)``
is enumerated, and both powers are evaluated at the identity layer by
layer: level k holds ``tau^k(x)`` on ``S^(n-k)``.
"""

from __future__ import annotations

import os

import numpy as np

from .groups import Element, set_product
from .results import OrderResult
from .rules import LazyRule

DEFAULT_BUDGET = 2 ** 24
CHUNK = 2 ** 15


class OracleBudgetExceeded(RuntimeError):
    def __init__(self, n: int, windows: int, budget: int):
        super().__init__(f"tau^{n} needs {windows} window evaluations, budget is {budget}")
        self.n = n
        self.windows = windows
        self.budget = budget


def default_budget() -> int:
    raw = os.environ.get("LAZYCA_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


def neighborhood_layers(S, n: int) -> list[tuple[Element, ...]]:
    """``[S^(0), S^(1), ..., S^(n)]`` with ``S^(0) = {e}``."""
    e = S[0].group.identity
    layers = [(e,)]
    for _ in range(n):
        layers.append(set_product(S, layers[-1]))
    return layers


class _Plan:
    def __init__(self, rule: LazyRule, n: int):
        S = rule.neighborhood
        self.rule = rule
        self.n = n
        self.layers = neighborhood_layers(S, n)
        self.cells = self.layers[n]
        # level k computes tau^k on layers[n-k] from tau^(k-1) on layers[n-k+1]
        self.gather = []
        self.centers = []
        c = rule.center_index
        for k in range(1, n + 1):
            src = {g: i for i, g in enumerate(self.layers[n - k + 1])}
            idx = np.array([[src[s * h] for s in S] for h in self.layers[n - k]], dtype=np.intp)
            self.gather.append(idx)
            self.centers.append(idx[:, c])
        self.p = np.array(rule.pattern.values, dtype=np.uint8)
        self.a = np.uint8(rule.write)
        self.e_in_s = c

    def run(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(tau^(n-1)(x)(e), tau^n(x)(e))`` for a batch of windows."""
        cur = x
        before = None
        for k, (idx, cen) in enumerate(zip(self.gather, self.centers), start=1):
            match = (cur[:, idx] == self.p).all(axis=2)
            cur = np.where(match, self.a, cur[:, cen])
            if k == self.n - 1:
                before = cur[:, self.e_in_s]
        return before, cur[:, 0]


def _digits(start: int, stop: int, q: int, width: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    powers = q ** np.arange(width - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] // powers[None, :]) % q).astype(np.uint8)


def power_witness(rule: LazyRule, n: int, budget: int | None = None) -> dict[Element, int] | None:
    """A window on ``S^(n)`` where ``tau^(n-1)`` and ``tau^n`` differ at e,
    or None when the two powers are equal."""
    if n < 2:
        raise ValueError("n must be >= 2")
    budget = default_budget() if budget is None else budget
    plan = _Plan(rule, n)
    width = len(plan.cells)
    total = rule.q ** width
    if total > budget:
        raise OracleBudgetExceeded(n, total, budget)
    for start in range(0, total, CHUNK):
        x = _digits(start, min(total, start + CHUNK), rule.q, width)
        before, after = plan.run(x)
        bad = np.flatnonzero(before != after)
        if len(bad):
            row = x[bad[0]]
            return {g: int(v) for g, v in zip(plan.cells, row)}
    return None


def oracle_power_equal(rule: LazyRule, n: int, budget: int | None = None) -> bool:
    return power_witness(rule, n, budget) is None


def evaluate_power(rule: LazyRule, k: int, window: dict[Element, int]) -> int:
    """``tau^k(x)(e)`` from x given on (at least) ``S^(k)``."""
    if k == 0:
        return window[rule.group.identity]
    plan = _Plan(rule, k)
    x = np.array([[window[g] for g in plan.cells]], dtype=np.uint8)
    cur = x
    for idx, cen in zip(plan.gather, plan.centers):
        match = (cur[:, idx] == plan.p).all(axis=2)
        cur = np.where(match, plan.a, cur[:, cen])
    return int(cur[0, 0])


def oracle_order(rule: LazyRule, cap: int, budget: int | None = None) -> OrderResult:
    """Least n <= cap with ``tau^(n-1) == tau^n``; never proves infinity.

    Raises :class:`OracleBudgetExceeded` when some ``n <= cap`` is too large
    to enumerate.
    """
    witness = None
    for n in range(2, cap + 1):
        witness = power_witness(rule, n, budget)
        if witness is None:
            return OrderResult.finite(n, "oracle")
    return OrderResult.exceeds(cap, "oracle", witness=witness)
