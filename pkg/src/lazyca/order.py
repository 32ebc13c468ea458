"""Order of lazy rules: exact formulas for quasi-constant patterns, the
general upper bound, sufficient conditions for idempotency, and a
consolidated report that cross-checks all of them against the oracle."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

from .groups import (Element, FreeGroup, Group, Integers, Lattice, element_power_order,
                     set_inverse, set_product)
from .oracle import OracleBudgetExceeded, power_witness
from .results import OrderResult
from .rules import LazyRule, Pattern, RuleError, classify_pattern, fiber
from .words import LEFT, RIGHT, WordSearchProblem, word_search


class NotQuasiConstant(ValueError):
    pass


class ConsistencyViolation(RuntimeError):
    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class ConventionDisagreement(ConsistencyViolation):
    pass


# sufficient conditions for idempotency

@dataclass(frozen=True)
class IdempotencyCondition:
    condition: int
    symbols: tuple[int, ...] = ()
    witness: tuple[Element, ...] = ()

    def __str__(self):
        if self.condition == 1:
            return "condition 1 (S_a empty)"
        if self.condition == 2:
            return f"condition 2 (b={self.symbols[0]})"
        return f"condition 3 (b1={self.symbols[0]}, b2={self.symbols[1]})"

    def to_json(self):
        return {"condition": self.condition, "symbols": list(self.symbols)}


def _symbols(rule: LazyRule) -> list[int]:
    return sorted(set(rule.pattern.values))


def idempotency_sufficient(rule: LazyRule) -> IdempotencyCondition | None:
    """First of the three sufficient conditions that holds, else None."""
    a = rule.write
    Sa = rule.fiber(a)
    if not Sa:
        return IdempotencyCondition(1)
    Sa_inv = set(set_inverse(Sa))
    others = [b for b in _symbols(rule) if b != a]
    for b in others:
        prod = set_product(set_inverse(rule.fiber(b)), Sa)
        if Sa_inv <= set(prod):
            return IdempotencyCondition(2, (b,), tuple(prod))
    for b1, b2 in permutations(others, 2):
        prod = set_product(set_inverse(rule.fiber(b1)), rule.fiber(b2))
        if Sa_inv <= set(prod):
            return IdempotencyCondition(3, (b1, b2), tuple(prod))
    return None


# general upper bound

def bound_forbidden_set(rule: LazyRule) -> tuple[Element, ...]:
    """Products s_j...s_i whose inverse lands in one of the blocking sets
    ``S_b^-1 S_a`` (b != a) or ``S_b1^-1 S_b2`` (b1 != b2, both != a)."""
    a = rule.write
    Sa = rule.fiber(a)
    others = [b for b in _symbols(rule) if b != a]
    blocking: list[Element] = []
    for b in others:
        blocking += set_product(set_inverse(rule.fiber(b)), Sa)
    for b1, b2 in permutations(others, 2):
        blocking += set_product(set_inverse(rule.fiber(b1)), rule.fiber(b2))
    return set_inverse(tuple(dict.fromkeys(blocking)))


def upper_bound(rule: LazyRule, cap: int = 64) -> OrderResult:
    """An upper bound on the order (not the order itself).

    ``infinite`` here means the bound carries no finite information."""
    Sa = rule.fiber(rule.write)
    if not Sa:
        return OrderResult.finite(2, "upper-bound", note="S_a is empty")
    prob = WordSearchProblem(Sa, bound_forbidden_set(rule), LEFT, cap=max(cap - 1, 1))
    return _from_word_search(word_search(prob), "upper-bound", cap)


def _from_word_search(res, method: str, cap: int) -> OrderResult:
    if res.kind == "finite":
        return OrderResult.finite(res.length + 2, method, witness=res.witness,
                                  note=f"longest alive word has length {res.length}")
    if res.kind == "infinite":
        prefix, loop = res.witness
        return OrderResult.infinite(method, witness={"prefix": prefix, "cycle": loop},
                                    note="alive words of every length (state-graph cycle)")
    return OrderResult.exceeds(cap, method, witness=res.witness)


# exact order for quasi-constant patterns

def _case(rule: LazyRule, r: Element) -> int:
    a = rule.write
    values = set(rule.pattern.values)
    if a not in values:
        return 1
    e = rule.group.identity
    if r != e and rule.pattern[r] == a:
        return 2
    if r == e and all(rule.pattern[s] == a for s in rule.neighborhood if s != e):
        return 3
    raise AssertionError("quasi-constant pattern outside the three cases")  # pragma: no cover


def _escape_certificate(r: Element, n: int, S: tuple[Element, ...]) -> str | None:
    """A reason why r^m is outside S for every m >= n, or None."""
    G = r.group
    if isinstance(G, (Integers, Lattice)):
        bound = max(G.norm(s) for s in S)
        # max-norm of r^m is m * |r|
        if n * G.norm(r) > bound:
            return f"|r^m| = m*{G.norm(r)} > {bound} = max |s| for m >= {n}"
        return None
    if isinstance(G, FreeGroup):
        w = r.value
        k = 0
        while 2 * k + 1 < len(w) and w[k] == w[-1 - k].swapcase():
            k += 1
        core = len(w) - 2 * k
        bound = max(len(s.value) for s in S)
        # r = u c u^-1 with c cyclically reduced: |r^m| = 2|u| + m|c|
        if 2 * k + n * core > bound:
            return f"|r^m| = {2 * k} + m*{core} > {bound} = max |s| for m >= {n}"
        return None
    return None


def _power_order(rule: LazyRule, r: Element, cap: int) -> OrderResult:
    S = rule.neighborhood
    members = set(S)
    G = r.group
    limit = cap
    if G.finite:
        limit = max(cap, element_power_order(r, cap) + 1)
    g = r * r
    for n in range(2, limit + 1):
        if g in members:
            return OrderResult.finite(n, "theorem1-case2", witness={"r": r, "n": n, "power": g},
                                      note=f"r^{n} = {g} lies in S")
        cert = _escape_certificate(r, n, S)
        if cert:
            return OrderResult.infinite("theorem1-case2", witness={"r": r, "escape": cert},
                                        note="no power r^n (n >= 2) lies in S")
        g = g * r
    return OrderResult.exceeds(cap, "theorem1-case2", witness={"r": r})


def case3_search(rule: LazyRule, cap: int, side: str = LEFT) -> OrderResult:
    e = rule.group.identity
    letters = tuple(s for s in rule.neighborhood if s != e)
    prob = WordSearchProblem(letters, set_inverse(rule.neighborhood), side, cap=max(cap - 1, 1))
    res = _from_word_search(word_search(prob), "theorem1-case3", cap)
    return res


def _theory_for(rule: LazyRule, r: Element, cap: int, side: str) -> OrderResult:
    case = _case(rule, r)
    if case == 1:
        return OrderResult.finite(2, "theorem1-case1", note="writing symbol absent from p")
    if case == 2:
        return _power_order(rule, r, cap)
    return case3_search(rule, cap, side)


def _same_value(x: OrderResult, y: OrderResult) -> bool:
    if x.kind == "exceeds_cap" or y.kind == "exceeds_cap":
        # a capped result only conflicts with a definite value below its cap
        for c, d in ((x, y), (y, x)):
            if c.kind == "exceeds_cap" and d.kind == "finite" and d.value <= c.value:
                return False
        return True
    return x.kind == y.kind and x.value == y.value


def case3_conventions(rule: LazyRule, cap: int) -> dict[str, OrderResult]:
    return {side: case3_search(rule, cap, side) for side in (LEFT, RIGHT)}


def theoretical_order_quasi_constant(rule: LazyRule, cap: int = 64, side: str = LEFT,
                                     check_convention: bool = True,
                                     budget: int | None = None) -> OrderResult:
    """Exact order for a quasi-constant active transition.

    When both elements of a two-point neighborhood qualify as the
    non-constant element, both are evaluated and must agree.  On
    nonabelian universes the third case is also evaluated with the other
    product orientation; a disagreement is adjudicated by the oracle and
    raised as :class:`ConventionDisagreement`.
    """
    cls = classify_pattern(rule.pattern)
    if not cls.quasi_constant:
        raise NotQuasiConstant(f"pattern {rule.pattern} is not quasi-constant")
    results = [_theory_for(rule, r, cap, side) for r in cls.quasi_constant]
    chosen = results[0]
    if len(results) == 2:
        if not _same_value(results[0], results[1]):
            raise ConsistencyViolation(
                f"the two admissible non-constant elements disagree: {results[0]} vs {results[1]}")
        definite = [x for x in results if x.kind != "exceeds_cap"]
        chosen = definite[0] if definite else results[0]
    if (check_convention and chosen.method == "theorem1-case3"
            and not rule.group.abelian):
        other = case3_search(rule, cap, RIGHT if side == LEFT else LEFT)
        if not _same_value(chosen, other):
            try:
                verdict = oracle_order_partial(rule, cap, budget)
            except OracleBudgetExceeded:
                verdict = None
            raise ConventionDisagreement(
                f"product-order conventions disagree: {side} gives {chosen}, "
                f"the other gives {other}; oracle says {verdict}")
    return chosen


# construction of a rule with prescribed order

def construct_order_n(group: Group, g: Element, n: int, q: int = 2) -> LazyRule:
    """``S = {e, g, g^n}``, ``p = (0, 1, 0)``, writing 1: a rule of order n.

    Requires the element order of g to exceed n."""
    if n < 2:
        raise RuleError("the construction needs n >= 2")
    g = group.element(g)
    ord_g = element_power_order(g, n)
    if ord_g is not None and ord_g <= n:
        raise RuleError(f"construction requires ord(g) > n, but ord({g}) = {ord_g} <= {n}")
    e = group.identity
    gn = g ** n
    if gn in (e, g):
        raise RuleError(f"degenerate neighborhood: g^{n} = {gn}")
    return LazyRule(group, q, Pattern((e, g, gn), (0, 1, 0)), 1)


# consolidated report

def oracle_order_partial(rule: LazyRule, cap: int, budget: int | None = None) -> OrderResult:
    """Like oracle_order, but a budget overrun becomes a cap at the last
    power that could be checked."""
    witness = None
    for n in range(2, cap + 1):
        try:
            witness = power_witness(rule, n, budget)
        except OracleBudgetExceeded as exc:
            if n == 2:
                raise
            return OrderResult.exceeds(n - 1, "oracle", witness=witness,
                                       note=f"budget reached at n={n} ({exc.windows} windows)")
        if witness is None:
            return OrderResult.finite(n, "oracle")
    return OrderResult.exceeds(cap, "oracle", witness=witness)


@dataclass
class OrderReport:
    rule: LazyRule
    cap: int
    condition: IdempotencyCondition | None
    bound: OrderResult
    theory: OrderResult | None
    oracle: OrderResult | None
    order: OrderResult
    violations: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.violations


def check_consistency(condition, bound, theory, oracle) -> list[str]:
    out = []

    def conflict(x: OrderResult, y: OrderResult, label: str):
        # x is exact-or-capped, y must agree with it
        if x.kind == "finite" and y.kind == "finite" and x.value != y.value:
            out.append(f"{label}: {x} != {y}")
        elif x.kind == "finite" and y.kind == "infinite":
            out.append(f"{label}: finite {x} vs proven infinite")
        elif x.kind == "finite" and y.kind == "exceeds_cap" and x.value <= y.value:
            out.append(f"{label}: {x} but order exceeds {y.value}")

    if theory is not None and oracle is not None:
        conflict(theory, oracle, "theory vs oracle")
        conflict(oracle, theory, "oracle vs theory")
    if bound.kind == "finite":
        for res, label in ((oracle, "oracle"), (theory, "theory")):
            if res is None:
                continue
            if res.lower() > bound.value:
                out.append(f"{label} {res} exceeds upper bound {bound.value}")
    if condition is not None:
        for res, label in ((oracle, "oracle"), (theory, "theory")):
            if res is None:
                continue
            if not (res.kind == "finite" and res.value == 2):
                out.append(f"{condition} holds but {label} gives {res}")
        if bound.kind != "finite" or bound.value != 2:
            out.append(f"{condition} holds but the bound is {bound}")
    return out


def order_report(rule: LazyRule, cap: int = 8, budget: int | None = None,
                 methods: str = "auto", strict: bool = True) -> OrderReport:
    """Run every applicable method and cross-check the results.

    ``methods`` is ``auto`` (all), ``oracle``, ``theory`` or ``bound``.
    With ``strict`` a consistency violation raises.
    """
    notes = []
    condition = idempotency_sufficient(rule)
    bound = upper_bound(rule, cap)
    theory = None
    if methods in ("auto", "theory") and classify_pattern(rule.pattern).quasi_constant:
        theory = theoretical_order_quasi_constant(rule, cap, budget=budget)
    oracle = None
    if methods in ("auto", "oracle"):
        try:
            oracle = oracle_order_partial(rule, cap, budget)
        except OracleBudgetExceeded as exc:
            notes.append(f"oracle skipped: {exc}")
    violations = check_consistency(condition, bound, theory, oracle)

    if theory is not None and theory.kind != "exceeds_cap":
        order = theory
    elif condition is not None:
        order = OrderResult.finite(2, "corollary-idem", witness=condition.to_json())
    elif oracle is not None and oracle.kind == "finite":
        order = oracle
    elif bound.kind == "finite" and bound.value == 2:
        order = bound
    elif oracle is not None:
        order = oracle
    elif theory is not None:
        order = theory
    else:
        order = bound
    if condition is None and order.is_finite and order.value == 2:
        notes.append("idempotent although no sufficient condition holds "
                     "(the conditions are sufficient, not necessary)")
    if bound.is_finite and order.is_finite and order.value < bound.value:
        notes.append(f"upper bound {bound.value} is not tight here")
    report = OrderReport(rule, cap, condition, bound, theory, oracle, order, violations, notes)
    if strict and violations:
        raise ConsistencyViolation("; ".join(violations), report)
    return report
