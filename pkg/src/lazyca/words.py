"""Longest words whose contiguous subword products avoid a forbidden set.

A word is tracked by the set R of products of its suffixes.  Appending a
letter t maps R to ``{t} | tR`` (``new-letter-left``: the subword
``(s_i, ..., s_j)`` evaluates to ``s_j ... s_i``) or to ``{t} | Rt``
(``new-letter-right``: it evaluates to ``s_i ... s_j``).  A word is alive
while R misses the forbidden set F.

To keep the state space finite, an element of R is dropped once no
future extension can carry it into F ("irrelevant").  This is exact:
irrelevance is preserved by the transition, so the reduced states
determine all future aliveness, and a reachable cycle of alive reduced
states proves arbitrarily long alive words.
"""

from __future__ import annotations

import dataclasses
import functools
import math
import graphlib
from collections import deque
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .groups import Cyclic, Element, FreeGroup, Group, Integers, Lattice, TableGroup, inverse, op

LEFT = "new-letter-left"
RIGHT = "new-letter-right"
DEFAULT_MAX_STATES = 50_000


@dataclass(frozen=True)
class WordSearchProblem:
    letters: tuple[Element, ...]
    forbidden: tuple[Element, ...]
    side: str = LEFT
    cap: int = 64
    max_states: int = DEFAULT_MAX_STATES

    def __post_init__(self):
        if self.side not in (LEFT, RIGHT):
            raise ValueError(f"unknown side {self.side!r}")
        elems = self.letters + self.forbidden
        if elems:
            G = elems[0].group
            if any(g.group != G for g in elems):
                raise ValueError("letters and forbidden set must share one universe")
            if G.identity in self.letters:
                raise ValueError("the identity cannot be a letter")


@dataclass(frozen=True)
class WordSearchResult:
    """``kind`` is ``finite`` (``length`` = longest alive word),
    ``infinite`` or ``exceeds_cap``.  ``witness`` is a longest alive word,
    or for ``infinite`` a pair (prefix, cycle) whose pumping stays alive."""

    kind: str
    length: int | None
    witness: object = None
    states: int = 0


def _group_of(prob: WordSearchProblem) -> Group | None:
    elems = prob.letters + prob.forbidden
    return elems[0].group if elems else None


def _relevance(prob: WordSearchProblem) -> Callable[[Element], bool]:
    """Predicate: can some word over the letters (possibly empty) carry x
    into the forbidden set?"""
    G = _group_of(prob)
    forbidden = set(prob.forbidden)
    if G is None or not prob.forbidden:
        return lambda x: False
    if isinstance(G, (Cyclic, TableGroup)):
        rel = _finite_relevant(prob, G)
        return rel.__contains__
    if isinstance(G, (Integers, Lattice)):
        return _lattice_relevance(prob, G) or (lambda x: True)
    if isinstance(G, FreeGroup):
        return _free_relevance(prob, G)
    return lambda x: True


def _finite_relevant(prob: WordSearchProblem, G: Group) -> set[Element]:
    rel = set(prob.forbidden)
    todo = list(rel)
    while todo:
        y = todo.pop()
        for t in prob.letters:
            # x with t x = y (left) or x t = y (right)
            x = op(inverse(t), y) if prob.side == LEFT else op(y, inverse(t))
            if x not in rel:
                rel.add(x)
                todo.append(x)
    return rel


def _vec(g: Element) -> tuple[int, ...]:
    return (g.value,) if isinstance(g.value, int) else tuple(g.value)


def separating_functional(vectors: Sequence[tuple[int, ...]]) -> tuple[int, ...] | None:
    """Integer phi with phi . v > 0 for all v, if one exists."""
    if not vectors:
        return None
    d = len(vectors[0])
    if d == 1:
        if all(v[0] > 0 for v in vectors):
            return (1,)
        if all(v[0] < 0 for v in vectors):
            return (-1,)
        return None
    from scipy.optimize import linprog

    A = -np.array(vectors, dtype=float)
    res = linprog(np.zeros(d), A_ub=A, b_ub=-np.ones(len(vectors)), bounds=[(None, None)] * d,
                  method="highs")
    if res.status != 0:
        return None
    for scale in (1, 10, 100, 1000):
        phi = tuple(int(round(c * scale)) for c in res.x)
        if all(sum(a * b for a, b in zip(phi, v)) > 0 for v in vectors):
            return phi
    return None


def _lattice_relevance(prob: WordSearchProblem, G: Group):
    letters = [_vec(t) for t in prob.letters]
    phi = separating_functional(letters)
    targets = [_vec(f) for f in prob.forbidden]
    if phi is None:
        if len(letters[0]) != 1:
            return None
        # mixed signs in Z: the letters generate the subgroup gcd * Z
        g = math.gcd(*(t[0] for t in letters))
        return lambda x: any((f[0] - x.value) % g == 0 for f in targets)

    def dot(v):
        return sum(a * b for a, b in zip(phi, v))

    @functools.lru_cache(maxsize=None)
    def reach(y: tuple[int, ...]) -> bool:
        # y is a non-negative integer combination of letters
        if not any(y):
            return True
        if dot(y) <= 0:
            return False
        return any(reach(tuple(a - b for a, b in zip(y, t))) for t in letters)

    def relevant(x: Element) -> bool:
        v = _vec(x)
        return any(reach(tuple(a - b for a, b in zip(f, v))) for f in targets)

    return relevant


class _FreeMonoidAutomaton:
    """Automaton for L* over a free group, saturated so that it accepts the
    reduced form of every product of letters (Benois)."""

    def __init__(self, letters: Sequence[str]):
        self.edges: dict[int, list[tuple[str, int]]] = {0: []}
        n = 1
        for w in letters:
            prev = 0
            for i, c in enumerate(w):
                nxt = 0 if i == len(w) - 1 else n
                if nxt:
                    self.edges[nxt] = []
                    n += 1
                self.edges[prev].append((c, nxt))
                prev = nxt
        self.states = list(self.edges)
        self.eps = {p: {p} for p in self.states}
        self._saturate()

    def _step(self, sources, c):
        out = set()
        for p in sources:
            for r in self.eps[p]:
                for lab, s in self.edges[r]:
                    if lab == c:
                        out.add(s)
        return out

    def _close(self, sources):
        out = set()
        for p in sources:
            out |= self.eps[p]
        return out

    def _saturate(self):
        changed = True
        while changed:
            changed = False
            for p in self.states:
                for r in list(self._close([p])):
                    for c, s in self.edges[r]:
                        for q in self._close(self._step([s], c.swapcase())):
                            if q not in self.eps[p]:
                                self.eps[p].add(q)
                                changed = True
            # transitive closure of eps
            for p in self.states:
                closure = set(self.eps[p])
                stack = list(closure)
                while stack:
                    for q in self.eps[stack.pop()]:
                        if q not in closure:
                            closure.add(q)
                            stack.append(q)
                if closure != self.eps[p]:
                    self.eps[p] = closure
                    changed = True

    def accepts(self, word: str) -> bool:
        cur = self._close([0])
        for c in word:
            cur = self._close(self._step(cur, c))
            if not cur:
                return False
        return 0 in cur


def _free_relevance(prob: WordSearchProblem, G: FreeGroup):
    auto = _FreeMonoidAutomaton([t.value for t in prob.letters])

    @functools.lru_cache(maxsize=None)
    def relevant_value(x: str) -> bool:
        xe = Element(G, x)
        for f in prob.forbidden:
            w = op(f, inverse(xe)) if prob.side == LEFT else op(inverse(xe), f)
            if auto.accepts(w.value):
                return True
        return False

    return lambda x: relevant_value(x.value)


def _state_key(state: frozenset) -> tuple:
    return tuple(sorted(g.sort_key() for g in state))


def word_search(prob: WordSearchProblem) -> WordSearchResult:
    """Longest alive word, ``infinite`` with a pumping certificate, or
    ``exceeds_cap`` when more than ``cap`` letters or ``max_states``
    states would be needed to decide."""
    # a forbidden letter kills any word containing it
    prob = dataclasses.replace(prob, letters=tuple(t for t in prob.letters if t not in prob.forbidden))
    letters = sorted(prob.letters, key=lambda g: g.sort_key())
    if not letters:
        return WordSearchResult("finite", 0, witness=(), states=1)
    relevant = _relevance(prob)
    forbidden = set(prob.forbidden)
    left = prob.side == LEFT

    def step(state: frozenset, t: Element):
        moved = [op(t, x) if left else op(x, t) for x in state]
        new = set(moved)
        new.add(t)
        if new & forbidden:
            return None
        return frozenset(g for g in new if relevant(g))

    start = frozenset()
    ids = {start: 0}
    order = [start]
    succ: list[list[tuple[int, Element]]] = []
    depth = [0]
    parent: list[tuple[int, Element] | None] = [None]
    queue = deque([0])
    capped = False
    while queue:
        i = queue.popleft()
        while len(succ) <= i:
            succ.append([])
        if depth[i] >= prob.cap or len(ids) > prob.max_states:
            capped = True
            continue
        for t in letters:
            nxt = step(order[i], t)
            if nxt is None:
                continue
            j = ids.get(nxt)
            if j is None:
                j = ids[nxt] = len(order)
                order.append(nxt)
                depth.append(depth[i] + 1)
                parent.append((i, t))
                queue.append(j)
            succ[i].append((j, t))
    while len(succ) < len(order):
        succ.append([])

    def path_to(i: int) -> list[Element]:
        out = []
        while parent[i] is not None:
            i, t = parent[i]
            out.append(t)
        return out[::-1]

    cycle = _find_cycle(succ)
    if cycle is not None:
        head, loop = cycle
        return WordSearchResult("infinite", None, witness=(path_to(head), loop), states=len(order))
    if capped:
        deepest = max(range(len(order)), key=lambda k: depth[k])
        return WordSearchResult("exceeds_cap", None, witness=path_to(deepest), states=len(order))
    longest, word = _longest_path(succ)
    return WordSearchResult("finite", longest, witness=word, states=len(order))


def _find_cycle(succ):
    """A reachable cycle as (entry state, letters around the loop), or None."""
    WHITE, GREY, BLACK = 0, 1, 2
    color = [WHITE] * len(succ)
    color[0] = GREY
    stack = [(0, iter(succ[0]))]
    trail: list[tuple[int, Element]] = []
    while stack:
        node, it = stack[-1]
        for j, t in it:
            if color[j] == GREY:
                # loop: from j along the trail back to node, then t
                pos = next(k for k, (s, _) in enumerate(trail + [(node, None)]) if s == j)
                loop = [lt for _, lt in trail[pos:]] + [t]
                return j, loop
            if color[j] == WHITE:
                color[j] = GREY
                trail.append((node, t))
                stack.append((j, iter(succ[j])))
                break
        else:
            color[node] = BLACK
            stack.pop()
            if trail:
                trail.pop()
    return None


def _longest_path(succ):
    ts = graphlib.TopologicalSorter({i: {j for j, _ in succ[i]} for i in range(len(succ))})
    order = list(ts.static_order())  # successors come first
    best = {}
    for i in order:
        best[i] = max(((best[j][0] + 1, t, j) for j, t in succ[i]),
                      key=lambda r: r[0], default=(0, None, None))
    word = []
    i = 0
    while best[i][1] is not None:
        word.append(best[i][1])
        i = best[i][2]
    return best[0][0], word
