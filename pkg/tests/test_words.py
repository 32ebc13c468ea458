import itertools
import random

import pytest

from lazyca.groups import Cyclic, FreeGroup, Integers, Lattice, evaluate_word, symmetric_group
from lazyca.words import LEFT, RIGHT, WordSearchProblem, separating_functional, word_search

Z = Integers()
F2 = FreeGroup(2)
S3 = symmetric_group(3)


def els(G, *vals):
    return tuple(G.element(v) for v in vals)


def alive(word, forbidden, side):
    order = "right-to-left" if side == LEFT else "left-to-right"
    return all(evaluate_word(word[i:j], order) not in forbidden
               for i in range(len(word)) for j in range(i + 1, len(word) + 1))


def brute_longest(prob, horizon):
    """Longest alive word up to ``horizon`` letters (extending alive words only)."""
    forbidden = set(prob.forbidden)
    layer = [()]
    best = 0
    for n in range(1, horizon + 1):
        layer = [w + (t,) for w in layer for t in prob.letters if alive(w + (t,), forbidden, prob.side)]
        if not layer:
            return best
        best = n
    return best


def test_spec_examples():
    res = word_search(WordSearchProblem(els(Z, 1), els(Z, 0, -1)))
    assert res.kind == "infinite"
    assert res.witness == ([], [Z.element(1)])
    res = word_search(WordSearchProblem(els(Z, 1, -1), els(Z, 1, -1)))
    assert res.kind == "finite" and res.length == 0
    res = word_search(WordSearchProblem((), els(Z, 0)))
    assert res.kind == "finite" and res.length == 0


def test_bound_word_for_11010():
    # letters S_1 = {-3,-1,3}; forbidden = inverses of S_0^-1 S_1
    res = word_search(WordSearchProblem(els(Z, -3, -1, 3), els(Z, 7, 5, 3, 1, -3)))
    assert res.kind == "finite" and res.length == 2
    assert [g.value for g in res.witness] == [-1, -1]


def test_cap():
    res = word_search(WordSearchProblem(els(Z, 1), els(Z, 100), cap=10))
    assert res.kind == "exceeds_cap"
    assert len(res.witness) >= 10


def test_infinite_witness_is_pumpable():
    prob = WordSearchProblem(els(Z, 2, 3), els(Z, 0, 1, 4))
    res = word_search(prob)
    assert res.kind == "infinite"
    prefix, loop = res.witness
    word = tuple(prefix) + tuple(loop) * 12
    assert alive(word, set(prob.forbidden), prob.side)


CASES = [
    (Z, [1, 2], [0, -1, 3]),
    (Z, [1, 3], [4, 5]),
    (Z, [-1, 2], [0, 1, -2]),
    (Z, [2, -3], [0, -1]),
    (Cyclic(7), [1, 3], [0, 5]),
    (Cyclic(12), [4, 6], [0]),
    (S3, ["213", "132"], ["123"]),
    (S3, ["213", "231"], ["123", "321"]),
    (S3, ["231", "132"], ["123", "213"]),
    (F2, ["a", "b"], ["e", "ab"]),
    (F2, ["a", "bA"], ["e", "A", "aB", "ab"]),
    (F2, ["ab", "B"], ["e", "a"]),
    (Lattice(2), [[1, 0], [0, 1]], [[0, 0], [1, 1]]),
]


@pytest.mark.parametrize("side", [LEFT, RIGHT])
@pytest.mark.parametrize("G,letters,forbidden", CASES, ids=lambda v: repr(v))
def test_against_brute_force(G, letters, forbidden, side):
    prob = WordSearchProblem(els(G, *letters), els(G, *forbidden), side, cap=30)
    res = word_search(prob)
    horizon = 9
    brute = brute_longest(prob, horizon)
    if res.kind == "finite":
        assert min(res.length, horizon) == brute
        assert alive(tuple(res.witness), set(prob.forbidden), side)
        assert len(res.witness) == res.length
    elif res.kind == "infinite":
        assert brute == horizon
    else:
        assert brute >= min(horizon, prob.cap)


def test_random_against_brute_force():
    rng = random.Random(9)
    for _ in range(150):
        G = rng.choice([Z, Cyclic(9), S3, F2])
        if G is Z:
            pool = [v for v in range(-4, 5) if v]
            fpool = range(-6, 7)
        elif G is F2:
            pool = ["a", "b", "A", "B", "ab", "Ba"]
            fpool = ["e", "a", "b", "A", "B", "ab", "ba", "aa", "Ab"]
        else:
            pool = [g.value for g in G.elements() if g != G.identity]
            fpool = [g.value for g in G.elements()]
        letters = rng.sample(pool, rng.randint(1, 3))
        forbidden = rng.sample(list(fpool), rng.randint(1, 4))
        side = rng.choice([LEFT, RIGHT])
        prob = WordSearchProblem(els(G, *letters), els(G, *forbidden), side, cap=20)
        res = word_search(prob)
        brute = brute_longest(prob, 7)
        if res.kind == "finite":
            assert min(res.length, 7) == brute, prob
        elif res.kind == "infinite":
            assert brute == 7, prob


def test_side_symmetry_by_reversal():
    """Reversing words swaps the two orientations, so both sides agree."""
    rng = random.Random(4)
    for _ in range(80):
        G = rng.choice([S3, F2])
        pool = ["213", "132", "231", "312", "321"] if G is S3 else ["a", "b", "A", "B", "ab"]
        fpool = [g.value for g in G.elements()] if G is S3 else ["e", "a", "B", "ab", "ba", "aa"]
        letters = els(G, *rng.sample(pool, rng.randint(1, 3)))
        forbidden = els(G, *rng.sample(fpool, rng.randint(1, 3)))
        a = word_search(WordSearchProblem(letters, forbidden, LEFT, cap=25))
        b = word_search(WordSearchProblem(letters, forbidden, RIGHT, cap=25))
        if "exceeds_cap" not in (a.kind, b.kind):
            assert (a.kind, a.length) == (b.kind, b.length)


def test_determinism_under_letter_order():
    letters = els(S3, "213", "231", "132")
    forbidden = els(S3, "123", "312")
    results = {(r.kind, r.length) for r in
               (word_search(WordSearchProblem(tuple(p), forbidden)) for p in itertools.permutations(letters))}
    assert len(results) == 1


def test_problem_validation():
    with pytest.raises(ValueError):
        WordSearchProblem(els(Z, 0, 1), els(Z, 2))
    with pytest.raises(ValueError):
        WordSearchProblem(els(Z, 1), els(Z, 2), side="sideways")
    with pytest.raises(ValueError):
        WordSearchProblem(els(Z, 1), els(Cyclic(3), 2))


def test_separating_functional():
    assert separating_functional([(2,), (3,)]) == (1,)
    assert separating_functional([(-2,), (-3,)]) == (-1,)
    assert separating_functional([(1,), (-1,)]) is None
    phi = separating_functional([(1, 0), (0, 1), (1, -1)])
    assert phi is not None
    assert all(phi[0] * a + phi[1] * b > 0 for a, b in [(1, 0), (0, 1), (1, -1)])
    assert separating_functional([(1, 0), (-1, 0)]) is None
