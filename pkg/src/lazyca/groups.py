"""Group universes and their elements.

Five kinds of universe are supported: the integers ``Z``, the lattices
``Z^d``, cyclic groups ``Z_m``, finite groups given by a Cayley table, and
free groups of rank at most four.  Elements are :class:`Element` values
tagged with the universe they live in; mixing universes raises
:class:`UniverseMismatch`.
"""

from __future__ import annotations

import itertools
import json
import re
from typing import Iterable, Sequence

import numpy as np

MAX_TABLE_ORDER = 64
MAX_FREE_RANK = 4
FREE_GENERATORS = "abcd"


class GroupError(ValueError):
    """Invalid group definition or element encoding."""


class UniverseMismatch(GroupError):
    pass


class Element:
    """An element of a group universe, held in canonical form."""

    __slots__ = ("group", "value")

    def __init__(self, group: "Group", value):
        self.group = group
        self.value = value

    def __mul__(self, other: "Element") -> "Element":
        return op(self, other)

    def inverse(self) -> "Element":
        return inverse(self)

    def __pow__(self, n: int) -> "Element":
        return power(self, n)

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.value == other.value and self.group == other.group

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return f"Element({self.group!r}, {self.value!r})"

    def __str__(self):
        return self.group.format(self)

    @property
    def is_identity(self) -> bool:
        return self == self.group.identity

    def sort_key(self):
        return self.group.sort_key(self.value)


class Group:
    """Base class; subclasses implement arithmetic on canonical values."""

    kind: str = ""
    finite: bool = False

    def __init__(self):
        self._key = self._make_key()
        self._hash = hash(self._key)
        self.identity = Element(self, self._identity_value())

    def _make_key(self):
        raise NotImplementedError

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, Group) and self._key == other._key

    def __hash__(self):
        return self._hash

    # arithmetic on raw canonical values
    def _identity_value(self):
        raise NotImplementedError

    def _mul(self, x, y):
        raise NotImplementedError

    def _inv(self, x):
        raise NotImplementedError

    def _parse_value(self, raw):
        raise NotImplementedError

    def _format_value(self, x) -> str:
        return str(x)

    def sort_key(self, x):
        return x

    @property
    def abelian(self) -> bool:
        return True

    def elements(self) -> list[Element]:
        raise GroupError(f"{self} is infinite")

    def order(self) -> int | None:
        return None

    def element(self, raw) -> Element:
        """Parse a JSON value or text encoding into an element."""
        if isinstance(raw, Element):
            if raw.group != self:
                raise UniverseMismatch(f"{raw} does not belong to {self}")
            return raw
        return Element(self, self._parse_value(raw))

    def format(self, g: Element) -> str:
        return self._format_value(g.value)

    def to_json(self, g: Element):
        return self._format_value(g.value)

    def spec(self) -> dict:
        raise NotImplementedError

    def norm(self, g: Element) -> int:
        """Size measure used by escape arguments (max-norm or word length)."""
        raise GroupError(f"no norm on {self}")


class Integers(Group):
    kind = "Z"

    def _make_key(self):
        return ("Z",)

    def _identity_value(self):
        return 0

    def _mul(self, x, y):
        return x + y

    def _inv(self, x):
        return -x

    def _parse_value(self, raw):
        if isinstance(raw, bool):
            raise GroupError(f"not an integer: {raw!r}")
        if isinstance(raw, int):
            return raw
        try:
            return int(str(raw).strip())
        except ValueError:
            raise GroupError(f"not an integer: {raw!r}") from None

    def to_json(self, g):
        return g.value

    def spec(self):
        return {"kind": "Z"}

    def norm(self, g):
        return abs(g.value)

    def __repr__(self):
        return "Z"


class Lattice(Group):
    kind = "Zd"

    def __init__(self, d: int):
        if d < 1:
            raise GroupError(f"Z^d needs d >= 1, got {d}")
        self.d = d
        super().__init__()

    def _make_key(self):
        return ("Zd", self.d)

    def _identity_value(self):
        return (0,) * self.d

    def _mul(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def _inv(self, x):
        return tuple(-a for a in x)

    def _parse_value(self, raw):
        if isinstance(raw, str):
            try:
                raw = json.loads(raw)
            except json.JSONDecodeError:
                raise GroupError(f"bad Z^{self.d} element {raw!r}") from None
        if not isinstance(raw, (list, tuple)) or len(raw) != self.d:
            raise GroupError(f"Z^{self.d} element must have {self.d} entries: {raw!r}")
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in raw):
            raise GroupError(f"Z^{self.d} entries must be integers: {raw!r}")
        return tuple(raw)

    def _format_value(self, x):
        return "[" + ",".join(map(str, x)) + "]"

    def to_json(self, g):
        return list(g.value)

    def spec(self):
        return {"kind": "Zd", "d": self.d}

    def norm(self, g):
        return max(abs(v) for v in g.value)

    def __repr__(self):
        return f"Z^{self.d}"


class Cyclic(Group):
    kind = "cyclic"
    finite = True

    def __init__(self, m: int):
        if m < 1:
            raise GroupError(f"cyclic group needs m >= 1, got {m}")
        self.m = m
        super().__init__()

    def _make_key(self):
        return ("cyclic", self.m)

    def _identity_value(self):
        return 0

    def _mul(self, x, y):
        return (x + y) % self.m

    def _inv(self, x):
        return -x % self.m

    def _parse_value(self, raw):
        if isinstance(raw, bool):
            raise GroupError(f"not a residue: {raw!r}")
        try:
            v = raw if isinstance(raw, int) else int(str(raw).strip())
        except ValueError:
            raise GroupError(f"not a residue: {raw!r}") from None
        return v % self.m

    def to_json(self, g):
        return g.value

    def elements(self):
        return [Element(self, v) for v in range(self.m)]

    def order(self):
        return self.m

    def spec(self):
        return {"kind": "cyclic", "m": self.m}

    def __repr__(self):
        return f"C{self.m}"


class TableGroup(Group):
    """Finite group given by element names and a Cayley table.

    ``table[i][j]`` is the name of ``names[i] * names[j]``.  The table is
    checked for closure, associativity, identity and inverses on
    construction.
    """

    kind = "table"
    finite = True

    def __init__(self, names: Sequence[str], table: Sequence[Sequence[str]],
                 identity: str, label: str | None = None):
        names = [str(n) for n in names]
        m = len(names)
        if m < 1 or m > MAX_TABLE_ORDER:
            raise GroupError(f"table groups must have 1..{MAX_TABLE_ORDER} elements, got {m}")
        if len(set(names)) != m:
            raise GroupError("duplicate element names in table group")
        index = {n: i for i, n in enumerate(names)}
        if len(table) != m or any(len(row) != m for row in table):
            raise GroupError(f"Cayley table must be {m}x{m}")
        try:
            mult = np.array([[index[str(c)] for c in row] for row in table], dtype=np.int64)
        except KeyError as exc:
            raise GroupError(f"table entry {exc.args[0]!r} is not an element (closure fails)") from None
        if str(identity) not in index:
            raise GroupError(f"identity {identity!r} is not an element")
        e = index[str(identity)]
        ar = np.arange(m)
        if not (np.array_equal(mult[e], ar) and np.array_equal(mult[:, e], ar)):
            raise GroupError(f"{identity!r} is not a two-sided identity")
        # (xy)z == x(yz) for all triples
        left = mult[mult[:, :, None], ar[None, None, :]]
        right = mult[ar[:, None, None], mult[None, :, :]]
        bad = np.argwhere(left != right)
        if len(bad):
            x, y, z = (names[i] for i in bad[0])
            raise GroupError(f"table is not associative: ({x}{y}){z} != {x}({y}{z})")
        inv = np.full(m, -1)
        for i in range(m):
            hits = np.flatnonzero(mult[i] == e)
            if len(hits) != 1 or mult[hits[0], i] != e:
                raise GroupError(f"element {names[i]!r} has no inverse")
            inv[i] = hits[0]
        self.names = tuple(names)
        self.index = index
        self.mult = mult
        self.inv_index = inv
        self.identity_name = str(identity)
        self.label = label
        super().__init__()

    def _make_key(self):
        return ("table", self.names, self.mult.tobytes(), self.identity_name)

    def _identity_value(self):
        return self.identity_name

    def _mul(self, x, y):
        return self.names[self.mult[self.index[x], self.index[y]]]

    def _inv(self, x):
        return self.names[self.inv_index[self.index[x]]]

    def _parse_value(self, raw):
        name = str(raw).strip()
        if name not in self.index:
            raise GroupError(f"unknown element {raw!r}")
        return name

    def sort_key(self, x):
        return self.index[x]

    @property
    def abelian(self):
        return bool(np.array_equal(self.mult, self.mult.T))

    def elements(self):
        return [Element(self, n) for n in self.names]

    def order(self):
        return len(self.names)

    def spec(self):
        return {
            "kind": "table",
            "elements": list(self.names),
            "table": [[self.names[j] for j in row] for row in self.mult],
            "identity": self.identity_name,
        }

    def __repr__(self):
        return self.label or f"Table({len(self.names)})"


def _free_reduce(word: Iterable[str]) -> str:
    out: list[str] = []
    for c in word:
        if out and out[-1] == c.swapcase():
            out.pop()
        else:
            out.append(c)
    return "".join(out)


class FreeGroup(Group):
    """Free group on generators ``a, b, ...``; ``A, B, ...`` are inverses."""

    kind = "free"

    def __init__(self, rank: int):
        if not 1 <= rank <= MAX_FREE_RANK:
            raise GroupError(f"free group rank must be in 1..{MAX_FREE_RANK}, got {rank}")
        self.rank = rank
        self.letters = FREE_GENERATORS[:rank] + FREE_GENERATORS[:rank].upper()
        super().__init__()

    def _make_key(self):
        return ("free", self.rank)

    def _identity_value(self):
        return ""

    def _mul(self, x, y):
        # cancel at the seam only; both inputs are reduced
        k = 0
        n = min(len(x), len(y))
        while k < n and x[-1 - k] == y[k].swapcase():
            k += 1
        return x[: len(x) - k] + y[k:]

    def _inv(self, x):
        return x[::-1].swapcase()

    def _parse_value(self, raw):
        if not isinstance(raw, str):
            raise GroupError(f"free group element must be a string: {raw!r}")
        text = raw.strip()
        if text == "e":
            return ""
        bad = set(text) - set(self.letters)
        if bad:
            raise GroupError(f"letters {''.join(sorted(bad))!r} not in F{self.rank}")
        return _free_reduce(text)

    def _format_value(self, x):
        return x or "e"

    def sort_key(self, x):
        return (len(x), x)

    @property
    def abelian(self):
        return self.rank == 1

    def spec(self):
        return {"kind": "free", "rank": self.rank}

    def norm(self, g):
        return len(g.value)

    def __repr__(self):
        return f"F{self.rank}"


def symmetric_group(n: int) -> TableGroup:
    """Sym(n) as a table group; elements named by one-line notation."""
    perms = list(itertools.permutations(range(n)))
    names = ["".join(str(i + 1) for i in p) for p in perms]
    index = {p: i for i, p in enumerate(perms)}
    # (gh)(i) = g(h(i))
    table = [[names[index[tuple(g[h[i]] for i in range(n))]] for h in perms] for g in perms]
    return TableGroup(names, table, names[0], label=f"S{n}")


def group_from_spec(spec) -> Group:
    """Build a group from a JSON object or a short text name.

    Text names: ``Z``, ``Z^2``, ``C12``, ``F2``, ``S3``.
    """
    if isinstance(spec, str):
        text = spec.strip()
        if text == "Z":
            return Integers()
        patterns = [
            (r"Z\^(\d+)", lambda k: Lattice(k)),
            (r"(?:C|Z_?)(\d+)", lambda k: Cyclic(k)),
            (r"F(\d+)", lambda k: FreeGroup(k)),
            (r"S(\d+)", lambda k: symmetric_group(k)),
        ]
        for pat, make in patterns:
            m = re.fullmatch(pat, text)
            if m:
                return make(int(m.group(1)))
        raise GroupError(f"unknown group name {spec!r}")
    if not isinstance(spec, dict) or "kind" not in spec:
        raise GroupError(f"group spec must be a name or an object with 'kind': {spec!r}")
    kind = str(spec["kind"]).lower()
    try:
        if kind == "z":
            return Integers()
        if kind == "zd":
            return Lattice(int(spec["d"]))
        if kind == "cyclic":
            return Cyclic(int(spec["m"]))
        if kind == "free":
            return FreeGroup(int(spec["rank"]))
        if kind == "symmetric":
            n = int(spec["n"])
            if n < 1 or n > 4:
                raise GroupError("symmetric groups are limited to n <= 4")
            return symmetric_group(n)
        if kind == "table":
            return TableGroup(spec["elements"], spec["table"], spec["identity"])
    except KeyError as exc:
        raise GroupError(f"group spec of kind {kind!r} is missing {exc.args[0]!r}") from None
    raise GroupError(f"unknown group kind {spec['kind']!r}")


# operations

def _same(g: Element, h: Element) -> Group:
    if g.group != h.group:
        raise UniverseMismatch(f"cannot combine elements of {g.group} and {h.group}")
    return g.group


def op(g: Element, h: Element) -> Element:
    G = _same(g, h)
    return Element(G, G._mul(g.value, h.value))


def inverse(g: Element) -> Element:
    return Element(g.group, g.group._inv(g.value))


def power(g: Element, n: int) -> Element:
    G = g.group
    base = g.value if n >= 0 else G._inv(g.value)
    acc = G._identity_value()
    for _ in range(abs(n)):
        acc = G._mul(acc, base)
    return Element(G, acc)


def subset(items: Iterable[Element]) -> tuple[Element, ...]:
    """A FiniteSubset: listing order kept, duplicates rejected."""
    out = tuple(items)
    if len(set(out)) != len(out):
        raise GroupError("subset contains duplicate elements")
    if out:
        G = out[0].group
        for g in out[1:]:
            if g.group != G:
                raise UniverseMismatch(f"subset mixes {G} and {g.group}")
    return out


def _dedupe(items: Iterable[Element]) -> tuple[Element, ...]:
    return tuple(dict.fromkeys(items))


def set_inverse(S: Sequence[Element]) -> tuple[Element, ...]:
    return _dedupe(inverse(s) for s in S)


def set_product(S: Sequence[Element], K: Sequence[Element]) -> tuple[Element, ...]:
    """``SK = {s k}``, in order of first appearance (s outer, k inner)."""
    return _dedupe(op(s, k) for s in S for k in K)


def iterated_neighborhood(S: Sequence[Element], n: int) -> tuple[Element, ...]:
    """The n-fold product ``S S ... S``; requires the identity in S."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not S or S[0].group.identity not in S:
        raise GroupError("iterated neighborhoods need the identity in S")
    out = tuple(S)
    for _ in range(n - 1):
        out = set_product(S, out)
    return out


def evaluate_word(word: Sequence[Element], side: str = "left-to-right",
                  group: Group | None = None) -> Element:
    """Product of the letters; ``right-to-left`` multiplies s_n ... s_1."""
    if side not in ("left-to-right", "right-to-left"):
        raise ValueError(f"unknown side {side!r}")
    if not word:
        if group is None:
            raise GroupError("empty word needs an explicit group")
        return group.identity
    letters = word if side == "left-to-right" else list(reversed(word))
    acc = letters[0]
    for s in letters[1:]:
        acc = op(acc, s)
    return acc


def element_power_order(g: Element, cap: int) -> int | None:
    """Least n >= 1 with g^n = e, or None when it exceeds ``cap``.

    On finite universes the search always runs to the true order.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    G = g.group
    limit = max(cap, G.order() or 0)
    e = G._identity_value()
    acc = g.value
    for n in range(1, limit + 1):
        if acc == e:
            return n
        acc = G._mul(acc, g.value)
    return None
