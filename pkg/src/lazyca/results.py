from __future__ import annotations

from dataclasses import dataclass
from typing import Any

METHODS = (
    "oracle",
    "theorem1-case1",
    "theorem1-case2",
    "theorem1-case3",
    "upper-bound",
    "corollary-idem",
)


@dataclass(frozen=True)
class OrderResult:
    """Outcome of an order computation.

    ``kind`` is ``finite`` (``value`` is the order, always >= 2),
    ``infinite`` (proven, with a certificate in ``witness``) or
    ``exceeds_cap`` (``value`` is the cap; the order is larger).  For the
    upper-bound method the value is a bound, and ``infinite`` means the
    bound gives no finite information.
    """

    kind: str
    value: int | None
    method: str
    witness: Any = None
    note: str = ""

    def __post_init__(self):
        if self.kind not in ("finite", "infinite", "exceeds_cap"):
            raise ValueError(f"bad result kind {self.kind!r}")
        if self.method not in METHODS:
            raise ValueError(f"bad method {self.method!r}")
        if self.kind == "finite" and (self.value is None or self.value < 2):
            raise ValueError("a lazy CA has order at least 2")

    @classmethod
    def finite(cls, n: int, method: str, witness=None, note=""):
        return cls("finite", n, method, witness, note)

    @classmethod
    def infinite(cls, method: str, witness=None, note=""):
        return cls("infinite", None, method, witness, note)

    @classmethod
    def exceeds(cls, cap: int, method: str, witness=None, note=""):
        return cls("exceeds_cap", cap, method, witness, note)

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    def lower(self) -> float:
        """Smallest value consistent with this result."""
        if self.kind == "finite":
            return self.value
        if self.kind == "exceeds_cap":
            return self.value + 1
        return float("inf")

    def to_json(self):
        if self.kind == "finite":
            return self.value
        if self.kind == "infinite":
            return "infinite"
        return f">{self.value}"

    def __str__(self):
        if self.kind == "finite":
            return str(self.value)
        if self.kind == "infinite":
            return "no finite bound" if self.method == "upper-bound" else "infinite (proven)"
        return f"exceeds cap {self.value}"
