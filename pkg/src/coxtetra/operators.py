"""Indexed operator symbols, their products, and slot permutations.

Products are stored in application order: ``factors[0]`` acts first.  The
conventional written form (leftmost factor acts last) is produced and parsed
only by :meth:`OperatorExpression.render` and :func:`parse_product`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

ARITY = {"R": 3, "S": 3, "K": 4, "Y": 5, "P": 2}
CORE_KINDS = ("R", "S", "K", "Y")


@dataclass(frozen=True, order=True)
class IndexedOperator:
    kind: str
    indices: tuple[int, ...]
    inverted: bool = False

    def __post_init__(self) -> None:
        if self.kind not in ARITY:
            raise ValueError(f"unknown operator kind {self.kind!r}")
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))
        if len(self.indices) != ARITY[self.kind]:
            raise ValueError(f"{self.kind} takes {ARITY[self.kind]} indices, got {self.indices}")
        if len(set(self.indices)) != len(self.indices):
            raise ValueError(f"repeated slot in {self.kind}{self.indices}")
        if self.kind == "P" and self.inverted:
            object.__setattr__(self, "inverted", False)

    @property
    def index_set(self) -> frozenset[int]:
        return frozenset(self.indices)

    @property
    def signature(self) -> tuple:
        return (self.kind, self.indices, self.inverted)

    def relabel(self, images: Sequence[int]) -> IndexedOperator:
        """Replace slot ``i`` by ``images[i-1]``."""
        return IndexedOperator(self.kind, tuple(images[i - 1] for i in self.indices), self.inverted)

    def with_indices(self, indices: Iterable[int]) -> IndexedOperator:
        return IndexedOperator(self.kind, tuple(indices), self.inverted)

    def reversed(self) -> IndexedOperator:
        return self.with_indices(reversed(self.indices))

    def inverse(self) -> IndexedOperator:
        if self.kind == "P":
            return self
        return IndexedOperator(self.kind, self.indices, not self.inverted)

    def text(self) -> str:
        inv = "^{-1}" if self.inverted else ""
        return f"{self.kind}{inv}_{{{','.join(map(str, self.indices))}}}"

    def latex(self) -> str:
        inv = "^{-1}" if self.inverted else ""
        return f"{self.kind}{inv}_{{{', '.join(map(str, self.indices))}}}"

    def to_json(self) -> dict:
        return {"kind": self.kind, "indices": list(self.indices), "inverted": self.inverted}

    @classmethod
    def from_json(cls, d: dict) -> IndexedOperator:
        return cls(d["kind"], tuple(d["indices"]), bool(d.get("inverted", False)))

    def __str__(self) -> str:
        return self.text()


def P(i: int, j: int) -> IndexedOperator:
    return IndexedOperator("P", (i, j))


@dataclass(frozen=True)
class Permutation:
    """Bijection of slots ``1..L``; content of slot ``i`` moves to ``images[i-1]``."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "images", tuple(self.images))
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"not a permutation: {self.images}")

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def reversal(cls, n: int) -> Permutation:
        return cls(tuple(range(n, 0, -1)))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> Permutation:
        img = list(range(1, n + 1))
        img[i - 1], img[j - 1] = j, i
        return cls(tuple(img))

    @property
    def size(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def then(self, other: Permutation) -> Permutation:
        """``self`` followed by ``other``."""
        return Permutation(tuple(other(self(i)) for i in range(1, self.size + 1)))

    def inverse(self) -> Permutation:
        inv = [0] * self.size
        for i, j in enumerate(self.images, 1):
            inv[j - 1] = i
        return Permutation(tuple(inv))

    def act(self, state: Sequence[int]) -> tuple[int, ...]:
        out = [0] * self.size
        for i, x in enumerate(state):
            out[self.images[i] - 1] = x
        return tuple(out)

    def is_reversal(self) -> bool:
        return self.images == tuple(range(self.size, 0, -1))

    def __str__(self) -> str:
        return "[" + " ".join(map(str, self.images)) + "]"


@dataclass(frozen=True)
class OperatorExpression:
    factors: tuple[IndexedOperator, ...]
    ambient_length: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "factors", tuple(self.factors))
        for f in self.factors:
            if not all(1 <= i <= self.ambient_length for i in f.indices):
                raise ValueError(f"{f} outside slots 1..{self.ambient_length}")

    def __len__(self) -> int:
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    def __add__(self, other: OperatorExpression) -> OperatorExpression:
        if other.ambient_length != self.ambient_length:
            raise ValueError("ambient lengths differ")
        return OperatorExpression(self.factors + other.factors, self.ambient_length)

    def written(self) -> tuple[IndexedOperator, ...]:
        """Factors in written order (leftmost acts last)."""
        return self.factors[::-1]

    def render(self, sep: str = " ") -> str:
        return sep.join(f.text() for f in self.written()) or "1"

    def latex(self) -> str:
        return " ".join(f.latex() for f in self.written()) or "1"

    def counts(self) -> dict[tuple[str, bool], int]:
        out: dict[tuple[str, bool], int] = {}
        for f in self.factors:
            out[(f.kind, f.inverted)] = out.get((f.kind, f.inverted), 0) + 1
        return out

    def map(self, fn) -> OperatorExpression:
        return OperatorExpression(tuple(fn(f) for f in self.factors), self.ambient_length)

    def to_json(self) -> list[dict]:
        return [f.to_json() for f in self.factors]


_TOKEN = re.compile(r"\s*(?P<kind>[RSKYP])(?:\^\{-1\})?_\{(?P<idx>[\d,\s]+)\}")
_INV = "^{-1}"


def parse_product(text: str, ambient_length: int) -> OperatorExpression:
    """Parse a written product such as ``R_{1,2,4} K^{-1}_{9,7,5,3} P_{34}``.

    The leftmost factor is taken to act last, so the result is reversed into
    application order.
    """
    text = text.strip()
    pos = 0
    written = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse operator product at {text[pos:pos + 20]!r}")
        idx = m.group("idx").replace(" ", "")
        indices = [int(x) for x in idx.split(",")] if "," in idx else [int(c) for c in idx]
        written.append(IndexedOperator(m.group("kind"), tuple(indices), _INV in m.group(0)))
        pos = m.end()
    return OperatorExpression(tuple(reversed(written)), ambient_length)
