"""Finite Coxeter groups of rank <= 4, reduced words, braid moves and rex graphs.

Words are plain tuples of generator indices (1-based).  The rex-graph search
packs a word into a single ``uint64`` (two bits per letter, first letter in
the most significant position) so that integer order is lexicographic word
order and a whole BFS level can be rewritten with vectorised bit operations.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .qfield import QuadraticFieldScalar, cos_pi_over

Word = tuple[int, ...]

DEFAULT_MAX_VERTICES = 10_000_000
MAX_VERTICES_ENV = "COXTETRA_MAX_VERTICES"


class ResourceLimitError(RuntimeError):
    """Raised when an enumeration would exceed its configured budget."""


@dataclass(frozen=True)
class CoxeterType:
    name: str
    rank: int
    matrix: tuple[tuple[int, ...], ...]
    longest_length: int
    radicand: int

    def m(self, i: int, j: int) -> int:
        """Order of ``s_i s_j`` (1-based generator indices)."""
        return self.matrix[i - 1][j - 1]

    def __str__(self) -> str:
        return self.name


def _matrix(rank: int, bonds: dict[tuple[int, int], int]) -> tuple[tuple[int, ...], ...]:
    rows = [[1 if i == j else 2 for j in range(rank)] for i in range(rank)]
    for (i, j), m in bonds.items():
        rows[i - 1][j - 1] = rows[j - 1][i - 1] = m
    return tuple(tuple(r) for r in rows)


# B3 and C3 are the same Coxeter group; they differ only in operator assignment.
TYPES: dict[str, CoxeterType] = {
    "A2": CoxeterType("A2", 2, _matrix(2, {(1, 2): 3}), 3, 1),
    "A3": CoxeterType("A3", 3, _matrix(3, {(1, 2): 3, (2, 3): 3}), 6, 1),
    "B3": CoxeterType("B3", 3, _matrix(3, {(1, 2): 3, (2, 3): 4}), 9, 2),
    "C3": CoxeterType("C3", 3, _matrix(3, {(1, 2): 3, (2, 3): 4}), 9, 2),
    "F4": CoxeterType("F4", 4, _matrix(4, {(1, 2): 3, (2, 3): 4, (3, 4): 3}), 24, 2),
    "H2": CoxeterType("H2", 2, _matrix(2, {(1, 2): 5}), 5, 5),
    "H3": CoxeterType("H3", 3, _matrix(3, {(1, 2): 5, (2, 3): 3}), 15, 5),
}

_LONGEST: dict[str, Word] = {
    "A2": (1, 2, 1),
    "A3": (1, 2, 1, 3, 2, 1),
    "B3": (1, 2, 3, 1, 2, 1, 3, 2, 3),
    "C3": (1, 2, 3, 1, 2, 1, 3, 2, 3),
    "F4": tuple(int(c) for c in "434234232123423123412321"),
    "H2": (1, 2, 1, 2, 1),
    "H3": tuple(int(c) for c in "121213212132123"),
}

# Source letters of the "forward" direction of orientation-sensitive relations.
# Everything not listed is forward when the smaller letter comes first.
_FORWARD_SOURCE: dict[str, dict[frozenset, tuple[int, int]]] = {
    "H2": {frozenset((1, 2)): (2, 1)},
    "H3": {frozenset((1, 2)): (2, 1)},
}

# Diagram automorphism induced by conjugation with the longest element.
_W0_TWIST: dict[str, tuple[int, ...]] = {
    "A2": (2, 1),
    "A3": (3, 2, 1),
}


def coxeter_type(name: str | CoxeterType) -> CoxeterType:
    if isinstance(name, CoxeterType):
        return name
    try:
        return TYPES[name.upper()]
    except KeyError:
        raise ValueError(f"unknown Coxeter type {name!r}; expected one of {sorted(TYPES)}") from None


def coxeter_matrix(ctype: str | CoxeterType) -> tuple[tuple[int, ...], ...]:
    return coxeter_type(ctype).matrix


def longest_word(ctype: str | CoxeterType) -> Word:
    """Built-in reduced word for the longest element."""
    return _LONGEST[coxeter_type(ctype).name]


def w0_twist(ctype: str | CoxeterType) -> tuple[int, ...]:
    """Images of 1..rank under ``i -> w0 s_i w0`` (identity unless type A)."""
    ct = coxeter_type(ctype)
    return _W0_TWIST.get(ct.name, tuple(range(1, ct.rank + 1)))


def twisted_reversal(ctype: str | CoxeterType, word: Sequence[int]) -> Word:
    """Reverse ``word`` and apply the longest-element twist to every letter.

    For a reduced word of the longest element the result is again one; it is
    the plain reversal for every type except A.
    """
    tw = w0_twist(ctype)
    return tuple(tw[c - 1] for c in reversed(word))


# ---------------------------------------------------------------- reducedness


@lru_cache(maxsize=None)
def _bilinear_form(name: str) -> tuple[tuple[QuadraticFieldScalar, ...], ...]:
    ct = TYPES[name]
    d = ct.radicand
    rows = []
    for i in range(1, ct.rank + 1):
        row = []
        for j in range(1, ct.rank + 1):
            if i == j:
                row.append(QuadraticFieldScalar(1, 0, d))
            else:
                c = cos_pi_over(ct.m(i, j))
                row.append(QuadraticFieldScalar(-c.a, -c.b, d))
        rows.append(tuple(row))
    return tuple(rows)


def _reflect(form, i: int, v: list[QuadraticFieldScalar]) -> list[QuadraticFieldScalar]:
    # s_i(v) = v - 2 B(alpha_i, v) alpha_i
    coeff = sum((form[i - 1][j] * v[j] for j in range(len(v))), QuadraticFieldScalar(0, 0, v[0].d))
    out = list(v)
    out[i - 1] = out[i - 1] - 2 * coeff
    return out


def _check_letters(ct: CoxeterType, w: Sequence[int]) -> None:
    for c in w:
        if not (isinstance(c, (int, np.integer)) and 1 <= c <= ct.rank):
            raise ValueError(f"letter {c!r} out of range 1..{ct.rank} for {ct.name}")


def is_reduced(ctype: str | CoxeterType, w: Sequence[int]) -> bool:
    """Reducedness by positive-root tracking in the geometric representation.

    ``s_{i1}...s_{ik}`` is reduced iff every ``s_{i1}...s_{i(t-1)}(alpha_{it})``
    is a positive root.
    """
    ct = coxeter_type(ctype)
    w = tuple(w)
    _check_letters(ct, w)
    form = _bilinear_form(ct.name)
    d = ct.radicand
    for t in range(len(w)):
        v = [QuadraticFieldScalar(1 if j == w[t] - 1 else 0, 0, d) for j in range(ct.rank)]
        for i in reversed(w[:t]):
            v = _reflect(form, i, v)
        signs = {c.sign() for c in v} - {0}
        if signs == {-1}:
            return False
        assert signs == {1}, "root with mixed-sign coordinates"
    return True


# ---------------------------------------------------------------- braid moves


@dataclass(frozen=True, order=True)
class MoveLabel:
    """One application of a Coxeter relation.

    ``position`` is the 1-based start of the changed window, ``width`` the
    relation order, ``letters`` the alternating pair as read in the source.
    """

    position: int
    width: int
    letters: tuple[int, int]
    direction: str = "forward"

    @property
    def kind(self) -> str:
        return {2: "quadratic", 3: "cubic", 4: "quartic", 5: "quintic"}[self.width]

    def source(self) -> Word:
        i, j = self.letters
        return tuple(i if t % 2 == 0 else j for t in range(self.width))

    def target(self) -> Word:
        i, j = self.letters
        return tuple(j if t % 2 == 0 else i for t in range(self.width))

    def window(self) -> tuple[int, ...]:
        return tuple(range(self.position, self.position + self.width))

    def __str__(self) -> str:
        return f"{self.kind}@{self.position}"


def move_direction(ctype: str | CoxeterType, letters: tuple[int, int]) -> str:
    ct = coxeter_type(ctype)
    fwd = _FORWARD_SOURCE.get(ct.name, {}).get(frozenset(letters))
    if fwd is None:
        fwd = tuple(sorted(letters))
    return "forward" if tuple(letters) == fwd else "backward"


def make_move(ctype: str | CoxeterType, position: int, letters: tuple[int, int]) -> MoveLabel:
    ct = coxeter_type(ctype)
    i, j = letters
    return MoveLabel(position, ct.m(i, j), (i, j), move_direction(ct, (i, j)))


def apply_move(w: Sequence[int], move: MoveLabel) -> Word:
    w = tuple(w)
    a = move.position - 1
    if w[a : a + move.width] != move.source():
        raise ValueError(f"move {move} does not apply to {''.join(map(str, w))}")
    return w[:a] + move.target() + w[a + move.width :]


def available_moves(ctype: str | CoxeterType, w: Sequence[int]) -> list[tuple[MoveLabel, Word]]:
    """All single-relation rewrites of ``w``, sorted by (position, letters)."""
    ct = coxeter_type(ctype)
    w = tuple(w)
    _check_letters(ct, w)
    out = []
    for a in range(len(w) - 1):
        i, j = w[a], w[a + 1]
        if i == j:
            continue
        m = ct.m(i, j)
        if a + m > len(w):
            continue
        move = MoveLabel(a + 1, m, (i, j), move_direction(ct, (i, j)))
        if w[a : a + m] == move.source():
            out.append((move, w[:a] + move.target() + w[a + m :]))
    out.sort(key=lambda mv: (mv[0].position, mv[0].letters))
    return out


# ---------------------------------------------------------------- rex graphs


def pack(word: Sequence[int]) -> int:
    code = 0
    for c in word:
        code = (code << 2) | (c - 1)
    return code


def unpack(code: int, length: int) -> Word:
    return tuple(((code >> (2 * (length - 1 - p))) & 3) + 1 for p in range(length))


@dataclass(frozen=True)
class _PackedMove:
    mask: int
    src: int
    dst: int


def _packed_moves(ct: CoxeterType, length: int) -> list[_PackedMove]:
    moves = []
    for i in range(1, ct.rank + 1):
        for j in range(1, ct.rank + 1):
            if i == j:
                continue
            m = ct.m(i, j)
            lab = MoveLabel(1, m, (i, j))
            src, dst = pack(lab.source()), pack(lab.target())
            for a in range(length - m + 1):
                shift = 2 * (length - m - a)
                moves.append(_PackedMove(((1 << (2 * m)) - 1) << shift, src << shift, dst << shift))
    return moves


class RexGraph:
    """Reduced words of one element, connected by single braid moves.

    Vertices are held as a sorted array of packed words; edges are generated
    on demand since the F4 graph has millions of them.
    """

    def __init__(self, ctype: CoxeterType, seed: Word, codes: np.ndarray, edge_count: int,
                 levels: list[int]) -> None:
        self.ctype = ctype
        self.seed = seed
        self.length = len(seed)
        self.codes = codes
        self.edge_count = edge_count
        self.level_sizes = levels

    @property
    def vertex_count(self) -> int:
        return int(self.codes.size)

    @property
    def diameter_from_seed(self) -> int:
        return len(self.level_sizes) - 1

    def __len__(self) -> int:
        return self.vertex_count

    def __contains__(self, word) -> bool:
        word = tuple(word)
        if len(word) != self.length:
            return False
        code = np.uint64(pack(word))
        k = int(np.searchsorted(self.codes, code))
        return k < self.codes.size and self.codes[k] == code

    def words(self) -> Iterator[Word]:
        for code in self.codes.tolist():
            yield unpack(code, self.length)

    @property
    def vertices(self) -> frozenset[Word]:
        return frozenset(self.words())

    def iter_edges(self) -> Iterator[tuple[Word, Word, MoveLabel]]:
        """Each undirected edge once, read from its lexicographically smaller end."""
        for u in self.words():
            for move, v in available_moves(self.ctype, u):
                if u < v:
                    yield u, v, move

    @property
    def edges(self) -> set[tuple[Word, Word, MoveLabel]]:
        return set(self.iter_edges())

    def summary(self) -> dict:
        return {
            "type": self.ctype.name,
            "seed": "".join(map(str, self.seed)),
            "vertex_count": self.vertex_count,
            "edge_count": self.edge_count,
        }

    def write_edges(self, fh) -> int:
        n = 0
        for u, v, move in self.iter_edges():
            fh.write(f"{''.join(map(str, u))}\t{''.join(map(str, v))}\t{move.kind}@{move.position}\n")
            n += 1
        return n


def _max_vertices_default() -> int:
    env = os.environ.get(MAX_VERTICES_ENV)
    return int(env) if env else DEFAULT_MAX_VERTICES


def rex_graph(ctype: str | CoxeterType, seed: Sequence[int] | None = None, *,
              max_vertices: int | None = None) -> RexGraph:
    """Breadth-first closure of ``seed`` under braid moves.

    Each BFS level is a sorted ``uint64`` array; neighbours of level ``d`` can
    only lie in levels ``d-1``, ``d`` or ``d+1``, so only those are consulted
    when de-duplicating.
    """
    ct = coxeter_type(ctype)
    seed = tuple(longest_word(ct) if seed is None else seed)
    if not is_reduced(ct, seed):
        raise ValueError("rex_graph seed must be a reduced word")
    length = len(seed)
    if ct.rank > 4 or length > 32:
        raise ValueError("packed representation supports rank <= 4 and length <= 32")
    cap = _max_vertices_default() if max_vertices is None else max_vertices
    moves = _packed_moves(ct, length)
    masks = np.array([m.mask for m in moves], dtype=np.uint64)
    srcs = np.array([m.src for m in moves], dtype=np.uint64)
    dsts = np.array([m.dst for m in moves], dtype=np.uint64)

    prev = np.empty(0, dtype=np.uint64)
    cur = np.array([pack(seed)], dtype=np.uint64)
    levels = [cur]
    total = 1
    degree_sum = 0
    while cur.size:
        found = []
        for mask, src, dst in zip(masks, srcs, dsts):
            hit = (cur & mask) == src
            if hit.any():
                sel = cur[hit]
                degree_sum += int(sel.size)
                found.append((sel & ~mask) | dst)
        if not found:
            break
        nbrs = np.unique(np.concatenate(found))
        nbrs = np.setdiff1d(nbrs, cur, assume_unique=True)
        nbrs = np.setdiff1d(nbrs, prev, assume_unique=True)
        total += int(nbrs.size)
        if total > cap:
            raise ResourceLimitError(
                f"rex graph of {ct.name} exceeds the vertex cap {cap} "
                f"(set {MAX_VERTICES_ENV} to raise it)"
            )
        if nbrs.size:
            levels.append(nbrs)
        prev, cur = cur, nbrs
    codes = np.sort(np.concatenate(levels))
    return RexGraph(ct, seed, codes, degree_sum // 2, [int(lv.size) for lv in levels])
