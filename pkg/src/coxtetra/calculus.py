"""Operators attached to braid moves, and the equations they generate.

A route between two reduced words is turned into a product of core operators
and transpositions.  Pushing every transposition to the acting-first end
(:func:`normalize`) leaves a transposition-free core and a residual slot
permutation; equating the cores of two routes with the same residue gives a
tetrahedron-type equation.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .coxeter import (
    CoxeterType,
    MoveLabel,
    Word,
    apply_move,
    coxeter_type,
    is_reduced,
    make_move,
    twisted_reversal,
    w0_twist,
)
from .operators import IndexedOperator, OperatorExpression, Permutation, P


class DerivationError(RuntimeError):
    """The two routes of a derivation disagree on their residual permutation."""


@dataclass(frozen=True)
class Rule:
    kind: str
    symbol: str
    forward_source: tuple[int, int]
    reversed_core: bool = False


@dataclass(frozen=True)
class OperatorAssignment:
    """Core operator attached to each non-commuting pair of generators.

    ``involutive`` records whether ``X = X^{-1}`` (and ``R_{ijk} = R_{kji}``)
    is assumed for the core operators of this family.
    """

    type_name: str
    rules: dict
    involutive: bool

    def rule(self, letters: Iterable[int]) -> Rule:
        try:
            return self.rules[frozenset(letters)]
        except KeyError:
            raise ValueError(f"no operator attached to letters {tuple(letters)} in {self.type_name}") from None

    def is_forward(self, move: MoveLabel) -> bool:
        return move.letters == self.rule(move.letters).forward_source


def _fs(i: int, j: int) -> frozenset:
    return frozenset((i, j))


ASSIGNMENTS: dict[str, OperatorAssignment] = {
    "A2": OperatorAssignment("A2", {_fs(1, 2): Rule("R", "Phi", (1, 2))}, True),
    "A3": OperatorAssignment(
        "A3", {_fs(1, 2): Rule("R", "Phi", (1, 2)), _fs(2, 3): Rule("R", "Phi", (2, 3))}, True
    ),
    "C3": OperatorAssignment(
        "C3", {_fs(1, 2): Rule("R", "Phi", (1, 2)), _fs(2, 3): Rule("K", "Psi", (2, 3))}, True
    ),
    # K^vee_{ijkl} = K_{lkji} rides on the forward quartic move of B3
    "B3": OperatorAssignment(
        "B3",
        {_fs(1, 2): Rule("S", "Phi", (1, 2)), _fs(2, 3): Rule("K", "Psi", (2, 3), reversed_core=True)},
        True,
    ),
    "F4": OperatorAssignment(
        "F4",
        {
            _fs(1, 2): Rule("R", "Phi", (1, 2)),
            _fs(2, 3): Rule("K", "Psi", (2, 3)),
            _fs(3, 4): Rule("S", "Upsilon", (3, 4)),
        },
        True,
    ),
    "H2": OperatorAssignment("H2", {_fs(1, 2): Rule("Y", "Omega", (2, 1))}, False),
    "H3": OperatorAssignment(
        "H3", {_fs(2, 3): Rule("R", "Phi", (2, 3)), _fs(1, 2): Rule("Y", "Omega", (2, 1))}, False
    ),
}


def assignment(ctype: str | CoxeterType) -> OperatorAssignment:
    return ASSIGNMENTS[coxeter_type(ctype).name]


# ---------------------------------------------------------------- traces


@dataclass(frozen=True)
class MoveTrace:
    start: Word
    steps: tuple[MoveLabel, ...]
    end: Word

    def __post_init__(self) -> None:
        object.__setattr__(self, "start", tuple(self.start))
        object.__setattr__(self, "steps", tuple(self.steps))
        object.__setattr__(self, "end", tuple(self.end))
        if self.words()[-1] != self.end:
            raise ValueError("replaying the trace does not reach its end word")

    def words(self) -> list[Word]:
        out = [self.start]
        for mv in self.steps:
            out.append(apply_move(out[-1], mv))
        return out

    def __len__(self) -> int:
        return len(self.steps)

    def check_reduced(self, ctype: str | CoxeterType) -> bool:
        return all(is_reduced(ctype, w) for w in self.words())


def trace_from_path(ctype: str | CoxeterType, words: Sequence[Sequence[int]]) -> MoveTrace:
    """Build a trace from consecutive words that differ by one braid move each."""
    ct = coxeter_type(ctype)
    words = [tuple(w) for w in words]
    steps = []
    for u, v in zip(words, words[1:]):
        diff = [p for p in range(len(u)) if u[p] != v[p]]
        if not diff:
            raise ValueError("consecutive words are equal")
        a, b = diff[0], diff[-1]
        mv = make_move(ct, a + 1, (u[a], u[a + 1]))
        if mv.width != b - a + 1 or apply_move(u, mv) != v:
            raise ValueError(f"{u} -> {v} is not a single braid move")
        steps.append(mv)
    return MoveTrace(words[0], tuple(steps), words[-1])


_NAMED = re.compile(r"(P|Phi|Upsilon|Psi|Omega)(\^\{-1\})?_\{([\d,\s]+)\}")


def trace_from_listing(ctype: str | CoxeterType, lines: Iterable[str]) -> MoveTrace:
    """Parse a route given as ``word  O_a O_b ...`` lines.

    Operators on a line act right to left on that line's word; the next line
    must start with the result.  Every named operator is checked against the
    letters it rewrites and against the type's operator assignment.
    """
    ct = coxeter_type(ctype)
    asg = assignment(ct)
    rows = []
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if line:
            word, _, ops = line.partition(" ")
            rows.append((tuple(int(c) for c in word), _NAMED.findall(ops)))
    if not rows:
        raise ValueError("empty trace listing")
    start = rows[0][0]
    cur = start
    steps = []
    for n, (word, ops) in enumerate(rows):
        if word != cur:
            raise ValueError(f"line {n + 1}: expected {''.join(map(str, cur))}, listed {''.join(map(str, word))}")
        for name, inv, idx in reversed(ops):
            idx = idx.replace(" ", "")
            window = [int(x) for x in idx.split(",")] if "," in idx else [int(c) for c in idx]
            a = min(window)
            if sorted(window) != list(range(a, a + len(window))):
                raise ValueError(f"line {n + 1}: window {window} is not consecutive")
            mv = make_move(ct, a, (cur[a - 1], cur[a]))
            if mv.width != len(window):
                raise ValueError(f"line {n + 1}: {name}_{window} does not match letters {mv.letters}")
            if name == "P":
                if mv.width != 2:
                    raise ValueError(f"line {n + 1}: P on non-commuting letters {mv.letters}")
            else:
                rule = asg.rule(mv.letters)
                if rule.symbol != name:
                    raise ValueError(f"line {n + 1}: {name} listed where {rule.symbol} acts")
                # orientation matters only where the core is not an involution
                if (rule.kind == "K" or not asg.involutive) and asg.is_forward(mv) == bool(inv):
                    raise ValueError(f"line {n + 1}: {name}{inv} has the wrong orientation")
            cur = apply_move(cur, mv)
            steps.append(mv)
    return MoveTrace(start, tuple(steps), cur)


# ---------------------------------------------------------------- expansion


def move_to_operators(ctype: str | CoxeterType, move: MoveLabel, ambient_length: int) -> OperatorExpression:
    """Core operator times window-reversing transpositions for one move.

    Written form: ``X_{a..b} P_{a,b} P_{a+1,b-1}...`` for a forward move and its
    inverse ``X^{-1}_{b..a} P_{a,b}...`` for a backward one.
    """
    ct = coxeter_type(ctype)
    a, width = move.position, move.width
    if a < 1 or a + width - 1 > ambient_length:
        raise ValueError(f"move {move} does not fit in {ambient_length} slots")
    if width == 2:
        return OperatorExpression((P(a, a + 1),), ambient_length)
    asg = assignment(ct)
    rule = asg.rule(move.letters)
    b = a + width - 1
    window = tuple(range(a, b + 1))
    flips = tuple(P(a + t, b - t) for t in reversed(range(width // 2)))
    core = IndexedOperator(rule.kind, window[::-1] if rule.reversed_core else window)
    if not asg.is_forward(move):
        core = core.inverse().reversed()
    return OperatorExpression(flips + (core,), ambient_length)


def trace_to_expression(ctype: str | CoxeterType, trace: MoveTrace) -> OperatorExpression:
    L = len(trace.start)
    expr = OperatorExpression((), L)
    for mv in trace.steps:
        expr = expr + move_to_operators(ctype, mv, L)
    return expr


def normalize(expr: OperatorExpression) -> tuple[OperatorExpression, Permutation]:
    """Move every transposition to the acting-first end.

    Returns ``(core, residue)`` with ``expr == residue, then core``: applying
    ``expr`` to a state equals permuting it by ``residue`` and then applying
    ``core``.  Passing ``P_{ij}`` across a core factor relabels that factor's
    slots by the transposition, e.g. ``P_{34} R_{123} = R_{124} P_{34}``.
    """
    L = expr.ambient_length
    images = list(range(1, L + 1))
    core: list[IndexedOperator] = []
    residue = Permutation.identity(L)
    for f in reversed(expr.factors):
        if f.kind == "P":
            i, j = f.indices
            images[i - 1], images[j - 1] = images[j - 1], images[i - 1]
            residue = Permutation.transposition(L, i, j).then(residue)
        else:
            core.append(f.relabel(images))
    core.reverse()
    return OperatorExpression(tuple(core), L), residue


def simplify_involutions(expr: OperatorExpression) -> OperatorExpression:
    """Apply ``X^{-1} = X`` and ``R_{ijk} = R_{kji}`` (first index below last)."""

    def simp(f: IndexedOperator) -> IndexedOperator:
        f = IndexedOperator(f.kind, f.indices, False)
        if f.kind in ("R", "S") and f.indices[0] > f.indices[-1]:
            f = f.reversed()
        return f

    return expr.map(simp)


def symmetrize(expr: OperatorExpression) -> OperatorExpression:
    """Every core operator becomes an involution invariant under slot reversal."""
    return expr.map(lambda f: IndexedOperator(f.kind, tuple(sorted(f.indices))))


# ---------------------------------------------------------------- mirror route


def mirror_move(ctype: str | CoxeterType, move: MoveLabel, length: int) -> MoveLabel:
    """The move joining the twisted reversals of a move's endpoints, target to source."""
    ct = coxeter_type(ctype)
    tw = w0_twist(ct)
    i, j = move.letters
    if move.width % 2:
        letters = (tw[j - 1], tw[i - 1])
    else:
        letters = (tw[i - 1], tw[j - 1])
    return make_move(ct, length - move.position - move.width + 2, letters)


def mirror_trace(ctype: str | CoxeterType, trace: MoveTrace) -> MoveTrace:
    """Second route between the same endpoints, through the reversed words."""
    ct = coxeter_type(ctype)
    if trace.end != twisted_reversal(ct, trace.start):
        raise ValueError("trace endpoints are not reversals of each other")
    L = len(trace.start)
    steps = tuple(mirror_move(ct, mv, L) for mv in reversed(trace.steps))
    return MoveTrace(twisted_reversal(ct, trace.end), steps, twisted_reversal(ct, trace.start))


# ---------------------------------------------------------------- equations


@dataclass(frozen=True)
class Equation:
    type_name: str
    lhs: OperatorExpression
    rhs: OperatorExpression
    residues: tuple[Permutation, Permutation]

    @property
    def ambient_length(self) -> int:
        return self.lhs.ambient_length

    def swapped(self) -> Equation:
        return Equation(self.type_name, self.rhs, self.lhs, self.residues[::-1])

    def render(self) -> str:
        return f"{self.lhs.render()} = {self.rhs.render()}"

    def latex(self) -> str:
        return f"{self.lhs.latex()} = {self.rhs.latex()}"

    def to_json(self) -> dict:
        return {
            "type": self.type_name,
            "ambient_length": self.ambient_length,
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
        }

    @classmethod
    def from_json(cls, d: dict) -> Equation:
        L = d["ambient_length"]
        side = lambda fs: OperatorExpression(tuple(IndexedOperator.from_json(f) for f in fs), L)  # noqa: E731
        rev = Permutation.reversal(L)
        return cls(d["type"], side(d["lhs"]), side(d["rhs"]), (rev, rev))

    def check_invariants(self) -> None:
        if self.residues[0] != self.residues[1]:
            raise DerivationError("residual permutations differ")
        key = lambda f: (f.kind, tuple(sorted(f.indices)))  # noqa: E731
        if sorted(map(key, self.lhs)) != sorted(map(key, self.rhs)):
            raise DerivationError("the two sides carry different factors")


def equate_routes(ctype: str | CoxeterType, first: MoveTrace, second: MoveTrace) -> Equation:
    """Equation from two routes with common endpoints."""
    ct = coxeter_type(ctype)
    if first.start != second.start or first.end != second.end:
        raise ValueError("routes do not share endpoints")
    lhs, res_l = normalize(trace_to_expression(ct, first))
    rhs, res_r = normalize(trace_to_expression(ct, second))
    if res_l != res_r:
        raise DerivationError(f"residues differ: {res_l} vs {res_r}")
    if assignment(ct).involutive:
        lhs, rhs = simplify_involutions(lhs), simplify_involutions(rhs)
    return Equation(ct.name, lhs, rhs, (res_l, res_r))


def derive_equation(ctype: str | CoxeterType, trace: MoveTrace) -> Equation:
    """Equate a route ``w -> reversal(w)`` with its mirror route."""
    ct = coxeter_type(ctype)
    eq = equate_routes(ct, trace, mirror_trace(ct, trace))
    if not eq.residues[0].is_reversal():
        raise DerivationError(f"residue {eq.residues[0]} is not the full slot reversal")
    eq.check_invariants()
    return eq


def index_flip_f4(eq: Equation) -> Equation:
    """Swap R and S and reverse K's indices, the effect of letters ``i -> 5-i``."""
    if eq.type_name != "F4":
        raise ValueError("index flip is defined for F4 equations only")

    def flip(f: IndexedOperator) -> IndexedOperator:
        if f.kind == "R":
            return IndexedOperator("S", f.indices, f.inverted)
        if f.kind == "S":
            return IndexedOperator("R", f.indices, f.inverted)
        if f.kind == "K":
            return f.reversed()
        return f

    return Equation(eq.type_name, eq.lhs.map(flip), eq.rhs.map(flip), eq.residues)


def flip_trace_f4(trace: MoveTrace) -> MoveTrace:
    """Apply ``i -> 5-i`` to every word of an F4 trace."""
    f = lambda w: tuple(5 - c for c in w)  # noqa: E731
    steps = tuple(make_move("F4", mv.position, (5 - mv.letters[0], 5 - mv.letters[1])) for mv in trace.steps)
    return MoveTrace(f(trace.start), steps, f(trace.end))


def commutation_equivalent(a: Sequence[IndexedOperator] | OperatorExpression,
                           b: Sequence[IndexedOperator] | OperatorExpression) -> bool:
    """Whether ``b`` is reachable from ``a`` by swapping adjacent disjoint factors.

    With pairwise-distinct factors this holds iff both carry the same factors
    and every pair whose relative order differs acts on disjoint slots.
    """
    a, b = list(a), list(b)
    sa = [f.signature for f in a]
    sb = [f.signature for f in b]
    if len(set(sa)) != len(sa) or len(set(sb)) != len(sb):
        raise ValueError("commutation check needs pairwise-distinct factors")
    if set(sa) != set(sb):
        return False
    pos = {s: k for k, s in enumerate(sb)}
    order = [pos[s] for s in sa]
    for x in range(len(a)):
        for y in range(x + 1, len(a)):
            if order[x] > order[y] and a[x].index_set & a[y].index_set:
                return False
    return True


def equations_match(derived: Equation, reference: Equation) -> bool:
    """Both sides agree up to commutation of disjoint factors."""
    return commutation_equivalent(derived.lhs, reference.lhs) and commutation_equivalent(
        derived.rhs, reference.rhs
    )
