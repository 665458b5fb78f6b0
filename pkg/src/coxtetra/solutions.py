"""Set-level maps for R, S and K on tuples of naturals, and equation checks.

``r_map`` serves both R and S.  ``k_map`` acts on four slots read in listed
order; for a descending index list this coincides with conjugating the
ascending map by ``P_{il} P_{jk}``.  The three maps are involutions, so the
``inverted`` flag is ignored for them.
"""
from __future__ import annotations

import itertools
import time
import zlib
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .calculus import Equation
from .coxeter import ResourceLimitError
from .operators import IndexedOperator, OperatorExpression

NatState = tuple[int, ...]

DEFAULT_EXHAUSTIVE_CAP = 10**8
DEFAULT_SEED = 1
_CHUNK = 1 << 16


class UnsupportedOperatorError(ValueError):
    """An operator has no set-level map (Y without a registered candidate)."""


class DomainTooLargeError(ResourceLimitError):
    """An exhaustive check would exceed the operator-application budget."""


def _pos(x: int) -> int:
    return x if x > 0 else 0


def r_map(a: int, b: int, c: int) -> tuple[int, int, int]:
    return (b + _pos(a - c), min(a, c), b + _pos(c - a))


def k_map(a: int, b: int, c: int, d: int) -> tuple[int, int, int, int]:
    x = _pos(c - a + _pos(d - b))
    m = min(a, c + x)
    out = (x + a + b - d, c - x + d - m, m, b + _pos(c + x - a))
    assert min(out) >= 0, f"k_map produced a negative entry from {(a, b, c, d)}"
    return out


# ---------------------------------------------------------------- candidate Y


@dataclass(frozen=True)
class CandidateY:
    """A map on 5-tuples over a finite carrier, used wherever Y occurs.

    With ``symmetric`` set, ``Y^{-1} = Y`` is assumed; otherwise the map must
    be a bijection and its inverse evaluates ``Y^{-1}``.
    """

    carrier: tuple[int, ...]
    forward: dict
    inverse: dict | None
    symmetric: bool

    def __call__(self, values: Sequence[int], inverted: bool = False) -> tuple[int, ...]:
        table = self.inverse if inverted and not self.symmetric else self.forward
        return table[tuple(values)]

    @property
    def top(self) -> int:
        return max(self.carrier)


def register_candidate_y(f: Callable[[tuple[int, ...]], Sequence[int]], carrier: Iterable[int], *,
                         symmetric: bool = False) -> CandidateY:
    """Tabulate ``f`` on ``carrier^5``; non-symmetric use requires a bijection."""
    carrier = tuple(sorted(set(int(c) for c in carrier)))
    if not carrier or carrier[0] < 0:
        raise ValueError("carrier must be a non-empty set of naturals")
    cset = set(carrier)
    forward = {}
    for x in itertools.product(carrier, repeat=5):
        y = tuple(int(v) for v in f(x))
        if len(y) != 5 or not set(y) <= cset:
            raise ValueError(f"candidate maps {x} to {y}, outside the carrier")
        forward[x] = y
    inverse = None
    if not symmetric:
        inverse = {y: x for x, y in forward.items()}
        if len(inverse) != len(forward):
            raise ValueError("candidate Y is not a bijection, so Y^{-1} is undefined")
    return CandidateY(carrier, forward, inverse, symmetric)


# ---------------------------------------------------------------- models


@dataclass(frozen=True)
class SetModel:
    """Which maps evaluate each operator kind.

    ``clamp`` caps R/S/K outputs so that finite carriers stay closed.
    """

    candidate_y: CandidateY | None = None
    clamp: int | None = None

    @classmethod
    def for_candidate(cls, cand: CandidateY) -> SetModel:
        return cls(cand, cand.top)


STANDARD = SetModel()


def apply_operator(op: IndexedOperator, state: Sequence[int], model: SetModel = STANDARD) -> NatState:
    idx = [i - 1 for i in op.indices]
    if max(idx) >= len(state):
        raise ValueError(f"{op} exceeds a state of length {len(state)}")
    vals = [state[i] for i in idx]
    if op.kind == "P":
        new = vals[::-1]
    elif op.kind in ("R", "S"):
        new = r_map(*vals)
    elif op.kind == "K":
        new = k_map(*vals)
    elif op.kind == "Y":
        if model.candidate_y is None:
            raise UnsupportedOperatorError("Y has no set-level map; register a candidate first")
        new = model.candidate_y(vals, op.inverted)
    else:  # pragma: no cover - kinds are validated on construction
        raise UnsupportedOperatorError(op.kind)
    if model.clamp is not None and op.kind in ("R", "S", "K"):
        new = [min(v, model.clamp) for v in new]
    out = list(state)
    for i, v in zip(idx, new):
        out[i] = v
    return tuple(out)


def eval_expression(expr: OperatorExpression | Iterable[IndexedOperator], state: Sequence[int],
                    model: SetModel = STANDARD) -> NatState:
    s = tuple(state)
    for op in expr:
        s = apply_operator(op, s, model)
    return s


# ---------------------------------------------------------------- batched evaluation


def _r_cols(a, b, c):
    return b + np.maximum(a - c, 0), np.minimum(a, c), b + np.maximum(c - a, 0)


def _k_cols(a, b, c, d):
    x = np.maximum(c - a + np.maximum(d - b, 0), 0)
    m = np.minimum(a, c + x)
    out = (x + a + b - d, c - x + d - m, m, b + np.maximum(c + x - a, 0))
    assert all((o >= 0).all() for o in out), "k_map produced a negative entry"
    return out


class _YTable:
    def __init__(self, cand: CandidateY) -> None:
        self.carrier = np.array(cand.carrier, dtype=np.int64)
        base = len(cand.carrier)
        self.index = {v: k for k, v in enumerate(cand.carrier)}
        self.lut = np.full(max(cand.carrier) + 1, -1, dtype=np.int64)
        self.lut[self.carrier] = np.arange(base)
        self.weights = base ** np.arange(4, -1, -1)
        size = base**5
        self.fwd = np.empty((size, 5), dtype=np.int64)
        self.inv = np.empty((size, 5), dtype=np.int64)
        for x, y in cand.forward.items():
            self.fwd[self._code(x)] = y
            if cand.inverse is not None:
                self.inv[self._code(y)] = x
        if cand.symmetric:
            self.inv = self.fwd

    def _code(self, x) -> int:
        return int(sum(self.index[v] * int(w) for v, w in zip(x, self.weights)))

    def apply(self, cols: np.ndarray, inverted: bool) -> np.ndarray:
        if cols.max(initial=0) >= len(self.lut) or (self.lut[cols] < 0).any():
            raise ValueError("state leaves the carrier of the candidate Y")
        codes = self.lut[cols] @ self.weights
        return (self.inv if inverted else self.fwd)[codes]


def eval_batch(expr: OperatorExpression | Iterable[IndexedOperator], states: np.ndarray,
               model: SetModel = STANDARD) -> np.ndarray:
    """Evaluate on every row of an ``(N, L)`` integer array."""
    s = np.array(states, dtype=np.int64, copy=True)
    ytab = _YTable(model.candidate_y) if model.candidate_y is not None else None
    for op in expr:
        idx = [i - 1 for i in op.indices]
        if op.kind == "P":
            s[:, idx] = s[:, idx[::-1]]
            continue
        if op.kind == "Y":
            if ytab is None:
                raise UnsupportedOperatorError("Y has no set-level map; register a candidate first")
            s[:, idx] = ytab.apply(s[:, idx], op.inverted)
            continue
        cols = [s[:, i] for i in idx]
        new = _r_cols(*cols) if op.kind in ("R", "S") else _k_cols(*cols)
        for i, v in zip(idx, new):
            s[:, i] = v if model.clamp is None else np.minimum(v, model.clamp)
    return s


# ---------------------------------------------------------------- verification


@dataclass(frozen=True)
class DomainSpec:
    """Exhaustive grid ``values^L`` or seeded uniform samples in ``0..max_value``."""

    mode: str
    bound: int = 0
    count: int = 0
    max_value: int = 0
    seed: int = DEFAULT_SEED
    values: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.mode not in ("exhaustive", "sampled"):
            raise ValueError(f"unknown domain mode {self.mode!r}")
        if self.mode == "exhaustive" and self.values is None and self.bound < 0:
            raise ValueError("bound must be non-negative")
        if self.mode == "sampled" and (self.count < 1 or self.max_value < 0):
            raise ValueError("sampled domain needs count >= 1 and max_value >= 0")

    @classmethod
    def exhaustive(cls, bound: int) -> DomainSpec:
        return cls("exhaustive", bound=bound)

    @classmethod
    def over(cls, values: Iterable[int]) -> DomainSpec:
        vals = tuple(sorted(set(values)))
        return cls("exhaustive", bound=max(vals), values=vals)

    @classmethod
    def sampled(cls, count: int, max_value: int, seed: int = DEFAULT_SEED) -> DomainSpec:
        return cls("sampled", count=count, max_value=max_value, seed=seed)

    def grid_values(self) -> tuple[int, ...]:
        return self.values if self.values is not None else tuple(range(self.bound + 1))

    def size(self, length: int) -> int:
        if self.mode == "sampled":
            return self.count
        return len(self.grid_values()) ** length

    def describe(self) -> dict:
        if self.mode == "sampled":
            return {"mode": "sampled", "count": self.count, "max_value": self.max_value, "seed": self.seed}
        return {"mode": "exhaustive", "values": list(self.grid_values())}


def sample_generator(seed: int, stream: str) -> np.random.Generator:
    """Independent reproducible stream per named job under one seed."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(zlib.crc32(stream.encode()),)))


def _grid_chunks(values: Sequence[int], length: int) -> Iterable[np.ndarray]:
    vals = np.asarray(values, dtype=np.int64)
    base = len(vals)
    total = base**length
    place = base ** np.arange(length - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, _CHUNK):
        n = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        yield vals[(n[:, None] // place) % base]


def domain_chunks(dom: DomainSpec, length: int, stream: str) -> Iterable[np.ndarray]:
    if dom.mode == "exhaustive":
        yield from _grid_chunks(dom.grid_values(), length)
        return
    rng = sample_generator(dom.seed, stream)
    left = dom.count
    while left:
        n = min(left, _CHUNK)
        yield rng.integers(0, dom.max_value + 1, size=(n, length), dtype=np.int64)
        left -= n


@dataclass
class VerificationReport:
    equation_id: str
    domain: dict
    states_tested: int
    failures: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self, *, include_timing: bool = False, max_failures: int | None = None) -> dict:
        fails = self.failures if max_failures is None else self.failures[:max_failures]
        out = {
            "equation": self.equation_id,
            "domain": self.domain,
            "states_tested": self.states_tested,
            "passed": self.passed,
            "failure_count": len(self.failures),
            "failures": [{"input": list(a), "lhs": list(b), "rhs": list(c)} for a, b, c in fails],
        }
        if include_timing:
            out["elapsed_seconds"] = round(self.elapsed, 3)
        return out


def verify_equation(eq: Equation, dom: DomainSpec, *, equation_id: str | None = None,
                    model: SetModel = STANDARD, cap: int = DEFAULT_EXHAUSTIVE_CAP) -> VerificationReport:
    """Compare both sides as maps on every state of the domain."""
    L = eq.ambient_length
    eid = equation_id or eq.type_name
    cost = dom.size(L) * (len(eq.lhs) + len(eq.rhs))
    if dom.mode == "exhaustive" and cost > cap:
        raise DomainTooLargeError(
            f"exhaustive check of {eid} needs {cost} operator applications (cap {cap}); use sampled mode"
        )
    t0 = time.perf_counter()
    failures = []
    tested = 0
    for chunk in domain_chunks(dom, L, eid):
        left = eval_batch(eq.lhs, chunk, model)
        right = eval_batch(eq.rhs, chunk, model)
        bad = np.nonzero((left != right).any(axis=1))[0]
        for k in bad:
            failures.append((tuple(map(int, chunk[k])), tuple(map(int, left[k])), tuple(map(int, right[k]))))
        tested += len(chunk)
    failures.sort()
    return VerificationReport(eid, dom.describe(), tested, failures, time.perf_counter() - t0)


def verify_candidate(eq: Equation, cand: CandidateY, *, equation_id: str | None = None,
                     cap: int = DEFAULT_EXHAUSTIVE_CAP) -> VerificationReport:
    """Exhaustive check of an equation with Y from ``cand`` and R, S, K clamped to its carrier."""
    return verify_equation(eq, DomainSpec.over(cand.carrier), equation_id=equation_id,
                           model=SetModel.for_candidate(cand), cap=cap)


# ---------------------------------------------------------------- worked chains


def reflection_equation(family: str) -> Equation:
    from .reference import load_equation

    fam = family.upper()
    if fam not in ("B", "C"):
        raise ValueError(f"family must be B or C, got {family!r}")
    return load_equation("reflection_b3" if fam == "B" else "reflection_c3")


def chain(ops: Iterable[IndexedOperator], state: Sequence[int]) -> list[NatState]:
    """Every state along the way, input included."""
    out = [tuple(state)]
    for op in ops:
        out.append(apply_operator(op, out[-1]))
    return out


def figure3_chains(family: str, state: Sequence[int]) -> tuple[list[NatState], list[NatState]]:
    """Step-by-step evaluation of both sides of the B3 or C3 reflection equation."""
    if len(state) != 9:
        raise ValueError("reflection chains act on 9-tuples")
    eq = reflection_equation(family)
    return chain(eq.lhs, state), chain(eq.rhs, state)


def parse_state(text: str) -> NatState:
    """``211202341`` (single digits) or ``2,1,1,...`` (comma separated)."""
    text = text.strip().strip("()")
    if "," in text:
        return tuple(int(x) for x in text.split(","))
    if not text.isdigit():
        raise ValueError(f"not a state: {text!r}")
    return tuple(int(c) for c in text)


def format_state(state: Sequence[int]) -> str:
    if all(v < 10 for v in state):
        return "(" + "".join(map(str, state)) + ")"
    return "(" + ",".join(map(str, state)) + ")"
