"""Check that the F4 equation factors into B3 and C3 reflection equations.

The 50 left-side factors of the F4 equation are labelled 1..50 in written
order.  A proof script lists 24 label arrays ``Y_i``, each with a window of
seven consecutive positions.  Going from ``X_i`` to ``Y_i`` may only swap
factors on disjoint slots; going from ``Y_i`` to ``X_{i+1}`` reverses the
window, which must be one side of the B3 or C3 reflection equation, up to a
cyclic rotation, after an injective renaming of its nine slots.  Rotations are
admissible because every factor is an involution: from ``Z7...Z1 = Z1...Z7``
one gets ``Z6...Z1 Z7 = Z7 Z1...Z6``, again a reversal of seven factors.
``X_24`` must reach the label-reversed ``X_0`` by commutations alone.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Sequence

import numpy as np

from .calculus import Equation, commutation_equivalent
from .operators import IndexedOperator
from .reference import decomposition_fixture_text, load_equation
from .solutions import eval_batch, sample_generator

WINDOW = 7
STAGES = 24
FAMILIES = {"C3": "reflection_c3", "B3": "reflection_b3"}


class ProofScriptError(ValueError):
    """The proof script is malformed or one of its steps is invalid."""


@dataclass(frozen=True)
class LabeledFactor:
    label: int
    operator: IndexedOperator


@dataclass(frozen=True)
class Stage:
    Y: tuple[int, ...]
    window: tuple[int, ...]
    family: str


@dataclass(frozen=True)
class ProofScript:
    stages: tuple[Stage, ...]

    def __len__(self) -> int:
        return len(self.stages)


def factor_table(eq: Equation | None = None) -> dict[int, LabeledFactor]:
    """Label the written-order left side of the F4 equation by 1..50."""
    eq = eq or load_equation("f4")
    written = eq.lhs.written()
    return {k: LabeledFactor(k, f) for k, f in enumerate(written, 1)}


def _validate_stage(k: int, raw: dict, n: int) -> Stage:
    try:
        Y, window, family = tuple(raw["Y"]), tuple(raw["window"]), raw["family"]
    except (KeyError, TypeError) as exc:
        raise ProofScriptError(f"stage {k}: malformed record ({exc})") from None
    if sorted(Y) != list(range(1, n + 1)):
        raise ProofScriptError(f"stage {k}: Y is not a permutation of labels 1..{n}")
    if len(window) != WINDOW or list(window) != list(range(window[0], window[0] + WINDOW)):
        raise ProofScriptError(f"stage {k}: window {window} is not {WINDOW} consecutive positions")
    if window[0] < 1 or window[-1] > n:
        raise ProofScriptError(f"stage {k}: window {window} outside 1..{n}")
    if family not in FAMILIES:
        raise ProofScriptError(f"stage {k}: unknown family {family!r}")
    return Stage(Y, window, family)


def parse_proof_script(text: str, n_labels: int = 50) -> ProofScript:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProofScriptError(f"proof script is not valid JSON: {exc}") from None
    records = data["stages"] if isinstance(data, dict) and "stages" in data else data
    if not isinstance(records, list):
        raise ProofScriptError("proof script must be a list of stages")
    stages = tuple(_validate_stage(k, r, n_labels) for k, r in enumerate(records))
    if len(stages) != STAGES:
        raise ProofScriptError(f"expected {STAGES} stages, found {len(stages)}")
    return ProofScript(stages)


def load_proof_script(path: str | Path | None = None) -> ProofScript:
    text = decomposition_fixture_text() if path is None else Path(path).read_text(encoding="utf-8")
    return parse_proof_script(text)


# ---------------------------------------------------------------- stage checks


def _ops(labels: Sequence[int], table: dict[int, LabeledFactor]) -> list[IndexedOperator]:
    return [table[l].operator for l in labels]


def blocking_pair(x: Sequence[int], y: Sequence[int], table: dict[int, LabeledFactor]) -> tuple[int, int] | None:
    """First pair of labels that changes order while sharing a slot, if any."""
    pos = {l: k for k, l in enumerate(y)}
    for a in range(len(x)):
        for b in range(a + 1, len(x)):
            la, lb = x[a], x[b]
            if pos[la] > pos[lb] and table[la].operator.index_set & table[lb].operator.index_set:
                return la, lb
    return None


def check_stage(x: Sequence[int], y: Sequence[int], table: dict[int, LabeledFactor] | None = None) -> bool:
    """Whether ``y`` follows from ``x`` by swapping factors on disjoint slots."""
    table = table or factor_table()
    if sorted(x) != sorted(y):
        raise ProofScriptError("label arrays are not permutations of each other")
    return commutation_equivalent(_ops(x, table), _ops(y, table))


def _signature(ops: Sequence[IndexedOperator]) -> tuple:
    return tuple((f.kind, len(f.indices)) for f in ops)


def _rename(pattern: Sequence[IndexedOperator], actual: Sequence[IndexedOperator]) -> dict | None:
    """Injective slot renaming taking ``pattern`` onto ``actual``.

    K index lists must correspond in order; R and S may also match reversed,
    since they are invariant under index reversal.
    """

    def extend(k: int, mapping: dict, used: set) -> dict | None:
        if k == len(pattern):
            return mapping
        p, a = pattern[k], actual[k]
        options = [a.indices]
        if a.kind in ("R", "S") and a.indices[::-1] != a.indices:
            options.append(a.indices[::-1])
        for target in options:
            m, u, ok = dict(mapping), set(used), True
            for s, t in zip(p.indices, target):
                if s in m:
                    ok = m[s] == t
                elif t in u:
                    ok = False
                else:
                    m[s] = t
                    u.add(t)
                if not ok:
                    break
            if ok:
                found = extend(k + 1, m, u)
                if found is not None:
                    return found
        return None

    if _signature(pattern) != _signature(actual):
        return None
    return extend(0, {}, set())


@lru_cache(maxsize=None)
def reflection_patterns() -> tuple[tuple[str, str, int, tuple[IndexedOperator, ...]], ...]:
    """Every rotation of each side of the two reflection equations, in written order."""
    out = []
    for family, name in FAMILIES.items():
        eq = load_equation(name)
        for side, expr in (("lhs", eq.lhs), ("rhs", eq.rhs)):
            w = expr.written()
            for r in range(len(w)):
                out.append((family, side, r, w[r:] + w[:r]))
    return tuple(out)


def match_reflection(ops: Sequence[IndexedOperator]) -> list[tuple[str, str, int, dict]]:
    """All (family, side, rotation, renaming) under which seven factors form a reflection side."""
    ops = list(ops)
    if len(ops) != WINDOW:
        return []
    out = []
    for family, side, rot, pattern in reflection_patterns():
        m = _rename(pattern, ops)
        if m is not None:
            out.append((family, side, rot, m))
    return out


def check_reflection_window(y: Sequence[int], window: Sequence[int],
                            table: dict[int, LabeledFactor] | None = None) -> tuple[str, tuple[int, ...]]:
    """Family of the reflection equation used at ``window`` and the array after reversing it."""
    table = table or factor_table()
    window = tuple(window)
    if len(window) != WINDOW or list(window) != list(range(window[0], window[0] + WINDOW)):
        raise ProofScriptError(f"window {window} is not {WINDOW} consecutive positions")
    a, b = window[0] - 1, window[-1]
    labels = list(y[a:b])
    matches = match_reflection(_ops(labels, table))
    if not matches:
        shown = " ".join(str(f) for f in _ops(labels, table))
        raise ProofScriptError(f"window {window} ({shown}) matches no reflection equation")
    families = {m[0] for m in matches}
    if len(families) > 1:
        raise ProofScriptError(f"window {window} matches both families")
    x_next = tuple(y[:a]) + tuple(labels[::-1]) + tuple(y[b:])
    return matches[0][0], x_next


def other_windows(y: Sequence[int], table: dict[int, LabeledFactor]) -> list[int]:
    """Start positions of every 7-window of ``y`` that matches a reflection pattern."""
    return [s + 1 for s in range(len(y) - WINDOW + 1) if match_reflection(_ops(y[s:s + WINDOW], table))]


# ---------------------------------------------------------------- full run


@dataclass
class DecompositionReport:
    stages_validated: int = 0
    commutation_steps_validated: int = 0
    c3_count: int = 0
    b3_count: int = 0
    final_is_reverse: bool = False
    semantic_states: int = 0
    semantic_seed: int = 1
    semantic_failures: list = field(default_factory=list)
    ambiguous_stages: list = field(default_factory=list)
    windows: list = field(default_factory=list)
    failed_stage: int | None = None
    error: str | None = None

    @property
    def passed(self) -> bool:
        return (
            self.error is None
            and self.final_is_reverse
            and self.c3_count == STAGES // 2
            and self.b3_count == STAGES // 2
            and not self.semantic_failures
        )

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "stages_validated": self.stages_validated,
            "commutation_steps_validated": self.commutation_steps_validated,
            "c3_count": self.c3_count,
            "b3_count": self.b3_count,
            "final_is_reverse": self.final_is_reverse,
            "semantic_states": self.semantic_states,
            "semantic_seed": self.semantic_seed,
            "semantic_failures": self.semantic_failures,
            "ambiguous_stages": self.ambiguous_stages,
            "windows": self.windows,
            "failed_stage": self.failed_stage,
            "error": self.error,
        }


def _semantic_check(ops: list[IndexedOperator], states: np.ndarray) -> int:
    # written order -> application order for the window and for its reversal
    left = eval_batch(ops[::-1], states)
    right = eval_batch(ops, states)
    return int((left != right).any(axis=1).sum())


def verify_theorem(script: ProofScript | None = None, *, semantic_states: int = 100, seed: int = 1,
                   max_value: int = 4, eq: Equation | None = None) -> DecompositionReport:
    """Run ``X_0 -> Y_0 -> X_1 -> ... -> X_24 -> reverse(X_0)``, stopping at the first bad stage."""
    script = script or load_proof_script()
    table = factor_table(eq)
    rep = DecompositionReport(semantic_states=semantic_states, semantic_seed=seed)
    sets = [f.operator.index_set for f in table.values()]
    if len(set(sets)) != len(sets):
        rep.error = "F4 factors do not have pairwise-distinct index sets"
        return rep
    x0 = tuple(sorted(table))
    x = x0
    L = max(max(f.operator.indices) for f in table.values())
    for k, stage in enumerate(script.stages):
        try:
            if not check_stage(x, stage.Y, table):
                la, lb = blocking_pair(x, stage.Y, table)
                raise ProofScriptError(
                    f"X_{k} -> Y_{k} swaps labels {la} and {lb}, which share slots "
                    f"({table[la].operator} / {table[lb].operator})"
                )
            rep.commutation_steps_validated += 1
            family, x_next = check_reflection_window(stage.Y, stage.window, table)
            if family != stage.family:
                raise ProofScriptError(f"window is a {family} pattern but the script says {stage.family}")
        except ProofScriptError as exc:
            rep.failed_stage, rep.error = k, f"stage {k}: {exc}"
            return rep
        ops = _ops(stage.Y[stage.window[0] - 1:stage.window[-1]], table)
        fam, side, rot, _ = match_reflection(ops)[0]
        rep.windows.append({"stage": k, "start": stage.window[0], "family": fam, "side": side, "rotation": rot})
        starts = other_windows(stage.Y, table)
        if starts != [stage.window[0]]:
            rep.ambiguous_stages.append({"stage": k, "matching_starts": starts})
        if semantic_states:
            states = sample_generator(seed, f"decomposition-stage-{k}").integers(
                0, max_value + 1, size=(semantic_states, L), dtype=np.int64
            )
            bad = _semantic_check(ops, states)
            if bad:
                rep.semantic_failures.append({"stage": k, "mismatches": bad})
        rep.c3_count += family == "C3"
        rep.b3_count += family == "B3"
        rep.stages_validated += 1
        x = x_next
    final = x0[::-1]
    try:
        rep.final_is_reverse = check_stage(x, final, table)
    except ProofScriptError as exc:
        rep.error = f"final step: {exc}"
        return rep
    if rep.final_is_reverse:
        rep.commutation_steps_validated += 1
    else:
        la, lb = blocking_pair(x, final, table)
        rep.error = f"X_{STAGES} does not commute to the reverse of X_0 (labels {la}, {lb})"
    return rep
