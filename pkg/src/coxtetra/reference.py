"""Loaders for the transcribed reference data shipped in ``coxtetra/fixtures``."""
from __future__ import annotations

import json
from importlib import resources

from .calculus import Equation, MoveTrace, trace_from_listing, trace_from_path
from .coxeter import coxeter_type
from .operators import OperatorExpression, Permutation, parse_product

EQUATION_FILES = {
    "tetrahedron": "tetrahedron.txt",
    "reflection_c3": "reflection_c3.txt",
    "reflection_b3": "reflection_b3.txt",
    "f4": "f4.txt",
    "h3": "h3.txt",
    "h3_symmetric": "h3_symmetric.txt",
}

# reference equation for each type with a built-in route
TYPE_EQUATION = {"A3": "tetrahedron", "C3": "reflection_c3", "B3": "reflection_b3", "F4": "f4", "H3": "h3"}

_ROUTES = {
    "A3": ("path", "a3_route.txt"),
    "B3": ("path", "bc3_route.txt"),
    "C3": ("path", "bc3_route.txt"),
    "F4": ("listing", "f4_route.txt"),
    "H3": ("listing", "h3_route.txt"),
}


def fixture_text(name: str) -> str:
    return resources.files("coxtetra").joinpath("fixtures", name).read_text(encoding="utf-8")


def _fields(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    key = None
    for raw in text.splitlines():
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        if raw[0].isspace():
            if key is None:
                raise ValueError(f"continuation line before any key: {raw!r}")
            out[key] += " " + raw.strip()
            continue
        key, sep, value = raw.partition(":")
        if not sep:
            raise ValueError(f"malformed fixture line: {raw!r}")
        key = key.strip()
        out[key] = value.strip()
    return out


def parse_equation_text(text: str) -> tuple[Equation, tuple[str, ...] | None]:
    """Parse the ``key: value`` equation format; returns the equation and slot metadata."""
    f = _fields(text)
    for k in ("type", "ambient_length", "lhs", "rhs"):
        if k not in f:
            raise ValueError(f"equation fixture lacks {k!r}")
    L = int(f["ambient_length"])
    lhs = parse_product(f["lhs"], L)
    if f["rhs"] == "reverse":
        rhs = OperatorExpression(lhs.factors[::-1], L)
    else:
        rhs = parse_product(f["rhs"], L)
    slots = tuple(f["slots"].split()) if "slots" in f else None
    if slots is not None and len(slots) != L:
        raise ValueError("slot metadata does not cover every slot")
    rev = Permutation.reversal(L)
    return Equation(coxeter_type(f["type"]).name, lhs, rhs, (rev, rev)), slots


def load_equation(name: str) -> Equation:
    if name not in EQUATION_FILES:
        raise KeyError(f"unknown equation {name!r}; known: {', '.join(EQUATION_FILES)}")
    return parse_equation_text(fixture_text(EQUATION_FILES[name]))[0]


def equation_slots(name: str) -> tuple[str, ...] | None:
    return parse_equation_text(fixture_text(EQUATION_FILES[name]))[1]


def load_route(ctype: str) -> MoveTrace:
    """Built-in route from the seed word to its (twisted) reversal."""
    name = coxeter_type(ctype).name
    if name not in _ROUTES:
        raise KeyError(f"no built-in route for {name}")
    fmt, fname = _ROUTES[name]
    lines = fixture_text(fname).splitlines()
    if fmt == "listing":
        return trace_from_listing(name, lines)
    words = [ln.split("#", 1)[0].strip() for ln in lines]
    return trace_from_path(name, [tuple(int(c) for c in w) for w in words if w])


def load_figure3() -> dict:
    data = json.loads(fixture_text("figure3.json"))
    data.pop("_comment", None)
    return data


def decomposition_fixture_text() -> str:
    return fixture_text("decomposition.json")
