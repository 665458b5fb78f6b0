"""Command-line entry point: ``coxtetra {rex,derive,verify,figure3,decompose}``.

Exit codes: 0 pass, 1 verification failure, 2 usage error, 3 resource cap.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from .calculus import (
    Equation,
    derive_equation,
    equations_match,
    flip_trace_f4,
    index_flip_f4,
    symmetrize,
)
from .coxeter import TYPES, ResourceLimitError, rex_graph
from .decomposition import ProofScriptError, load_proof_script, verify_theorem
from .reference import TYPE_EQUATION, load_equation, load_route
from .solutions import (
    DEFAULT_SEED,
    DomainSpec,
    SetModel,
    UnsupportedOperatorError,
    eval_batch,
    figure3_chains,
    format_state,
    parse_state,
    reflection_equation,
    register_candidate_y,
    sample_generator,
    verify_candidate,
    verify_equation,
)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3

VERIFY_TARGETS = {
    "tetra": "tetrahedron",
    "c3": "reflection_c3",
    "b3": "reflection_b3",
    "f4": "f4",
    "h3": "h3",
    "h3-sym": "h3_symmetric",
}


class UsageError(Exception):
    pass


@dataclass
class Outcome:
    payload: dict
    text: str
    code: int


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


# ---------------------------------------------------------------- rex


def cmd_rex(args) -> Outcome:
    g = rex_graph(args.type, max_vertices=args.max_vertices)
    summary = g.summary()
    if args.export and not args.count_only:
        with open(args.export, "w", encoding="utf-8") as fh:
            g.write_edges(fh)
        summary["export"] = args.export
    text = f"{summary['type']} seed={summary['seed']} vertices={summary['vertex_count']} edges={summary['edge_count']}"
    return Outcome(summary, text, EXIT_PASS)


# ---------------------------------------------------------------- derive


def _semantic_equal(a: Equation, b: Equation, states: int, seed: int) -> bool:
    """Both equations' sides agree as set maps on random states."""
    L = a.ambient_length
    s = sample_generator(seed, f"derive-{a.type_name}").integers(0, 5, size=(states, L), dtype=np.int64)
    return bool(
        (eval_batch(a.lhs, s) == eval_batch(b.lhs, s)).all() and (eval_batch(a.rhs, s) == eval_batch(b.rhs, s)).all()
    )


def derive_checked(type_name: str, *, flip: bool = False, symmetric: bool = False,
                   states: int = 1000, seed: int = DEFAULT_SEED) -> tuple[Equation, dict]:
    """Derive from the built-in route and compare with the transcribed equation."""
    type_name = type_name.upper()
    if type_name not in TYPE_EQUATION:
        raise UsageError(f"no built-in route for {type_name}; choose from {', '.join(TYPE_EQUATION)}")
    if flip and type_name != "F4":
        raise UsageError("--flip applies to F4 only")
    if symmetric and type_name != "H3":
        raise UsageError("--symmetric applies to H3 only")
    trace = load_route(type_name)
    eq = derive_equation(type_name, trace)
    ref_name = TYPE_EQUATION[type_name]
    ref = load_equation(ref_name)
    checks = {
        "reference": ref_name,
        "moves": len(trace),
        "residue_is_reversal": eq.residues[0].is_reversal() and eq.residues[1].is_reversal(),
        "matches_reference": equations_match(eq, ref),
        "identical_to_reference": eq.lhs.factors == ref.lhs.factors and eq.rhs.factors == ref.rhs.factors,
    }
    if type_name != "H3":
        checks["set_maps_agree_with_reference"] = _semantic_equal(eq, ref, states, seed)
        checks["seed"] = seed
    if symmetric:
        ref = load_equation("h3_symmetric")
        eq = Equation(eq.type_name, symmetrize(eq.lhs), symmetrize(eq.rhs), eq.residues)
        checks["reference"] = "h3_symmetric"
        checks["matches_reference"] = equations_match(eq, Equation(ref.type_name, symmetrize(ref.lhs),
                                                                   symmetrize(ref.rhs), ref.residues))
    if flip:
        flipped = index_flip_f4(eq)
        from_route = derive_equation("F4", flip_trace_f4(trace))
        checks["flip_matches_flipped_route"] = equations_match(flipped, from_route)
        eq = flipped
    counts = {}
    for f in eq.lhs:
        key = f.kind + ("^-1" if f.inverted else "")
        counts[key] = counts.get(key, 0) + 1
    checks["lhs_counts"] = counts
    checks["factors_per_side"] = len(eq.lhs)
    return eq, checks


def _check_ok(checks: dict) -> bool:
    return all(v for k, v in checks.items() if isinstance(v, bool) and k != "identical_to_reference")


def cmd_derive(args) -> Outcome:
    eq, checks = derive_checked(args.type, flip=args.flip, symmetric=args.symmetric, seed=args.seed)
    ok = _check_ok(checks)
    payload = {"equation": eq.to_json(), "checks": checks, "passed": ok}
    if args.format == "latex":
        text = eq.latex()
    else:
        text = eq.render()
    if not ok:
        failed = [k for k, v in checks.items() if v is False]
        text += "\nmismatch against reference: " + ", ".join(failed)
    return Outcome(payload, text, EXIT_PASS if ok else EXIT_FAIL)


# ---------------------------------------------------------------- verify


def load_candidate(path: str, symmetric: bool):
    """Candidate file: ``{"carrier": [...], "map": "identity"}`` or a list of ``[x, y]`` 5-tuple pairs."""
    with open(path, encoding="utf-8") as fh:
        spec = json.load(fh)
    carrier = spec["carrier"]
    table = spec.get("map", "identity")
    if table == "identity":
        f = lambda x: x  # noqa: E731
    else:
        lookup = {tuple(x): tuple(y) for x, y in table}
        f = lambda x: lookup[tuple(x)]  # noqa: E731
    return register_candidate_y(f, carrier, symmetric=symmetric)


def _domain(args) -> DomainSpec:
    if args.exhaustive is not None and args.samples is not None:
        raise UsageError("choose either --exhaustive or --samples")
    if args.samples is not None:
        return DomainSpec.sampled(args.samples, args.max, args.seed)
    return DomainSpec.exhaustive(2 if args.exhaustive is None else args.exhaustive)


def cmd_verify(args) -> Outcome:
    name = VERIFY_TARGETS[args.target]
    eq = load_equation(name)
    if args.target.startswith("h3"):
        if not args.candidate:
            raise UsageError(f"{args.target} needs --candidate FILE describing a Y map")
        try:
            cand = load_candidate(args.candidate, symmetric=args.target == "h3-sym")
        except (KeyError, ValueError) as exc:
            raise UsageError(f"bad candidate: {exc}") from None
        report = verify_candidate(eq, cand, equation_id=name)
    else:
        report = verify_equation(eq, _domain(args), equation_id=name, model=SetModel())
    payload = report.to_json(max_failures=args.max_failures)
    payload["seed"] = args.seed
    verdict = "PASS" if report.passed else "FAIL"
    text = f"{name}: {verdict} states={report.states_tested} failures={len(report.failures)} seed={args.seed}"
    if args.timing:
        payload["elapsed_seconds"] = round(report.elapsed, 3)
        text += f" elapsed={report.elapsed:.2f}s"
    return Outcome(payload, text, EXIT_PASS if report.passed else EXIT_FAIL)


# ---------------------------------------------------------------- figure3


def render_chains(family: str, left, right) -> str:
    eq = reflection_equation(family)
    width = 22
    lines = [f"Type {family.upper()}".center(2 * width), format_state(left[0]).center(2 * width)]
    for k, (lo, ro) in enumerate(zip(eq.lhs, eq.rhs)):
        lines.append(f"  {lo.text()}".ljust(width) + f"  {ro.text()}")
        lines.append(f"{format_state(left[k + 1])}".ljust(width) + f"{format_state(right[k + 1])}")
    verdict = "agree" if left[-1] == right[-1] else "DIFFER"
    lines.append(f"bottom states {verdict}")
    return "\n".join(lines)


def cmd_figure3(args) -> Outcome:
    family = args.family.upper()
    try:
        state = parse_state(args.state)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if len(state) != 9:
        raise UsageError("figure3 needs a 9-tuple")
    left, right = figure3_chains(family, state)
    eq = reflection_equation(family)
    payload = {
        "family": family,
        "input": list(state),
        "left": [{"operator": op.text(), "state": list(s)} for op, s in zip(eq.lhs, left[1:])],
        "right": [{"operator": op.text(), "state": list(s)} for op, s in zip(eq.rhs, right[1:])],
        "agree": left[-1] == right[-1],
    }
    return Outcome(payload, render_chains(family, left, right), EXIT_PASS if payload["agree"] else EXIT_FAIL)


# ---------------------------------------------------------------- decompose


def cmd_decompose(args) -> Outcome:
    try:
        script = load_proof_script(args.fixture)
    except (ProofScriptError, OSError) as exc:
        payload = {"passed": False, "error": str(exc), "failed_stage": None}
        return Outcome(payload, f"decomposition: FAIL ({exc})", EXIT_FAIL)
    rep = verify_theorem(script, semantic_states=args.semantic_states, seed=args.seed)
    payload = rep.to_json()
    if rep.passed:
        text = (f"decomposition: PASS stages={rep.stages_validated} C3={rep.c3_count} B3={rep.b3_count} "
                f"final_is_reverse={rep.final_is_reverse} semantic_states={rep.semantic_states} seed={rep.semantic_seed}")
    else:
        text = f"decomposition: FAIL at stage {rep.failed_stage}: {rep.error or rep.semantic_failures}"
    return Outcome(payload, text, EXIT_PASS if rep.passed else EXIT_FAIL)


# ---------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits with 2 already; keep the message short
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="coxtetra", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, formats=("json", "text")):
        sp.add_argument("--format", choices=formats, default=formats[0])
        sp.add_argument("--output", help="write the result here instead of stdout")

    sp = sub.add_parser("rex", help="enumerate the rex graph of the longest element")
    sp.add_argument("type", choices=sorted(TYPES))
    sp.add_argument("--count-only", action="store_true")
    sp.add_argument("--export", metavar="PATH", help="write edges as word<TAB>word<TAB>kind@pos")
    sp.add_argument("--max-vertices", type=int, default=None)
    common(sp)
    sp.set_defaults(func=cmd_rex)

    sp = sub.add_parser("derive", help="derive an equation from the built-in route")
    sp.add_argument("type", type=str.upper, choices=sorted(TYPE_EQUATION))
    sp.add_argument("--flip", action="store_true", help="F4 only: swap R and S, reverse K indices")
    sp.add_argument("--symmetric", action="store_true", help="H3 only: take Y and R as symmetric involutions")
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common(sp, ("json", "latex", "text"))
    sp.set_defaults(func=cmd_derive)

    sp = sub.add_parser("verify", help="check an equation with the set-level maps")
    sp.add_argument("target", choices=list(VERIFY_TARGETS))
    sp.add_argument("--exhaustive", type=int, metavar="BOUND", help="all states in {0..BOUND}^L (default 2)")
    sp.add_argument("--samples", type=int, metavar="N")
    sp.add_argument("--max", type=int, default=4, help="largest sampled entry")
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--candidate", metavar="FILE", help="Y candidate for h3 targets")
    sp.add_argument("--max-failures", type=int, default=20, help="failures listed in the report")
    sp.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identical output)")
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("figure3", help="step-by-step chains of a reflection equation")
    sp.add_argument("family", type=str.upper, choices=["B", "C"])
    sp.add_argument("state", help="nine digits such as 211202341, or comma separated")
    common(sp, ("text", "json"))
    sp.set_defaults(func=cmd_figure3)

    sp = sub.add_parser("decompose", help="check the F4 decomposition into B3 and C3 equations")
    sp.add_argument("--fixture", metavar="PATH")
    sp.add_argument("--semantic-states", type=int, default=100)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common(sp)
    sp.set_defaults(func=cmd_decompose)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = args.func(args)
    except UsageError as exc:
        print(f"coxtetra: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"coxtetra: resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except UnsupportedOperatorError as exc:
        print(f"coxtetra: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    body = _dump(out.payload) if args.format == "json" else out.text
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(body + "\n")
    else:
        print(body)
    return out.code


if __name__ == "__main__":
    sys.exit(main())
