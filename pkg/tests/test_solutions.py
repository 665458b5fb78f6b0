from __future__ import annotations

import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coxtetra.operators import IndexedOperator, P, parse_product
from coxtetra.reference import load_equation, load_figure3
from coxtetra.solutions import (
    DomainSpec,
    DomainTooLargeError,
    SetModel,
    UnsupportedOperatorError,
    apply_operator,
    eval_batch,
    eval_expression,
    figure3_chains,
    k_map,
    parse_state,
    r_map,
    register_candidate_y,
    verify_candidate,
    verify_equation,
)

nat = st.integers(0, 30)


def test_r_map_examples():
    assert r_map(0, 0, 0) == (0, 0, 0)
    assert r_map(2, 0, 2) == (0, 2, 0)
    # b + (a-c)+ = 1 + 2, min = 0, b + (c-a)+ = 1
    assert r_map(2, 1, 0) == (3, 0, 1)


def test_k_map_examples():
    assert k_map(0, 0, 0, 0) == (0, 0, 0, 0)
    assert k_map(2, 1, 1, 0) == (3, 0, 1, 1)
    assert k_map(1, 0, 3, 4) == (3, 0, 1, 8)
    assert k_map(4, 3, 0, 1) == (6, 1, 0, 3)


def test_involutions_exhaustive():
    for t in itertools.product(range(6), repeat=3):
        assert r_map(*r_map(*t)) == t
    for t in itertools.product(range(6), repeat=4):
        assert k_map(*k_map(*t)) == t


def test_r_map_reversal_symmetry():
    for t in itertools.product(range(6), repeat=3):
        assert r_map(*t[::-1])[::-1] == r_map(*t)


def test_nonnegative_outputs():
    for t in itertools.product(range(0, 21, 2), repeat=4):
        assert min(k_map(*t)) >= 0
    for t in itertools.product(range(21), repeat=3):
        assert min(r_map(*t)) >= 0


@given(nat, nat, nat)
def test_r_map_conserved_sums(a, b, c):
    x, y, z = r_map(a, b, c)
    assert (x + y, y + z) == (a + b, b + c)


@given(nat, nat, nat, nat)
def test_k_map_conserved_sums(a, b, c, d):
    x, y, z, w = k_map(a, b, c, d)
    assert x + y + z == a + b + c
    assert y + 2 * z + w == b + 2 * c + d


def test_descending_k_is_swap_conjugate():
    for vals in itertools.product(range(4), repeat=4):
        state = vals + (7,)
        direct = apply_operator(IndexedOperator("K", (4, 3, 2, 1)), state)
        conj = eval_expression([P(1, 4), P(2, 3), IndexedOperator("K", (1, 2, 3, 4)), P(1, 4), P(2, 3)], state)
        assert direct == conj


def test_apply_operator_examples():
    assert apply_operator(IndexedOperator("R", (4, 5, 6)), (2, 1, 1, 2, 0, 2, 3, 4, 1)) == (2, 1, 1, 0, 2, 0, 3, 4, 1)
    assert apply_operator(P(1, 3), (5, 6, 7, 8)) == (7, 6, 5, 8)
    assert apply_operator(IndexedOperator("K", (9, 7, 5, 3)), (2, 1, 1, 2, 0, 5, 3, 1, 4)) == (2, 1, 3, 2, 0, 5, 1, 1, 6)
    # inverted R/S/K act like themselves
    s = (3, 1, 4, 1, 5)
    assert apply_operator(IndexedOperator("K", (1, 2, 3, 4), True), s) == apply_operator(IndexedOperator("K", (1, 2, 3, 4)), s)
    with pytest.raises(UnsupportedOperatorError):
        apply_operator(IndexedOperator("Y", (1, 2, 3, 4, 5)), s)


def test_eval_expression_empty():
    assert eval_expression([], (1, 2, 3)) == (1, 2, 3)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 6), min_size=24, max_size=24))
def test_batch_matches_scalar(state):
    eq = load_equation("f4")
    assert tuple(eval_batch(eq.lhs, np.array([state]))[0]) == eval_expression(eq.lhs, state)


def test_figure3_columns_bit_exact():
    fig = load_figure3()
    for fam in ("C", "B"):
        left, right = figure3_chains(fam, parse_state(fig[fam]["input"]))
        assert left[1:] == [parse_state(s) for _, s in fig[fam]["left"]]
        assert right[1:] == [parse_state(s) for _, s in fig[fam]["right"]]
    assert figure3_chains("C", parse_state("211202341"))[0][-1] == (3, 1, 3, 1, 0, 6, 1, 1, 9)
    assert figure3_chains("B", parse_state("211202341"))[1][-1] == (3, 1, 4, 1, 0, 5, 1, 1, 7)


def test_figure3_zero_input():
    left, right = figure3_chains("C", (0,) * 9)
    assert set(left + right) == {(0,) * 9}


def test_figure3_random_agreement():
    rng = np.random.default_rng(3)
    for fam in ("B", "C"):
        for s in rng.integers(0, 6, size=(1000, 9)):
            left, right = figure3_chains(fam, tuple(int(v) for v in s))
            assert left[-1] == right[-1]


def test_figure3_rejects_wrong_length():
    with pytest.raises(ValueError):
        figure3_chains("C", (1, 2, 3))
    with pytest.raises(ValueError):
        figure3_chains("D", (0,) * 9)


def test_verify_small_domains():
    tetra = load_equation("tetrahedron")
    rep = verify_equation(tetra, DomainSpec.exhaustive(0))
    assert rep.passed and rep.states_tested == 1
    rep = verify_equation(tetra, DomainSpec.exhaustive(2))
    assert rep.passed and rep.states_tested == 729


def test_verify_detects_a_wrong_equation():
    bad = load_equation("reflection_c3")
    broken = type(bad)(bad.type_name, bad.lhs, parse_product("R_{456}K_{1236}R_{258}K_{1478}R_{249}K_{3579}R_{689}", 9),
                       bad.residues)
    rep = verify_equation(broken, DomainSpec.exhaustive(1))
    assert not rep.passed
    assert rep.failures == sorted(rep.failures)
    a, l, r = rep.failures[0]
    assert eval_expression(bad.lhs, a) == l != r


def test_sampled_is_reproducible():
    eq = load_equation("f4")
    dom = DomainSpec.sampled(500, 4, seed=7)
    a = verify_equation(eq, dom, equation_id="f4")
    b = verify_equation(eq, dom, equation_id="f4")
    assert json.dumps(a.to_json()) == json.dumps(b.to_json())
    assert a.to_json()["domain"]["seed"] == 7
    assert "elapsed_seconds" in a.to_json(include_timing=True)


def test_exhaustive_cap():
    with pytest.raises(DomainTooLargeError):
        verify_equation(load_equation("f4"), DomainSpec.exhaustive(2))


def test_domain_validation():
    with pytest.raises(ValueError):
        DomainSpec("grid")
    with pytest.raises(ValueError):
        DomainSpec.sampled(0, 4)
    with pytest.raises(ValueError):
        DomainSpec.exhaustive(-1)


def test_identity_candidate_is_rejected():
    cand = register_candidate_y(lambda x: x, [0, 1])
    rep = verify_candidate(load_equation("h3"), cand)
    assert not rep.passed and rep.states_tested == 2**15
    sym = register_candidate_y(lambda x: x, [0, 1], symmetric=True)
    assert not verify_candidate(load_equation("h3_symmetric"), sym).passed


def test_singleton_carrier_passes():
    cand = register_candidate_y(lambda x: x, [0])
    assert verify_candidate(load_equation("h3"), cand).passed
    sym = register_candidate_y(lambda x: x, [0], symmetric=True)
    assert verify_candidate(load_equation("h3_symmetric"), sym).passed


def test_candidate_must_be_bijective():
    with pytest.raises(ValueError, match="bijection"):
        register_candidate_y(lambda x: (0,) * 5, [0, 1])
    # the symmetric convention does not need an inverse
    register_candidate_y(lambda x: (0,) * 5, [0, 1], symmetric=True)
    with pytest.raises(ValueError):
        register_candidate_y(lambda x: (2,) * 5, [0, 1], symmetric=True)


def test_candidate_inverse_used_for_inverted_y():
    rot = lambda x: x[1:] + x[:1]  # noqa: E731
    cand = register_candidate_y(rot, [0, 1])
    model = SetModel.for_candidate(cand)
    y = IndexedOperator("Y", (1, 2, 3, 4, 5))
    s = (1, 0, 0, 1, 1)
    assert apply_operator(y.inverse(), apply_operator(y, s, model), model) == s
    batch = eval_batch([y, y.inverse()], np.array([s]), model)
    assert tuple(batch[0]) == s
