from __future__ import annotations

import itertools
from collections import deque

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coxtetra.coxeter import (
    ResourceLimitError,
    apply_move,
    available_moves,
    coxeter_matrix,
    coxeter_type,
    is_reduced,
    longest_word,
    make_move,
    pack,
    rex_graph,
    twisted_reversal,
    unpack,
)


def test_matrices():
    a3 = coxeter_matrix("A3")
    assert a3[0][1] == a3[1][2] == 3 and a3[0][2] == 2
    f4 = coxeter_type("F4")
    assert (f4.m(1, 2), f4.m(2, 3), f4.m(3, 4)) == (3, 4, 3)
    assert f4.m(1, 3) == f4.m(1, 4) == f4.m(2, 4) == 2
    h3 = coxeter_type("H3")
    assert (h3.m(1, 2), h3.m(2, 3), h3.m(1, 3)) == (5, 3, 2)
    for name in ("A2", "A3", "B3", "C3", "F4", "H2", "H3"):
        m = coxeter_matrix(name)
        assert all(m[i][i] == 1 for i in range(len(m)))
        assert all(m[i][j] == m[j][i] in (2, 3, 4, 5) for i in range(len(m)) for j in range(len(m)) if i != j)
    with pytest.raises(ValueError):
        coxeter_type("E8")


@pytest.mark.parametrize("name,length", [("A2", 3), ("A3", 6), ("B3", 9), ("C3", 9), ("F4", 24), ("H2", 5), ("H3", 15)])
def test_longest_words(name, length):
    w = longest_word(name)
    assert len(w) == length
    assert is_reduced(name, w)
    # appending any generator to the longest element shortens it
    rank = coxeter_type(name).rank
    assert not any(is_reduced(name, w + (s,)) for s in range(1, rank + 1))


def test_seed_words():
    assert longest_word("F4") == tuple(int(c) for c in "434234232123423123412321")
    assert longest_word("H3") == (1, 2, 1, 2, 1, 3, 2, 1, 2, 1, 3, 2, 1, 2, 3)
    assert longest_word("A3") == (1, 2, 1, 3, 2, 1)


def test_is_reduced_basics():
    assert not is_reduced("A3", (1, 1))
    assert is_reduced("A3", (1, 2, 1))
    with pytest.raises(ValueError):
        is_reduced("A3", (1, 4))


def _cayley_lengths(gens, identity):
    """Word length of every group element by BFS on the Cayley graph."""
    dist = {identity: 0}
    q = deque([identity])
    while q:
        g = q.popleft()
        for s in gens:
            h = s(g)
            if h not in dist:
                dist[h] = dist[g] + 1
                q.append(h)
    return dist


def _a3_gen(i):
    def act(p):
        p = list(p)
        p[i - 1], p[i] = p[i], p[i - 1]
        return tuple(p)
    return act


def test_a3_agrees_with_brute_force():
    gens = [_a3_gen(i) for i in (1, 2, 3)]
    dist = _cayley_lengths(gens, (1, 2, 3, 4))
    assert len(dist) == 24
    for n in range(1, 7):
        for w in itertools.product((1, 2, 3), repeat=n):
            g = (1, 2, 3, 4)
            for s in reversed(w):
                g = gens[s - 1](g)
            assert is_reduced("A3", w) == (dist[g] == n), w


def _b3_gen(i):
    # s1, s2 swap coordinates, s3 negates the last one: m(1,2)=3, m(2,3)=4
    def act(v):
        v = list(v)
        if i < 3:
            v[i - 1], v[i] = v[i], v[i - 1]
        else:
            v[2] = -v[2]
        return tuple(v)
    return act


@settings(max_examples=300, deadline=None)
@given(st.lists(st.sampled_from([1, 2, 3]), min_size=1, max_size=11))
def test_b3_agrees_with_signed_permutations(w):
    gens = [_b3_gen(i) for i in (1, 2, 3)]
    dist = _cayley_lengths(gens, (1, 2, 3))
    assert len(dist) == 48
    g = (1, 2, 3)
    for s in reversed(w):
        g = gens[s - 1](g)
    assert is_reduced("B3", w) == (dist[g] == len(w))


def test_available_moves_a3():
    moves = available_moves("A3", (1, 2, 1, 3, 2, 1))
    # the commuting pair 13 occupies slots 3 and 4 (the edge labelled P_34)
    assert [(m.position, m.width) for m, _ in moves] == [(1, 3), (3, 2)]
    assert moves[0][1] == (2, 1, 2, 3, 2, 1)
    assert moves[1][1] == (1, 2, 3, 1, 2, 1)
    assert len(available_moves("A2", (1, 2, 1))) == 1


def test_available_moves_f4_starts_with_upsilon():
    moves = available_moves("F4", longest_word("F4"))
    first = moves[0][0]
    assert (first.position, first.width, first.letters) == (1, 3, (4, 3))
    assert moves[0][1][:3] == (3, 4, 3)


def test_moves_are_symmetric_and_reduced():
    for name in ("A3", "B3", "H3"):
        for w in list(rex_graph(name).words())[:50]:
            for mv, v in available_moves(name, w):
                assert is_reduced(name, v) and len(v) == len(w)
                assert w in [u for _, u in available_moves(name, v)]


def test_apply_move_rejects_mismatch():
    mv = make_move("A3", 1, (1, 2))
    assert apply_move((1, 2, 1, 3, 2, 1), mv) == (2, 1, 2, 3, 2, 1)
    with pytest.raises(ValueError):
        apply_move((2, 1, 2, 3, 2, 1), mv)


@given(st.lists(st.integers(1, 4), min_size=1, max_size=24))
def test_pack_roundtrip(w):
    assert unpack(pack(w), len(w)) == tuple(w)


def test_pack_order_is_lexicographic():
    words = sorted(itertools.product((1, 2, 3), repeat=4))
    assert [pack(w) for w in words] == sorted(pack(w) for w in words)


@pytest.mark.parametrize("name,count", [("A2", 2), ("A3", 16), ("B3", 42), ("C3", 42), ("H2", 2)])
def test_rex_counts(name, count):
    assert rex_graph(name).vertex_count == count


def test_h3_rex_count_regression():
    # no published value; recorded from this implementation
    g = rex_graph("H3")
    assert (g.vertex_count, g.edge_count) == (286, 640)


def test_rex_graph_seed_independent():
    for name in ("A3", "C3"):
        base = rex_graph(name)
        for w in list(base.words())[::7]:
            assert rex_graph(name, w).vertices == base.vertices


def test_rex_graph_edges_and_export(tmp_path):
    g = rex_graph("A3")
    edges = list(g.iter_edges())
    assert len(edges) == g.edge_count == 18
    assert all(u in g and v in g for u, v, _ in edges)
    assert all(is_reduced("A3", w) for w in g.words())
    path = tmp_path / "a3.tsv"
    with path.open("w") as fh:
        assert g.write_edges(fh) == 18
    first = path.read_text().splitlines()[0].split("\t")
    assert len(first) == 3 and "@" in first[2]
    assert g.summary() == {"type": "A3", "seed": "121321", "vertex_count": 16, "edge_count": 18}


def test_rex_graph_contains_reversal():
    for name in ("A3", "C3", "H3"):
        g = rex_graph(name)
        assert twisted_reversal(name, longest_word(name)) in g


def test_rex_graph_cap():
    with pytest.raises(ResourceLimitError):
        rex_graph("H3", max_vertices=100)


def test_rex_graph_cap_from_env(monkeypatch):
    monkeypatch.setenv("COXTETRA_MAX_VERTICES", "10")
    with pytest.raises(ResourceLimitError):
        rex_graph("A3")


def test_rex_graph_rejects_unreduced_seed():
    with pytest.raises(ValueError):
        rex_graph("A3", (1, 1, 2, 1, 3, 2))
