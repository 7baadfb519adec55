import random

import networkx as nx
import pytest

from cmvf import (
    FlowGraph,
    MultivectorField,
    alpha_omega,
    connection_set,
    finest_morse_decomposition,
    is_attractor,
    is_repeller,
    is_v_compatible,
    minimal_mvf,
    morse_interval,
)
from cmvf.dynamics import _tarjan
from cmvf.errors import NoEssentialSolution, NotAnInterval

from .conftest import random_complex, random_transitions, singletons
from .oracles import connection_set_oracle, essential_cells, flow_digraph, morse_sets_oracle


def decomposition(X, V):
    G = FlowGraph(X, V)
    return G, finest_morse_decomposition(G)


def index_of(M, X, *labels):
    target = X.ids(*labels)
    return next(p for p, s in enumerate(M.morse_sets) if s == target)


def test_successors(interval):
    X = interval
    G = FlowGraph(X, singletons(X))
    assert G.successors(X.id_of("AB")) == X.ids("A", "B", "AB")
    assert G.successors(X.id_of("A")) == X.ids("A")
    V = MultivectorField(X, [X.ids("A", "AB"), X.ids("B")])
    assert FlowGraph(X, V).successors(X.id_of("A")) == X.ids("A", "AB")


def test_successors_reflexive(triangle):
    G = FlowGraph(triangle, minimal_mvf(triangle, [triangle.ids("(0)", "(0,1)")]))
    assert all(x in G.successors(x) for x in range(len(triangle)))


def test_morse_interval_singletons(interval):
    X = interval
    G, M = decomposition(X, singletons(X))
    assert sorted(M.morse_sets, key=min) == [X.ids("A"), X.ids("B"), X.ids("AB")]
    a, b, ab = (index_of(M, X, l) for l in ("A", "B", "AB"))
    assert M.less(a, ab) and M.less(b, ab)
    assert not M.less(a, b) and not M.less(b, a)


def test_regular_scc_dropped(interval):
    X = interval
    G, M = decomposition(X, MultivectorField(X, [X.ids("A", "AB"), X.ids("B")]))
    assert M.morse_sets == (X.ids("B"),)


def test_hollow_triangle_six_sets(hollow_triangle):
    G, M = decomposition(hollow_triangle, singletons(hollow_triangle))
    assert len(M) == 6


def test_connection_set_examples(interval):
    X = interval
    G = FlowGraph(X, singletons(X))
    assert connection_set(G, X.ids("AB"), X.ids("A")) == X.ids("AB", "A")
    assert connection_set(G, X.ids("A"), X.ids("B")) == frozenset()
    assert X.ids("AB") <= connection_set(G, X.ids("AB"), X.ids("AB"))


def test_morse_interval_examples(interval):
    X = interval
    G, M = decomposition(X, singletons(X))
    a, b, ab = (index_of(M, X, l) for l in ("A", "B", "AB"))
    assert morse_interval(G, M, [a]) == X.ids("A")
    assert morse_interval(G, M, [a, ab]) == X.ids("A", "AB")
    assert morse_interval(G, M, M.indices) == M.invariant_part() == X.ids("A", "B", "AB")
    with pytest.raises(NotAnInterval):
        morse_interval(G, M, [])
    with pytest.raises(NotAnInterval):
        morse_interval(G, M, [7])


def test_not_an_interval(triangle):
    X = triangle
    G, M = decomposition(X, singletons(X))
    v, e, t = (index_of(M, X, l) for l in ("(0)", "(0,1)", "(0,1,2)"))
    assert M.less(v, e) and M.less(e, t)
    assert not M.is_interval([v, t])
    with pytest.raises(NotAnInterval):
        morse_interval(G, M, [v, t])


def test_attractor_examples(interval):
    X = interval
    G, M = decomposition(X, singletons(X))
    assert is_attractor(G, X.ids("B"))
    assert not is_attractor(G, X.ids("AB"))
    a, b = index_of(M, X, "A"), index_of(M, X, "B")
    assert M.is_down_set([a, b])
    assert is_attractor(G, morse_interval(G, M, [a, b]))


def test_repeller_examples(interval):
    X = interval
    G = FlowGraph(X, singletons(X))
    assert is_repeller(G, X.ids("AB"))
    assert not is_repeller(G, X.ids("A"))
    assert is_repeller(G, range(3))


def test_alpha_omega(interval):
    X = interval
    G, M = decomposition(X, singletons(X))
    a, b, ab = (index_of(M, X, l) for l in ("A", "B", "AB"))
    assert alpha_omega(G, M, X.id_of("AB")) == (frozenset({ab}), frozenset({ab, a, b}))
    assert alpha_omega(G, M, X.id_of("A")) == (frozenset({ab, a}), frozenset({a}))


def test_alpha_omega_without_essential_solution(interval):
    X = interval
    V = MultivectorField(X, [X.ids("A", "AB"), X.ids("B")])
    G, M = decomposition(X, V)
    with pytest.raises(NoEssentialSolution):
        alpha_omega(G, M, X.id_of("A"))
    assert alpha_omega(G, M, X.id_of("B")) == (frozenset({0}), frozenset({0}))


def test_alpha_omega_through_transient_cell():
    from cmvf import build_simplicial

    X = build_simplicial(3, [(0, 1), (1, 2)])
    V = MultivectorField(X, [X.ids("(0)"), X.ids("(0,1)", "(1)"), X.ids("(1,2)"), X.ids("(2)")])
    G, M = decomposition(X, V)
    alpha, omega = alpha_omega(G, M, X.id_of("(1)"))
    assert alpha == {index_of(M, X, "(1,2)")}
    assert omega == {index_of(M, X, "(0)")}


# -- cross-checks against explicit solution enumeration ------------------------------------
def random_cases(n, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        X = random_complex(rng)
        if len(X) > 12:
            continue
        V = minimal_mvf(X, random_transitions(rng, X, 0.5))
        out.append((X, V))
    return out


CASES = random_cases(60, 21)


@pytest.mark.parametrize("k", range(len(CASES)))
def test_morse_sets_match_cycle_enumeration(k):
    X, V = CASES[k]
    G, M = decomposition(X, V)
    assert set(M.morse_sets) == morse_sets_oracle(X, V)
    assert M.invariant_part() == essential_cells(X, V)
    for s in M.morse_sets:
        assert is_v_compatible(V, s) and X.is_locally_closed(s)
    seen = set()
    for s in M.morse_sets:
        assert not seen & s
        seen |= s


@pytest.mark.parametrize("k", range(len(CASES)))
def test_poset_and_morse_axiom(k):
    X, V = CASES[k]
    G, M = decomposition(X, V)
    g = flow_digraph(X, V)
    for p in M.indices:
        assert not M.less(p, p)
        for q in M.indices:
            reach = p != q and any(nx.has_path(g, y, x) for y in M.morse_sets[q] for x in M.morse_sets[p])
            assert M.less(p, q) == reach
            assert not (M.less(p, q) and M.less(q, p))


@pytest.mark.parametrize("k", range(len(CASES)))
def test_connection_sets_match_oracle(k):
    X, V = CASES[k]
    G, M = decomposition(X, V)
    for p in M.indices:
        for q in M.indices:
            A, B = M.morse_sets[q], M.morse_sets[p]
            assert connection_set(G, A, B) == connection_set_oracle(X, V, A, B)


@pytest.mark.parametrize("k", range(len(CASES)))
def test_intervals_attractors_repellers(k):
    X, V = CASES[k]
    G, M = decomposition(X, V)
    inv = M.invariant_part()
    for I in M.intervals():
        S = morse_interval(G, M, I)
        assert is_v_compatible(V, S) and X.is_locally_closed(S)
        if M.is_down_set(I):
            assert is_attractor(G, S)
        if M.is_up_set(I):
            assert is_repeller(G, S, within=inv)


def test_tarjan_matches_networkx():
    rng = random.Random(1)
    for _ in range(50):
        n = rng.randint(1, 30)
        adj = [[rng.randrange(n) for _ in range(rng.randint(0, 3))] for _ in range(n)]
        comp, ncomp = _tarjan(n, adj)
        g = nx.DiGraph()
        g.add_nodes_from(range(n))
        g.add_edges_from((u, v) for u, vs in enumerate(adj) for v in vs)
        ref = {frozenset(c) for c in nx.strongly_connected_components(g)}
        mine = {}
        for x, c in enumerate(comp):
            mine.setdefault(c, set()).add(x)
        assert {frozenset(s) for s in mine.values()} == ref
        assert ncomp == len(ref)
        # sinks first: every edge goes to an earlier or equal component
        assert all(comp[v] <= comp[u] for u, vs in enumerate(adj) for v in vs)
