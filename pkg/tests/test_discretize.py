import numpy as np
import pytest

from cmvf import (
    FlowGraph,
    GeometricComplex,
    LefschetzComplex,
    build_simplicial,
    classify,
    cubical_mesh,
    delaunay_mesh,
    finest_morse_decomposition,
    mvf_from_field,
    parse_vf,
    transitions,
    validate_mvf,
)
from cmvf.discretize import SAMPLE_STRATEGIES
from cmvf.errors import DegenerateGeometry


def line(xs):
    """Simplicial path through the points ``xs`` on the real line."""
    X = build_simplicial(len(xs), [(i, i + 1) for i in range(len(xs) - 1)])
    return GeometricComplex(X, points=np.array(xs, dtype=float).reshape(-1, 1))


def dsets(G, f, **kw):
    X = G.complex
    lower = [x for x in range(len(X)) if X.dims[x] < X.dim]
    return {X.labels[x]: {X.labels[c] for c in d} for x, d in zip(lower, transitions(G, f, **kw))}


def labelled_parts(V):
    X = V.complex
    return sorted((sorted(X.labels[c] for c in p), t) for p, t in zip(V.parts, classify(V)))


# -- one-dimensional fixtures -------------------------------------------------------------
def test_constant_flow_on_unit_interval():
    G = line([0.0, 1.0])
    assert dsets(G, parse_vf(["1"], 1)) == {"(0)": {"(0)", "(0,1)"}, "(1)": {"(1)"}}


def test_stable_rest_point():
    G = line([-1.0, 0.0, 1.0])
    f = parse_vf(["-x1"], 1)
    D = dsets(G, f)
    assert D["(1)"] == {"(1)"}
    assert D["(0)"] == {"(0)", "(0,1)"}
    assert D["(2)"] == {"(2)", "(1,2)"}
    V = mvf_from_field(G, f)
    assert labelled_parts(V) == [
        (["(0)", "(0,1)"], "regular"),
        (["(1)"], "critical"),
        (["(1,2)", "(2)"], "regular"),
    ]
    M = finest_morse_decomposition(FlowGraph(G.complex, V))
    assert len(M) == 1 and M.conley_indices[0] == (1, 0)


def test_unstable_rest_point():
    G = line([-1.0, 0.0, 1.0])
    f = parse_vf(["x1"], 1)
    D = dsets(G, f)
    assert D["(1)"] == {"(1)", "(0,1)", "(1,2)"}
    assert D["(0)"] == {"(0)"} and D["(2)"] == {"(2)"}
    V = mvf_from_field(G, f)
    M = finest_morse_decomposition(FlowGraph(G.complex, V))
    signature = sorted(M.conley_indices)
    assert signature == [(0, 1), (1, 0), (1, 0)]


def test_zero_field_gives_trivial_mvf():
    G = line([-1.0, 0.0, 1.0])
    f = parse_vf(["0"], 1)
    X = G.complex
    for x, d in zip(range(3), transitions(G, f)):
        assert d == {x} | set(X.coboundary[x])
    V = mvf_from_field(G, f)
    assert len(V.parts) == 1


def test_orientation_swap_exchanges_attractor_and_repeller():
    G = line([-1.0, -0.3, 0.4, 1.0])
    for sign, top_index in (("-", 0), ("", 1)):
        f = parse_vf([f"{sign}x1"], 1)
        M = finest_morse_decomposition(FlowGraph(G.complex, mvf_from_field(G, f)))
        tops = [ch for ch in M.conley_indices if ch[1]]
        assert len(tops) == top_index


# -- planar fixtures ------------------------------------------------------------------------
def test_tangent_field_on_cubical_square():
    G = cubical_mesh([(0, 1), (0, 1)], (1, 1))
    X = G.complex
    D = transitions(G, parse_vf(["1", "0"], 2))
    lower = [x for x in range(len(X)) if X.dims[x] < 2]
    for x, d in zip(lower, D):
        horizontal_edge = X.dims[x] == 1 and X.keys[x][1] % 2 == 0
        if horizontal_edge:
            assert d == {x} | set(X.coboundary[x])


def test_inward_and_outward_edges_on_cubical_square():
    G = cubical_mesh([(0, 1), (0, 1)], (1, 1))
    X = G.complex
    lower = [x for x in range(len(X)) if X.dims[x] < 2]
    up = dict(zip(lower, transitions(G, parse_vf(["0", "1"], 2))))
    bottom = X.id_of_key((1, 0))
    top = X.id_of_key((1, 2))
    square = X.id_of_key((1, 1))
    assert up[bottom] == {bottom, square}
    assert up[top] == {top}


def test_constant_field_on_one_triangle():
    X = build_simplicial(3, [(0, 1, 2)])
    G = GeometricComplex(X, points=np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))
    D = dsets(G, parse_vf(["1", "1"], 2))
    assert D["(0)"] == {"(0)", "(0,1)", "(0,2)"}
    assert D["(1)"] == {"(1)"} and D["(2)"] == {"(2)"}
    assert D["(0,1)"] == {"(0,1)", "(0,1,2)"}
    assert D["(0,2)"] == {"(0,2)", "(0,1,2)"}
    assert D["(1,2)"] == {"(1,2)"}


def test_degenerate_geometry():
    X = build_simplicial(3, [(0, 1, 2)])
    G = GeometricComplex(X, points=np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]))
    with pytest.raises(DegenerateGeometry):
        transitions(G, parse_vf(["1", "0"], 2))
    G = GeometricComplex(X, points=np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))
    with pytest.raises(DegenerateGeometry):
        transitions(G, parse_vf(["1", "0", "0"], 3))
    Y = LefschetzComplex.from_labels([("a", 0), ("b", 0), ("ab", 1)], {("ab", "a"): -1, ("ab", "b"): 1})
    with pytest.raises(DegenerateGeometry):
        GeometricComplex(Y, points=np.zeros((2, 1)))


def test_unknown_sample_strategy():
    with pytest.raises(ValueError):
        transitions(line([0.0, 1.0]), parse_vf(["1"], 1), samples="corners")


# -- properties on random meshes ------------------------------------------------------------
def _random_polynomial(rng, n):
    comps = []
    for _ in range(n):
        terms = []
        for _ in range(4):
            c = rng.uniform(-1, 1)
            powers = "*".join(f"x{i + 1}^{int(p)}" for i, p in enumerate(rng.integers(0, 3, n)))
            terms.append(f"{c:.6f}*{powers}")
        comps.append(" + ".join(terms))
    return parse_vf(comps, n)


@pytest.mark.parametrize("seed", range(8))
@pytest.mark.parametrize("samples", SAMPLE_STRATEGIES)
def test_random_field_on_delaunay_mesh(seed, samples):
    rng = np.random.default_rng(seed)
    G = delaunay_mesh([(-1, 1), (-1, 1)], 40, seed=seed)
    X = G.complex
    f = _random_polynomial(rng, 2)
    lower = [x for x in range(len(X)) if X.dims[x] < X.dim]
    D = transitions(G, f, samples=samples)
    for x, d in zip(lower, D):
        assert x in d and d <= {x} | set(X.coboundary[x])
    assert validate_mvf(mvf_from_field(G, f, samples=samples))


@pytest.mark.parametrize("seed", range(4))
def test_random_field_on_cubical_mesh(seed):
    rng = np.random.default_rng(100 + seed)
    G = cubical_mesh([(-1, 1), (-1, 1), (-1, 1)], (3, 2, 2))
    X = G.complex
    f = _random_polynomial(rng, 3)
    lower = [x for x in range(len(X)) if X.dims[x] < X.dim]
    for x, d in zip(lower, transitions(G, f)):
        assert x in d and d <= {x} | set(X.coboundary[x])
    assert validate_mvf(mvf_from_field(G, f))


def test_delaunay_mesh_is_seeded():
    a = delaunay_mesh([(0, 1), (0, 1)], 30, seed=4)
    b = delaunay_mesh([(0, 1), (0, 1)], 30, seed=4)
    assert np.array_equal(a.points, b.points)
    assert a.complex.labels == b.complex.labels
