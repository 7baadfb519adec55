import random
import time
from pathlib import Path

import pytest

from cmvf import LefschetzComplex, MultivectorField, build_cubical, build_simplicial
from cmvf.cli import PipelineConfig, run_pipeline


def interval_complex(field="Q") -> LefschetzComplex:
    """Vertices A, B and the edge AB with kappa(AB, A) = -1, kappa(AB, B) = 1."""
    return LefschetzComplex.from_labels(
        [("A", 0), ("B", 0), ("AB", 1)], {("AB", "A"): -1, ("AB", "B"): 1}, field
    )


def singletons(X) -> MultivectorField:
    return MultivectorField(X, [[x] for x in range(len(X))])


@pytest.fixture
def interval():
    return interval_complex()


@pytest.fixture
def triangle():
    return build_simplicial(3, [(0, 1, 2)])


@pytest.fixture
def hollow_triangle():
    return build_simplicial(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def sphere():
    return build_simplicial(4, [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])


@pytest.fixture
def square_ring():
    return build_cubical((3, 3), [(i, j) for i in range(3) for j in range(3) if (i, j) != (1, 1)])


def small_complexes():
    """A zoo of small complexes (at most 8 cells) for exhaustive checks."""
    return {
        "interval": interval_complex(),
        "path2": build_simplicial(3, [(0, 1), (1, 2)]),
        "triangle": build_simplicial(3, [(0, 1, 2)]),
        "hollow_triangle": build_simplicial(3, [(0, 1), (1, 2), (0, 2)]),
        "wedge": build_simplicial(4, [(0, 1), (0, 2), (0, 3)]),
        "edge_plus_point": build_simplicial(3, [(0, 1)]),
        "square_edge_path": build_cubical((3,)),
        "triangle_gf2": build_simplicial(3, [(0, 1, 2)], "GF(2)"),
    }


def random_complex(rng: random.Random):
    """Random simplicial or cubical complex with a handful of top cells."""
    if rng.random() < 0.5:
        n = rng.randint(3, 5)
        pool = [(a, b, c) for a in range(n) for b in range(a + 1, n) for c in range(b + 1, n)]
        pool += [(a, b) for a in range(n) for b in range(a + 1, n)]
        k = rng.randint(1, 4)
        tops = rng.sample(pool, k)
        # drop faces of other chosen simplices to avoid duplicates
        tops = [t for t in tops if not any(set(t) < set(u) for u in tops)]
        return build_simplicial(n, tops)
    dims = (rng.randint(1, 3), rng.randint(1, 2))
    cubes = [(i, j) for i in range(dims[0]) for j in range(dims[1])]
    return build_cubical(dims, rng.sample(cubes, rng.randint(1, len(cubes))))


def random_transitions(rng: random.Random, X, density: float = 0.3):
    """Random D-sets of the discretisation shape: a cell and some of its cofacets."""
    out = []
    for x in range(len(X)):
        cof = sorted(X.coboundary[x])
        if cof and rng.random() < 0.7:
            out.append([x] + [t for t in cof if rng.random() < density])
    return out


# wall-clock seconds of the bundled pipelines, keyed by system name
PIPELINE_SECONDS: dict[str, float] = {}
# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


def _timed_pipeline(system: str):
    t0 = time.perf_counter()
    a = run_pipeline(PipelineConfig(out=Path("."), system=system))
    PIPELINE_SECONDS[system] = time.perf_counter() - t0
    return a


@pytest.fixture(scope="session")
def planar9():
    return _timed_pipeline("planar9")


@pytest.fixture(scope="session")
def allencahn3d():
    return _timed_pipeline("allencahn3d")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
