"""From a sampled vector field to transition sets and a multivector field."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateGeometry, DegenerateInput
from .expr import VectorFieldExpr
from .lefschetz import LefschetzComplex, build_cubical, build_delaunay
from .mvf import MultivectorField, minimal_mvf

SAMPLE_STRATEGIES = ("barycenter+vertices", "barycenter", "vertices")


@dataclass
class GeometricComplex:
    """A Lefschetz complex with a geometric realisation.

    Simplicial complexes carry one coordinate row per vertex (indexed by the
    vertex numbers in the cell keys); cubical complexes carry the grid origin
    and spacing, so cube ``[a, a+1]`` on axis ``i`` spans
    ``origin[i] + spacing[i] * [a, a+1]``.
    """

    complex: LefschetzComplex
    points: np.ndarray | None = None
    origin: np.ndarray | None = None
    spacing: np.ndarray | None = None

    def __post_init__(self):
        X = self.complex
        if X.kind not in ("simplicial", "cubical"):
            raise DegenerateGeometry("geometry needs a simplicial or cubical complex")
        if X.kind == "simplicial":
            self.points = np.asarray(self.points, dtype=float)
        else:
            self.origin = np.asarray(self.origin, dtype=float)
            self.spacing = np.asarray(self.spacing, dtype=float)

    @property
    def kind(self) -> str:
        return self.complex.kind

    @property
    def ambient_dim(self) -> int:
        if self.kind == "simplicial":
            return self.points.shape[1]
        return len(self.origin)

    def vertex_cells(self, x: int) -> list[int]:
        X = self.complex
        key = X.keys[x]
        if self.kind == "simplicial":
            return [X.id_of_key((v,)) for v in key]
        axes = [(c,) if c % 2 == 0 else (c - 1, c + 1) for c in key]
        out = [()]
        for opts in axes:
            out = [k + (o,) for k in out for o in opts]
        return [X.id_of_key(k) for k in out]

    def barycenters(self) -> np.ndarray:
        X = self.complex
        if self.kind == "simplicial":
            return np.array([self.points[list(k)].mean(axis=0) for k in X.keys])
        keys = np.array(X.keys, dtype=float)
        return self.origin + self.spacing * keys / 2.0

    def vertex_coords(self, x: int) -> np.ndarray:
        X = self.complex
        if self.kind == "simplicial":
            return self.points[list(X.keys[x])]
        bc = self.barycenters_cache()
        return bc[self.vertex_cells(x)]

    def barycenters_cache(self) -> np.ndarray:
        if getattr(self, "_bary", None) is None:
            self._bary = self.barycenters()
        return self._bary


def delaunay_mesh(box: Sequence[Sequence[float]], n_points: int, seed: int = 0, field="Q") -> GeometricComplex:
    """Delaunay triangulation of ``n_points`` seeded uniform points in a box plus its boundary.

    The boundary carries the four corners and equally spaced points matching
    the interior density, so the triangulation covers the whole box.
    """
    (x0, x1), (y0, y1) = box
    rng = np.random.default_rng(seed)
    interior = np.column_stack([rng.uniform(x0, x1, n_points), rng.uniform(y0, y1, n_points)])
    h = np.sqrt((x1 - x0) * (y1 - y0) / max(n_points, 1))
    nx = max(int(round((x1 - x0) / h)), 1)
    ny = max(int(round((y1 - y0) / h)), 1)
    bx = np.linspace(x0, x1, nx + 1)
    by = np.linspace(y0, y1, ny + 1)
    boundary = (
        [(x, y0) for x in bx]
        + [(x, y1) for x in bx]
        + [(x0, y) for y in by[1:-1]]
        + [(x1, y) for y in by[1:-1]]
    )
    pts = np.vstack([np.array(boundary), interior])
    # keep interior points away from the boundary to avoid slivers
    margin = 0.25 * h
    keep = [
        i
        for i, (x, y) in enumerate(pts)
        if i < len(boundary) or (x0 + margin < x < x1 - margin and y0 + margin < y < y1 - margin)
    ]
    pts = pts[keep]
    X = build_delaunay(pts, field)
    return GeometricComplex(X, points=pts)


def cubical_mesh(box: Sequence[Sequence[float]], resolution: Sequence[int], field="Q") -> GeometricComplex:
    """Full cubical grid on a box with ``resolution[i]`` cubes along axis ``i``."""
    box = np.asarray(box, dtype=float)
    res = [int(r) for r in resolution]
    if len(res) != len(box):
        raise DegenerateInput("resolution and box dimensions differ")
    X = build_cubical(res, None, field)
    spacing = (box[:, 1] - box[:, 0]) / np.array(res)
    return GeometricComplex(X, origin=box[:, 0], spacing=spacing)


def _evaluate_samples(G: GeometricComplex, f: VectorFieldExpr) -> np.ndarray:
    if f.n != G.ambient_dim:
        raise DegenerateGeometry(f"field has {f.n} components, complex lives in dimension {G.ambient_dim}")
    return f.evaluate_many(G.barycenters_cache())


def _sample_cells(G: GeometricComplex, x: int, strategy: str) -> list[int]:
    if strategy == "barycenter":
        return [x]
    verts = G.vertex_cells(x)
    if strategy == "vertices":
        return verts
    return [x] + [v for v in verts if v != x]


def transitions(
    G: GeometricComplex,
    f: VectorFieldExpr,
    tol: float = 1e-9,
    samples: str = "barycenter+vertices",
) -> list[frozenset]:
    """Transition sets ``D_sigma`` for every cell below the top dimension.

    ``D_sigma`` holds ``sigma`` and each cofacet the field points into at
    some sample point (barycentre and vertices of ``sigma``).  Components are
    compared against ``tol * |f(p)|``.  When the field is tangent to
    ``sigma`` at every sample, all cofacets are added.  Samples where the
    field vanishes exactly are rest points and contribute nothing; if every
    sample of ``sigma`` is a rest point, each cofacet ``tau`` is probed at its
    barycentre and kept unless the field there points back toward ``sigma``.
    """
    if samples not in SAMPLE_STRATEGIES:
        raise ValueError(f"unknown sample strategy {samples!r}")
    X = G.complex
    values = _evaluate_samples(G, f)
    norms = np.linalg.norm(values, axis=1)
    top = X.dim
    if G.kind == "cubical":
        out = _transitions_cubical(G, values, norms, tol, samples, top)
    else:
        out = _transitions_simplicial(G, values, norms, tol, samples, top)
    bc = G.barycenters_cache()
    lower = [x for x in range(len(X)) if X.dims[x] < top]
    for i, x in enumerate(lower):
        if not any(norms[s] > 0 for s in _sample_cells(G, x, samples)):
            out[i] = frozenset({x} | _probe_cofacets(X, x, bc, values, norms, tol))
    return out


def _probe_cofacets(X, x, bc, values, norms, tol) -> set[int]:
    """Cofacets of a cell at rest whose barycentre does not flow back toward it."""
    keep = set()
    for t in X.coboundary[x]:
        d = bc[t] - bc[x]
        if float(values[t] @ d) >= -tol * norms[t] * float(np.linalg.norm(d)):
            keep.add(t)
    return keep


def _transitions_cubical(G, values, norms, tol, samples, top) -> list[frozenset]:
    X = G.complex
    out = []
    for x in range(len(X)):
        if X.dims[x] >= top:
            continue
        key = X.keys[x]
        cof = []
        for t in X.coboundary[x]:
            tk = X.keys[t]
            axis = next(i for i in range(len(key)) if tk[i] != key[i])
            cof.append((t, axis, 1 if tk[axis] > key[axis] else -1))
        d = {x}
        tangent = True
        for s in _sample_cells(G, x, samples):
            nrm = norms[s]
            if nrm == 0.0:
                continue
            v = values[s]
            thr = tol * nrm
            for t, axis, sign in cof:
                c = sign * v[axis]
                if abs(c) > thr:
                    tangent = False
                if c > thr:
                    d.add(t)
        if tangent and any(norms[s] > 0 for s in _sample_cells(G, x, samples)):
            d.update(X.coboundary[x])
        out.append(frozenset(d))
    return out


def _transitions_simplicial(G, values, norms, tol, samples, top) -> list[frozenset]:
    X = G.complex
    pts = G.points
    n = pts.shape[1]
    tops = [x for x in range(len(X)) if X.dims[x] == top]
    if top != n:
        raise DegenerateGeometry(f"top simplices have dimension {top}, ambient dimension is {n}")
    # per top simplex: vertices and inverse of the edge matrix
    frames = {}
    for t in tops:
        vs = X.keys[t]
        base = pts[vs[0]]
        E = (pts[list(vs[1:])] - base).T
        det = np.linalg.det(E)
        scale = np.abs(E).max()
        if abs(det) <= 1e-14 * scale ** n:
            raise DegenerateGeometry(f"simplex {X.labels[t]} has zero volume")
        frames[t] = (vs, np.linalg.inv(E), np.linalg.norm(E, axis=0).max())
    top_star: dict[int, list[int]] = {}
    for t in tops:
        for v in X.closure((t,)):
            top_star.setdefault(v, []).append(t)

    out = []
    for x in range(len(X)):
        if X.dims[x] >= top:
            continue
        sig = set(X.keys[x])
        d = {x}
        tangent = True
        sample_ids = _sample_cells(G, x, samples)
        for s in sample_ids:
            nrm = norms[s]
            if nrm == 0.0:
                continue
            direction = values[s] / nrm
            for t in top_star.get(x, ()):
                vs, inv, h = frames[t]
                coeffs = inv @ direction  # coordinates along vs[1:] - vs[0]
                # coefficient of each vertex of t outside sigma; any vs[0] offset
                # is absorbed by sigma's own coordinates when vs[0] is in sigma
                full = dict(zip(vs[1:], coeffs))
                full[vs[0]] = -float(np.sum(coeffs))
                outside = {w: full[w] * h for w in vs if w not in sig}
                if any(abs(c) > tol for c in outside.values()):
                    tangent = False
                if all(c >= -tol for c in outside.values()):
                    for w, c in outside.items():
                        if c > tol:
                            d.add(X.id_of_key(tuple(sorted(sig | {w}))))
        if tangent and any(norms[s] > 0 for s in sample_ids):
            d.update(X.coboundary[x])
        out.append(frozenset(d))
    return out


def mvf_from_field(
    G: GeometricComplex, f: VectorFieldExpr, tol: float = 1e-9, samples: str = "barycenter+vertices"
) -> MultivectorField:
    """Minimal multivector field containing every transition set of ``f`` on ``G``."""
    return minimal_mvf(G.complex, transitions(G, f, tol, samples))
