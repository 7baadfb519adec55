"""Lefschetz complexes: graded cells with an incidence coefficient map.

A :class:`LefschetzComplex` is immutable.  Cells are integer ids ``0..n-1``
assigned in ``(dim, key)`` order by the builders, so everything computed
downstream is reproducible.  Cell sets are plain ``frozenset`` of ids.
"""
from __future__ import annotations

from collections import deque
from itertools import combinations, product
from typing import Iterable, Mapping, NamedTuple, Sequence

from .algebra import QQ, Field, field_from_id
from .errors import (
    DegenerateInput,
    DuplicateSimplex,
    GradingViolation,
    NotLocallyClosed,
    OutOfGrid,
    SquareNotZero,
    UnknownCell,
)

CellSet = frozenset


class Cell(NamedTuple):
    id: int
    label: str
    dim: int


class LefschetzComplex:
    """Finite graded cell set ``X`` with incidence coefficients ``kappa``.

    Parameters
    ----------
    dims, labels:
        Per-cell dimension and label, indexed by cell id.
    boundary:
        ``boundary[x]`` maps each facet ``y`` to ``kappa(x, y)`` (raw field values).
    keys:
        Optional geometric key per cell (vertex tuple for simplicial
        complexes, doubled grid coordinates for cubical ones).
    """

    def __init__(
        self,
        dims: Sequence[int],
        labels: Sequence[str],
        boundary: Sequence[Mapping[int, object]],
        field="Q",
        keys: Sequence | None = None,
        kind: str | None = None,
    ):
        if not (len(dims) == len(labels) == len(boundary)):
            raise ValueError("dims, labels and boundary must have equal length")
        self.field: Field = field_from_id(field)
        self.dims = tuple(int(d) for d in dims)
        self.labels = tuple(str(s) for s in labels)
        n = len(self.dims)
        bnd: list[dict] = []
        cobnd: list[dict] = [dict() for _ in range(n)]
        for x, row in enumerate(boundary):
            clean = {}
            for y, v in row.items():
                if not 0 <= y < n:
                    raise UnknownCell(y)
                v = self.field.coerce(v)
                if not self.field.is_zero(v):
                    clean[y] = v
                    cobnd[y][x] = v
            bnd.append(clean)
        self.boundary = tuple(bnd)
        self.coboundary = tuple(cobnd)
        self.keys = tuple(keys) if keys is not None else None
        self.kind = kind
        self._key_index = None
        self.parent_ids: tuple[int, ...] | None = None

    # -- construction helpers -------------------------------------------------
    @classmethod
    def from_labels(cls, cells: Iterable[tuple[str, int]], kappa: Mapping[tuple[str, str], object], field="Q"):
        """Build from ``(label, dim)`` pairs and a label-keyed ``kappa``; ids follow ``(dim, label)``."""
        cells = sorted(((int(d), str(lab)) for lab, d in cells))
        index = {lab: i for i, (_, lab) in enumerate(cells)}
        if len(index) != len(cells):
            raise ValueError("duplicate cell labels")
        boundary: list[dict] = [dict() for _ in cells]
        for (lx, ly), v in kappa.items():
            if lx not in index or ly not in index:
                raise UnknownCell(lx if lx not in index else ly)
            boundary[index[lx]][index[ly]] = v
        return cls([d for d, _ in cells], [lab for _, lab in cells], boundary, field)

    # -- basic queries --------------------------------------------------------
    def __len__(self) -> int:
        return len(self.dims)

    @property
    def n_cells(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return max(self.dims, default=-1)

    def cells(self) -> list[Cell]:
        return [Cell(i, self.labels[i], self.dims[i]) for i in range(len(self))]

    def cells_of_dim(self, k: int) -> list[int]:
        return [i for i, d in enumerate(self.dims) if d == k]

    def id_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownCell(label) from None

    def ids(self, *labels: str) -> frozenset:
        return frozenset(self.id_of(s) for s in labels)

    def id_of_key(self, key) -> int:
        if self._key_index is None:
            if self.keys is None:
                raise UnknownCell(key)
            self._key_index = {k: i for i, k in enumerate(self.keys)}
        try:
            return self._key_index[key]
        except KeyError:
            raise UnknownCell(key) from None

    def kappa(self, x: int, y: int):
        self._check(x)
        self._check(y)
        return self.boundary[x].get(y, 0)

    def _check(self, x: int):
        if not isinstance(x, int) or not 0 <= x < len(self.dims):
            raise UnknownCell(x)

    def label_set(self, cells: Iterable[int]) -> set[str]:
        return {self.labels[c] for c in cells}

    # -- face relation --------------------------------------------------------
    def facets(self, x: int) -> frozenset:
        self._check(x)
        return frozenset(self.boundary[x])

    def cofacets(self, x: int) -> frozenset:
        self._check(x)
        return frozenset(self.coboundary[x])

    def closure(self, cells: Iterable[int]) -> frozenset:
        out = set(cells)
        stack = list(out)
        bnd = self.boundary
        while stack:
            x = stack.pop()
            for y in bnd[x]:
                if y not in out:
                    out.add(y)
                    stack.append(y)
        return frozenset(out)

    def star(self, cells: Iterable[int]) -> frozenset:
        """Upward closure: every cell having a face in ``cells``."""
        out = set(cells)
        stack = list(out)
        cob = self.coboundary
        while stack:
            x = stack.pop()
            for y in cob[x]:
                if y not in out:
                    out.add(y)
                    stack.append(y)
        return frozenset(out)

    def mouth(self, cells: Iterable[int]) -> frozenset:
        s = frozenset(cells)
        return self.closure(s) - s

    def is_closed(self, cells: Iterable[int]) -> bool:
        s = set(cells)
        return all(y in s for x in s for y in self.boundary[x])

    def is_open(self, cells: Iterable[int]) -> bool:
        s = set(cells)
        return all(y in s for x in s for y in self.coboundary[x])

    def is_locally_closed(self, cells: Iterable[int]) -> bool:
        return self.is_closed(self.mouth(cells))

    def is_interval(self, cells: Iterable[int]) -> bool:
        """Convexity in the face order: ``x <= y <= z`` with ``x, z`` in S forces ``y`` in S."""
        s = frozenset(cells)
        return (self.closure(s) & self.star(s)) == s

    def convex_hull(self, cells: Iterable[int]) -> frozenset:
        s = frozenset(cells)
        return self.closure(s) & self.star(s)

    # -- validation -----------------------------------------------------------
    def validate(self) -> bool:
        """Check the grading and ``sum_z kappa(x,z) kappa(z,y) = 0``; raise on the first violation."""
        f = self.field
        dims = self.dims
        for x in range(len(dims)):
            for y in self.boundary[x]:
                if dims[x] != dims[y] + 1:
                    raise GradingViolation(x, y)
        for x in range(len(dims)):
            acc: dict = {}
            for z, a in self.boundary[x].items():
                for y, b in self.boundary[z].items():
                    acc[y] = f.add(acc.get(y, 0), f.mul(a, b))
            for y in sorted(acc):
                if not f.is_zero(acc[y]):
                    raise SquareNotZero(x, y, acc[y])
        return True

    # -- restriction ----------------------------------------------------------
    def subcomplex(self, cells: Iterable[int]) -> "LefschetzComplex":
        """Restriction of ``kappa`` to a locally closed subset, with ids renumbered."""
        s = sorted(set(cells))
        if not self.is_locally_closed(s):
            raise NotLocallyClosed("subcomplex requires a locally closed cell set")
        index = {x: i for i, x in enumerate(s)}
        boundary = [{index[y]: v for y, v in self.boundary[x].items() if y in index} for x in s]
        sub = LefschetzComplex(
            [self.dims[x] for x in s],
            [self.labels[x] for x in s],
            boundary,
            self.field,
            keys=[self.keys[x] for x in s] if self.keys is not None else None,
            kind=self.kind,
        )
        sub.parent_ids = tuple(s)
        return sub

    def with_field(self, field) -> "LefschetzComplex":
        """The same complex with its rational incidences reduced into another field.

        Incidences over GF(p) cannot be lifted, so only complexes over Q (or
        already over the target field) can be converted.
        """
        target = field_from_id(field)
        if target == self.field:
            return self
        if self.field != QQ:
            raise ValueError(f"cannot convert incidences over {self.field.id} to {target.id}")
        return LefschetzComplex(self.dims, self.labels, self.boundary, target, self.keys, self.kind)

    def __repr__(self):
        counts = [sum(1 for d in self.dims if d == k) for k in range(self.dim + 1)]
        return f"LefschetzComplex(cells={counts}, field={self.field})"


def validate(X: LefschetzComplex) -> bool:
    return X.validate()


# -- builders -----------------------------------------------------------------
def _simplex_label(vs: tuple[int, ...]) -> str:
    return "(" + ",".join(str(v) for v in vs) + ")"


def build_simplicial(vertex_count: int, simplices: Iterable[Sequence[int]], field="Q") -> LefschetzComplex:
    """Simplicial complex generated by ``simplices`` (faces are added automatically).

    Orientation follows sorted vertex order: ``kappa(s, s minus s[i]) = (-1)^i``.
    """
    seen = set()
    tops = []
    for s in simplices:
        vs = tuple(sorted(int(v) for v in s))
        if len(set(vs)) != len(vs):
            raise DegenerateInput(f"repeated vertex in simplex {tuple(s)}")
        if any(not 0 <= v < vertex_count for v in vs):
            raise DegenerateInput(f"vertex out of range in simplex {tuple(s)}")
        if vs in seen:
            raise DuplicateSimplex(f"simplex {vs} listed twice")
        seen.add(vs)
        tops.append(vs)
    all_simplices = {(v,) for v in range(vertex_count)}
    for vs in tops:
        for k in range(1, len(vs) + 1):
            all_simplices.update(combinations(vs, k))
    ordered = sorted(all_simplices, key=lambda t: (len(t), t))
    index = {t: i for i, t in enumerate(ordered)}
    boundary = []
    for t in ordered:
        row = {}
        if len(t) > 1:
            for i in range(len(t)):
                row[index[t[:i] + t[i + 1:]]] = 1 if i % 2 == 0 else -1
        boundary.append(row)
    return LefschetzComplex(
        [len(t) - 1 for t in ordered],
        [_simplex_label(t) for t in ordered],
        boundary,
        field,
        keys=ordered,
        kind="simplicial",
    )


def _cube_label(key: tuple[int, ...]) -> str:
    parts = []
    for c in key:
        if c % 2:
            parts.append(f"[{c // 2},{c // 2 + 1}]")
        else:
            parts.append(f"[{c // 2}]")
    return "x".join(parts)


def build_cubical(grid_dims: Sequence[int], active_cubes: Iterable[Sequence[int]] | None = None, field="Q") -> LefschetzComplex:
    """Cubical complex of the given top cubes (all cubes when ``active_cubes`` is None).

    Cells are keyed by doubled integer coordinates: an odd entry ``2a+1`` is the
    interval ``[a, a+1]`` and an even entry ``2a`` the degenerate interval ``[a]``.
    """
    grid_dims = tuple(int(n) for n in grid_dims)
    n = len(grid_dims)
    if active_cubes is None:
        active_cubes = product(*(range(m) for m in grid_dims))
    cells = set()
    offsets = list(product((-1, 0, 1), repeat=n))
    for cube in active_cubes:
        cube = tuple(int(c) for c in cube)
        if len(cube) != n or any(not 0 <= c < m for c, m in zip(cube, grid_dims)):
            raise OutOfGrid(f"cube {cube} is outside grid {grid_dims}")
        centre = tuple(2 * c + 1 for c in cube)
        for off in offsets:
            cells.add(tuple(c + o for c, o in zip(centre, off)))
    ordered = sorted(cells, key=lambda k: (sum(c % 2 for c in k), k))
    index = {k: i for i, k in enumerate(ordered)}
    boundary = []
    for key in ordered:
        row = {}
        sign = 1
        for i, c in enumerate(key):
            if c % 2:
                lo = key[:i] + (c - 1,) + key[i + 1:]
                hi = key[:i] + (c + 1,) + key[i + 1:]
                row[index[hi]] = sign
                row[index[lo]] = -sign
                sign = -sign
        boundary.append(row)
    return LefschetzComplex(
        [sum(c % 2 for c in k) for k in ordered],
        [_cube_label(k) for k in ordered],
        boundary,
        field,
        keys=ordered,
        kind="cubical",
    )


def build_delaunay(points: Sequence[Sequence[float]], field="Q") -> LefschetzComplex:
    """Delaunay triangulation of planar points as a simplicial complex."""
    from .delaunay import delaunay_triangles

    tris = delaunay_triangles(points)
    return build_simplicial(len(points), tris, field)


# -- JSON ---------------------------------------------------------------------
def complex_to_json(X: LefschetzComplex) -> dict:
    kappa = []
    for x in range(len(X)):
        for y in sorted(X.boundary[x]):
            kappa.append([x, y, X.field.to_str(X.boundary[x][y])])
    return {
        "field": X.field.id,
        "cells": [{"id": c.id, "label": c.label, "dim": c.dim} for c in X.cells()],
        "kappa": kappa,
    }


def complex_from_json(data: Mapping) -> LefschetzComplex:
    field = field_from_id(data.get("field", "Q"))
    cells = sorted(data["cells"], key=lambda c: int(c["id"]))
    ids = [int(c["id"]) for c in cells]
    if ids != list(range(len(ids))):
        raise ValueError("cell ids must be 0..n-1")
    boundary: list[dict] = [dict() for _ in cells]
    for x, y, v in data.get("kappa", []):
        boundary[int(x)][int(y)] = field.parse(str(v))
    return LefschetzComplex([c["dim"] for c in cells], [c["label"] for c in cells], boundary, field)
