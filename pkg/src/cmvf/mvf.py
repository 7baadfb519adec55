"""Multivector fields on Lefschetz complexes."""
from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .errors import NotLocallyClosed, NotPartition
from .homology import _betti_of
from .lefschetz import LefschetzComplex


class MultivectorField:
    """Partition of a Lefschetz complex into locally closed multivectors.

    Multivectors are stored as sorted frozensets ordered by their smallest
    cell id; ``part_of[x]`` is the index of the multivector containing ``x``.
    """

    def __init__(self, X: LefschetzComplex, multivectors: Iterable[Iterable[int]], check: bool = True):
        self.complex = X
        parts = [frozenset(p) for p in multivectors]
        parts = [p for p in parts if p]
        parts.sort(key=min)
        self.parts: tuple[frozenset, ...] = tuple(parts)
        part_of = [-1] * len(X)
        self._overlap = None
        for i, p in enumerate(self.parts):
            for x in p:
                if not 0 <= x < len(X):
                    raise NotPartition(f"cell {x} is not in the complex")
                if part_of[x] != -1:
                    self._overlap = x
                part_of[x] = i
        self.part_of = part_of
        self._betti: list | None = None
        if check:
            self.validate()

    def validate(self) -> bool:
        if self._overlap is not None:
            raise NotPartition(f"cell {self._overlap} lies in two multivectors")
        missing = [x for x, i in enumerate(self.part_of) if i == -1]
        if missing:
            raise NotPartition(f"cells {missing[:5]} are not covered")
        for i, p in enumerate(self.parts):
            if not self.complex.is_locally_closed(p):
                raise NotLocallyClosed(f"multivector {i} {sorted(p)} is not locally closed")
        return True

    def __len__(self) -> int:
        return len(self.parts)

    def multivector_of(self, x: int) -> frozenset:
        return self.parts[self.part_of[x]]

    def part_betti(self, i: int) -> tuple:
        if self._betti is None:
            self._betti = [None] * len(self.parts)
        if self._betti[i] is None:
            self._betti[i] = _betti_of(self.complex, self.parts[i])
        return self._betti[i]

    def is_critical(self, i: int) -> bool:
        return any(self.part_betti(i))

    @property
    def tags(self) -> list[str]:
        return ["critical" if self.is_critical(i) else "regular" for i in range(len(self.parts))]

    def critical_parts(self) -> list[int]:
        return [i for i in range(len(self.parts)) if self.is_critical(i)]

    def __repr__(self):
        n_crit = len(self.critical_parts())
        return f"MultivectorField({len(self.parts)} multivectors, {n_crit} critical)"


def validate_mvf(V: MultivectorField) -> bool:
    return V.validate()


def classify(V: MultivectorField) -> list[str]:
    """``"critical"`` when ``H_*(cl V, mo V) != 0``, else ``"regular"``, per multivector."""
    return V.tags


def is_v_compatible(V: MultivectorField, S: Iterable[int]) -> bool:
    s = set(S)
    return all(V.parts[V.part_of[x]] <= s for x in s)


def v_saturate(V: MultivectorField, S: Iterable[int]) -> frozenset:
    out: set[int] = set()
    for x in S:
        if x not in out:
            out |= V.parts[V.part_of[x]]
    return frozenset(out)


def v_hull(V: MultivectorField, A: Iterable[int]) -> frozenset:
    """Smallest V-compatible, locally closed superset of ``A``."""
    X = V.complex
    s = frozenset(A)
    while True:
        t = X.convex_hull(v_saturate(V, s))
        if t == s:
            return s
        s = t


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> int:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return ra


def minimal_mvf(X: LefschetzComplex, D: Iterable[Iterable[int]]) -> MultivectorField:
    """The finest multivector field in which every set of ``D`` lies in one multivector.

    Cells of each transition set are merged, then any part that is not convex in
    the face order absorbs the parts meeting its convex hull, until every part
    is locally closed.  All such merges are forced, so the fixed point is the
    unique minimal field.
    """
    n = len(X)
    uf = _UnionFind(n)
    for d in D:
        d = list(d)
        for y in d[1:]:
            uf.union(d[0], y)
    members: dict[int, set[int]] = {}
    for x in range(n):
        members.setdefault(uf.find(x), set()).add(x)
    queue = sorted(r for r, m in members.items() if len(m) > 1)
    while queue:
        r = queue.pop()
        if uf.find(r) != r:
            continue
        part = members[r]
        hull = X.closure(part) & X.star(part)
        extra = hull - part
        if not extra:
            continue
        for y in sorted(extra):
            ry = uf.find(y)
            if ry == uf.find(r):
                continue
            a, b = uf.find(r), ry
            new = uf.union(a, b)
            old = b if new == a else a
            members[new] |= members.pop(old)
        queue.append(uf.find(r))
    return MultivectorField(X, members.values(), check=True)


def mvf_to_json(V: MultivectorField) -> dict:
    return {"multivectors": [sorted(p) for p in V.parts], "tags": V.tags}


def mvf_from_json(X: LefschetzComplex, data: Mapping) -> MultivectorField:
    return MultivectorField(X, data["multivectors"])
