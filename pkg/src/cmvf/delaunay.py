"""Incremental Bowyer-Watson Delaunay triangulation in the plane.

Points are inserted in index order.  A point lying exactly on a circumcircle
does not invalidate the triangle, so cocircular ties are resolved in favour
of the lower-indexed points and the output is deterministic.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import DegenerateInput


def _orient_exact(a, b, c) -> int:
    ax, ay = map(Fraction, a)
    bx, by = map(Fraction, b)
    cx, cy = map(Fraction, c)
    d = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    return (d > 0) - (d < 0)


def orient(a, b, c) -> int:
    """Sign of the signed area of triangle ``abc`` (+1 counter-clockwise)."""
    l = (b[0] - a[0]) * (c[1] - a[1])
    r = (b[1] - a[1]) * (c[0] - a[0])
    d = l - r
    if abs(d) > 1e-12 * (abs(l) + abs(r)):
        return (d > 0) - (d < 0)
    return _orient_exact(a, b, c)


def _incircle_exact(a, b, c, d) -> int:
    rows = []
    dx, dy = map(Fraction, d)
    for p in (a, b, c):
        px, py = Fraction(p[0]) - dx, Fraction(p[1]) - dy
        rows.append((px, py, px * px + py * py))
    (a1, a2, a3), (b1, b2, b3), (c1, c2, c3) = rows
    det = a1 * (b2 * c3 - b3 * c2) - a2 * (b1 * c3 - b3 * c1) + a3 * (b1 * c2 - b2 * c1)
    return (det > 0) - (det < 0)


def incircle(a, b, c, d) -> int:
    """+1 if ``d`` is strictly inside the circumcircle of counter-clockwise ``abc``."""
    rows = []
    for p in (a, b, c):
        px, py = p[0] - d[0], p[1] - d[1]
        rows.append((px, py, px * px + py * py))
    (a1, a2, a3), (b1, b2, b3), (c1, c2, c3) = rows
    t1 = a1 * (b2 * c3 - b3 * c2)
    t2 = a2 * (b1 * c3 - b3 * c1)
    t3 = a3 * (b1 * c2 - b2 * c1)
    det = t1 - t2 + t3
    mag = abs(a1) * (abs(b2 * c3) + abs(b3 * c2)) + abs(a2) * (abs(b1 * c3) + abs(b3 * c1)) + abs(a3) * (
        abs(b1 * c2) + abs(b2 * c1)
    )
    if abs(det) > 1e-10 * mag:
        return (det > 0) - (det < 0)
    return _incircle_exact(a, b, c, d)


def delaunay_triangles(points: Sequence[Sequence[float]]) -> list[tuple[int, int, int]]:
    """Triangles (sorted vertex-index triples, sorted list) of the Delaunay triangulation."""
    pts = [(float(p[0]), float(p[1])) for p in points]
    n = len(pts)
    if n < 3:
        raise DegenerateInput("need at least 3 points")
    if len(set(pts)) != n:
        raise DegenerateInput("duplicate points")
    a0 = pts[0]
    far = max(range(n), key=lambda i: (pts[i][0] - a0[0]) ** 2 + (pts[i][1] - a0[1]) ** 2)
    if all(orient(a0, pts[far], p) == 0 for p in pts):
        raise DegenerateInput("all points are collinear")

    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    cx, cy = (min(xs) + max(xs)) / 2, (min(ys) + max(ys)) / 2
    m = max(max(xs) - min(xs), max(ys) - min(ys), 1.0) * 1e5
    verts = pts + [(cx - 2 * m, cy - m), (cx + 2 * m, cy - m), (cx, cy + 2 * m)]
    s0, s1, s2 = n, n + 1, n + 2

    tris: dict[tuple[int, int, int], None] = {(s0, s1, s2): None}
    for i in range(n):
        p = verts[i]
        bad = [t for t in tris if incircle(verts[t[0]], verts[t[1]], verts[t[2]], p) > 0]
        if not bad:
            # p lies on circumcircles only; locate a containing triangle instead
            bad = [
                t
                for t in tris
                if orient(verts[t[0]], verts[t[1]], p) >= 0
                and orient(verts[t[1]], verts[t[2]], p) >= 0
                and orient(verts[t[2]], verts[t[0]], p) >= 0
            ][:1]
        edge_count: dict[tuple[int, int], int] = {}
        directed: dict[tuple[int, int], tuple[int, int]] = {}
        for t in bad:
            for e in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
                k = (min(e), max(e))
                edge_count[k] = edge_count.get(k, 0) + 1
                directed[k] = e
        for t in bad:
            del tris[t]
        for k, cnt in edge_count.items():
            if cnt == 1:
                u, v = directed[k]
                if orient(verts[u], verts[v], p) > 0:
                    tris[(u, v, i)] = None
    out = sorted(tuple(sorted(t)) for t in tris if max(t) < n)
    return out
