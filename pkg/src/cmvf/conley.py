"""Conley indices and connection matrices.

The connection matrix is obtained by algebraic reduction of the full
boundary operator.  Every cell is graded by its strongly connected
component in the flow graph; the boundary never increases this grade, and
pivots are only taken between two cells of the same component.  Each such
elimination keeps the operator filtered, regular components reduce to
nothing (their relative homology vanishes) and a Morse set reduces to a
basis of its Conley index.  What survives is a strictly upper triangular
boundary operator on the direct sum of the Conley indices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .algebra import Field, SparseMatrix, column_rank
from .errors import NotIsolatedInvariant, ReductionStalled
from .homology import _betti_of
from .lefschetz import LefschetzComplex
from .dynamics import MorseDecomposition, connection_set, morse_interval
from .mvf import MultivectorField, is_v_compatible


def conley_index(X: LefschetzComplex, V: MultivectorField, S: Iterable[int]) -> tuple:
    """``CH_*(S) = H_*(cl S, mo S)`` for an isolated invariant set candidate ``S``."""
    s = frozenset(S)
    if not is_v_compatible(V, s):
        raise NotIsolatedInvariant("set is not a union of multivectors")
    if not X.is_locally_closed(s):
        raise NotIsolatedInvariant("set is not locally closed")
    return _betti_of(X, s)


class Generator(NamedTuple):
    morse_index: int
    dim: int
    rep_cell: int


@dataclass
class ConnectionMatrix:
    """Boundary operator ``delta`` on the generators of all Conley indices.

    ``delta.columns[j]`` holds the image of generator ``j``; a nonzero entry in
    row ``i`` contributes to the block ``Delta(p, q)`` with ``p`` the Morse
    index of generator ``i`` and ``q`` that of generator ``j``.
    """

    generators: list[Generator]
    delta: SparseMatrix
    n_morse: int
    poset_pairs: list[tuple[int, int]]
    top_dim: int

    @property
    def field(self) -> Field:
        return self.delta.field

    def generators_of(self, p: int) -> list[int]:
        return [i for i, g in enumerate(self.generators) if g.morse_index == p]

    def block(self, p: int, q: int) -> SparseMatrix:
        return self.delta.submatrix(self.generators_of(p), self.generators_of(q))

    def nonzero_blocks(self) -> list[tuple[int, int]]:
        out = set()
        for j, col in enumerate(self.delta.columns):
            for i in col:
                out.add((self.generators[i].morse_index, self.generators[j].morse_index))
        return sorted(out)

    def minor(self, I: Iterable[int]) -> tuple[list[int], SparseMatrix]:
        keep = set(I)
        idx = [i for i, g in enumerate(self.generators) if g.morse_index in keep]
        return idx, self.delta.submatrix(idx, idx)

    def homology(self, I: Iterable[int] | None = None) -> tuple:
        """Betti numbers of ``ker Delta(I) / im Delta(I)``, graded by generator dimension."""
        if I is None:
            I = range(self.n_morse)
        idx, sub = self.minor(I)
        dims = [self.generators[i].dim for i in idx]
        out = []
        for k in range(self.top_dim + 1):
            n_k = dims.count(k)
            cols_k = [sub.columns[j] for j in range(len(idx)) if dims[j] == k]
            cols_k1 = [sub.columns[j] for j in range(len(idx)) if dims[j] == k + 1]
            r_k = column_rank(cols_k, self.field)
            r_k1 = column_rank(cols_k1, self.field)
            out.append(n_k - r_k - r_k1)
        return tuple(out)

    def to_json(self) -> dict:
        f = self.field
        entries = []
        for j, col in enumerate(self.delta.columns):
            for i in sorted(col):
                entries.append([i, j, f.to_str(col[i])])
        entries.sort()
        return {
            "field": f.id,
            "poset": [list(p) for p in self.poset_pairs],
            "generators": [
                {"morse_index": g.morse_index, "dim": g.dim, "rep_cell": g.rep_cell} for g in self.generators
            ],
            "delta": entries,
        }


class _Reducer:
    """In-place sparse boundary operator supporting elementary reductions."""

    def __init__(self, X: LefschetzComplex):
        self.f = X.field
        self.col: list[dict] = [dict(b) for b in X.boundary]
        self.row: list[dict] = [dict(c) for c in X.coboundary]
        self.alive = [True] * len(X)

    def eliminate(self, r: int, c: int):
        f = self.f
        col, row = self.col, self.row
        pinv = f.inv(col[c][r])
        lower = [(i, v) for i, v in col[c].items() if i != r]
        upper = [(j, v) for j, v in row[r].items() if j != c]
        for j, mrj in upper:
            factor = f.mul(pinv, mrj)
            cj = col[j]
            for i, mic in lower:
                nv = f.sub(cj.get(i, 0), f.mul(mic, factor))
                if f.is_zero(nv):
                    if i in cj:
                        del cj[i]
                        del row[i][j]
                else:
                    cj[i] = nv
                    row[i][j] = nv
        for cell in (r, c):
            for i in col[cell]:
                row[i].pop(cell, None)
            for j in row[cell]:
                col[j].pop(cell, None)
            col[cell] = {}
            row[cell] = {}
            self.alive[cell] = False


def _reduce_by(red: _Reducer, cells: Sequence[int], group: Sequence[int]) -> None:
    """Eliminate every nonzero entry whose row and column share a ``group`` label."""
    col = red.col
    alive = red.alive
    pending = list(reversed(sorted(cells)))
    while pending:
        c = pending.pop()
        if not alive[c]:
            continue
        g = group[c]
        rows = [i for i in col[c] if group[i] == g]
        if not rows:
            continue
        r = min(rows)
        touched = [j for j in red.row[r] if j != c and group[j] == g]
        red.eliminate(r, c)
        pending.extend(sorted(touched, reverse=True))


def connection_matrix(X: LefschetzComplex, V: MultivectorField, M: MorseDecomposition) -> ConnectionMatrix:
    """Reduce the boundary operator to a connection matrix for the Morse decomposition ``M``."""
    red = _Reducer(X)
    cells = range(len(X))
    _reduce_by(red, cells, V.part_of)
    _reduce_by(red, cells, M.scc_of)

    morse_of_scc = {s: p for p, s in enumerate(M.morse_scc)}
    survivors = [x for x in cells if red.alive[x]]
    for x in survivors:
        if M.scc_of[x] not in morse_of_scc:
            raise ReductionStalled(f"cell {x} survives in a regular stratum")
        if any(M.scc_of[i] == M.scc_of[x] for i in red.col[x]):
            raise ReductionStalled(f"cell {x} keeps a diagonal entry")
    gens = sorted(
        (Generator(morse_of_scc[M.scc_of[x]], X.dims[x], x) for x in survivors),
        key=lambda g: (g.morse_index, g.dim, g.rep_cell),
    )
    top = max(X.dim, 0)
    for p, ch in enumerate(M.conley_indices):
        counts = tuple(sum(1 for g in gens if g.morse_index == p and g.dim == k) for k in range(top + 1))
        if counts != tuple(ch):
            raise ReductionStalled(f"Morse set {p}: {counts} generators but Conley index {ch}")
    pos = {g.rep_cell: i for i, g in enumerate(gens)}
    cols = [{pos[i]: v for i, v in red.col[g.rep_cell].items()} for g in gens]
    delta = SparseMatrix(len(gens), len(gens), cols, X.field)
    return ConnectionMatrix(gens, delta, len(M), M.poset_pairs, top)


@dataclass
class VerificationReport:
    strictly_upper: bool = True
    boundary: bool = True
    degree: bool = True
    intervals_checked: int = 0
    interval_failures: list = field(default_factory=list)
    forced_connections: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "strictly_upper_triangular": self.strictly_upper,
            "boundary_operator": self.boundary,
            "degree_minus_one": self.degree,
            "intervals_checked": self.intervals_checked,
            "interval_failures": [
                {"interval": list(I), "delta_homology": list(h), "conley_index": list(c)}
                for I, h, c in self.interval_failures
            ],
            "forced_connections": [
                {"from": q, "to": p, "connection_set_nonempty": ok} for p, q, ok in self.forced_connections
            ],
            "failures": list(self.failures),
        }


def verify_connection_matrix(
    cm: ConnectionMatrix,
    X: LefschetzComplex,
    V: MultivectorField,
    M: MorseDecomposition,
    max_exhaustive: int = 12,
    samples: int = 64,
    seed: int = 0,
) -> VerificationReport:
    """Check the defining properties of ``cm`` against independent computations.

    Intervals are checked exhaustively when the poset has at most
    ``max_exhaustive`` elements, otherwise all singletons, the whole poset
    and ``samples`` random intervals are checked.
    """
    rep = VerificationReport()
    gens = cm.generators
    for j, col in enumerate(cm.delta.columns):
        q, kj = gens[j].morse_index, gens[j].dim
        for i in col:
            p, ki = gens[i].morse_index, gens[i].dim
            if not M.less(p, q):
                rep.strictly_upper = False
                rep.failures.append(f"entry ({i},{j}) lies in block ({p},{q}) with p not < q")
            if ki != kj - 1:
                rep.degree = False
                rep.failures.append(f"entry ({i},{j}) maps dimension {kj} to {ki}")
    if not (cm.delta @ cm.delta).is_zero():
        rep.boundary = False
        rep.failures.append("delta squared is not zero")

    if len(M) <= max_exhaustive:
        intervals = M.intervals()
    else:
        import random

        rng = random.Random(seed)
        intervals = [(p,) for p in M.indices] + [tuple(M.indices)]
        for _ in range(samples):
            a, b = rng.choice(list(M.indices)), rng.choice(list(M.indices))
            I = tuple(r for r in M.indices if M.leq(a, r) and M.leq(r, b))
            if I:
                intervals.append(I)
        intervals = sorted(set(intervals))
    G = M.flow
    for I in intervals:
        h = cm.homology(I)
        ch = conley_index(X, V, morse_interval(G, M, I))
        rep.intervals_checked += 1
        if tuple(h) != tuple(ch):
            rep.interval_failures.append((I, h, ch))
            rep.failures.append(f"interval {list(I)}: H(Delta(I)) = {h} but CH(M_I) = {ch}")

    nonzero = set(cm.nonzero_blocks())
    for p, q in M.hasse_edges():
        if (p, q) in nonzero:
            ok = bool(connection_set(G, M.morse_sets[q], M.morse_sets[p]))
            rep.forced_connections.append((p, q, ok))
            if not ok:
                rep.failures.append(f"Delta({p},{q}) != 0 but the connection set is empty")
    return rep
