"""Combinatorial dynamics of a multivector field.

The flow map sends a cell ``x`` to ``cl x`` together with its multivector.
For graph algorithms we use a reachability-equivalent sparse digraph: every
cell points to its facets, and the cells of each multivector are linked in
a cycle.  Its strongly connected components and reachability relation agree
with those of the full flow map, while the edge count stays linear in the
size of the complex.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .errors import NoEssentialSolution, NotAnInterval
from .homology import _betti_of
from .lefschetz import LefschetzComplex
from .mvf import MultivectorField, v_saturate


def _tarjan(n: int, adj: Sequence[Sequence[int]]) -> tuple[list[int], int]:
    """Iterative Tarjan SCC.  Components are numbered in completion order (sinks first)."""
    index = [-1] * n
    low = [0] * n
    onstack = [False] * n
    comp = [-1] * n
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        onstack[root] = True
        work = [[root, 0]]
        while work:
            frame = work[-1]
            v, i = frame
            nbrs = adj[v]
            if i < len(nbrs):
                frame[1] = i + 1
                w = nbrs[i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    onstack[w] = True
                    work.append([w, 0])
                elif onstack[w] and index[w] < low[v]:
                    low[v] = index[w]
            else:
                work.pop()
                if work:
                    u = work[-1][0]
                    if low[v] < low[u]:
                        low[u] = low[v]
                if low[v] == index[v]:
                    while True:
                        w = stack.pop()
                        onstack[w] = False
                        comp[w] = ncomp
                        if w == v:
                            break
                    ncomp += 1
    return comp, ncomp


class FlowGraph:
    """Digraph of the flow map ``x -> cl x  u  [x]_V``."""

    def __init__(self, X: LefschetzComplex, V: MultivectorField):
        if V.complex is not X:
            raise ValueError("multivector field belongs to a different complex")
        self.complex = X
        self.mvf = V
        adj: list[list[int]] = [sorted(X.boundary[x]) for x in range(len(X))]
        for part in V.parts:
            if len(part) > 1:
                ring = sorted(part)
                for a, b in zip(ring, ring[1:] + ring[:1]):
                    adj[a].append(b)
        self.adj = adj
        radj: list[list[int]] = [[] for _ in range(len(X))]
        for x, nbrs in enumerate(adj):
            for y in nbrs:
                radj[y].append(x)
        self.radj = radj
        self._scc = None

    def __len__(self):
        return len(self.complex)

    def successors(self, x: int) -> frozenset:
        return self.complex.closure((x,)) | self.mvf.multivector_of(x)

    def image(self, S: Iterable[int]) -> frozenset:
        s = frozenset(S)
        return self.complex.closure(s) | v_saturate(self.mvf, s)

    def preimage(self, S: Iterable[int]) -> frozenset:
        s = frozenset(S)
        return self.complex.star(s) | v_saturate(self.mvf, s)

    def forward_reach(self, S: Iterable[int]) -> frozenset:
        return self._reach(S, self.adj)

    def backward_reach(self, S: Iterable[int]) -> frozenset:
        return self._reach(S, self.radj)

    @staticmethod
    def _reach(S, adj) -> frozenset:
        seen = set(S)
        stack = list(seen)
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return frozenset(seen)

    def scc(self) -> tuple[list[int], int]:
        if self._scc is None:
            self._scc = _tarjan(len(self.adj), self.adj)
        return self._scc


def flow_graph(X: LefschetzComplex, V: MultivectorField) -> FlowGraph:
    return FlowGraph(X, V)


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass
class MorseDecomposition:
    """Morse sets indexed ``0..m-1`` (by smallest cell id) with their reachability order.

    ``down[s]`` / ``up[s]`` are bitmasks of Morse indices reachable from /
    reaching strongly connected component ``s`` of the flow graph.
    """

    flow: FlowGraph
    morse_sets: tuple[frozenset, ...]
    conley_indices: tuple[tuple, ...]
    scc_of: list[int]
    scc_members: list[list[int]]
    morse_scc: list[int]
    down: list[int]
    up: list[int]
    _less: frozenset = field(default=frozenset(), repr=False)

    def __len__(self):
        return len(self.morse_sets)

    @property
    def indices(self) -> range:
        return range(len(self.morse_sets))

    def less(self, p: int, q: int) -> bool:
        """``p < q``: ``M_p`` is reachable from ``M_q``."""
        return p != q and bool(self.down[self.morse_scc[q]] >> p & 1)

    def leq(self, p: int, q: int) -> bool:
        return p == q or self.less(p, q)

    @property
    def poset_pairs(self) -> list[tuple[int, int]]:
        return sorted((p, q) for q in self.indices for p in _bits(self.down[self.morse_scc[q]]) if p != q)

    def hasse_edges(self) -> list[tuple[int, int]]:
        """Cover relations ``(p, q)`` with ``p < q`` and nothing strictly between."""
        out = []
        for p, q in self.poset_pairs:
            if not any(self.less(p, r) and self.less(r, q) for r in self.indices):
                out.append((p, q))
        return out

    def is_interval(self, I: Iterable[int]) -> bool:
        s = set(I)
        for p in s:
            for r in s:
                if self.less(p, r):
                    for q in self.indices:
                        if q not in s and self.less(p, q) and self.less(q, r):
                            return False
        return True

    def is_down_set(self, I: Iterable[int]) -> bool:
        s = set(I)
        return all(q in s for p in s for q in self.indices if self.less(q, p))

    def is_up_set(self, I: Iterable[int]) -> bool:
        s = set(I)
        return all(q in s for p in s for q in self.indices if self.less(p, q))

    def intervals(self) -> list[tuple[int, ...]]:
        """All nonempty poset intervals (convex subsets), in a fixed order."""
        out = []
        m = len(self)
        for k in range(1, m + 1):
            for combo in combinations(range(m), k):
                if self.is_interval(combo):
                    out.append(combo)
        return out

    def down_sets(self) -> list[tuple[int, ...]]:
        return [I for I in self.intervals() if self.is_down_set(I)]

    def up_sets(self) -> list[tuple[int, ...]]:
        return [I for I in self.intervals() if self.is_up_set(I)]

    def interval_cells(self, I: Iterable[int]) -> frozenset:
        mask = 0
        for p in I:
            mask |= 1 << p
        out: set[int] = set()
        for s, members in enumerate(self.scc_members):
            if self.up[s] & mask and self.down[s] & mask:
                out.update(members)
        return frozenset(out)

    def invariant_part(self) -> frozenset:
        """Cells lying on some essential solution (the Morse interval of the whole poset)."""
        return self.interval_cells(self.indices)

    def stratum_of_cell(self) -> list[int]:
        return self.scc_of


def finest_morse_decomposition(G: FlowGraph) -> MorseDecomposition:
    """SCCs of the flow graph that carry essential solutions, ordered by reachability.

    An SCC carries an essential solution unless it is a single regular
    multivector: a critical cell supports its constant solution and an SCC
    spanning two or more multivectors supports a periodic one leaving each.
    """
    X, V = G.complex, G.mvf
    comp, ncomp = G.scc()
    members: list[list[int]] = [[] for _ in range(ncomp)]
    for x, c in enumerate(comp):
        members[c].append(x)
    is_morse = []
    for c in range(ncomp):
        parts = {V.part_of[x] for x in members[c]}
        if len(parts) > 1:
            is_morse.append(True)
        else:
            is_morse.append(V.is_critical(next(iter(parts))))
    morse_comps = sorted((c for c in range(ncomp) if is_morse[c]), key=lambda c: members[c][0])
    bit = {c: i for i, c in enumerate(morse_comps)}

    succ: list[set[int]] = [set() for _ in range(ncomp)]
    for x, nbrs in enumerate(G.adj):
        cx = comp[x]
        for y in nbrs:
            cy = comp[y]
            if cy != cx:
                succ[cx].add(cy)
    down = [0] * ncomp
    for c in range(ncomp):  # completion order: successors come first
        mask = 1 << bit[c] if c in bit else 0
        for d in succ[c]:
            mask |= down[d]
        down[c] = mask
    up = [0] * ncomp
    for c in range(ncomp):
        if c in bit:
            up[c] |= 1 << bit[c]
    for c in range(ncomp - 1, -1, -1):
        for d in succ[c]:
            up[d] |= up[c]

    morse_sets = tuple(frozenset(members[c]) for c in morse_comps)
    conley = tuple(_betti_of(X, m) for m in morse_sets)
    return MorseDecomposition(
        flow=G,
        morse_sets=morse_sets,
        conley_indices=conley,
        scc_of=comp,
        scc_members=members,
        morse_scc=morse_comps,
        down=down,
        up=up,
    )


def connection_set(G: FlowGraph, A: Iterable[int], B: Iterable[int]) -> frozenset:
    """Cells on flow paths from ``A`` to ``B`` (forward cone of A meets backward cone of B)."""
    return G.forward_reach(A) & G.backward_reach(B)


def morse_interval(G: FlowGraph, M: MorseDecomposition, I: Iterable[int]) -> frozenset:
    """Union of the Morse sets in ``I`` and all connection sets between them."""
    I = sorted(set(I))
    if not I or any(p not in M.indices for p in I) or not M.is_interval(I):
        raise NotAnInterval(f"{I} is not an interval of the Morse poset")
    return M.interval_cells(I)


def is_attractor(G: FlowGraph, S: Iterable[int], within: Iterable[int] | None = None) -> bool:
    """``Pi(S) = S``, optionally for the flow restricted to ``within``."""
    s = frozenset(S)
    img = G.image(s)
    if within is not None:
        img &= frozenset(within)
    return img == s


def is_repeller(G: FlowGraph, S: Iterable[int], within: Iterable[int] | None = None) -> bool:
    """``Pi^{-1}(S) = S``, optionally for the flow restricted to ``within``."""
    s = frozenset(S)
    pre = G.preimage(s)
    if within is not None:
        pre &= frozenset(within)
    return pre == s


def alpha_omega(G: FlowGraph, M: MorseDecomposition, x: int) -> tuple[frozenset, frozenset]:
    """Morse indices that can hold the alpha / omega limit of an essential solution through ``x``."""
    s = M.scc_of[x]
    alpha, omega = M.up[s], M.down[s]
    if not alpha or not omega:
        raise NoEssentialSolution(f"no essential solution passes through cell {x}")
    return frozenset(_bits(alpha)), frozenset(_bits(omega))
