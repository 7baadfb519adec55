"""Chain complexes, Betti numbers and relative homology over a field."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .algebra import Field, SparseMatrix, column_rank
from .errors import NotLocallyClosed
from .lefschetz import LefschetzComplex

BettiVector = tuple


@dataclass(frozen=True)
class ChainComplex:
    """Per-dimension cell bases and boundary matrices ``d_k : C_k -> C_{k-1}``.

    ``boundaries[0]`` is the zero map out of ``C_0``.
    """

    bases: tuple[tuple[int, ...], ...]
    boundaries: tuple[SparseMatrix, ...]
    field: Field

    @property
    def top_dim(self) -> int:
        return len(self.bases) - 1

    def ranks(self) -> list[int]:
        return [m.rank() for m in self.boundaries]

    def betti(self) -> BettiVector:
        r = self.ranks() + [0]
        return tuple(len(self.bases[k]) - r[k] - r[k + 1] for k in range(len(self.bases)))


def chain_complex_of(X: LefschetzComplex, cells: Iterable[int] | None = None) -> ChainComplex:
    """Chain complex of ``X`` or, for a locally closed ``cells``, of the restriction to it."""
    if cells is None:
        members = range(len(X))
        keep = None
    else:
        keep = set(cells)
        members = sorted(keep)
    top = X.dim
    bases: list[list[int]] = [[] for _ in range(top + 1)]
    for x in members:
        bases[X.dims[x]].append(x)
    index = [{x: i for i, x in enumerate(b)} for b in bases]
    mats = []
    for k in range(top + 1):
        if k == 0:
            mats.append(SparseMatrix.zeros(0, len(bases[0]), X.field))
            continue
        rows = index[k - 1]
        cols = [{rows[y]: v for y, v in X.boundary[x].items() if y in rows} for x in bases[k]]
        mats.append(SparseMatrix(len(bases[k - 1]), len(bases[k]), cols, X.field))
    return ChainComplex(tuple(tuple(b) for b in bases), tuple(mats), X.field)


def _betti_of(X: LefschetzComplex, cells: Iterable[int] | None) -> BettiVector:
    """Betti numbers of the restriction of the boundary to ``cells`` (no checks)."""
    top = X.dim
    if top < 0:
        return ()
    if cells is None:
        members = range(len(X))
        keep = None
    else:
        keep = cells if isinstance(cells, (set, frozenset)) else set(cells)
        members = sorted(keep)
    by_dim: list[list[int]] = [[] for _ in range(top + 1)]
    for x in members:
        by_dim[X.dims[x]].append(x)
    pos = {}
    for b in by_dim:
        for i, x in enumerate(b):
            pos[x] = i
    ranks = [0] * (top + 2)
    for k in range(1, top + 1):
        if not by_dim[k] or not by_dim[k - 1]:
            continue
        if keep is None:
            cols = ({pos[y]: v for y, v in X.boundary[x].items()} for x in by_dim[k])
        else:
            cols = ({pos[y]: v for y, v in X.boundary[x].items() if y in keep} for x in by_dim[k])
        ranks[k] = column_rank(cols, X.field)
    return tuple(len(by_dim[k]) - ranks[k] - ranks[k + 1] for k in range(top + 1))


def betti(X: LefschetzComplex) -> BettiVector:
    """``beta_k = dim ker d_k - rank d_{k+1}`` for ``k = 0..dim X``."""
    return _betti_of(X, None)


def relative_betti(X: LefschetzComplex, S: Iterable[int]) -> BettiVector:
    """Betti numbers of ``H_*(cl S, mo S)`` for a locally closed ``S``.

    Over a field the relative chain complex is the closure's complex with the
    mouth rows and columns deleted, i.e. the restriction to ``S`` itself.
    """
    s = frozenset(S)
    if not X.is_locally_closed(s):
        raise NotLocallyClosed("relative homology needs a locally closed set")
    return _betti_of(X, s)


def euler_characteristic(X: LefschetzComplex, cells: Iterable[int] | None = None) -> int:
    it = range(len(X)) if cells is None else cells
    return sum(-1 if X.dims[x] % 2 else 1 for x in it)


def betti_euler(b: BettiVector) -> int:
    return sum((-1) ** k * v for k, v in enumerate(b))
