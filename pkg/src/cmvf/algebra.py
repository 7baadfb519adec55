"""Exact coefficient fields and sparse column matrices.

Two fields are supported: the rationals (``Q``) and prime fields ``GF(p)``.
Internally a field element is a plain Python number (``int`` or
``fractions.Fraction`` for Q, ``int`` in ``range(p)`` for GF(p)) and all
arithmetic goes through the owning :class:`Field`.  :class:`FieldScalar` is the
checked, user-facing wrapper that refuses to mix fields.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import MixedFieldError, PivotZero, ZeroInverse

__all__ = [
    "Field",
    "RationalField",
    "PrimeField",
    "QQ",
    "field_from_id",
    "FieldScalar",
    "SparseMatrix",
    "field_inverse",
    "rank",
    "reduce_pair",
    "column_rank",
]


class Field:
    """Arithmetic on raw field values."""

    id: str = "?"

    def coerce(self, value):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == 0

    def to_str(self, a) -> str:
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Field) and other.id == self.id

    def __hash__(self):
        return hash(self.id)

    def __repr__(self):
        return self.id


def _normalize(q):
    if isinstance(q, Fraction) and q.denominator == 1:
        return q.numerator
    return q


class RationalField(Field):
    id = "Q"

    def coerce(self, value):
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            return value
        if isinstance(value, Fraction):
            return _normalize(value)
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, float):
            raise TypeError("floating point values are not exact field elements")
        return _normalize(Fraction(value))

    def add(self, a, b):
        return _normalize(a + b)

    def sub(self, a, b):
        return _normalize(a - b)

    def mul(self, a, b):
        return _normalize(a * b)

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroInverse("0 has no inverse in Q")
        if a == 1 or a == -1:
            return a
        return _normalize(Fraction(1) / a)

    def to_str(self, a) -> str:
        a = Fraction(a)
        return f"{a.numerator}/{a.denominator}"

    def parse(self, text: str):
        return _normalize(Fraction(str(text).strip()))


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class PrimeField(Field):
    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"GF(p) needs a prime p, got {p}")
        self.p = p
        self.id = f"GF({p})"

    def coerce(self, value):
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, Fraction):
            return self.div(value.numerator % self.p, value.denominator % self.p)
        if isinstance(value, float):
            raise TypeError("floating point values are not exact field elements")
        return int(value) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroInverse(f"0 has no inverse in {self.id}")
        return pow(a, -1, self.p)

    def to_str(self, a) -> str:
        return str(a)

    def parse(self, text: str):
        text = str(text).strip()
        if "/" in text:
            return self.coerce(Fraction(text))
        return int(text) % self.p


QQ = RationalField()
_FIELD_CACHE: dict[str, Field] = {"Q": QQ}


def field_from_id(field_id) -> Field:
    """Resolve ``"Q"``, ``"GF(p)"``, ``"GF:p"`` or an existing field."""
    if isinstance(field_id, Field):
        return field_id
    key = str(field_id).strip()
    if key in _FIELD_CACHE:
        return _FIELD_CACHE[key]
    m = re.fullmatch(r"GF\s*(?:\(\s*(\d+)\s*\)|:\s*(\d+))", key, flags=re.IGNORECASE)
    if key.upper() in ("Q", "QQ"):
        return QQ
    if not m:
        raise ValueError(f"unknown field {field_id!r}; expected Q or GF(p)")
    p = int(m.group(1) or m.group(2))
    field = PrimeField(p)
    _FIELD_CACHE[key] = field
    _FIELD_CACHE[field.id] = field
    return field


@dataclass(frozen=True)
class FieldScalar:
    """A field element tagged with its field; mixed-field arithmetic raises."""

    value: object
    field: Field

    @classmethod
    def of(cls, value, field="Q") -> "FieldScalar":
        f = field_from_id(field)
        return cls(f.coerce(value), f)

    def _other(self, other):
        if isinstance(other, FieldScalar):
            if other.field != self.field:
                raise MixedFieldError(f"cannot combine {self.field} and {other.field}")
            return other.value
        return self.field.coerce(other)

    def __add__(self, other):
        return FieldScalar(self.field.add(self.value, self._other(other)), self.field)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldScalar(self.field.sub(self.value, self._other(other)), self.field)

    def __rsub__(self, other):
        return FieldScalar(self.field.sub(self._other(other), self.value), self.field)

    def __mul__(self, other):
        return FieldScalar(self.field.mul(self.value, self._other(other)), self.field)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldScalar(self.field.div(self.value, self._other(other)), self.field)

    def __neg__(self):
        return FieldScalar(self.field.neg(self.value), self.field)

    def inverse(self) -> "FieldScalar":
        return FieldScalar(self.field.inv(self.value), self.field)

    def is_zero(self) -> bool:
        return self.field.is_zero(self.value)

    def __eq__(self, other):
        if isinstance(other, FieldScalar):
            return self.field == other.field and self.value == other.value
        try:
            return self.value == self.field.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.value, self.field.id))

    def __str__(self):
        return self.field.to_str(self.value)


def field_inverse(a: FieldScalar) -> FieldScalar:
    """Multiplicative inverse; raises :class:`ZeroInverse` for zero."""
    return a.inverse()


def column_rank(columns: Iterable, field: Field) -> int:
    """Rank of the matrix whose columns are ``{row: value}`` dicts.

    Standard left-to-right column reduction keyed on the largest row index.
    The input dicts are not modified.
    """
    if isinstance(field, PrimeField) and field.p == 2:
        pivots: dict[int, int] = {}
        r = 0
        for col in columns:
            bits = 0
            for i, v in col.items():
                if v % 2:
                    bits ^= 1 << i
            while bits:
                low = bits.bit_length() - 1
                other = pivots.get(low)
                if other is None:
                    pivots[low] = bits
                    r += 1
                    break
                bits ^= other
        return r

    add, mul, inv, is_zero = field.add, field.mul, field.inv, field.is_zero
    pivots_d: dict[int, dict] = {}
    r = 0
    for col in columns:
        c = {i: v for i, v in col.items() if not is_zero(v)}
        while c:
            low = max(c)
            other = pivots_d.get(low)
            if other is None:
                scale = inv(c[low])
                pivots_d[low] = {i: mul(v, scale) for i, v in c.items()}
                r += 1
                break
            factor = field.neg(c[low])
            for i, v in other.items():
                nv = add(c.get(i, 0), mul(factor, v))
                if is_zero(nv):
                    c.pop(i, None)
                else:
                    c[i] = nv
    return r


class SparseMatrix:
    """Column-sparse matrix over an exact field.

    ``columns[j]`` maps row index to a nonzero raw field value.
    """

    def __init__(self, n_rows: int, n_cols: int, columns: Sequence[dict] | None = None, field="Q"):
        self.field = field_from_id(field)
        self.n_rows = n_rows
        self.n_cols = n_cols
        if columns is None:
            columns = [dict() for _ in range(n_cols)]
        if len(columns) != n_cols:
            raise ValueError("column count mismatch")
        cols = []
        for col in columns:
            c = {}
            for i, v in col.items():
                if not 0 <= i < n_rows:
                    raise IndexError(f"row {i} out of range")
                v = self.field.coerce(v)
                if not self.field.is_zero(v):
                    c[i] = v
            cols.append(c)
        self.columns = cols

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence], field="Q") -> "SparseMatrix":
        n_rows = len(rows)
        n_cols = len(rows[0]) if n_rows else 0
        cols = [{i: rows[i][j] for i in range(n_rows) if rows[i][j] != 0} for j in range(n_cols)]
        return cls(n_rows, n_cols, cols, field)

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int, field="Q") -> "SparseMatrix":
        return cls(n_rows, n_cols, None, field)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, self.n_cols)

    def column(self, j: int) -> list[tuple[int, object]]:
        return sorted(self.columns[j].items())

    def entry(self, i: int, j: int):
        return self.columns[j].get(i, 0)

    def __getitem__(self, ij):
        i, j = ij
        return self.entry(i, j)

    def nnz(self) -> int:
        return sum(len(c) for c in self.columns)

    def is_zero(self) -> bool:
        return all(not c for c in self.columns)

    def to_dense(self) -> list[list]:
        out = [[0] * self.n_cols for _ in range(self.n_rows)]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                out[i][j] = v
        return out

    def transpose(self) -> "SparseMatrix":
        cols: list[dict] = [dict() for _ in range(self.n_rows)]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                cols[i][j] = v
        return SparseMatrix(self.n_cols, self.n_rows, cols, self.field)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "SparseMatrix":
        rindex = {r: k for k, r in enumerate(rows)}
        new_cols = []
        for j in cols:
            new_cols.append({rindex[i]: v for i, v in self.columns[j].items() if i in rindex})
        return SparseMatrix(len(rows), len(cols), new_cols, self.field)

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.field != other.field:
            raise MixedFieldError(f"cannot multiply {self.field} by {other.field} matrices")
        if self.n_cols != other.n_rows:
            raise ValueError("shape mismatch")
        f = self.field
        cols = []
        for col in other.columns:
            acc: dict = {}
            for k, b in col.items():
                for i, a in self.columns[k].items():
                    acc[i] = f.add(acc.get(i, 0), f.mul(a, b))
            cols.append({i: v for i, v in acc.items() if not f.is_zero(v)})
        return SparseMatrix(self.n_rows, other.n_cols, cols, f)

    def __eq__(self, other):
        return (
            isinstance(other, SparseMatrix)
            and self.field == other.field
            and self.shape == other.shape
            and self.columns == other.columns
        )

    def rank(self) -> int:
        return column_rank(self.columns, self.field)

    def reduce_pair(self, r: int, c: int) -> "SparseMatrix":
        """Eliminate row ``r`` and column ``c`` through the invertible pivot ``M[r, c]``.

        Surviving entries become ``M[i, j] - M[i, c] * M[r, c]^-1 * M[r, j]``;
        row and column indices above ``r`` / ``c`` shift down by one.
        """
        f = self.field
        pivot = self.columns[c].get(r, 0)
        if f.is_zero(pivot):
            raise PivotZero(f"entry ({r}, {c}) is zero")
        pinv = f.inv(pivot)
        pivot_col = {i: v for i, v in self.columns[c].items() if i != r}
        new_cols = []
        for j, col in enumerate(self.columns):
            if j == c:
                continue
            new = {i: v for i, v in col.items() if i != r}
            mrj = col.get(r)
            if mrj is not None:
                factor = f.mul(pinv, mrj)
                for i, mic in pivot_col.items():
                    v = f.sub(new.get(i, 0), f.mul(mic, factor))
                    if f.is_zero(v):
                        new.pop(i, None)
                    else:
                        new[i] = v
            new_cols.append({(i if i < r else i - 1): v for i, v in new.items()})
        return SparseMatrix(self.n_rows - 1, self.n_cols - 1, new_cols, f)

    def __repr__(self):
        return f"SparseMatrix({self.n_rows}x{self.n_cols}, nnz={self.nnz()}, field={self.field})"


def rank(m: SparseMatrix) -> int:
    return m.rank()


def reduce_pair(m: SparseMatrix, r: int, c: int) -> SparseMatrix:
    return m.reduce_pair(r, c)
