"""Bit-packed Boolean vectors and matrices over ({0,1}, OR, AND, NOT).

Vectors store their entries in a single Python int (bit ``i`` is entry ``i``).
Matrices store one such int per row, so a product reduces to OR-ing rows of
the right operand selected by the set bits of each left row.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ShapeError


def _bits(values: Iterable) -> int:
    word = 0
    for k, v in enumerate(values):
        if v:
            word |= 1 << k
    return word


def _iter_set(word: int) -> Iterator[int]:
    while word:
        low = word & -word
        yield low.bit_length() - 1
        word ^= low


@dataclass(frozen=True)
class BoolVec:
    n: int
    bits: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ShapeError("negative vector length")
        if self.bits >> self.n:
            raise ShapeError("bits set beyond vector length")

    @classmethod
    def from_list(cls, values: Sequence) -> BoolVec:
        return cls(len(values), _bits(values))

    @classmethod
    def zeros(cls, n: int) -> BoolVec:
        return cls(n, 0)

    @classmethod
    def ones(cls, n: int) -> BoolVec:
        return cls(n, (1 << n) - 1)

    @classmethod
    def unit(cls, n: int, i: int) -> BoolVec:
        if not 0 <= i < n:
            raise IndexError(i)
        return cls(n, 1 << i)

    @classmethod
    def from_indices(cls, n: int, indices: Iterable[int]) -> BoolVec:
        word = 0
        for i in indices:
            if not 0 <= i < n:
                raise IndexError(i)
            word |= 1 << i
        return cls(n, word)

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> int:
        if not -self.n <= i < self.n:
            raise IndexError(i)
        return (self.bits >> (i % self.n)) & 1

    def __iter__(self) -> Iterator[int]:
        return ((self.bits >> i) & 1 for i in range(self.n))

    def to_list(self) -> list[int]:
        return list(self)

    def support(self) -> list[int]:
        """Indices of the non-null entries, ascending."""
        return list(_iter_set(self.bits))

    def count(self) -> int:
        return bin(self.bits).count("1")

    def any(self) -> bool:
        return self.bits != 0

    def _check(self, other: BoolVec):
        if not isinstance(other, BoolVec) or other.n != self.n:
            raise ShapeError(f"vector length mismatch: {self.n} vs {getattr(other, 'n', other)}")

    def __or__(self, other: BoolVec) -> BoolVec:
        self._check(other)
        return BoolVec(self.n, self.bits | other.bits)

    def __and__(self, other: BoolVec) -> BoolVec:
        self._check(other)
        return BoolVec(self.n, self.bits & other.bits)

    def __xor__(self, other: BoolVec) -> BoolVec:
        self._check(other)
        return BoolVec(self.n, self.bits ^ other.bits)

    def __invert__(self) -> BoolVec:
        return BoolVec(self.n, ~self.bits & ((1 << self.n) - 1))

    def __le__(self, other: BoolVec) -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def flip(self, i: int) -> BoolVec:
        """The neighbour differing from this vector in component ``i`` only."""
        if not 0 <= i < self.n:
            raise IndexError(i)
        return BoolVec(self.n, self.bits ^ (1 << i))

    def __repr__(self) -> str:
        return f"BoolVec({''.join(map(str, self))})"


@dataclass(frozen=True)
class BoolMat:
    nrows: int
    ncols: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.nrows < 0 or self.ncols < 0:
            raise ShapeError("negative matrix dimension")
        if len(self.rows) != self.nrows:
            raise ShapeError("row count does not match nrows")
        limit = 1 << self.ncols
        if any(r < 0 or r >= limit for r in self.rows):
            raise ShapeError("row has bits beyond ncols")

    # construction

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], ncols: int | None = None) -> BoolMat:
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ShapeError("ragged matrix rows")
        return cls(len(rows), ncols, tuple(_bits(r) for r in rows))

    @classmethod
    def zeros(cls, nrows: int, ncols: int | None = None) -> BoolMat:
        ncols = nrows if ncols is None else ncols
        return cls(nrows, ncols, (0,) * nrows)

    @classmethod
    def ones(cls, nrows: int, ncols: int | None = None) -> BoolMat:
        ncols = nrows if ncols is None else ncols
        return cls(nrows, ncols, ((1 << ncols) - 1,) * nrows)

    @classmethod
    def identity(cls, n: int) -> BoolMat:
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_columns(cls, columns: Sequence[BoolVec]) -> BoolMat:
        if not columns:
            raise ShapeError("no columns")
        n = columns[0].n
        rows = [0] * n
        for k, col in enumerate(columns):
            if col.n != n:
                raise ShapeError("column length mismatch")
            for i in col.support():
                rows[i] |= 1 << k
        return cls(n, len(columns), tuple(rows))

    @classmethod
    def from_numpy(cls, array) -> BoolMat:
        array = np.asarray(array).astype(bool)
        if array.ndim != 2:
            raise ShapeError("expected a 2-D array")
        return cls.from_rows(array.tolist(), ncols=array.shape[1])

    @classmethod
    def permutation(cls, order: Sequence[int]) -> BoolMat:
        """Permutation matrix P with P[order[k], k] = 1.

        With this convention ``P.T @ A @ P`` lists ``A`` in the new order:
        entry ``(a, b)`` of the result is ``A[order[a], order[b]]``.
        """
        n = len(order)
        if sorted(order) != list(range(n)):
            raise ValueError("order is not a permutation")
        rows = [0] * n
        for k, i in enumerate(order):
            rows[i] |= 1 << k
        return cls(n, n, tuple(rows))

    # access

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(ij)
        return (self.rows[i] >> j) & 1

    def row(self, i: int) -> BoolVec:
        return BoolVec(self.ncols, self.rows[i])

    def col(self, j: int) -> BoolVec:
        if not 0 <= j < self.ncols:
            raise IndexError(j)
        return BoolVec(self.nrows, _bits((r >> j) & 1 for r in self.rows))

    def to_lists(self) -> list[list[int]]:
        return [self.row(i).to_list() for i in range(self.nrows)]

    def to_numpy(self) -> np.ndarray:
        return np.array(self.to_lists(), dtype=bool).reshape(self.nrows, self.ncols)

    def is_zero(self) -> bool:
        return not any(self.rows)

    def count(self) -> int:
        return sum(bin(r).count("1") for r in self.rows)

    @property
    def T(self) -> BoolMat:
        return BoolMat.from_columns([self.row(i) for i in range(self.nrows)]) if self.nrows else BoolMat(self.ncols, 0, (0,) * self.ncols)

    # algebra

    def _same_shape(self, other: BoolMat):
        if not isinstance(other, BoolMat) or other.shape != self.shape:
            raise ShapeError(f"shape mismatch: {self.shape} vs {getattr(other, 'shape', other)}")

    def __or__(self, other: BoolMat) -> BoolMat:
        self._same_shape(other)
        return BoolMat(self.nrows, self.ncols, tuple(a | b for a, b in zip(self.rows, other.rows)))

    def __and__(self, other: BoolMat) -> BoolMat:
        self._same_shape(other)
        return BoolMat(self.nrows, self.ncols, tuple(a & b for a, b in zip(self.rows, other.rows)))

    def __le__(self, other: BoolMat) -> bool:
        self._same_shape(other)
        return all(a & ~b == 0 for a, b in zip(self.rows, other.rows))

    def __matmul__(self, other):
        if isinstance(other, BoolVec):
            return mat_vec(self, other)
        return mat_mul(self, other)

    def hstack(self, other: BoolMat) -> BoolMat:
        """The block matrix ``(self | other)``."""
        if other.nrows != self.nrows:
            raise ShapeError("row count mismatch in hstack")
        shift = self.ncols
        return BoolMat(self.nrows, self.ncols + other.ncols,
                       tuple(a | (b << shift) for a, b in zip(self.rows, other.rows)))

    def with_row(self, i: int, row: BoolVec) -> BoolMat:
        if row.n != self.ncols:
            raise ShapeError("row length mismatch")
        rows = list(self.rows)
        rows[i] = row.bits
        return BoolMat(self.nrows, self.ncols, tuple(rows))

    def __repr__(self) -> str:
        body = "; ".join("".join(map(str, self.row(i))) for i in range(self.nrows))
        return f"BoolMat({self.nrows}x{self.ncols}: {body})"


def mat_mul(a: BoolMat, b: BoolMat) -> BoolMat:
    """Boolean product: entry (i, k) is OR over j of a[i, j] AND b[j, k]."""
    if a.ncols != b.nrows:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    out = []
    for word in a.rows:
        acc = 0
        for j in _iter_set(word):
            acc |= b.rows[j]
        out.append(acc)
    return BoolMat(a.nrows, b.ncols, tuple(out))


def mat_vec(a: BoolMat, x: BoolVec) -> BoolVec:
    if a.ncols != x.n:
        raise ShapeError(f"cannot multiply {a.shape} by vector of length {x.n}")
    return BoolVec(a.nrows, _bits(r & x.bits for r in a.rows))


def mat_pow(a: BoolMat, k: int) -> BoolMat:
    if a.nrows != a.ncols:
        raise ShapeError("matrix power needs a square matrix")
    if k < 0:
        raise ValueError("negative exponent")
    result = BoolMat.identity(a.nrows)
    base = a
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


def nilpotency_index(a: BoolMat) -> int | None:
    """Smallest q with a**q == 0, or None when no such q <= n exists."""
    if a.nrows != a.ncols:
        raise ShapeError("nilpotency needs a square matrix")
    power = BoolMat.identity(a.nrows)
    for q in range(a.nrows + 1):
        if power.is_zero():
            return q
        power = mat_mul(power, a)
    return None


def spectral_radius(a: BoolMat) -> int:
    """Boolean spectral radius: 0 iff a**n == 0, else 1."""
    if a.nrows != a.ncols:
        raise ShapeError("spectral radius needs a square matrix")
    if a.nrows == 0:
        raise ShapeError("spectral radius of an empty matrix")
    return 0 if mat_pow(a, a.nrows).is_zero() else 1


def parse_matrix(text: str) -> BoolMat:
    """Read the plain-text format: ``rows cols`` then rows of 0/1 tokens."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty matrix text")
    try:
        nrows, ncols = (int(t) for t in lines[0].split())
    except ValueError:
        raise ValueError(f"bad header line {lines[0]!r}") from None
    body = lines[1:]
    if len(body) != nrows:
        raise ShapeError(f"header declares {nrows} rows, found {len(body)}")
    rows = []
    for ln in body:
        tokens = ln.split()
        if len(tokens) != ncols or any(t not in ("0", "1") for t in tokens):
            raise ValueError(f"bad matrix row {ln!r}")
        rows.append([int(t) for t in tokens])
    return BoolMat.from_rows(rows, ncols=ncols)


def format_matrix(a: BoolMat) -> str:
    lines = [f"{a.nrows} {a.ncols}"]
    lines += [" ".join(map(str, a.row(i))) for i in range(a.nrows)]
    return "\n".join(lines) + "\n"


def load_matrix(path) -> BoolMat:
    with open(path, encoding="utf-8") as fh:
        return parse_matrix(fh.read())
