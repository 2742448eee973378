"""Dense matrices over the umbral polynomial ring and their structural
operators: products, trace, Kronecker product, vec, Hadamard, diagonal
builders, and a desk-scale determinant.
"""

from __future__ import annotations

import itertools
from typing import Sequence

from .umbra import Indeterminate, Umbra, UmbralPolynomial, indeterminates

__all__ = ["UmbralMatrix", "kron", "hadamard", "vec", "vec_inverse"]

_DET_LIMIT = 6


class UmbralMatrix:
    """Rectangular matrix with umbral-polynomial entries, stored row-major.

    Entries are coerced on construction; instances are immutable values and
    all operations return fresh matrices.
    """

    __slots__ = ("rows", "cols", "_entries")

    def __init__(self, rows: int, cols: int, entries: Sequence) -> None:
        if rows < 1 or cols < 1:
            raise ValueError("matrix dimensions must be positive")
        flat = tuple(UmbralPolynomial.coerce(e) for e in entries)
        if len(flat) != rows * cols:
            raise ValueError("entry count does not match dimensions")
        self.rows = rows
        self.cols = cols
        self._entries = flat

    # -- builders -----------------------------------------------------------

    @classmethod
    def from_rows(cls, data: Sequence[Sequence]) -> "UmbralMatrix":
        rows = len(data)
        cols = len(data[0])
        if any(len(r) != cols for r in data):
            raise ValueError("ragged rows")
        return cls(rows, cols, [e for r in data for e in r])

    @classmethod
    def identity(cls, k: int) -> "UmbralMatrix":
        return cls(k, k, [1 if r == c else 0 for r in range(k) for c in range(k)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "UmbralMatrix":
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def diag(cls, values: Sequence) -> "UmbralMatrix":
        k = len(values)
        return cls(k, k, [values[r] if r == c else 0 for r in range(k) for c in range(k)])

    @classmethod
    def rect_diag(cls, values: Sequence, rows: int, cols: int) -> "UmbralMatrix":
        """Rectangular matrix with ``values`` on the equal-index entries."""
        if len(values) > min(rows, cols):
            raise ValueError("too many diagonal values")
        data = [[0] * cols for _ in range(rows)]
        for i, v in enumerate(values):
            data[i][i] = v
        return cls.from_rows(data)

    @classmethod
    def diag_indeterminates(cls, prefix: str, count: int) -> tuple["UmbralMatrix", list[Indeterminate]]:
        syms = indeterminates(prefix, count)
        return cls.diag(syms), syms

    @classmethod
    def diag_umbrae(cls, umbrae: Sequence[Umbra]) -> "UmbralMatrix":
        return cls.diag(list(umbrae))

    # -- access ---------------------------------------------------------------

    def get(self, r: int, c: int) -> UmbralPolynomial:
        return self._entries[r * self.cols + c]

    def entries(self) -> tuple:
        return self._entries

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    # -- algebra ---------------------------------------------------------------

    def matmul(self, other: "UmbralMatrix", prune: bool = True) -> "UmbralMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matrix product")
        out = []
        for r in range(self.rows):
            for c in range(other.cols):
                acc = UmbralPolynomial.zero()
                for t in range(self.cols):
                    acc = acc + self.get(r, t).mul(other.get(t, c), prune=prune)
                out.append(acc)
        return UmbralMatrix(self.rows, other.cols, out)

    def __matmul__(self, other):
        return self.matmul(other)

    def matpow(self, k: int, prune: bool = True) -> "UmbralMatrix":
        if self.rows != self.cols:
            raise ValueError("matrix power needs a square matrix")
        if k < 0:
            raise ValueError("exponent must be nonnegative")
        result = UmbralMatrix.identity(self.rows)
        for _ in range(k):
            result = result.matmul(self, prune=prune)
        return result

    def transpose(self) -> "UmbralMatrix":
        out = [self.get(r, c) for c in range(self.cols) for r in range(self.rows)]
        return UmbralMatrix(self.cols, self.rows, out)

    def trace(self) -> UmbralPolynomial:
        if self.rows != self.cols:
            raise ValueError("trace needs a square matrix")
        acc = UmbralPolynomial.zero()
        for r in range(self.rows):
            acc = acc + self.get(r, r)
        return acc

    def __add__(self, other: "UmbralMatrix") -> "UmbralMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch in matrix sum")
        return UmbralMatrix(
            self.rows, self.cols, [a + b for a, b in zip(self._entries, other._entries)]
        )

    def scale(self, c) -> "UmbralMatrix":
        return UmbralMatrix(self.rows, self.cols, [e * c for e in self._entries])

    def hadamard(self, other: "UmbralMatrix") -> "UmbralMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch in entrywise product")
        return UmbralMatrix(
            self.rows, self.cols, [a.mul(b) for a, b in zip(self._entries, other._entries)]
        )

    def kron(self, other: "UmbralMatrix") -> "UmbralMatrix":
        """Kronecker product: block matrix of ``self[r][c] * other``."""
        rows = self.rows * other.rows
        cols = self.cols * other.cols
        data = [[None] * cols for _ in range(rows)]
        for r in range(self.rows):
            for c in range(self.cols):
                block = other.scale_by_poly(self.get(r, c))
                for br in range(other.rows):
                    for bc in range(other.cols):
                        data[r * other.rows + br][c * other.cols + bc] = block.get(br, bc)
        return UmbralMatrix.from_rows(data)

    def scale_by_poly(self, p: UmbralPolynomial) -> "UmbralMatrix":
        return UmbralMatrix(self.rows, self.cols, [e.mul(p) for e in self._entries])

    def vec(self) -> list[UmbralPolynomial]:
        """Column-stacking: columns laid out underneath each other, first
        column first."""
        return [self.get(r, c) for c in range(self.cols) for r in range(self.rows)]

    @classmethod
    def vec_inverse(cls, values: Sequence, rows: int, cols: int) -> "UmbralMatrix":
        if len(values) != rows * cols:
            raise ValueError("length mismatch in vec inverse")
        data = [[values[c * rows + r] for c in range(cols)] for r in range(rows)]
        return cls.from_rows(data)

    def det(self) -> UmbralPolynomial:
        """Signed permutation-sum determinant; exact over the ring.

        Factorial cost, so refuses matrices larger than 6x6.
        """
        if self.rows != self.cols:
            raise ValueError("determinant needs a square matrix")
        if self.rows > _DET_LIMIT:
            raise ValueError("determinant size limit")
        acc = UmbralPolynomial.zero()
        for perm in itertools.permutations(range(self.rows)):
            term = UmbralPolynomial.one()
            for r, c in enumerate(perm):
                term = term.mul(self.get(r, c))
            acc = acc + term.scale(_parity(perm))
        return acc

    def evaluated(self) -> "UmbralMatrix":
        """Entrywise application of the evaluation functional."""
        return UmbralMatrix(self.rows, self.cols, [e.evaluate() for e in self._entries])

    def __eq__(self, other) -> bool:
        if not isinstance(other, UmbralMatrix):
            return NotImplemented
        return self.shape == other.shape and self._entries == other._entries

    def __str__(self) -> str:
        lines = []
        for r in range(self.rows):
            lines.append("[" + ", ".join(str(self.get(r, c)) for c in range(self.cols)) + "]")
        return "\n".join(lines)

    __repr__ = __str__


def _parity(perm: Sequence[int]) -> int:
    inversions = sum(
        1 for a in range(len(perm)) for b in range(a + 1, len(perm)) if perm[a] > perm[b]
    )
    return -1 if inversions % 2 else 1


def kron(a: UmbralMatrix, b: UmbralMatrix) -> UmbralMatrix:
    return a.kron(b)


def hadamard(a: UmbralMatrix, b: UmbralMatrix) -> UmbralMatrix:
    return a.hadamard(b)


def vec(a: UmbralMatrix) -> list[UmbralPolynomial]:
    return a.vec()


def vec_inverse(values: Sequence, rows: int, cols: int) -> UmbralMatrix:
    return UmbralMatrix.vec_inverse(values, rows, cols)
