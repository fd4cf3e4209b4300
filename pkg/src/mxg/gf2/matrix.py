"""Bit-packed matrices over GF(2).

Rows are Python integers; bit j of row i is entry (i, j).  Only meant for
analysis-scale sizes (a few thousand rows and columns).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .poly import Gf2Poly, clmul

__all__ = ["Gf2Matrix", "EliminationBasis", "rank"]


def rank(rows: Iterable[int]) -> int:
    return len(EliminationBasis().extend(rows))


class EliminationBasis:
    """Row-reduced basis that accepts rows one at a time.

    ``insert`` returns False when the new row is already in the span, which
    lets callers stop at the first rank deficiency.
    """

    __slots__ = ("pivots",)

    def __init__(self):
        self.pivots: dict[int, int] = {}

    def __len__(self):
        return len(self.pivots)

    def reduce(self, row: int) -> int:
        pivots = self.pivots
        while row:
            top = row.bit_length() - 1
            p = pivots.get(top)
            if p is None:
                return row
            row ^= p
        return 0

    def insert(self, row: int) -> bool:
        row = self.reduce(row)
        if not row:
            return False
        self.pivots[row.bit_length() - 1] = row
        return True

    def extend(self, rows: Iterable[int]) -> "EliminationBasis":
        for r in rows:
            self.insert(r)
        return self


@dataclass(frozen=True)
class Gf2Matrix:
    nrows: int
    ncols: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != self.nrows:
            raise ValueError("row count mismatch")
        limit = 1 << self.ncols
        if any(r < 0 or r >= limit for r in self.rows):
            raise ValueError("row has bits beyond the column count")

    @classmethod
    def from_columns(cls, columns: Sequence[int], nrows: int) -> "Gf2Matrix":
        rows = [0] * nrows
        for j, col in enumerate(columns):
            while col:
                low = col & -col
                rows[low.bit_length() - 1] |= 1 << j
                col ^= low
        return cls(nrows, len(columns), tuple(rows))

    @classmethod
    def identity(cls, n: int) -> "Gf2Matrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i] >> j & 1

    def column(self, j: int) -> int:
        out = 0
        for i, r in enumerate(self.rows):
            out |= (r >> j & 1) << i
        return out

    def rank(self) -> int:
        return rank(self.rows)

    def apply(self, v: int) -> int:
        """Matrix-vector product; ``v`` and the result are bit vectors."""
        out = 0
        for i, r in enumerate(self.rows):
            out |= ((r & v).bit_count() & 1) << i
        return out

    def __matmul__(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        cols = [self.apply(other.column(j)) for j in range(other.ncols)]
        return Gf2Matrix.from_columns(cols, self.nrows)

    def charpoly(self) -> Gf2Poly:
        """det(xI - M), via reduction to upper Hessenberg form.

        Works for any square matrix, cyclic or not, so it serves as an oracle
        independent of sequence-based recovery.
        """
        n = self.nrows
        if n != self.ncols:
            raise ValueError("characteristic polynomial needs a square matrix")
        h = [[self[i, j] for j in range(n)] for i in range(n)]
        for m in range(1, n - 1):
            piv = next((i for i in range(m, n) if h[i][m - 1]), None)
            if piv is None:
                continue
            if piv != m:
                h[piv], h[m] = h[m], h[piv]
                for row in h:
                    row[piv], row[m] = row[m], row[piv]
            for i in range(m + 1, n):
                if h[i][m - 1]:
                    # row_i -= row_m, then col_m += col_i keeps the similarity
                    hm = h[m]
                    hi = h[i]
                    for j in range(n):
                        hi[j] ^= hm[j]
                    for row in h:
                        row[m] ^= row[i]
        # p_k(x) for the leading k x k block, 1-indexed recurrence
        polys = [1]
        for k in range(1, n + 1):
            pk = clmul(0b10 | h[k - 1][k - 1], polys[k - 1])
            prod = 1
            for i in range(k - 1, 0, -1):
                prod &= h[i][i - 1]
                if not prod:
                    break
                if h[i - 1][k - 1]:
                    pk ^= polys[i - 1]
            polys.append(pk)
        return Gf2Poly(polys[n])
