"""GF(2) linear algebra on bitset rows.

Rows are Python ints; bit ``c`` of a row is the coefficient of variable
``c``.  Sizes here are tens of bits, so int bitsets beat numpy.
"""

from __future__ import annotations

from typing import Optional, Sequence


def gf2_rank(rows: Sequence[int], n_cols: int) -> int:
    """Rank of the row set via Gaussian elimination."""
    work = list(rows)
    rank = 0
    row_idx = 0
    for col in range(n_cols):
        pivot = None
        for r in range(row_idx, len(work)):
            if (work[r] >> col) & 1:
                pivot = r
                break
        if pivot is None:
            continue
        work[row_idx], work[pivot] = work[pivot], work[row_idx]
        for r in range(len(work)):
            if r != row_idx and ((work[r] >> col) & 1):
                work[r] ^= work[row_idx]
        rank += 1
        row_idx += 1
        if row_idx == len(work):
            break
    return rank


class Gf2Solver:
    """Reduced form of a fixed coefficient matrix, reusable across right-hand sides.

    Forward elimination runs once in ``__init__``; ``solve`` only combines
    right-hand-side bits, which is what makes enumerating many candidate
    keystream combinations cheap.
    """

    def __init__(self, rows: Sequence[int], n_cols: int) -> None:
        self.n_cols = n_cols
        self.n_rows = len(rows)
        work = list(rows)
        # comb[i] records which original rows were XORed into work row i.
        comb = [1 << i for i in range(len(rows))]
        pivots: list[tuple[int, int]] = []  # (column, reduced-row index)
        row_idx = 0
        for col in range(n_cols):
            pivot = None
            for r in range(row_idx, len(work)):
                if (work[r] >> col) & 1:
                    pivot = r
                    break
            if pivot is None:
                continue
            work[row_idx], work[pivot] = work[pivot], work[row_idx]
            comb[row_idx], comb[pivot] = comb[pivot], comb[row_idx]
            for r in range(len(work)):
                if r != row_idx and ((work[r] >> col) & 1):
                    work[r] ^= work[row_idx]
                    comb[r] ^= comb[row_idx]
            pivots.append((col, row_idx))
            row_idx += 1
            if row_idx == len(work):
                break
        self._work = work
        self._comb = comb
        self._pivots = pivots
        self.rank = len(pivots)
        self._zero_rows = [
            i for i in range(len(work)) if work[i] == 0
        ]

    def solve(self, rhs_bits: int) -> Optional[int]:
        """Solution bitset for ``A x = b``, or ``None`` when inconsistent.

        ``rhs_bits`` packs the right-hand side with bit ``i`` belonging to
        original row ``i``.  Free variables, if any, are set to zero.
        """
        reduced = [
            (self._comb[i] & rhs_bits).bit_count() & 1
            for i in range(self.n_rows)
        ]
        for i in self._zero_rows:
            if reduced[i]:
                return None
        x = 0
        for col, row in self._pivots:
            # In reduced row-echelon form the pivot row determines the pivot
            # variable once free variables are pinned to zero.
            row_mask = self._work[row]
            acc = reduced[row]
            # Subtract contributions of other variables already fixed in x.
            acc ^= (row_mask & x).bit_count() & 1
            # row_mask includes the pivot column itself; x bit still 0 there.
            if acc:
                x |= 1 << col
        return x


def gf2_solve(rows: Sequence[int], rhs_bits: int, n_cols: int) -> Optional[int]:
    """One-shot convenience wrapper around :class:`Gf2Solver`."""
    return Gf2Solver(rows, n_cols).solve(rhs_bits)
