"""Small exact linear algebra: rational nullspaces and certified ranks."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

# largest prime below 2**31; products of two residues fit in int64
_PRIME = 2147483647


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : A x = 0}`` over the rationals, by exact row reduction."""
    mat = [[Fraction(v) for v in row] for row in rows if any(row)]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [v * inv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -mat[i][fc]
        basis.append(vec)
    return basis


def rank_mod_p(rows: np.ndarray, p: int = _PRIME) -> int:
    """Rank of an integer matrix over ``GF(p)``; a lower bound for its rational rank."""
    a = np.array(rows, dtype=np.int64) % p
    nrows, ncols = a.shape
    rank = 0
    for c in range(ncols):
        if rank == nrows:
            break
        nz = np.nonzero(a[rank:, c])[0]
        if nz.size == 0:
            continue
        piv = rank + nz[0]
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, c]), p - 2, p)
        a[rank] = (a[rank] * inv) % p
        col = a[:, c].copy()
        col[rank] = 0
        mask = col != 0
        if mask.any():
            a[mask] = (a[mask] - (col[mask, None] * a[rank][None, :]) % p) % p
        rank += 1
    return rank
