"""Dense Gaussian elimination over a :class:`FieldSpec`, numpy-vectorised."""

from __future__ import annotations

import numpy as np

from .field import FieldSpec


def as_matrix(rows, ncols: int | None = None) -> np.ndarray:
    a = np.asarray(rows, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(0 if a.size == 0 else 1, -1)
    if a.size == 0 and ncols is not None:
        a = a.reshape(a.shape[0], ncols)
    return a


def rref(field: FieldSpec, a) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns.

    Returns the nonzero rows of the RREF only (one per pivot).
    """
    m = as_matrix(a).copy()
    nrows, ncols = m.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        inv = field.inv(int(m[r, c]))
        if inv != 1:
            m[r, c:] = field.vmul(m[r, c:], inv)
        col = m[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            m[np.ix_(rows, np.arange(c, ncols))] = field.vsub(
                m[np.ix_(rows, np.arange(c, ncols))],
                field.vmul(col[rows, None], m[r, c:][None, :]),
            )
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(field: FieldSpec, a) -> int:
    m = as_matrix(a)
    if m.size == 0:
        return 0
    # eliminate along the shorter axis
    if m.shape[0] > m.shape[1]:
        m = m.T
    return len(rref(field, m)[1])


def reduce_against(field: FieldSpec, basis: np.ndarray, pivots: list[int], rows) -> np.ndarray:
    """Reduce `rows` modulo the row space of an RREF basis."""
    out = as_matrix(rows, basis.shape[1] if basis.ndim == 2 else None).copy()
    for r, c in enumerate(pivots):
        coef = out[:, c].copy()
        sel = np.nonzero(coef)[0]
        if sel.size:
            out[sel] = field.vsub(out[sel], field.vmul(coef[sel, None], basis[r][None, :]))
    return out


def kernel_basis(field: FieldSpec, a, ncols: int | None = None) -> list[np.ndarray]:
    """Basis of the right kernel, one vector per free column in order."""
    m = as_matrix(a, ncols)
    n = m.shape[1] if m.ndim == 2 else ncols
    if m.shape[0] == 0:
        basis = []
        for j in range(n):
            v = np.zeros(n, dtype=np.int64)
            v[j] = 1
            basis.append(v)
        return basis
    r, pivots = rref(field, m)
    pivset = set(pivots)
    basis = []
    for j in range(n):
        if j in pivset:
            continue
        v = np.zeros(n, dtype=np.int64)
        v[j] = 1
        for row, c in enumerate(pivots):
            if c < j and r[row, j]:
                v[c] = field.neg(int(r[row, j]))
        basis.append(v)
    return basis
