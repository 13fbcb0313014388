"""Matrices of polynomials and their rank over the rational function field."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg
from .field import EVALUATION_FIELD_SIZE, FieldSpec
from .poly import MPoly, var_name


class ConfigurationError(ValueError):
    """Randomized rank cannot reach the required evaluation field size."""


class PolyMatrix:
    """A rows x cols matrix of MPoly entries sharing one field."""

    def __init__(self, field: FieldSpec, rows: Sequence[Sequence[MPoly]],
                 row_labels=None, col_labels=None, ncols: int | None = None):
        self.field = field
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else (ncols if ncols is not None else
                                                          len(col_labels or ()))
        for r in self.rows:
            if len(r) != self.ncols:
                raise ValueError("ragged matrix")
            for x in r:
                if x.field != field:
                    raise ValueError("entries over different fields")
        self.row_labels = list(row_labels) if row_labels is not None else list(range(self.nrows))
        self.col_labels = list(col_labels) if col_labels is not None else list(range(self.ncols))
        if len(self.row_labels) != self.nrows or len(set(map(repr, self.row_labels))) != self.nrows:
            raise ValueError("row labels must be unique, one per row")
        if len(self.col_labels) != self.ncols or len(set(map(repr, self.col_labels))) != self.ncols:
            raise ValueError("column labels must be unique, one per column")

    @classmethod
    def from_ints(cls, field: FieldSpec, rows, **kw) -> "PolyMatrix":
        return cls(field, [[MPoly.const(field, c) for c in r] for r in rows], **kw)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        zero = MPoly(self.field)
        cols = [[other.rows[k][j] for k in range(other.nrows)] for j in range(other.ncols)]
        out = []
        for r in self.rows:
            nz = [(k, a) for k, a in enumerate(r) if a]
            row = []
            for col in cols:
                acc = zero
                for k, a in nz:
                    if col[k]:
                        acc = acc + a * col[k]
                row.append(acc)
            out.append(row)
        return PolyMatrix(self.field, out, self.row_labels, other.col_labels)

    def map(self, fn) -> "PolyMatrix":
        return PolyMatrix(self.field, [[fn(x) for x in r] for r in self.rows],
                          self.row_labels, self.col_labels)

    def select_rows(self, idx) -> "PolyMatrix":
        idx = list(idx)
        return PolyMatrix(self.field, [self.rows[i] for i in idx],
                          [self.row_labels[i] for i in idx], self.col_labels, ncols=self.ncols)

    def select_cols(self, idx) -> "PolyMatrix":
        idx = list(idx)
        return PolyMatrix(self.field, [[r[j] for j in idx] for r in self.rows],
                          self.row_labels, [self.col_labels[j] for j in idx], ncols=len(idx))

    def stack(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.ncols != other.ncols:
            raise ValueError("column count mismatch")
        return PolyMatrix(self.field, self.rows + other.rows,
                          self.row_labels + other.row_labels, self.col_labels, ncols=self.ncols)

    def variables(self) -> set:
        return {v for r in self.rows for x in r for v in x.variables()}

    def max_degree(self) -> int:
        return max((x.degree() for r in self.rows for x in r if x), default=0)

    def evaluate(self, point, field: FieldSpec | None = None) -> np.ndarray:
        F = field or self.field
        return np.array([[x.evaluate(point, F) for x in r] for r in self.rows],
                        dtype=np.int64).reshape(self.nrows, self.ncols)

    def __str__(self):
        return "\n".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows)


@dataclass(frozen=True)
class Exact:
    """Fraction-free elimination over the polynomial ring."""


@dataclass(frozen=True)
class Randomized:
    """Max rank over independent evaluations at uniform random points."""

    trials: int = 3
    seed: int = 0
    extend: bool = True


EXACT = Exact()


def evaluation_field(field: FieldSpec, degree_bound: int, extend: bool = True) -> FieldSpec:
    """Field for random evaluation: >= 2^16 elements and >= 2 * degree_bound."""
    need = max(EVALUATION_FIELD_SIZE, 2 * max(degree_bound, 1))
    if field.q >= need:
        return field
    if not extend:
        raise ConfigurationError(f"{field} has fewer than {need} elements and extension is disabled")
    if field.e != 1:
        raise ConfigurationError(f"cannot auto-extend the non-prime field {field}")
    return FieldSpec.extension_at_least(field.p, need)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial])


def random_point(variables, F: FieldSpec, rng) -> dict:
    return {v: F.random_element(rng) for v in sorted(variables)}


def rank_of_poly_matrix(M: PolyMatrix, mode=EXACT) -> int:
    """Rank of M over the fraction field of its entries' polynomial ring."""
    if M.nrows == 0 or M.ncols == 0:
        return 0
    if isinstance(mode, Randomized):
        return _randomized_rank(M, mode)
    return bareiss_rank(M.rows, M.field)


def _randomized_rank(M: PolyMatrix, mode: Randomized) -> int:
    bound = min(M.shape) * M.max_degree()
    F = evaluation_field(M.field, bound, mode.extend)
    variables = M.variables()
    best = 0
    for trial in range(mode.trials):
        point = random_point(variables, F, trial_rng(mode.seed, trial))
        best = max(best, linalg.rank(F, M.evaluate(point, F)))
        if best == min(M.shape):
            break
    return best


def bareiss_rank(rows, field: FieldSpec) -> int:
    """Rank by fraction-free (Bareiss) elimination with exact division.

    After step k every active entry is a (k+1)-minor of the input, so the
    division by the previous pivot is always exact and no fractions appear.
    """
    A = [list(r) for r in rows]
    nr = len(A)
    if nr == 0:
        return 0
    nc = len(A[0])
    prev = MPoly.const(field, 1)
    r = 0
    for c in range(nc):
        if r == nr:
            break
        cands = [i for i in range(r, nr) if A[i][c]]
        if not cands:
            continue
        piv = min(cands, key=lambda i: len(A[i][c]))
        A[r], A[piv] = A[piv], A[r]
        pv = A[r][c]
        for i in range(r + 1, nr):
            a_ic = A[i][c]
            row = A[i]
            for j in range(c + 1, nc):
                num = pv * row[j]
                if a_ic and A[r][j]:
                    num = num - a_ic * A[r][j]
                row[j] = num.divide_exact(prev) if num else num
            row[c] = MPoly(field)
        prev = pv
        r += 1
    return r


def determinant(M: PolyMatrix) -> MPoly:
    """Determinant by Bareiss elimination (square matrices only)."""
    n = M.nrows
    if n != M.ncols:
        raise ValueError("determinant of a non-square matrix")
    F = M.field
    if n == 0:
        return MPoly.const(F, 1)
    A = [list(r) for r in M.rows]
    prev = MPoly.const(F, 1)
    sign = 1
    for k in range(n):
        cands = [i for i in range(k, n) if A[i][k]]
        if not cands:
            return MPoly(F)
        piv = min(cands, key=lambda i: len(A[i][k]))
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        pv = A[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = pv * A[i][j] - A[i][k] * A[k][j]
                A[i][j] = num.divide_exact(prev) if num else num
            A[i][k] = MPoly(F)
        prev = pv
    det = A[n - 1][n - 1]
    return det if sign == 1 else -det


def label_str(label) -> str:
    if isinstance(label, tuple) and all(isinstance(x, tuple) for x in label):
        from .poly import mono_str
        return mono_str(label) or "1"
    if isinstance(label, tuple) and len(label) == 2 and isinstance(label[0], str):
        return var_name(label)
    return str(label)
