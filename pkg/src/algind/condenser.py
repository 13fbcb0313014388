"""Isolating weight assignments and s-power transfer matrices.

A weight vector w on x_1..x_n isolates the monomials of degree <= D when
wt(x^e) = sum_i w_i e_i is injective on them.  The transfer matrix built
from an isolating w has entries s^{i * wt(x^e)} on the block where
deg(x^e) = d, and right-multiplying any s-free matrix by it preserves rank.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Sequence

from .field import FieldSpec, first_primes, is_prime
from .matrix import EXACT, PolyMatrix, determinant, rank_of_poly_matrix
from .poly import MPoly, mono_deg, monomials

S_VAR = ("s", 0)

# wide prime field for statements that hold over every field
DEFAULT_FIELD = FieldSpec(2**31 - 1)


@dataclass(frozen=True)
class WeightAssignment:
    n: int
    t: int
    q: int | None
    w: tuple
    isolating: bool | None = None  # None until checked

    def weight(self, mono) -> int:
        return sum(self.w[v[1] - 1] * e for v, e in mono)

    def verified(self) -> "WeightAssignment":
        return replace(self, isolating=is_isolating(self))


class UnverifiedWeightsError(ValueError):
    """A weight assignment was used before being verified isolating."""


def main_vars(n: int, family: str = "x") -> list:
    return [(family, i + 1) for i in range(n)]


def ks_weights(n: int, t: int, q: int) -> WeightAssignment:
    """w(i) = (t+1)^i mod q for i = 1..n."""
    if not is_prime(q):
        raise ValueError(f"{q} is not prime")
    return WeightAssignment(n, t, q, tuple(pow(t + 1, i, q) for i in range(1, n + 1)))


def plain_weights(n: int, t: int) -> WeightAssignment:
    """w(i) = (t+1)^i without reduction; always isolating."""
    return WeightAssignment(n, t, None, tuple((t + 1) ** i for i in range(1, n + 1)))


def is_isolating(wa: WeightAssignment) -> bool:
    seen = set()
    for mono in monomials(main_vars(wa.n), wa.t):
        wt = wa.weight(mono)
        if wt in seen:
            return False
        seen.add(wt)
    return True


def candidate_weight_list(n: int, t: int, count: int) -> list[WeightAssignment]:
    """ks_weights over the first `count` primes, each tagged with its check."""
    return [ks_weights(n, t, q).verified() for q in first_primes(count)]


def isolating_weights(n: int, t: int, count: int, scan_limit: int = 500) -> list[WeightAssignment]:
    """The first `count` isolating ks_weights over ascending primes."""
    out = []
    for q in first_primes(scan_limit):
        wa = ks_weights(n, t, q).verified()
        if wa.isolating:
            out.append(wa)
            if len(out) == count:
                break
    return out


@dataclass
class TransferMatrix:
    weights: WeightAssignment
    k: int
    D: int
    matrix: PolyMatrix


def transfer_matrix(w: WeightAssignment, k: int, D: int | None = None,
                    field: FieldSpec = DEFAULT_FIELD) -> TransferMatrix:
    """Rows: x-monomials of degree <= D; columns: 1 then y_i^d for 1 <= d <= D.

    The constant monomial is the only pure y-monomial of degree 0, so the
    degree-0 block is the single entry s^0 = 1.
    """
    D = w.t if D is None else D
    if w.isolating is not True or D > w.t:
        raise UnverifiedWeightsError("transfer_matrix needs weights verified isolating up to degree D")
    s = MPoly.var(field, *S_VAR)
    zero = MPoly(field)
    rows_m = monomials(main_vars(w.n), D)
    cols = [(0, 0)] + [(d, i) for d in range(1, D + 1) for i in range(1, k + 1)]
    rows = []
    for mono in rows_m:
        deg, wt = mono_deg(mono), w.weight(mono)
        rows.append([s ** (i * wt) if deg == d else zero for d, i in cols])
    labels = [((("y", i), d),) if d else () for d, i in cols]
    return TransferMatrix(w, k, D, PolyMatrix(field, rows, rows_m, labels, ncols=len(cols)))


def vandermonde_with_zeros(w: Sequence[int], zero_mask=(), field: FieldSpec = DEFAULT_FIELD) -> PolyMatrix:
    """V'[i][j] = s^{(j+1) w_i}, with off-diagonal positions in zero_mask set to 0."""
    s = MPoly.var(field, *S_VAR)
    n = len(w)
    mask = set(map(tuple, zero_mask))
    rows = [[MPoly(field) if (i, j) in mask and i != j else s ** ((j + 1) * w[i])
             for j in range(n)] for i in range(n)]
    return PolyMatrix(field, rows)


def vandermonde_det_degree_check(w: Sequence[int], zero_mask=(), field: FieldSpec = DEFAULT_FIELD):
    """(det V' != 0, deg det V'); the degree should equal sum_i i * w_i."""
    w = list(w)
    if any(b <= a for a, b in zip(w, w[1:])):
        raise ValueError("weights must be strictly increasing")
    det = determinant(vandermonde_with_zeros(w, zero_mask, field))
    if det.is_zero():
        return False, None
    return True, det.degree()


def rank_preservation_check(A: PolyMatrix, w: WeightAssignment, k: int | None = None,
                            D: int | None = None) -> bool:
    """rank over F(s) of A * M equals rank of A, for s-free A."""
    k = A.nrows if k is None else k
    D = w.t if D is None else D
    if A.nrows != k:
        raise ValueError(f"A has {A.nrows} rows, expected k={k}")
    T = transfer_matrix(w, k, D, A.field)
    if A.ncols != T.matrix.nrows:
        raise ValueError(f"A has {A.ncols} columns, expected {T.matrix.nrows} monomials")
    if any(S_VAR in x.variables() for r in A.rows for x in r):
        raise ValueError("A must be s-free")
    return rank_of_poly_matrix(A @ T.matrix, EXACT) == rank_of_poly_matrix(A, EXACT)


def minor_weight(columns: Sequence, w: WeightAssignment) -> int:
    """sum_i i * wt(col_i) with columns sorted by increasing weight."""
    wts = sorted(w.weight(c) for c in columns)
    return sum((i + 1) * x for i, x in enumerate(wts))


def nonzero_minors(A: PolyMatrix) -> list[tuple]:
    """Column index sets of all nonzero k x k minors (k = rows of A)."""
    k = A.nrows
    out = []
    for S in itertools.combinations(range(A.ncols), k):
        if not determinant(A.select_cols(S)).is_zero():
            out.append(S)
    return out


def max_weight_minors(A: PolyMatrix, w: WeightAssignment) -> list[tuple]:
    """Nonzero minors attaining the maximum weight (a single one when w isolates)."""
    minors = nonzero_minors(A)
    if not minors:
        return []
    wts = {S: minor_weight([A.col_labels[j] for j in S], w) for S in minors}
    top = max(wts.values())
    return [S for S, x in wts.items() if x == top]
