"""Jacobian and truncated-shift rank independence criteria.

The shift-rank test at truncation order t asks whether H_t(f_1), ..., H_t(f_k),
viewed as vectors over F(z) indexed by x-monomials of degree 1..t, stay
linearly independent modulo the span U_t of all products of 2..t of them
(truncated to degree <= t).  Certification is one-sided: a certificate at
any t proves independence, while a failure only proves dependence once t
reaches the inseparable degree of the system.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Sequence

import numpy as np

from . import linalg
from .field import FieldSpec
from .matrix import (EXACT, PolyMatrix, Randomized, bareiss_rank, evaluation_field,
                     random_point, rank_of_poly_matrix, trial_rng)
from .poly import (MPoly, VarClass, hasse_derivative, mono_mul, monomials, truncated_shift,
                   var_name)

# Exact elimination on symbolic shift-rank matrices is only affordable for tiny
# layouts; bigger ones evaluate z at random points of an extension field.
EXACT_COLUMN_LIMIT = 200
EXACT_SHIFT_CELL_LIMIT = 40


@dataclass(frozen=True)
class PolySystem:
    """Polynomials f_1..f_m in the main variables family_start..family_{start+n-1}."""

    field: FieldSpec
    polys: tuple
    n: int
    family: str = "x"
    start: int = 1

    def __post_init__(self):
        object.__setattr__(self, "polys", tuple(self.polys))
        if not self.polys:
            raise ValueError("a polynomial system needs at least one polynomial")
        allowed = set(self.main_vars)
        for f in self.polys:
            if f.field != self.field:
                raise ValueError("all polynomials must share the system's field")
            extra = f.variables_of(VarClass.MAIN) - allowed
            if extra:
                raise ValueError(f"variables {sorted(map(var_name, extra))} outside the system")

    @classmethod
    def of(cls, polys: Sequence[MPoly], n: int | None = None) -> "PolySystem":
        polys = list(polys)
        idx = [v[1] for f in polys for v in f.variables_of(VarClass.MAIN)]
        return cls(polys[0].field, tuple(polys), n if n is not None else max(idx, default=1))

    @property
    def m(self) -> int:
        return len(self.polys)

    @property
    def main_vars(self) -> list:
        return [(self.family, self.start + i) for i in range(self.n)]

    def subsystem(self, subset: Sequence[int]) -> "PolySystem":
        return PolySystem(self.field, tuple(self.polys[i] for i in subset), self.n,
                          self.family, self.start)


@dataclass(frozen=True)
class CertifiedIndependent:
    t: int
    certified = True


@dataclass(frozen=True)
class NotCertifiedAt:
    t: int
    certified = False


@dataclass(frozen=True)
class DependentWitness:
    annihilator: object
    certified = False


@dataclass(frozen=True)
class HasseVector:
    index: int
    t: int
    entries: dict = dc_field(hash=False)

    @property
    def poly(self) -> MPoly:
        """The vector as a polynomial in main and generic-point variables."""
        out = None
        for m, c in self.entries.items():
            term = c * MPoly(c.field, {m: 1})
            out = term if out is None else out + term
        return out


@dataclass
class ProductSpan:
    multisets: list
    products: list  # truncated products, as MPoly in main + generic variables

    def __len__(self):
        return len(self.multisets)


@dataclass
class PssMatrix:
    top: list
    bottom: ProductSpan
    columns: list
    field: FieldSpec

    def _row(self, poly: MPoly) -> list:
        parts = poly.split(VarClass.MAIN)
        zero = MPoly(self.field)
        return [parts.get(c, zero) for c in self.columns]

    def top_matrix(self) -> PolyMatrix:
        rows = [self._row(h.poly or MPoly(self.field)) for h in self.top]
        return PolyMatrix(self.field, rows, [f"H{h.index}" for h in self.top],
                          self.columns, ncols=len(self.columns))

    def span_matrix(self) -> PolyMatrix:
        rows = [self._row(p) for p in self.bottom.products]
        return PolyMatrix(self.field, rows, [tuple(ms) for ms in self.bottom.multisets],
                          self.columns, ncols=len(self.columns))

    def stacked(self) -> PolyMatrix:
        return self.top_matrix().stack(self.span_matrix())


def expected_span_rows(k: int, t: int) -> int:
    return comb(k + t, t) - k - 1


def expected_columns(n: int, t: int) -> int:
    return comb(n + t, t) - 1


def shift_poly(f: MPoly, t: int) -> MPoly:
    return truncated_shift(f, t) if f.variables_of(VarClass.MAIN) else MPoly(f.field)


def hasse_vector(f: MPoly, t: int, index: int = 0) -> HasseVector:
    """H_t(f) as a map from main monomial (degree 1..t) to a generic-point polynomial."""
    return HasseVector(index, t, shift_poly(f, t).split(VarClass.MAIN))


def product_span(shifted: Sequence[MPoly], t: int) -> ProductSpan:
    """All multiset products of 2..t of the shifted polynomials, truncated at degree t."""
    k = len(shifted)
    prods: dict = {(i,): shifted[i] for i in range(k)}
    multisets, products = [], []
    for r in range(2, t + 1):
        for ms in itertools.combinations_with_replacement(range(k), r):
            head = prods[ms[:-1]]
            prod = head.mul_truncated(shifted[ms[-1]], t) if head else head
            prods[ms] = prod
            multisets.append(ms)
            products.append(prod)
    return ProductSpan(multisets, products)


def build_pss_matrix(sys: PolySystem, subset: Sequence[int], t: int) -> PssMatrix:
    _check_subset(sys, subset)
    shifted = [shift_poly(sys.polys[i], t) for i in subset]
    top = [HasseVector(i, t, s.split(VarClass.MAIN)) for i, s in zip(subset, shifted)]
    cols = monomials(sys.main_vars, t, 1)
    return PssMatrix(top, product_span(shifted, t), cols, sys.field)


def _check_subset(sys: PolySystem, subset: Sequence[int]):
    if not subset:
        raise IndexError("subset must be nonempty")
    for i in subset:
        if not 0 <= i < sys.m:
            raise IndexError(f"subset index {i} out of range for a system of {sys.m}")
    if len(set(subset)) != len(subset):
        raise IndexError("subset indices must be distinct")


# -- Jacobian criterion --

def jacobian_matrix(sys: PolySystem) -> PolyMatrix:
    rows = [[hasse_derivative(f, {x: 1}) for f in sys.polys] for x in sys.main_vars]
    return PolyMatrix(sys.field, rows, [var_name(x) for x in sys.main_vars],
                      [f"f{j + 1}" for j in range(sys.m)], ncols=sys.m)


def jacobian_certify(sys: PolySystem, mode="auto"):
    J = jacobian_matrix(sys)
    if mode == "auto":
        mode = EXACT if J.ncols <= EXACT_COLUMN_LIMIT and J.nrows * J.ncols <= 3 * EXACT_SHIFT_CELL_LIMIT \
            else Randomized()
    full = rank_of_poly_matrix(J, mode) == sys.m
    return CertifiedIndependent(1) if full else NotCertifiedAt(1)


# -- shift-rank criterion --

def _auto_mode(sys: PolySystem, k: int, t: int):
    cols = expected_columns(sys.n, t)
    rows = k + expected_span_rows(k, t)
    if cols <= EXACT_COLUMN_LIMIT and (t == 1 or rows * cols <= EXACT_SHIFT_CELL_LIMIT):
        return EXACT
    return Randomized(trials=2)


def pss_test(sys: PolySystem, subset: Sequence[int] | None = None, t: int = 1, mode="auto"):
    """Certify algebraic independence of the chosen polynomials at truncation t."""
    subset = list(range(sys.m)) if subset is None else list(subset)
    _check_subset(sys, subset)
    if t < 1:
        raise ValueError("t must be >= 1")
    k = len(subset)
    if mode == "auto":
        mode = _auto_mode(sys, k, t)
    if isinstance(mode, Randomized):
        ok = _pss_randomized(sys, subset, t, mode)
    else:
        P = build_pss_matrix(sys, subset, t)
        span = P.span_matrix()
        r_span = bareiss_rank(span.rows, sys.field) if span.nrows else 0
        r_all = bareiss_rank(P.stacked().rows, sys.field)
        ok = r_all == r_span + k
    return CertifiedIndependent(t) if ok else NotCertifiedAt(t)


class _TruncatedRing:
    """Dense coordinates for F[x]/<x>^{t+1} restricted to degrees 1..t."""

    def __init__(self, variables, t: int):
        self.t = t
        self.monos = monomials(sorted(variables), t, 1)
        self.index = {m: i for i, m in enumerate(self.monos)}
        self._maps: dict = {}

    def shift_map(self, h):
        mp = self._maps.get(h)
        if mp is None:
            mp = np.array([self.index.get(mono_mul(m, h), -1) for m in self.monos], dtype=np.int64)
            self._maps[h] = mp
        return mp

    def mul(self, F: FieldSpec, P: np.ndarray, H: list) -> np.ndarray:
        out = np.zeros_like(P)
        for h, c in H:
            mp = self.shift_map(h)
            ok = mp >= 0
            src = P[ok]
            if not src.any():
                continue
            tgt = mp[ok]
            out[tgt] = F.vadd(out[tgt], F.vmul(src, c))
        return out


def _pss_randomized(sys: PolySystem, subset, t: int, mode: Randomized) -> bool:
    k = len(subset)
    shifted = [shift_poly(sys.polys[i], t) for i in subset]
    mains = set().union(*(s.variables_of(VarClass.MAIN) for s in shifted))
    if not mains:
        return False
    ring = _TruncatedRing(mains, t)
    parts = [s.split(VarClass.MAIN) for s in shifted]
    others = set().union(*(s.variables() for s in shifted)) - mains
    deg = max(s.degree() for s in shifted if s)
    F = evaluation_field(sys.field, t * deg * len(ring.monos), mode.extend)
    for trial in range(mode.trials):
        point = random_point(others, F, trial_rng(mode.seed, trial))
        hs = []
        for part in parts:
            sparse = [(m, c.evaluate(point, F)) for m, c in part.items()]
            hs.append([(m, c) for m, c in sparse if c])
        dense = []
        for h in hs:
            v = np.zeros(len(ring.monos), dtype=np.int64)
            for m, c in h:
                v[ring.index[m]] = c
            dense.append(v)
        prods: dict = {(i,): dense[i] for i in range(k)}
        span_rows = []
        for r in range(2, t + 1):
            layer = False
            for ms in itertools.combinations_with_replacement(range(k), r):
                head = prods.get(ms[:-1])
                if head is None:
                    continue
                prod = ring.mul(F, head, hs[ms[-1]])
                if prod.any():
                    prods[ms] = prod
                    span_rows.append(prod)
                    layer = True
            if not layer:
                break
        top = np.array(dense, dtype=np.int64)
        if span_rows:
            basis, pivots = linalg.rref(F, np.array(span_rows, dtype=np.int64))
            residual = linalg.reduce_against(F, basis, pivots, top)
        else:
            residual = top
        if linalg.rank(F, residual) == k:
            return True
    return False


def p_power_schedule(p: int, t_max: int) -> list[int]:
    out, t = [], 1
    while t <= t_max:
        out.append(t)
        t *= p
    return out


def certify_min_t(sys: PolySystem, subset: Sequence[int] | None = None, t_max: int = 1, mode="auto"):
    """Smallest t in 1, p, p^2, ... <= t_max that certifies, or None (inconclusive)."""
    if t_max < 1:
        raise ValueError("t_max must be >= 1")
    for t in p_power_schedule(sys.field.p, t_max):
        if pss_test(sys, subset, t, mode).certified:
            return t
    return None


@dataclass(frozen=True)
class AlgebraicRank:
    rank: int
    subset: tuple
    oracle_bounded: bool = False
    certifying_t: tuple = ()
    witnesses: tuple = ()


def algebraic_rank(sys: PolySystem, t_max: int | None = None, oracle_degree_bound: int | None = 4,
                   mode="auto") -> AlgebraicRank:
    """Greedy matroid construction of a maximal independent subset.

    A polynomial is admitted when the shift-rank test certifies the extended set; if
    that is inconclusive, a bounded annihilator search decides, and an empty
    search result admits the polynomial with the `oracle_bounded` flag set.
    """
    from .oracle import Annihilator, annihilator_search

    if t_max is None:
        t_max = sys.field.p
    chosen: list[int] = []
    ts: list = []
    witnesses: list = []
    bounded = False
    for i in range(sys.m):
        cand = chosen + [i]
        t = certify_min_t(sys, cand, t_max, mode)
        if t is not None:
            chosen.append(i)
            ts.append(t)
            continue
        if oracle_degree_bound is None:
            continue
        res = annihilator_search([sys.polys[j] for j in cand], oracle_degree_bound)
        if isinstance(res, Annihilator):
            witnesses.append(DependentWitness(res))
        else:
            chosen.append(i)
            ts.append(None)
            bounded = True
    return AlgebraicRank(len(chosen), tuple(chosen), bounded, tuple(ts), tuple(witnesses))
