"""Bounded-degree annihilator search and a reference algebraic rank.

An annihilator of f_1..f_m of degree <= D is a nonzero kernel vector of the
linear map sending a coefficient vector (c_e)_{|e| <= D} over F to
sum_e c_e f^e.  The constraints are either the monomial coefficients of the
expanded powers f^e (``method="coefficients"``) or values of f^e at random
points of a large extension field, split into their F_p-coordinates
(``method="evaluation"``).  Both give the same kernel once the evaluation
system has full information; an evaluation kernel vector is only returned
after exact re-substitution, so answers are exact either way.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Sequence

import numpy as np

from . import linalg
from .field import FieldSpec
from .matrix import evaluation_field, random_point, trial_rng
from .poly import MPoly, monomial, substitute_linear

MAX_UNKNOWNS = 6000
MAX_CONSTRAINTS = 400_000
# coefficient expansion is used while the estimated term count stays small
COEFFICIENT_TERM_BUDGET = 20_000


class SizeLimitError(RuntimeError):
    """The annihilator linear system exceeds the configured limits."""


def composition_vars(m: int) -> list:
    return [("z", i + 1) for i in range(m)]


def compose(A: MPoly, polys: Sequence[MPoly]) -> MPoly:
    """A(f_1, ..., f_m) for A in the composition variables z_1..z_m."""
    images = dict(zip(composition_vars(len(polys)), polys))
    return substitute_linear(A, images, require=images.keys())


@dataclass(frozen=True)
class Annihilator:
    """Nonzero A(z_1..z_m) over F with A(f) = 0, checked at construction."""

    poly: MPoly
    targets: tuple = dc_field(default=(), repr=False, compare=False)

    def __post_init__(self):
        if self.poly.is_zero():
            raise ValueError("an annihilator must be nonzero")
        if self.targets and not compose(self.poly, self.targets).is_zero():
            raise ValueError("candidate does not annihilate the polynomials")

    @property
    def degree(self) -> int:
        return self.poly.degree()

    def __str__(self):
        return str(self.poly)


@dataclass(frozen=True)
class NoneUpTo:
    degree: int


def exponent_vectors(m: int, D: int) -> list[tuple]:
    """All e in N^m with |e| <= D, ascending degree, lexicographic within."""
    out = []
    for d in range(D + 1):
        block = []
        for combo in itertools.combinations_with_replacement(range(m), d):
            e = [0] * m
            for i in combo:
                e[i] += 1
            block.append(tuple(e))
        block.sort(reverse=True)
        out.extend(block)
    return out


def _normalize(F: FieldSpec, vec: np.ndarray, exps: list, m: int) -> MPoly:
    zv = composition_vars(m)
    A = MPoly(F, {monomial(zip(zv, e)): int(c) for e, c in zip(exps, vec) if c})
    _, lc = A.leading_term()
    return A.scale(F.inv(lc))


def annihilator_search(polys, D: int, method: str = "auto", seed: int = 0,
                       max_unknowns: int = MAX_UNKNOWNS, max_constraints: int = MAX_CONSTRAINTS):
    """Find a nonzero A with deg A <= D and A(f) = 0 with coefficients in F."""
    polys = list(getattr(polys, "polys", polys))
    if not polys:
        raise ValueError("need at least one polynomial")
    F = polys[0].field
    m = len(polys)
    if D < 0:
        raise ValueError("degree bound must be >= 0")
    n_unknowns = comb(m + D, D)
    if n_unknowns > max_unknowns:
        raise SizeLimitError(f"{n_unknowns} unknowns exceed the limit {max_unknowns}")
    exps = exponent_vectors(m, D)
    if method == "auto":
        est = max(len(f) for f in polys) ** D if D else 1
        method = "coefficients" if est * n_unknowns <= COEFFICIENT_TERM_BUDGET * 10 \
            and est <= COEFFICIENT_TERM_BUDGET else "evaluation"
    if method == "evaluation":
        res = _search_evaluation(polys, exps, F, seed, max_constraints)
        if res is not None:
            return res
        method = "coefficients"
    return _search_coefficients(polys, exps, F, max_constraints)


def _powers(polys, exps, F):
    """f^e for every exponent vector, built from e minus one unit vector."""
    m = len(polys)
    table = {tuple([0] * m): MPoly.const(F, 1)}
    for e in exps:
        if e in table:
            continue
        i = max(j for j in range(m) if e[j])
        prev = list(e)
        prev[i] -= 1
        table[e] = table[tuple(prev)] * polys[i]
    return table


def _search_coefficients(polys, exps, F, max_constraints):
    table = _powers(polys, exps, F)
    rows_index: dict = {}
    entries = []
    for j, e in enumerate(exps):
        for mono, c in table[e].terms.items():
            r = rows_index.setdefault(mono, len(rows_index))
            entries.append((r, j, c))
    if len(rows_index) > max_constraints:
        raise SizeLimitError(f"{len(rows_index)} constraints exceed the limit {max_constraints}")
    M = np.zeros((len(rows_index), len(exps)), dtype=np.int64)
    for r, j, c in entries:
        M[r, j] = c
    kernel = linalg.kernel_basis(F, M, len(exps))
    if not kernel:
        return NoneUpTo(max(sum(e) for e in exps))
    A = _normalize(F, kernel[0], exps, len(polys))
    return Annihilator(A, tuple(polys))


def _search_evaluation(polys, exps, F, seed, max_constraints):
    """Kernel from point evaluations; None means fall back to coefficients."""
    m = len(polys)
    if F.e == 1:
        E = evaluation_field(F, 0)
    elif F.q >= 2**16:
        E = F
    else:
        return None
    variables = set().union(*(f.variables() for f in polys))
    n = len(exps)
    n_points = n + 8
    for attempt in range(4):
        rows = []
        for k in range(n_points):
            pt = random_point(variables, E, trial_rng(seed, 1000 * attempt + k))
            vals = [f.evaluate(pt, E) for f in polys]
            pw = [[1] for _ in range(m)]
            top = max((sum(e) for e in exps), default=0)
            for i in range(m):
                for _ in range(top):
                    pw[i].append(E.mul(pw[i][-1], vals[i]))
            row = []
            for e in exps:
                v = 1
                for i, ei in enumerate(e):
                    if ei:
                        v = E.mul(v, pw[i][ei])
                row.append(v)
            if E is F:
                rows.append(row)
            else:
                # unknowns live in F_p: split each F_q equation into coordinates
                digits = np.array([E.digits(v) for v in row], dtype=np.int64).T
                rows.extend(digits.tolist())
        if len(rows) > max_constraints:
            raise SizeLimitError(f"{len(rows)} constraints exceed the limit {max_constraints}")
        kernel = linalg.kernel_basis(F, np.array(rows, dtype=np.int64), n)
        if not kernel:
            return NoneUpTo(max(sum(e) for e in exps))
        try:
            return Annihilator(_normalize(F, kernel[0], exps, m), tuple(polys))
        except ValueError:
            n_points *= 2
    return None


@dataclass(frozen=True)
class ReferenceRank:
    rank: int
    subset: tuple
    bounded: bool  # some independence conclusion rests on "no annihilator up to D"
    degree: int


def reference_algrank(polys, D: int, method: str = "auto") -> ReferenceRank:
    """Greedy matroid rank from annihilator-search verdicts alone."""
    polys = list(getattr(polys, "polys", polys))
    chosen: list[int] = []
    bounded = False
    for i, f in enumerate(polys):
        res = annihilator_search([polys[j] for j in chosen] + [f], D, method)
        if isinstance(res, NoneUpTo):
            chosen.append(i)
            bounded = True
    return ReferenceRank(len(chosen), tuple(chosen), bounded, D)
