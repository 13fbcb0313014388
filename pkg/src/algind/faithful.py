"""Candidate faithful homomorphisms and the identities behind them.

A map x_i -> y_0 G_i(a) + sum_j y_j s^{w(i) j} sends n variables to k+1
new ones.  When w isolates the monomials of degree <= t and the generator
point G(a) keeps the relevant shift-rank minors nonzero, the map preserves
algebraic rank over F.  Neither hypothesis is checkable cheaply, so the
construction returns a short list of candidates and `verify_faithful`
checks a given candidate against the annihilator oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Sequence

from .condenser import S_VAR, UnverifiedWeightsError, WeightAssignment, isolating_weights
from .criteria import PolySystem, _check_subset, algebraic_rank, shift_poly
from .field import FieldSpec, is_prime
from .matrix import PolyMatrix
from .oracle import reference_algrank
from .poly import MPoly, VarClass, monomials, substitute_linear, truncated_shift

ALPHA = ("a", 0)


@dataclass(frozen=True)
class Generator:
    """Univariate images G_i(a); `prime` is the modulus the exponents came from."""

    images: tuple
    degree: int
    prime: int | None = None
    exponents: tuple | None = None

    def __post_init__(self):
        for g in self.images:
            if g.is_zero():
                raise ValueError("generator images must be nonzero")
            if g.variables() - {ALPHA}:
                raise ValueError("generator images must involve only the parameter a")

    @classmethod
    def monomial(cls, field: FieldSpec, exponents: Sequence[int], prime: int | None = None) -> "Generator":
        a = MPoly.var(field, *ALPHA)
        return cls(tuple(a ** u for u in exponents), max(exponents, default=0), prime, tuple(exponents))

    def point(self) -> dict:
        return {("z", i + 1): g for i, g in enumerate(self.images)}


@dataclass(frozen=True)
class FaithfulMap:
    k: int
    weights: WeightAssignment | None
    generator: Generator | None
    images: tuple  # image of x_1..x_n, MPoly in y_0..y_k, s, a

    @property
    def n(self) -> int:
        return len(self.images)

    def mapping(self) -> dict:
        return {("x", i + 1): img for i, img in enumerate(self.images)}

    def z_mapping(self) -> dict:
        """z_i -> the image of x_i with y_j renamed to v_j."""
        ren = {("y", j): ("v", j) for j in range(self.k + 1)}
        return {("z", i + 1): img.rename(ren) for i, img in enumerate(self.images)}

    def image_degree(self) -> int:
        return max((img.degree() for img in self.images), default=0)

    def y_vars(self) -> list:
        return [("y", j) for j in range(self.k + 1)]

    @classmethod
    def from_images(cls, images: Sequence[MPoly], k: int) -> "FaithfulMap":
        """An arbitrary linear map into y_0..y_k, for comparison and tests."""
        return cls(k, None, None, tuple(images))


def build_map(w: WeightAssignment, G: Generator, k: int, field: FieldSpec | None = None) -> FaithfulMap:
    if k < 1:
        raise ValueError("target rank k must be >= 1")
    if w.isolating is not True:
        raise UnverifiedWeightsError("build_map needs a weight assignment verified isolating")
    if len(G.images) != w.n:
        raise ValueError(f"generator has {len(G.images)} images for {w.n} variables")
    F = field or G.images[0].field
    s = MPoly.var(F, *S_VAR)
    y = [MPoly.var(F, "y", j) for j in range(k + 1)]
    images = []
    for i in range(w.n):
        img = y[0] * G.images[i]
        for j in range(1, k + 1):
            img = img + y[j] * s ** (w.w[i] * j)
        images.append(img)
    return FaithfulMap(k, w, G, tuple(images))


def apply_map(phi: FaithfulMap, sys) -> list[MPoly]:
    polys = getattr(sys, "polys", sys)
    images = phi.mapping()
    return [substitute_linear(f, images, require=[v for v in images if v in f.variables()])
            for f in polys]


def image_system(phi: FaithfulMap, sys: PolySystem) -> PolySystem:
    return PolySystem(sys.field, tuple(apply_map(phi, sys)), phi.k + 1, "y", 0)


@dataclass(frozen=True)
class Depth4Term:
    """A product of variable-disjoint multilinear factors."""

    factors: tuple
    supports: tuple = dc_field(init=False)

    def __post_init__(self):
        factors = tuple(self.factors)
        if not factors:
            raise ValueError("a product term needs at least one factor")
        supports = tuple(frozenset(f.variables_of(VarClass.MAIN)) for f in factors)
        for a, b in itertools.combinations(supports, 2):
            if a & b:
                raise ValueError("factor supports must be pairwise disjoint")
        for f in factors:
            if not f.is_multilinear():
                raise ValueError("factors must be multilinear")
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "supports", supports)

    @property
    def poly(self) -> MPoly:
        out = self.factors[0]
        for f in self.factors[1:]:
            out = out * f
        return out

    @property
    def sparsity(self) -> int:
        return max(len(f) for f in self.factors)


# -- shift-rank matrices on all exponent rows --

def _exponent_rows(k: int, t: int) -> list[tuple]:
    out = []
    for d in range(t + 1):
        for combo in itertools.combinations_with_replacement(range(k), d):
            e = [0] * k
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


def extended_pss_matrix(sys: PolySystem, subset: Sequence[int] | None = None, t: int = 1) -> PolyMatrix:
    """Rows a^e for |e| <= t, columns main monomials of degree 1..t.

    Entry (e, x^d) is the x^d coefficient of prod_i H_t(f_i)^{e_i}.
    """
    subset = list(range(sys.m)) if subset is None else list(subset)
    _check_subset(sys, subset)
    F = sys.field
    k = len(subset)
    shifted = [shift_poly(sys.polys[i], t) for i in subset]
    cols = monomials(sys.main_vars, t, 1)
    rows_e = _exponent_rows(k, t)
    prods = {tuple([0] * k): MPoly.const(F, 1)}
    zero = MPoly(F)
    rows = []
    for e in rows_e:
        if e not in prods:
            i = max(j for j in range(k) if e[j])
            prev = list(e)
            prev[i] -= 1
            prods[e] = prods[tuple(prev)].mul_truncated(shifted[i], t)
        parts = prods[e].split(VarClass.MAIN)
        rows.append([parts.get(c, zero) for c in cols])
    return PolyMatrix(F, rows, rows_e, cols, ncols=len(cols))


def expected_extended_rows(k: int, t: int) -> int:
    return comb(k + t, t)


def evolution_check(f: MPoly, phi: FaithfulMap, t: int) -> bool:
    """H_t(f o phi) with y shifted by v equals phi o phi_z applied to H_t(f)."""
    g = apply_map(phi, [f])[0]
    lhs = truncated_shift(g, t) if g.variables_of(VarClass.MAIN) else MPoly(f.field)
    rhs_images = {**phi.mapping(), **phi.z_mapping()}
    rhs = substitute_linear(shift_poly(f, t), rhs_images, require=())
    return lhs == rhs


def transfer_extended(phi: FaithfulMap, t: int) -> PolyMatrix:
    """M~(x^e, y^d) = coeff of y^d in phi(x^e); block-diagonal by degree."""
    F = phi.images[0].field
    xs = [("x", i + 1) for i in range(phi.n)]
    rows_m = monomials(xs, t, 1)
    cols_m = monomials(phi.y_vars(), t, 1)
    col_index = {m: j for j, m in enumerate(cols_m)}
    images = phi.mapping()
    zero = MPoly(F)
    rows = []
    for mono in rows_m:
        img = substitute_linear(MPoly(F, {mono: 1}), images)
        row = [zero] * len(cols_m)
        for ym, coef in img.split(VarClass.MAIN).items():
            row[col_index[ym]] = coef
        rows.append(row)
    return PolyMatrix(F, rows, rows_m, cols_m, ncols=len(cols_m))


def decomposition_check(sys: PolySystem, subset: Sequence[int] | None, t: int, phi: FaithfulMap) -> bool:
    """A' == phi_z(A) x M~ exactly."""
    subset = list(range(sys.m)) if subset is None else list(subset)
    A = extended_pss_matrix(sys, subset, t)
    A2 = extended_pss_matrix(image_system(phi, sys), subset, t)
    zmap = phi.z_mapping()
    M = transfer_extended(phi, t)
    if A.ncols != M.nrows or A2.ncols != M.ncols:
        raise AssertionError("extended shift-rank and transfer matrices do not line up")
    lhs = A.map(lambda x: substitute_linear(x, zmap, require=()) if x else x) @ M
    return all(a == b for ra, rb in zip(lhs.rows, A2.rows) for a, b in zip(ra, rb))


# -- candidate lists --

@dataclass(frozen=True)
class Sparse:
    """f_i given as sparse polynomials."""


@dataclass(frozen=True)
class DisjointProduct:
    """f_i given as sums of products of variable-disjoint multilinear factors."""

    terms: tuple  # per polynomial, a tuple of Depth4Term whose sum is f_i


def generator_degree_bound(sys: PolySystem, k: int, t: int) -> int:
    """z-degree bound for any minor of the extended shift-rank matrix."""
    K = comb(k + t, t)
    return K * t * max(f.degree() for f in sys.polys)


def sparse_generators(field: FieldSpec, n: int, degree: int, count: int,
                      start: int | None = None) -> list[Generator]:
    """G_i(a) = a^{u(i)}, u(i) = (d+1)^i mod r, over successive primes r >= start.

    Primes whose exponents repeat are skipped: such a point identifies two
    variables and cannot separate monomials that differ only in them.
    """
    r = max(start if start is not None else n + 1, 2)
    out = []
    while len(out) < count:
        if is_prime(r):
            u = [pow(degree + 1, i, r) for i in range(1, n + 1)]
            if len(set(u)) == n:
                out.append(Generator.monomial(field, u, r))
        r += 1
    return out


def generator_candidates(sys: PolySystem, k: int, t: int, count: int,
                         range_factor: int = 1) -> list[Generator]:
    d = generator_degree_bound(sys, k, t)
    return sparse_generators(sys.field, sys.n, d, count, (sys.n + 1) * range_factor)


def _check_setting(sys: PolySystem, setting):
    if isinstance(setting, Sparse):
        return
    if isinstance(setting, DisjointProduct):
        if len(setting.terms) != sys.m:
            raise ValueError("DisjointProduct needs one term list per polynomial")
        for f, terms in zip(sys.polys, setting.terms):
            total = MPoly(sys.field)
            for term in terms:
                if not isinstance(term, Depth4Term):
                    raise ValueError("DisjointProduct terms must be Depth4Term")
                total = total + term.poly
            if total != f:
                raise ValueError("DisjointProduct structure does not match the polynomial")
        return
    raise ValueError(f"unknown setting {setting!r}")


def candidate_maps(sys: PolySystem, k: int, t: int, setting=Sparse(), n_weights: int = 3,
                   n_generators: int = 3, range_factor: int | None = None) -> list[FaithfulMap]:
    """Isolating weights x generator points, ordered by (weight prime, generator prime)."""
    if k < 1:
        raise ValueError("target rank k must be >= 1")
    _check_setting(sys, setting)
    if range_factor is None:
        range_factor = comb(k + t, t) * t if isinstance(setting, DisjointProduct) else 1
    weights = isolating_weights(sys.n, t, n_weights)
    gens = generator_candidates(sys, k, t, n_generators, range_factor)
    return [build_map(w, G, k, sys.field) for w in weights for G in gens]


@dataclass(frozen=True)
class FaithfulVerdict:
    faithful: bool
    source_rank: int
    image_rank: int
    bounded: bool

    def __bool__(self):
        return self.faithful


def verify_faithful(phi: FaithfulMap, sys: PolySystem, oracle_degree_bound: int = 4) -> FaithfulVerdict:
    """Compare the algebraic rank of f with the F-algebraic rank of f o phi.

    A homomorphism never raises algebraic rank, so it is enough to test the
    image of one transcendence basis of f.
    """
    src = algebraic_rank(sys, oracle_degree_bound=oracle_degree_bound)
    basis = [sys.polys[i] for i in src.subset]
    img = reference_algrank(apply_map(phi, basis), oracle_degree_bound)
    return FaithfulVerdict(src.rank == img.rank, src.rank, img.rank,
                           src.oracle_bounded or img.bounded)
