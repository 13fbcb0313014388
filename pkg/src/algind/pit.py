"""Hitting sets for compositions C(f_1, ..., f_m) and blackbox identity tests.

For each candidate map phi the composed polynomial C(f o phi) lives in the
k+3 variables y_0..y_k, s, a and has total degree at most
deg(C) * max deg f_i * max deg phi(x_i).  A full grid S^{k+3} with |S| one
more than that bound hits it whenever it is nonzero, and a faithful phi
keeps C(f) nonzero.  Grid points are pushed through phi into x-space, so
blackboxes only ever see points in the original variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil, log2
from typing import Callable, Iterator, Sequence

import numpy as np

from .condenser import S_VAR
from .criteria import PolySystem
from .faithful import (ALPHA, DisjointProduct, Generator, Sparse, candidate_maps,
                       sparse_generators)
from .field import FieldSpec
from .matrix import ConfigurationError
from .oracle import composition_vars
from .poly import MPoly, MissingImageError, substitute_linear, var_name

# points are produced lazily, so this only guards against absurd sizes
MAX_POINTS = 10**15
DEFAULT_CHUNK = 1 << 16


class SizeLimitError(RuntimeError):
    """The requested hitting set exceeds the configured point budget."""


def eval_batch(f: MPoly, values: dict, E: FieldSpec, size: int) -> np.ndarray:
    """Values of f at a batch of points; `values` maps each variable to an array over E."""
    out = np.zeros(size, dtype=np.int64)
    powers: dict = {}
    for mono, c in f.terms.items():
        term = np.full(size, c, dtype=np.int64)
        for v, e in mono:
            key = (v, e)
            if key not in powers:
                if v not in values:
                    raise MissingImageError(f"no value for {var_name(v)}")
                powers[key] = E.vpow(values[v], e)
            term = E.vmul(term, powers[key])
        out = E.vadd(out, term)
    return out


def sparse_hsg(n: int, sparsity: int, degree: int, field: FieldSpec | None = None,
               count: int | None = None) -> list[Generator]:
    """Monomial generators x_i -> a^{(d+1)^i mod r} over successive primes r.

    `count` defaults to n * sparsity^2 * log2(d+2) primes, the order of the
    number needed before one of them keeps a given nonzero sparse polynomial
    nonzero.
    """
    field = field or FieldSpec(2)
    if count is None:
        count = max(1, ceil(n * sparsity ** 2 * log2(degree + 2)))
    return sparse_generators(field, n, degree, count)


def apply_generator(f: MPoly, G: Generator) -> MPoly:
    images = {("x", i + 1): g for i, g in enumerate(G.images)}
    return substitute_linear(f, images, require=())


@dataclass(frozen=True)
class Composition:
    """C(z_1..z_m) given explicitly or as a callback with a declared degree."""

    m: int
    poly: MPoly | None = None
    callback: Callable | None = None
    degree: int | None = None

    def __post_init__(self):
        if (self.poly is None) == (self.callback is None):
            raise ValueError("give exactly one of poly or callback")
        if self.poly is not None:
            extra = self.poly.variables() - set(composition_vars(self.m))
            if extra:
                raise ValueError(f"composition uses {sorted(map(var_name, extra))} beyond z1..z{self.m}")
            if self.degree is not None and self.degree < self.poly.degree():
                raise ValueError("declared degree is below the true degree")
        elif self.degree is None:
            raise ValueError("a callback composition needs a declared degree bound")

    @property
    def total_degree(self) -> int:
        return self.degree if self.degree is not None else max(self.poly.degree(), 0)

    def evaluate_batch(self, values: Sequence[np.ndarray], E: FieldSpec) -> np.ndarray:
        if self.callback is not None:
            return np.asarray(self.callback(values, E), dtype=np.int64)
        size = len(values[0]) if len(values) else 1
        return eval_batch(self.poly, dict(zip(composition_vars(self.m), values)), E, size)


class CompositionBlackbox:
    """Evaluation access to x -> C(f_1(x), ..., f_m(x))."""

    def __init__(self, comp: Composition, polys: Sequence[MPoly]):
        polys = list(getattr(polys, "polys", polys))
        if len(polys) != comp.m:
            raise ValueError(f"composition expects {comp.m} polynomials, got {len(polys)}")
        self.comp = comp
        self.polys = polys

    def __call__(self, values: dict, E: FieldSpec, size: int) -> np.ndarray:
        inner = [eval_batch(f, values, E, size) for f in self.polys]
        return self.comp.evaluate_batch(inner, E)


@dataclass(frozen=True)
class GridBlock:
    candidate: int
    images: tuple  # phi(x_i) as MPoly in y, s, a


class HittingSet:
    """Grids over (y_0..y_k, s, a), one per candidate map, pushed into x-space.

    Points are generated lazily; `len` is the exact point count.
    """

    def __init__(self, field: FieldSpec, n: int, k: int, side: int, blocks: Sequence[GridBlock],
                 candidates=()):
        if not blocks:
            raise ValueError("a hitting set needs at least one block")
        if field.q < side:
            raise ConfigurationError(f"{field} has fewer than {side} elements")
        self.field = field
        self.n = n
        self.k = k
        self.side = side
        self.blocks = list(blocks)
        self.candidates = list(candidates)
        self.grid_vars = [("y", j) for j in range(k + 1)] + [S_VAR, ALPHA]

    @property
    def dim(self) -> int:
        return self.k + 3

    @property
    def block_size(self) -> int:
        return self.side ** self.dim

    def __len__(self):
        return len(self.blocks) * self.block_size

    def grid_values(self) -> np.ndarray:
        # the first `side` packed elements are distinct field elements
        return np.arange(self.side, dtype=np.int64)

    def batches(self, chunk: int = DEFAULT_CHUNK) -> Iterator[tuple]:
        """Yield (candidate index, first flat grid index, x-values dict, size)."""
        S = self.grid_values()
        d = self.dim
        total = self.block_size
        E = self.field
        for block in self.blocks:
            for lo in range(0, total, chunk):
                idx = np.arange(lo, min(lo + chunk, total), dtype=np.int64)
                coords = np.unravel_index(idx, (self.side,) * d)
                grid = {v: S[c] for v, c in zip(self.grid_vars, coords)}
                xs = {("x", i + 1): eval_batch(img, grid, E, len(idx))
                      for i, img in enumerate(block.images)}
                yield block.candidate, lo, xs, len(idx)

    def point(self, candidate_pos: int, flat: int) -> dict:
        """The x-space point for one grid index of one block."""
        block = self.blocks[candidate_pos]
        coords = np.unravel_index(flat, (self.side,) * self.dim)
        grid = {v: int(c) for v, c in zip(self.grid_vars, coords)}
        return {("x", i + 1): img.evaluate(grid, self.field) for i, img in enumerate(block.images)}

    def __iter__(self):
        for pos, block in enumerate(self.blocks):
            for flat in range(self.block_size):
                yield self.point(pos, flat)


def grid_field(field: FieldSpec, side: int) -> FieldSpec:
    if field.q >= side:
        return field
    if field.e != 1:
        raise ConfigurationError(f"cannot extend the non-prime field {field} to {side} elements")
    return FieldSpec.extension_at_least(field.p, side)


def hitting_set_for_composition(sys: PolySystem, k: int, t: int, comp_degree: int, setting=Sparse(),
                                n_weights: int = 3, n_generators: int = 3,
                                max_points: int = MAX_POINTS) -> HittingSet:
    if comp_degree < 0:
        raise ValueError("composition degree must be >= 0")
    cands = candidate_maps(sys, k, t, setting, n_weights, n_generators)
    max_f = max(f.degree() for f in sys.polys)
    img_deg = max(phi.image_degree() for phi in cands)
    side = comp_degree * max(max_f, 0) * img_deg + 1
    size = len(cands) * side ** (k + 3)
    if size > max_points:
        raise SizeLimitError(f"{size} points exceed the limit {max_points}")
    E = grid_field(sys.field, side)
    blocks = [GridBlock(i, phi.images) for i, phi in enumerate(cands)]
    return HittingSet(E, sys.n, k, side, blocks, cands)


def depth4_hitting_set(terms: Sequence, k: int, t: int, comp_degree: int, **kw) -> HittingSet:
    """Hitting set for compositions of products of variable-disjoint multilinear factors."""
    terms = list(terms)
    polys = tuple(T.poly for T in terms)
    F = polys[0].field
    n = max((v[1] for f in polys for v in f.variables()), default=1)
    sys = PolySystem(F, polys, n)
    return hitting_set_for_composition(sys, k, t, comp_degree,
                                       DisjointProduct(tuple((T,) for T in terms)), **kw)


@dataclass(frozen=True)
class Zero:
    points_checked: int


@dataclass(frozen=True)
class NonzeroAt:
    point: dict
    value: int
    candidate: int
    index: int


def blackbox_pit(blackbox, hs: HittingSet, chunk: int = DEFAULT_CHUNK):
    """First nonzero value over the hitting set, or Zero after every point.

    `blackbox(values, E, size)` gets a dict x_i -> array over E and returns
    the array of values.
    """
    checked = 0
    E = hs.field
    for cand, lo, xs, size in hs.batches(chunk):
        vals = np.asarray(blackbox(xs, E, size), dtype=np.int64)
        nz = np.flatnonzero(vals)
        if nz.size:
            j = int(nz[0])
            point = {v: int(a[j]) for v, a in xs.items()}
            return NonzeroAt(point, int(vals[j]), cand, lo + j)
        checked += size
    return Zero(checked)
