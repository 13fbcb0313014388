import random

import numpy as np
import pytest

from algind.criteria import PolySystem
from algind.faithful import ALPHA, Depth4Term
from algind.field import FieldSpec
from algind.matrix import ConfigurationError
from algind.pit import (
    Composition, CompositionBlackbox, HittingSet, NonzeroAt, Zero, apply_generator, blackbox_pit,
    depth4_hitting_set, eval_batch, grid_field, hitting_set_for_composition, sparse_hsg,
)
from algind.faithful import Generator
from algind.poly import MPoly

from helpers import random_poly

F3 = FieldSpec(3)


def var(F, fam, i):
    return MPoly.var(F, fam, i)


def test_eval_batch_matches_pointwise():
    rng = random.Random(4)
    E = FieldSpec(3, 4)
    f = random_poly(F3, 3, 4, 6, rng)
    pts = [{("x", i): rng.randrange(E.q) for i in (1, 2, 3)} for _ in range(50)]
    arrays = {v: np.array([p[v] for p in pts]) for v in pts[0]}
    got = eval_batch(f, arrays, E, len(pts))
    assert list(got) == [f.evaluate(p, E) for p in pts]


def test_sparse_hsg_examples():
    a = var(F3, *ALPHA)
    x1, x2 = var(F3, "x", 1), var(F3, "x", 2)
    G = Generator.monomial(F3, [3, 2])
    assert apply_generator(x1 - x2, G) == a ** 3 - a ** 2
    gens = sparse_hsg(2, 2, 2, F3)
    assert any(g.exponents == (3, 2) for g in gens)
    for g in gens:
        assert apply_generator(MPoly(F3), g).is_zero()
        assert apply_generator(x1 * x2 - x2 * x1, g).is_zero()


def test_sparse_hsg_hits_sparse_polys():
    rng = random.Random(8)
    for _ in range(20):
        f = random_poly(F3, 3, 3, 3, rng)
        gens = sparse_hsg(3, len(f), f.degree(), F3)
        assert any(not apply_generator(f, g).is_zero() for g in gens)


def test_composition_validation():
    z1 = var(F3, "z", 1)
    with pytest.raises(ValueError):
        Composition(1)
    with pytest.raises(ValueError):
        Composition(1, poly=var(F3, "z", 2))
    with pytest.raises(ValueError):
        Composition(1, poly=z1 ** 3, degree=2)
    with pytest.raises(ValueError):
        Composition(1, callback=lambda v, E: v[0])
    assert Composition(1, poly=z1 ** 2).total_degree == 2


def test_single_variable_grid_hits():
    x1 = var(F3, "x", 1)
    sys = PolySystem(F3, (x1,), 1)
    hs = hitting_set_for_composition(sys, 1, 1, 1)
    for pos in range(len(hs.blocks)):
        vals = [hs.point(pos, j)[("x", 1)] for j in range(hs.block_size)]
        assert any(vals)


def test_size_accounting():
    x1, x2 = var(F3, "x", 1), var(F3, "x", 2)
    sys = PolySystem(F3, (x1 + x2 ** 2,), 2)
    hs = hitting_set_for_composition(sys, 1, 1, 2, n_weights=2, n_generators=1)
    img = max(phi.image_degree() for phi in hs.candidates)
    assert hs.side == 2 * 2 * img + 1
    assert len(hs) == len(hs.candidates) * hs.side ** 4
    assert sum(size for *_, size in hs.batches(1000)) == len(hs)
    assert hs.field.q >= hs.side


def test_iteration_matches_batches():
    x1 = var(F3, "x", 1)
    hs = hitting_set_for_composition(PolySystem(F3, (x1,), 1), 1, 1, 1, n_weights=1, n_generators=1)
    pts = list(hs)
    assert len(pts) == len(hs)
    _, _, xs, size = next(hs.batches(len(hs)))
    assert [p[("x", 1)] for p in pts] == list(xs[("x", 1)])


def test_grid_field():
    assert grid_field(F3, 3) is F3
    assert grid_field(F3, 10).q >= 10
    with pytest.raises(ConfigurationError):
        grid_field(FieldSpec(3, 2), 10)
    with pytest.raises(ConfigurationError):
        HittingSet(F3, 1, 1, 5, [object()])


def test_blackbox_examples():
    x, y = var(F3, "x", 1), var(F3, "x", 2)
    z1, z2 = var(F3, "z", 1), var(F3, "z", 2)
    sys = PolySystem(F3, (x + y, x ** 3 + y ** 3), 2)
    hs = hitting_set_for_composition(sys, 1, 1, 3, n_weights=1, n_generators=1)
    # z1^3 - z2 annihilates in characteristic 3
    res = blackbox_pit(CompositionBlackbox(Composition(2, z1 ** 3 - z2), sys), hs)
    assert res == Zero(len(hs))
    res = blackbox_pit(CompositionBlackbox(Composition(2, z1 ** 3 + z2), sys), hs)
    assert isinstance(res, NonzeroAt)
    E = hs.field
    direct = E.add(E.pow(E.add(res.point[("x", 1)], res.point[("x", 2)]), 3),
                   sys.polys[1].evaluate(res.point, E))
    assert res.value == direct != 0
    assert blackbox_pit(lambda v, E, n: np.zeros(n, dtype=np.int64), hs) == Zero(len(hs))


def test_blackbox_f_itself_and_callback():
    x1 = var(F3, "x", 1)
    sys = PolySystem(F3, (x1 * x1 + x1,), 1)
    hs = hitting_set_for_composition(sys, 1, 1, 1)
    assert isinstance(blackbox_pit(CompositionBlackbox(Composition(1, var(F3, "z", 1)), sys), hs),
                      NonzeroAt)
    cb = Composition(1, callback=lambda vals, E: E.vmul(vals[0], vals[0]), degree=2)
    assert isinstance(blackbox_pit(CompositionBlackbox(cb, sys), hs), NonzeroAt)


def test_counterexample_pair_composition():
    x, y = var(F3, "x", 1), var(F3, "x", 2)
    sys = PolySystem(F3, (x * x * y, x * y * y), 2)
    hs = hitting_set_for_composition(sys, 2, 3, 2)
    comp = Composition(2, var(F3, "z", 1) * var(F3, "z", 2))
    res = blackbox_pit(CompositionBlackbox(comp, sys), hs)
    assert isinstance(res, NonzeroAt)
    assert res.value == (x ** 3 * y ** 3).evaluate(res.point, hs.field)


def test_depth4_examples():
    F5 = FieldSpec(5)
    x1, x2, x3 = (var(F5, "x", i) for i in (1, 2, 3))
    T = Depth4Term((x1, x2))
    hs = depth4_hitting_set([T], 1, 1, 1, n_weights=1, n_generators=1)
    z = [var(F5, "z", i) for i in (1, 2)]
    assert isinstance(blackbox_pit(CompositionBlackbox(Composition(1, z[0]), [T.poly]), hs), NonzeroAt)
    T1, T2 = Depth4Term((x1 + 1, x2)), Depth4Term((x1 + 1, 4 * x2))
    hs2 = depth4_hitting_set([T1, T2], 1, 1, 1, n_weights=1, n_generators=1)
    zero = CompositionBlackbox(Composition(2, z[0] + z[1]), [T1.poly, T2.poly])
    assert blackbox_pit(zero, hs2) == Zero(len(hs2))
    U1, U2 = Depth4Term((x1 + 2, x2 * x3 + 3)), Depth4Term((x3 + x1, 2 * x2 + 1))
    hs3 = depth4_hitting_set([U1, U2], 2, 1, 1, n_weights=1, n_generators=1)
    nz = CompositionBlackbox(Composition(2, z[0] + 2 * z[1]), [U1.poly, U2.poly])
    assert isinstance(blackbox_pit(nz, hs3), NonzeroAt)
