import random
from math import comb

import pytest

from algind.criteria import (
    CertifiedIndependent, NotCertifiedAt, PolySystem, algebraic_rank,
    build_pss_matrix, certify_min_t, expected_columns, expected_span_rows, hasse_vector,
    jacobian_certify, jacobian_matrix, p_power_schedule, pss_test,
)
from algind.field import FieldSpec
from algind.matrix import EXACT, Randomized
from algind.oracle import Annihilator, NoneUpTo, annihilator_search, compose
from algind.poly import MPoly, hasse_derivative, truncated_shift

from helpers import random_poly

F2, F3, F5 = FieldSpec(2), FieldSpec(3), FieldSpec(5)


def xs(F, n):
    return [MPoly.var(F, "x", i) for i in range(1, n + 1)]


def test_system_validation():
    x, y = xs(F3, 2)
    with pytest.raises(ValueError):
        PolySystem(F3, (), 2)
    with pytest.raises(ValueError):
        PolySystem(F3, (x * y,), 1)
    with pytest.raises(ValueError):
        PolySystem(F3, (MPoly.var(F5, "x", 1),), 1)
    sys = PolySystem.of([x, y])
    assert sys.n == 2 and sys.m == 2
    with pytest.raises(IndexError):
        pss_test(sys, [2])
    with pytest.raises(IndexError):
        pss_test(sys, [])


def test_jacobian_examples():
    x, y = xs(F2, 2)
    J = jacobian_matrix(PolySystem(F2, (x, y), 2))
    one, zero = MPoly.const(F2, 1), MPoly(F2)
    assert J.rows == [[one, zero], [zero, one]]
    x, y = xs(F3, 2)
    J = jacobian_matrix(PolySystem(F3, (x * x * y, x * y * y), 2))
    assert J.rows == [[2 * x * y, y * y], [x * x, 2 * x * y]]
    J = jacobian_matrix(PolySystem(F3, (x + y, x ** 3 + y ** 3), 2))
    one = MPoly.const(F3, 1)
    assert J.rows == [[one, MPoly(F3)], [one, MPoly(F3)]]
    assert jacobian_certify(PolySystem(F3, (x, y), 2)) == CertifiedIndependent(1)
    assert jacobian_certify(PolySystem(F3, (x * x * y, x * y * y), 2)) == NotCertifiedAt(1)
    for F in (F2, F3, F5):
        a, b = xs(F, 2)
        f = a * b + a
        assert jacobian_certify(PolySystem(F, (f, f * f), 2)) == NotCertifiedAt(1)


def test_pss_examples():
    x, y = xs(F2, 2)
    assert pss_test(PolySystem(F2, (x, y), 2), t=1) == CertifiedIndependent(1)
    for t in (1, 2, 4):
        assert pss_test(PolySystem(F2, (x + y, x * x + y * y), 2), t=t) == NotCertifiedAt(t)
    x, y = xs(F3, 2)
    sys = PolySystem(F3, (x * x * y, x * y * y), 2)
    assert pss_test(sys, t=1) == NotCertifiedAt(1)
    assert pss_test(sys, t=3) == CertifiedIndependent(3)
    assert pss_test(sys, t=3, mode=Randomized(3, seed=4)) == CertifiedIndependent(3)
    assert pss_test(sys, t=3, mode=EXACT) == CertifiedIndependent(3)
    assert pss_test(sys, [0], t=1) == CertifiedIndependent(1)


def test_certify_min_t_examples():
    x, y = xs(F5, 2)
    assert certify_min_t(PolySystem(F5, (x, y), 2), t_max=5) == 1
    x, y = xs(F3, 2)
    assert certify_min_t(PolySystem(F3, (x * x * y, x * y * y), 2), t_max=9) == 3
    x, y = xs(F2, 2)
    assert certify_min_t(PolySystem(F2, (x + y, x * x + y * y), 2), t_max=8) is None
    assert p_power_schedule(3, 10) == [1, 3, 9]
    assert p_power_schedule(2, 1) == [1]
    with pytest.raises(ValueError):
        certify_min_t(PolySystem(F2, (x,), 2), t_max=0)


def test_algebraic_rank_examples():
    x, y = xs(F3, 2)
    r = algebraic_rank(PolySystem(F3, (x, y, x + y), 2))
    assert r.rank == 2 and r.subset == (0, 1)
    assert isinstance(r.witnesses[0].annihilator, Annihilator)
    assert algebraic_rank(PolySystem(F3, (x * x * y, x * y * y), 2)).rank == 2
    assert algebraic_rank(PolySystem(F3, (x * y + 1,), 2)).rank == 1
    r = algebraic_rank(PolySystem(F3, (MPoly.const(F3, 2),), 2))
    assert (r.rank, r.subset) == (0, ())
    assert r.witnesses[0].annihilator.poly == MPoly.var(F3, "z", 1) + 1
    assert algebraic_rank(PolySystem(F3, (MPoly(F3),), 2)).rank == 0


def test_hasse_vector_has_no_constant():
    rng = random.Random(6)
    for _ in range(20):
        f = random_poly(F3, 2, 4, 4, rng, nonconstant=False) + 2
        h = hasse_vector(f, 3)
        assert () not in h.entries
        for e, c in h.entries.items():
            assert c == hasse_derivative(f, e).rename({("x", 1): ("z", 1), ("x", 2): ("z", 2)})
    assert hasse_vector(MPoly.const(F3, 1), 2).entries == {}


def test_span_and_column_counts_exhaustive():
    for k in range(1, 5):
        for t in range(1, 5):
            rng = random.Random(k * 10 + t)
            n = k
            polys = tuple(random_poly(F5, n, 2, 2, rng) for _ in range(k))
            P = build_pss_matrix(PolySystem(F5, polys, n), list(range(k)), t)
            assert len(P.bottom) == comb(k + t, t) - k - 1 == expected_span_rows(k, t)
    for n in range(1, 5):
        for t in range(1, 5):
            P = build_pss_matrix(PolySystem(F5, (xs(F5, n)[0],), n), [0], t)
            assert len(P.columns) == comb(n + t, t) - 1 == expected_columns(n, t)


def test_pss_entries_are_main_free():
    from algind.poly import VarClass
    x, y = xs(F3, 2)
    P = build_pss_matrix(PolySystem(F3, (x * x * y, x * y * y), 2), [0, 1], 3)
    for row in P.stacked().rows:
        for e in row:
            assert not e.variables_of(VarClass.MAIN)


def test_t1_degeneration():
    rng = random.Random(21)
    for i in range(100):
        F = [F2, F3, F5][i % 3]
        n = rng.randint(1, 3)
        m = rng.randint(1, 3)
        polys = tuple(random_poly(F, n, 3, 3, rng) for _ in range(m))
        sys = PolySystem(F, polys, n)
        assert pss_test(sys, t=1, mode=EXACT).certified == jacobian_certify(sys, mode=EXACT).certified


def dependent_system(F, rng, k, r, n):
    hs = [random_poly(F, n, 2, 2, rng) for _ in range(r)]
    polys = []
    for _ in range(k):
        A = random_poly(F, r, 2, 2, rng, family="z")
        polys.append(compose(A, hs))
    return PolySystem(F, tuple(polys), n)


def test_dependence_never_certifies():
    rng = random.Random(31)
    for i in range(30):
        F = [F2, F3][i % 2]
        k = rng.randint(2, 3)
        sys = dependent_system(F, rng, k, k - 1, 2)
        for t in (1, F.p, F.p ** 2):
            assert not pss_test(sys, t=t).certified


def test_certification_soundness():
    rng = random.Random(41)
    hits = 0
    for i in range(30):
        F = [F2, F3, F5][i % 3]
        polys = tuple(random_poly(F, 2, 3, 2, rng) for _ in range(2))
        sys = PolySystem(F, polys, 2)
        t = certify_min_t(sys, t_max=F.p)
        if t is not None:
            hits += 1
            assert isinstance(annihilator_search(polys, 4), NoneUpTo)
    assert hits > 10


def test_shift_of_constant_and_zero():
    assert truncated_shift(MPoly(F3), 2).is_zero()
    sys = PolySystem(F3, (MPoly(F3), MPoly.const(F3, 1)), 1)
    assert not pss_test(sys, [0], t=3).certified
    assert not pss_test(sys, [1], t=1).certified
