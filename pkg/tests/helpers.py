"""Random instance builders shared by the test modules."""

from algind.condenser import WeightAssignment, is_isolating
from algind.faithful import Generator, build_map
from algind.poly import MPoly, monomial


def random_poly(F, n, max_deg, n_terms, rng, family="x", nonconstant=True):
    """Up to n_terms random terms of degree <= max_deg in family_1..family_n."""
    while True:
        terms = {}
        for _ in range(n_terms):
            d = rng.randint(1 if nonconstant else 0, max_deg)
            exps = {}
            for _ in range(d):
                v = (family, rng.randint(1, n))
                exps[v] = exps.get(v, 0) + 1
            c = rng.randrange(1, F.p)
            m = monomial(exps)
            terms[m] = (terms.get(m, 0) + c) % F.p
        f = MPoly(F, terms)
        if not nonconstant or f.variables():
            return f


def random_isolating(n, t, rng, top=40):
    while True:
        w = tuple(rng.randint(0, top) for _ in range(n))
        wa = WeightAssignment(n, t, None, w)
        if is_isolating(wa):
            return wa.verified()


def random_map(F, n, k, t, rng):
    w = random_isolating(n, t, rng, top=12)
    G = Generator.monomial(F, [rng.randint(0, 6) for _ in range(n)])
    return build_map(w, G, k, F)
