"""Finite fields F_p and F_{p^e} for small characteristic.

Elements are plain Python ints.  For e = 1 an element is a residue in
[0, p).  For e > 1 an element packs its coefficient vector in base p:
c_0 + c_1 x + ... + c_{e-1} x^{e-1} is stored as c_0 + c_1 p + ... .
The residues 0..p-1 are therefore the prime subfield in both cases, so a
polynomial over F_p can be evaluated at points of any extension without
conversion.

Extension arithmetic goes through exp/log/Zech tables built once per
field and cached.  Vectorised (numpy) versions of every operation are
provided for the dense linear algebra in :mod:`algind.linalg`.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field as dc_field

import numpy as np

MAX_PRIME = 2**31
MAX_ORDER = 2**20
EVALUATION_FIELD_SIZE = 2**16


class FieldError(ValueError):
    """Raised for invalid field parameters."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def first_primes(count: int, start: int = 2) -> list[int]:
    """The first `count` primes that are >= start, ascending."""
    out = []
    q = start
    while len(out) < count:
        if is_prime(q):
            out.append(q)
        q += 1
    return out


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- univariate polynomials over F_p as coefficient lists (low degree first) --

def _poly_rem(a, b, p):
    """Remainder of a modulo the monic polynomial b."""
    r = [c % p for c in a]
    db = len(b) - 1
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i]
        if c:
            off = i - db
            for j in range(db + 1):
                r[off + j] = (r[off + j] - c * b[j]) % p
    return r[:db]


def _poly_mulmod(a, b, m, p):
    prod = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                prod[i + j] += ca * cb
    return _poly_rem(prod, m, p)


def _poly_powmod(a, n, m, p):
    result = [1] + [0] * (len(m) - 2)
    base = _poly_rem(a, m, p)
    while n:
        if n & 1:
            result = _poly_mulmod(result, base, m, p)
        base = _poly_mulmod(base, base, m, p)
        n >>= 1
    return result


def is_irreducible(modulus, p: int) -> bool:
    """Exhaustive irreducibility test for a monic polynomial over F_p.

    Checks that no monic polynomial of degree 1..e//2 divides it.
    """
    e = len(modulus) - 1
    if e < 1 or modulus[-1] % p != 1:
        return False
    if e == 1:
        return True
    if modulus[0] % p == 0:
        return False
    for d in range(1, e // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not any(_poly_rem(modulus, list(low) + [1], p)):
                return False
    return True


@functools.cache
def find_irreducible(p: int, e: int) -> tuple[int, ...]:
    """First monic irreducible polynomial of degree e over F_p.

    Candidates are scanned in increasing packed order of their lower
    coefficients (c_0 + c_1 p + ...).
    """
    for packed in range(1, p**e):
        low = [(packed // p**i) % p for i in range(e)]
        cand = tuple(low + [1])
        if is_irreducible(cand, p):
            return cand
    raise FieldError(f"no irreducible polynomial of degree {e} over F_{p}")


def _unpack(a: int, p: int, e: int) -> list[int]:
    return [(a // p**i) % p for i in range(e)]


def _pack(digits, p: int) -> int:
    return sum(int(c) * p**i for i, c in enumerate(digits))


def _mul_fixed(digits: np.ndarray, c: list[int], m: tuple[int, ...], p: int) -> np.ndarray:
    """Multiply a batch of elements (rows of digits) by a fixed element c."""
    n, e = digits.shape
    prod = np.zeros((n, 2 * e - 1), dtype=np.int64)
    for j, cj in enumerate(c):
        if cj:
            prod[:, j:j + e] += cj * digits
    prod %= p
    for i in range(2 * e - 2, e - 1, -1):
        top = prod[:, i].copy()
        off = i - e
        for j in range(e):
            if m[j]:
                prod[:, off + j] = (prod[:, off + j] - top * m[j]) % p
        prod[:, i] = 0
    return prod[:, :e]


@dataclass(frozen=True)
class _Tables:
    generator: int
    exp: np.ndarray     # length 2(q-1): exp[i] = g^i
    log: np.ndarray     # log[a] for a != 0, log[0] = 0 (masked by callers)
    zech: np.ndarray    # zech[d] = log(1 + g^d), -1 when 1 + g^d = 0
    exp_list: list = dc_field(repr=False)
    log_list: list = dc_field(repr=False)
    zech_list: list = dc_field(repr=False)


@functools.cache
def _build_tables(p: int, e: int, modulus: tuple[int, ...]) -> _Tables:
    q = p**e
    order = q - 1
    factors = prime_factors(order)
    gen = None
    for cand in range(p, q):
        digits = _unpack(cand, p, e)
        if all(_poly_powmod(digits, order // r, modulus, p) != [1] + [0] * (e - 1) for r in factors):
            gen = cand
            break
    if gen is None:
        raise FieldError("no primitive element found")
    # exp table by doubling: block [N, 2N) = block [0, N) * g^N
    gdig = _unpack(gen, p, e)
    powers = np.zeros((1, e), dtype=np.int64)
    powers[0, 0] = 1
    while powers.shape[0] < order:
        n = powers.shape[0]
        gn = _poly_powmod(gdig, n, modulus, p)
        powers = np.vstack([powers, _mul_fixed(powers, gn, modulus, p)])
    powers = powers[:order]
    weights = np.array([p**i for i in range(e)], dtype=np.int64)
    exp = powers @ weights
    if len(np.unique(exp)) != order or 0 in exp:
        raise FieldError("generator table is not a permutation")
    log = np.zeros(q, dtype=np.int64)
    log[exp] = np.arange(order, dtype=np.int64)
    digit0 = exp % p
    plus_one = np.where(digit0 == p - 1, exp - (p - 1), exp + 1)
    zech = np.where(plus_one == 0, -1, log[plus_one])
    exp2 = np.concatenate([exp, exp])
    return _Tables(gen, exp2, log, zech, exp2.tolist(), log.tolist(), zech.tolist())


@dataclass(frozen=True)
class FieldSpec:
    """The field F_{p^e}; `modulus` lists the monic modulus low degree first."""

    p: int
    e: int = 1
    modulus: tuple[int, ...] | None = None

    def __post_init__(self):
        p, e = self.p, self.e
        if not isinstance(p, int) or not 2 <= p <= MAX_PRIME or not is_prime(p):
            raise FieldError(f"modulus p={p!r} is not a prime below 2^31")
        if not isinstance(e, int) or e < 1:
            raise FieldError(f"extension degree must be >= 1, got {e!r}")
        if e == 1:
            if self.modulus is not None and tuple(self.modulus) not in ((0, 1),):
                # a degree-1 modulus x - c gives the same field; keep it canonical
                object.__setattr__(self, "modulus", None)
            return
        if p**e > MAX_ORDER:
            raise FieldError(f"F_{p}^{e} is too large (limit {MAX_ORDER} elements)")
        if self.modulus is None:
            object.__setattr__(self, "modulus", find_irreducible(p, e))
        else:
            mod = tuple(int(c) % p for c in self.modulus)
            if len(mod) != e + 1 or not is_irreducible(mod, p):
                raise FieldError(f"{self.modulus} is not a monic irreducible of degree {e} over F_{p}")
            object.__setattr__(self, "modulus", mod)

    @classmethod
    def extension_at_least(cls, p: int, size: int) -> "FieldSpec":
        """Smallest F_{p^e} with at least `size` elements."""
        e = 1
        while p**e < size:
            e += 1
        return cls(p, e)

    @property
    def q(self) -> int:
        return self.p**self.e

    @property
    def _t(self) -> _Tables:
        return _build_tables(self.p, self.e, self.modulus)

    def __str__(self):
        return f"F_{self.p}" if self.e == 1 else f"F_{self.p}^{self.e}"

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, (list, tuple)):
            return FieldElement(self, self.from_digits(value))
        return FieldElement(self, self.reduce(value))

    # -- scalar arithmetic on packed ints --

    def reduce(self, n: int) -> int:
        """Image of the integer n in the prime subfield."""
        return int(n) % self.p

    def from_digits(self, digits) -> int:
        if len(digits) > self.e:
            raise FieldError("too many coefficients for this field")
        return _pack([int(c) % self.p for c in digits], self.p)

    def digits(self, a: int) -> list[int]:
        return _unpack(a, self.p, self.e)

    def check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise FieldError(f"{a} is not an element of {self}")
        return a

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if a == 0:
            return b
        if b == 0:
            return a
        t = self._t
        la = t.log_list[a]
        z = t.zech_list[(t.log_list[b] - la) % (self.q - 1)]
        return 0 if z < 0 else t.exp_list[la + z]

    def neg(self, a: int) -> int:
        if self.e == 1:
            return -a % self.p
        if self.p == 2 or a == 0:
            return a
        t = self._t
        return t.exp_list[t.log_list[a] + (self.q - 1) // 2]

    def sub(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a - b) % self.p
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        t = self._t
        return t.exp_list[t.log_list[a] + t.log_list[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in {self}")
        if self.e == 1:
            return pow(a, -1, self.p)
        t = self._t
        return t.exp_list[(self.q - 1 - t.log_list[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow(self.inv(a), -n)
        if n == 0:
            return 1
        if a == 0:
            return 0
        if self.e == 1:
            return pow(a, n, self.p)
        t = self._t
        return t.exp_list[(t.log_list[a] * n) % (self.q - 1)]

    def random_element(self, rng) -> int:
        return int(rng.integers(0, self.q))

    # -- vectorised arithmetic on int64 arrays --

    def vadd(self, a, b):
        if self.e == 1:
            return (a + b) % self.p
        if self.p == 2:
            return np.bitwise_xor(a, b)
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        t = self._t
        la, lb = t.log[a], t.log[b]
        z = t.zech[(lb - la) % (self.q - 1)]
        res = np.where(z < 0, 0, t.exp[la + np.maximum(z, 0)])
        return np.where(a == 0, b, np.where(b == 0, a, res))

    def vneg(self, a):
        if self.e == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        t = self._t
        a = np.asarray(a)
        return np.where(a == 0, 0, t.exp[t.log[a] + (self.q - 1) // 2])

    def vsub(self, a, b):
        if self.e == 1:
            return (a - b) % self.p
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        if self.e == 1:
            return (a * b) % self.p
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        t = self._t
        return np.where((a == 0) | (b == 0), 0, t.exp[t.log[a] + t.log[b]])

    def vpow(self, a, n: int):
        a = np.asarray(a, dtype=np.int64)
        if n == 0:
            return np.ones_like(a)
        if self.e == 1:
            result = np.ones_like(a)
            base = a % self.p
            while n:
                if n & 1:
                    result = result * base % self.p
                base = base * base % self.p
                n >>= 1
            return result
        t = self._t
        return np.where(a == 0, 0, t.exp[(t.log[a] * n) % (self.q - 1)])


@dataclass(frozen=True)
class FieldElement:
    """A field element bundled with its field, for operator-style use."""

    field: FieldSpec
    rep: int

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError("elements of different fields")
            return other.rep
        if isinstance(other, int):
            return self.field.reduce(other)
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.add(self.rep, b))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.rep, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._other(other), self.rep))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.rep))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.rep, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.rep, self._other(other)))

    def __pow__(self, n: int):
        return FieldElement(self.field, self.field.pow(self.rep, n))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.rep))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.rep == other.rep
        if isinstance(other, int):
            return self.rep == self.field.reduce(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.rep))

    def __bool__(self):
        return self.rep != 0

    def __int__(self):
        return self.rep

    def __repr__(self):
        if self.field.e == 1:
            return f"{self.rep}"
        return f"{self.field.digits(self.rep)}"
