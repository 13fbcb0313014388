"""Sparse multivariate polynomials over a :class:`FieldSpec`.

A variable is a pair ``(family, index)``.  The family fixes the variable
class:

* ``x``, ``y`` -- main variables (the polynomial ring being studied),
* ``z``, ``v`` -- generic-point variables (``z_i`` shadows ``x_i`` and
  ``v_j`` shadows ``y_j`` in truncated shifts),
* ``s``, ``a`` -- parameters (the condenser variable and the generator
  variable alpha).

A monomial is a tuple of ``(variable, exponent)`` pairs sorted by variable,
with no zero exponents.  The empty tuple is the monomial 1.
"""

from __future__ import annotations

import enum
import itertools
from typing import Iterable, Mapping

from .field import FieldElement, FieldSpec

NEG_INF = float("-inf")


class VarClass(enum.Enum):
    MAIN = "main"
    GENERIC = "generic"
    PARAM = "param"


FAMILY_CLASS = {
    "x": VarClass.MAIN,
    "y": VarClass.MAIN,
    "z": VarClass.GENERIC,
    "v": VarClass.GENERIC,
    "s": VarClass.PARAM,
    "a": VarClass.PARAM,
}

# main family -> generic-point family used when shifting
SHIFT_FAMILY = {"x": "z", "y": "v"}

Var = tuple
Monomial = tuple


class VarClassError(ValueError):
    """A variable of the wrong class was used."""


class MissingImageError(KeyError):
    """A substitution lacks an image for a variable that occurs."""


def var_class(var: Var) -> VarClass:
    try:
        return FAMILY_CLASS[var[0]]
    except KeyError:
        raise VarClassError(f"unknown variable family {var[0]!r}") from None


def var_name(var: Var) -> str:
    fam, idx = var
    if fam in ("s", "a") and idx == 0:
        return fam
    return f"{fam}{idx}"


def monomial(exps: Mapping[Var, int] | Iterable[tuple[Var, int]] = ()) -> Monomial:
    """Canonical monomial from a mapping or pairs; zero exponents dropped."""
    items = exps.items() if isinstance(exps, Mapping) else exps
    acc: dict = {}
    for v, e in items:
        if e < 0:
            raise ValueError("negative exponent")
        if e:
            acc[v] = acc.get(v, 0) + e
    return tuple(sorted(acc.items()))


def mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for v, e in m2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def mono_deg(m: Monomial, cls: VarClass | None = None) -> int:
    if cls is None:
        return sum(e for _, e in m)
    return sum(e for v, e in m if FAMILY_CLASS[v[0]] is cls)


def mono_split(m: Monomial, cls: VarClass) -> tuple[Monomial, Monomial]:
    """(part in class cls, remaining part)."""
    inside = tuple((v, e) for v, e in m if FAMILY_CLASS[v[0]] is cls)
    rest = tuple((v, e) for v, e in m if FAMILY_CLASS[v[0]] is not cls)
    return inside, rest


def mono_divides(a: Monomial, b: Monomial) -> bool:
    db = dict(b)
    return all(db.get(v, 0) >= e for v, e in a)


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    d = dict(b)
    for v, e in a:
        d[v] -= e
    return tuple(sorted((v, e) for v, e in d.items() if e))


def grlex_key(m: Monomial):
    """Sort key: higher total degree first, then lexicographic with x1 > x2."""
    return (-mono_deg(m), [(v, -e) for v, e in m])


def monomials(variables: list[Var], max_deg: int, min_deg: int = 0) -> list[Monomial]:
    """All monomials in `variables` with min_deg <= degree <= max_deg.

    Ordered by ascending degree, and within a degree lexicographically with
    earlier variables larger (x1^2, x1 x2, x2^2, ...).
    """
    variables = sorted(variables)
    out = []
    for d in range(min_deg, max_deg + 1):
        block = []
        for combo in itertools.combinations_with_replacement(range(len(variables)), d):
            exps: dict = {}
            for i in combo:
                exps[variables[i]] = exps.get(variables[i], 0) + 1
            block.append(monomial(exps))
        block.sort(key=grlex_key)
        out.extend(block)
    return out


def mono_str(m: Monomial) -> str:
    return "*".join(var_name(v) if e == 1 else f"{var_name(v)}^{e}" for v, e in m)


def binomial_lucas(a: int, b: int, p: int) -> int:
    """C(a, b) mod p via Lucas' theorem."""
    if b < 0 or b > a:
        return 0
    result = 1
    while a or b:
        ai, bi = a % p, b % p
        if bi > ai:
            return 0
        num = den = 1
        for i in range(bi):
            num = num * (ai - i) % p
            den = den * (i + 1) % p
        result = result * num * pow(den, -1, p) % p
        a //= p
        b //= p
    return result


class MPoly:
    """Immutable sparse polynomial: a dict from monomial to nonzero element."""

    __slots__ = ("field", "terms", "_hash")

    def __init__(self, field: FieldSpec, terms: Mapping[Monomial, int] | None = None):
        self.field = field
        self.terms = {m: c for m, c in (terms or {}).items() if c}
        self._hash = None

    # -- constructors --

    @classmethod
    def zero(cls, field: FieldSpec) -> "MPoly":
        return cls(field)

    @classmethod
    def const(cls, field: FieldSpec, c) -> "MPoly":
        return cls(field, {(): _coerce(field, c)})

    @classmethod
    def var(cls, field: FieldSpec, family: str, index: int = 0) -> "MPoly":
        if family not in FAMILY_CLASS:
            raise VarClassError(f"unknown variable family {family!r}")
        return cls(field, {(((family, index), 1),): 1})

    @classmethod
    def from_terms(cls, field: FieldSpec, pairs: Iterable[tuple[Mapping | Iterable, int]]) -> "MPoly":
        """Build from (exponents, integer coefficient) pairs, merging like terms."""
        acc: dict = {}
        for exps, c in pairs:
            m = monomial(exps)
            acc[m] = field.add(acc.get(m, 0), _coerce(field, c))
        return cls(field, acc)

    # -- basic queries --

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_constant(self) -> bool:
        return all(m == () for m in self.terms)

    def constant_term(self) -> int:
        return self.terms.get((), 0)

    def coeff(self, m: Monomial | Mapping) -> int:
        if isinstance(m, Mapping):
            m = monomial(m)
        return self.terms.get(m, 0)

    def degree(self, cls: VarClass | None = None):
        if not self.terms:
            return NEG_INF
        return max(mono_deg(m, cls) for m in self.terms)

    def degree_in(self, var: Var) -> int:
        return max((dict(m).get(var, 0) for m in self.terms), default=0)

    def variables(self) -> set:
        return {v for m in self.terms for v, _ in m}

    def variables_of(self, cls: VarClass) -> set:
        return {v for v in self.variables() if FAMILY_CLASS[v[0]] is cls}

    def is_multilinear(self) -> bool:
        return all(e <= 1 for m in self.terms for _, e in m)

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        return sorted(self.terms.items(), key=lambda mc: grlex_key(mc[0]))

    def leading_term(self) -> tuple[Monomial, int]:
        m = min(self.terms, key=grlex_key)
        return m, self.terms[m]

    # -- arithmetic --

    def _lift(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other.field != self.field:
                raise ValueError(f"polynomials over {self.field} and {other.field}")
            return other
        return MPoly.const(self.field, other)

    def __add__(self, other):
        if not isinstance(other, (MPoly, int, FieldElement)):
            return NotImplemented
        other = self._lift(other)
        f = self.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = f.add(out.get(m, 0), c)
        return MPoly(f, out)

    __radd__ = __add__

    def __neg__(self):
        f = self.field
        return MPoly(f, {m: f.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, (MPoly, int, FieldElement)):
            return NotImplemented
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c: int) -> "MPoly":
        f = self.field
        if c == 0:
            return MPoly(f)
        return MPoly(f, {m: f.mul(c, v) for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, FieldElement)):
            return self.scale(_coerce(self.field, other))
        if not isinstance(other, MPoly):
            return NotImplemented
        other = self._lift(other)
        return _mul(self, other, None, None)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = MPoly.const(self.field, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, FieldElement)):
            other = MPoly.const(self.field, other)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.field == other.field and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, frozenset(self.terms.items())))
        return self._hash

    def mul_truncated(self, other: "MPoly", t: int, cls: VarClass = VarClass.MAIN) -> "MPoly":
        """Product with every monomial of cls-degree > t dropped."""
        return _mul(self, self._lift(other), t, cls)

    def truncate(self, t: int, cls: VarClass = VarClass.MAIN) -> "MPoly":
        return MPoly(self.field, {m: c for m, c in self.terms.items() if mono_deg(m, cls) <= t})

    def homogeneous_part(self, d: int, cls: VarClass = VarClass.MAIN) -> "MPoly":
        return MPoly(self.field, {m: c for m, c in self.terms.items() if mono_deg(m, cls) == d})

    def divide_exact(self, other: "MPoly") -> "MPoly":
        """Quotient self / other, which must be exact."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        f = self.field
        lm, lc = other.leading_term()
        inv = f.inv(lc)
        if other.is_constant():
            return self.scale(inv)
        rem = dict(self.terms)
        quot = {}
        while rem:
            m = min(rem, key=grlex_key)
            if not mono_divides(lm, m):
                raise ArithmeticError("division is not exact")
            qm = mono_div(m, lm)
            qc = f.mul(rem[m], inv)
            quot[qm] = qc
            for bm, bc in other.terms.items():
                pm = mono_mul(qm, bm)
                v = f.sub(rem.get(pm, 0), f.mul(qc, bc))
                if v:
                    rem[pm] = v
                else:
                    rem.pop(pm, None)
        return MPoly(f, quot)

    # -- structural operations --

    def split(self, cls: VarClass = VarClass.MAIN) -> dict:
        """Map from cls-monomial to the coefficient polynomial in the other variables."""
        out: dict = {}
        for m, c in self.terms.items():
            inside, rest = mono_split(m, cls)
            out.setdefault(inside, {})[rest] = c
        return {m: MPoly(self.field, t) for m, t in out.items()}

    def rename(self, mapping: Mapping[Var, Var]) -> "MPoly":
        f = self.field
        out: dict = {}
        for m, c in self.terms.items():
            nm = monomial([(mapping.get(v, v), e) for v, e in m])
            out[nm] = f.add(out.get(nm, 0), c)
        return MPoly(f, out)

    def substitute(self, images: Mapping[Var, "MPoly"], require: Iterable[Var] = ()) -> "MPoly":
        """Replace variables by polynomials; other variables are kept."""
        return substitute_linear(self, images, require=require)

    def evaluate(self, point: Mapping[Var, int], field: FieldSpec | None = None) -> int:
        """Value at a point whose coordinates live in `field` (default: own field).

        Coefficients in the prime subfield embed into any extension as-is.
        """
        F = field or self.field
        if F.p != self.field.p or (self.field.e > 1 and F != self.field):
            raise ValueError(f"cannot evaluate a polynomial over {self.field} in {F}")
        total = 0
        powers: dict = {}
        for m, c in self.terms.items():
            val = c
            for v, e in m:
                key = (v, e)
                pw = powers.get(key)
                if pw is None:
                    if v not in point:
                        raise MissingImageError(f"no value for {var_name(v)}")
                    pw = powers[key] = F.pow(point[v], e)
                val = F.mul(val, pw)
                if not val:
                    break
            total = F.add(total, val)
        return total

    # -- display --

    def __str__(self):
        return poly_str(self)

    def __repr__(self):
        return f"MPoly({self.field}, {poly_str(self)!r})"


def _coerce(field: FieldSpec, c) -> int:
    if isinstance(c, FieldElement):
        if c.field != field:
            raise ValueError("element of a different field")
        return c.rep
    return field.reduce(c)


def _mul(a: MPoly, b: MPoly, t, cls) -> MPoly:
    f = a.field
    if not a.terms or not b.terms:
        return MPoly(f)
    if len(a.terms) < len(b.terms):
        a, b = b, a
    bt = list(b.terms.items())
    if t is not None:
        bdeg = [mono_deg(m, cls) for m, _ in bt]
    out: dict = {}
    fast = f.e == 1
    for m1, c1 in a.terms.items():
        if t is not None:
            d1 = mono_deg(m1, cls)
            if d1 > t:
                continue
        for i, (m2, c2) in enumerate(bt):
            if t is not None and d1 + bdeg[i] > t:
                continue
            m = mono_mul(m1, m2)
            if fast:
                out[m] = out.get(m, 0) + c1 * c2
            else:
                out[m] = f.add(out.get(m, 0), f.mul(c1, c2))
    if fast:
        p = f.p
        out = {m: c % p for m, c in out.items()}
    return MPoly(f, out)


def poly_str(f: MPoly) -> str:
    """Text form matching the input grammar: "x1^2*x2 + 2*x1"."""
    if f.is_zero():
        return "0"
    F = f.field
    parts = []
    for m, c in f.sorted_terms():
        cs = str(c) if F.e == 1 else "[" + ",".join(map(str, F.digits(c))) + "]"
        if not m:
            parts.append(cs)
        elif c == 1:
            parts.append(mono_str(m))
        else:
            parts.append(f"{cs}*{mono_str(m)}")
    return " + ".join(parts)


def hasse_derivative(f: MPoly, e: Mapping[Var, int] | Monomial) -> MPoly:
    """D^(e) f: each term c*x^a maps to c * prod C(a_i, e_i) * x^(a-e)."""
    ev = dict(e) if not isinstance(e, Mapping) else dict(e)
    for v, k in ev.items():
        if var_class(v) is not VarClass.MAIN:
            raise VarClassError(f"Hasse derivative in non-main variable {var_name(v)}")
        if k < 0:
            raise ValueError("negative derivative order")
    ev = {v: k for v, k in ev.items() if k}
    if not ev:
        return f
    F = f.field
    p = F.p
    out: dict = {}
    for m, c in f.terms.items():
        dm = dict(m)
        coef = 1
        for v, k in ev.items():
            a = dm.get(v, 0)
            coef = coef * binomial_lucas(a, k, p) % p
            if not coef:
                break
            dm[v] = a - k
        if not coef:
            continue
        nm = tuple(sorted((v, x) for v, x in dm.items() if x))
        out[nm] = F.add(out.get(nm, 0), F.mul(coef, c))
    return MPoly(F, out)


def shift_map(variables: Iterable[Var]) -> dict:
    """main variable -> its generic-point shadow (x_i -> z_i, y_j -> v_j)."""
    out = {}
    for v in variables:
        if var_class(v) is not VarClass.MAIN:
            continue
        out[v] = (SHIFT_FAMILY[v[0]], v[1])
    return out


def truncated_shift(f: MPoly, t: int, rename: Mapping[Var, Var] | None = None) -> MPoly:
    """deg_{<=t}(f(x + z) - f(z)) where only main variables are shifted.

    Non-main variables already present (parameters such as s, alpha) are
    carried along as coefficients.  `rename` maps each main variable to its
    shift variable; the default shadows x_i -> z_i and y_j -> v_j.
    """
    if t < 1:
        raise ValueError("truncation order t must be >= 1")
    F = f.field
    p = F.p
    mains = f.variables_of(VarClass.MAIN)
    shadow = dict(rename) if rename is not None else shift_map(mains)
    clash = set(shadow.values()) & (f.variables() - mains)
    if clash:
        raise VarClassError("shift variables already occur in the polynomial")
    out: dict = {}
    for m, c in f.terms.items():
        main, rest = mono_split(m, VarClass.MAIN)
        if not main:
            continue
        # choose j_i <= a_i per main variable with 1 <= sum j <= t
        choices = []
        for v, a in main:
            opts = []
            for j in range(min(a, t) + 1):
                b = binomial_lucas(a, j, p)
                if b:
                    opts.append((j, b))
            choices.append((v, a, opts))
        _expand_shift(choices, 0, t, [], 1, c, rest, shadow, F, out)
    return MPoly(F, out)


def _expand_shift(choices, i, budget, picked, coef, c, rest, shadow, F, out):
    if i == len(choices):
        deg = sum(j for _, _, j in picked)
        if deg == 0:
            return
        exps = list(rest)
        for v, a, j in picked:
            if j:
                exps.append((v, j))
            if a - j:
                exps.append((shadow[v], a - j))
        m = monomial(exps)
        out[m] = F.add(out.get(m, 0), F.mul(F.reduce(coef), c))
        return
    v, a, opts = choices[i]
    for j, b in opts:
        if j > budget:
            break
        picked.append((v, a, j))
        _expand_shift(choices, i + 1, budget - j, picked, coef * b % F.p, c, rest, shadow, F, out)
        picked.pop()


def substitute_linear(f: MPoly, images: Mapping[Var, MPoly], require: Iterable[Var] = ()) -> MPoly:
    """Compose f with the substitution var -> image.

    Every variable in `require` that occurs in f must have an image (by
    default: every main variable of f).
    """
    F = f.field
    needed = set(require) if require else f.variables_of(VarClass.MAIN)
    missing = sorted(v for v in needed if v not in images and v in f.variables())
    if missing:
        raise MissingImageError(f"no image for {', '.join(map(var_name, missing))}")
    powers: dict = {}

    def power(v, e):
        key = (v, e)
        if key not in powers:
            if e == 1:
                powers[key] = images[v]
            else:
                half = power(v, e // 2)
                sq = half * half
                powers[key] = sq * images[v] if e % 2 else sq
        return powers[key]

    acc: dict = {}
    one = MPoly.const(F, 1)
    for m, c in f.terms.items():
        kept = []
        term = one
        for v, e in m:
            if v in images:
                term = term * power(v, e)
            else:
                kept.append((v, e))
        if kept:
            term = term * MPoly(F, {tuple(kept): 1})
        for tm, tc in term.terms.items():
            acc[tm] = F.add(acc.get(tm, 0), F.mul(c, tc))
    return MPoly(F, acc)
