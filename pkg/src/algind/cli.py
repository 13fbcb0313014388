"""Command-line frontend: polynomial parsing and key=value reports.

Grammar (whitespace ignored):

    poly   := term (('+' | '-') term)*
    term   := coeff ('*' factor)* | factor ('*' factor)*
    factor := 'x' index ('^' exponent)?
    coeff  := decimal integer

A leading sign is accepted.  With ``--setting disjoint-product`` each
polynomial is given as its factors separated by ';', e.g.
"x1 + 1; x2*x3 + 2".  Over an extension field a coefficient may also
be written as a digit list "[c0,c1,...]" (lowest power first), which is how
such coefficients are printed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from .criteria import PolySystem, algebraic_rank, certify_min_t, jacobian_certify, pss_test
from .faithful import Depth4Term, DisjointProduct, Sparse, candidate_maps, verify_faithful
from .field import FieldError, FieldSpec
from .matrix import EXACT, ConfigurationError, Randomized
from .oracle import Annihilator, SizeLimitError, annihilator_search
from .pit import (Composition, CompositionBlackbox, NonzeroAt, blackbox_pit,
                  hitting_set_for_composition)
from .pit import SizeLimitError as GridSizeError
from .poly import MPoly, monomial

DEFAULT_SEED = 0


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int, text: str):
        super().__init__(f"{msg} at position {pos}: {text!r}")
        self.pos = pos


class _Parser:
    def __init__(self, text: str, field: FieldSpec, n: int | None, family: str):
        self.text = text
        self.F = field
        self.n = n
        self.family = family
        self.i = 0

    def error(self, msg):
        raise ParseError(msg, self.i, self.text)

    def skip(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.i] if self.i < len(self.text) else ""

    def number(self) -> int:
        self.skip()
        j = self.i
        while self.i < len(self.text) and self.text[self.i].isdigit():
            self.i += 1
        if j == self.i:
            self.error("expected a number")
        return int(self.text[j:self.i])

    def coeff(self) -> int:
        if self.peek() == "[":
            if self.F.e == 1:
                self.error("digit-list coefficients need an extension field")
            self.i += 1
            digits = [self.number()]
            while self.peek() == ",":
                self.i += 1
                digits.append(self.number())
            if self.peek() != "]":
                self.error("expected ']'")
            self.i += 1
            if len(digits) > self.F.e or any(d >= self.F.p for d in digits):
                self.error(f"digit list does not describe an element of {self.F}")
            return self.F.from_digits(digits)
        return self.F.reduce(self.number())

    def factor(self):
        if self.peek() != self.family:
            self.error(f"expected '{self.family}'")
        self.i += 1
        if not self.peek().isdigit():
            self.error("expected a variable index")
        start = self.i
        idx = self.number()
        if idx < 1 or (self.n is not None and idx > self.n):
            self.i = start
            bound = f"1..{self.n}" if self.n is not None else ">= 1"
            self.error(f"variable index {idx} outside {bound}")
        exp = 1
        if self.peek() == "^":
            self.i += 1
            exp = self.number()
        return (self.family, idx), exp

    def term(self):
        c = 1
        exps: dict = {}
        if self.peek().isdigit() or self.peek() == "[":
            c = self.coeff()
        else:
            v, e = self.factor()
            exps[v] = exps.get(v, 0) + e
        while self.peek() == "*":
            self.i += 1
            v, e = self.factor()
            exps[v] = exps.get(v, 0) + e
        return c, monomial({v: e for v, e in exps.items() if e})

    def poly(self) -> MPoly:
        F = self.F
        terms: dict = {}
        sign = 1
        if self.peek() in "+-" and self.peek():
            sign = -1 if self.peek() == "-" else 1
            self.i += 1
        while True:
            if not self.peek():
                self.error("expected a term")
            c, m = self.term()
            c = F.neg(c) if sign < 0 else c
            terms[m] = F.add(terms.get(m, 0), c)
            nxt = self.peek()
            if not nxt:
                break
            if nxt not in "+-":
                self.error(f"unexpected {nxt!r}")
            sign = -1 if nxt == "-" else 1
            self.i += 1
        return MPoly(F, terms)


def parse_poly(text: str, field: FieldSpec, n: int | None = None, family: str = "x") -> MPoly:
    """Parse one polynomial; indices must lie in 1..n when n is given."""
    return _Parser(text, field, n, family).poly()


def read_poly_file(path: str) -> list[str]:
    out = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                out.append(line)
    return out


# -- reports --

def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    if isinstance(v, (list, tuple)):
        return ",".join(_fmt(x) for x in v) if v else "-"
    s = str(v)
    return json.dumps(s) if (" " in s or not s) else s


def emit(record: dict, as_json: bool, out) -> None:
    if as_json:
        out.write(json.dumps(record, sort_keys=False, default=str) + "\n")
    else:
        out.write(" ".join(f"{k}={_fmt(v)}" for k, v in record.items()) + "\n")


def _mode(args):
    if args.mode == "exact":
        return EXACT
    if args.mode == "randomized":
        return Randomized(trials=args.trials, seed=args.seed)
    return "auto"


def _system(args) -> PolySystem:
    texts = list(args.poly or [])
    if args.file:
        texts += read_poly_file(args.file)
    if not texts:
        raise UsageError("at least one polynomial is required (--poly or --file)")
    F = FieldSpec(args.p, args.ext_degree)
    if args.setting == "disjoint-product":
        args.terms = tuple(Depth4Term(tuple(parse_poly(part, F, args.n) for part in t.split(";")))
                           for t in texts)
        polys = [T.poly for T in args.terms]
    else:
        polys = [parse_poly(t, F, args.n) for t in texts]
    n = args.n or max((v[1] for f in polys for v in f.variables()), default=1)
    return PolySystem(F, tuple(polys), n)


class UsageError(ValueError):
    pass


def cmd_test(args, sys_):
    t = args.t
    if args.jacobian:
        res = jacobian_certify(sys_, _mode(args))
    else:
        res = pss_test(sys_, None, t, _mode(args))
    return {"verdict": type(res).__name__, "t": res.t, "k": sys_.m, "n": sys_.n}


def cmd_min_t(args, sys_):
    t = certify_min_t(sys_, None, args.t_max or sys_.field.p ** 2, _mode(args))
    return {"verdict": "CertifiedIndependent" if t else "Inconclusive", "t": t}


def cmd_rank(args, sys_):
    r = algebraic_rank(sys_, args.t_max, args.degree, _mode(args))
    return {"rank": r.rank, "subset": [i + 1 for i in r.subset], "oracle_bounded": r.oracle_bounded,
            "certifying_t": r.certifying_t, "witnesses": [str(w.annihilator) for w in r.witnesses]}


def cmd_annihilator(args, sys_):
    res = annihilator_search(sys_, args.degree, seed=args.seed)
    if isinstance(res, Annihilator):
        return {"verdict": "Annihilator", "A": str(res), "degree": res.degree}
    return {"verdict": "NoneUpTo", "degree": res.degree}


def _setting(args, sys_):
    if args.setting == "sparse":
        return Sparse()
    return DisjointProduct(tuple((T,) for T in args.terms))


def cmd_faithful(args, sys_):
    k = args.k or algebraic_rank(sys_, args.t_max, args.degree).rank
    if k < 1:
        raise UsageError("the system has rank 0; no map is needed")
    cands = candidate_maps(sys_, k, args.t, _setting(args, sys_))
    with ThreadPoolExecutor(max_workers=args.threads) as pool:
        verdicts = list(pool.map(lambda phi: verify_faithful(phi, sys_, args.degree), cands))
    for i, (phi, v) in enumerate(zip(cands, verdicts)):
        if v.faithful:
            return {"verdict": "Faithful", "candidate": i, "candidates": len(cands), "k": k,
                    "weights": phi.weights.w, "generator": phi.generator.exponents,
                    "images": [str(img) for img in phi.images], "oracle_bounded": v.bounded}
    return {"verdict": "NoneVerified", "candidates": len(cands), "k": k}


def _hitting_set(args, sys_):
    k = args.k or algebraic_rank(sys_, args.t_max, args.degree).rank
    return hitting_set_for_composition(sys_, max(k, 1), args.t, args.comp_degree,
                                       _setting(args, sys_), args.weights, args.generators)


def cmd_hitset(args, sys_):
    hs = _hitting_set(args, sys_)
    rec = {"size": len(hs), "candidates": len(hs.blocks), "side": hs.side, "dim": hs.dim,
           "field": str(hs.field)}
    if args.emit:
        pts = []
        for j, pt in enumerate(hs):
            if j >= args.emit:
                break
            pts.append("(" + ",".join(str(pt[("x", i + 1)]) for i in range(sys_.n)) + ")")
        rec["points"] = pts
    return rec


def cmd_pit(args, sys_):
    if not args.comp:
        raise UsageError("pit needs --comp")
    C = parse_poly(args.comp, sys_.field, sys_.m, family="z")
    if args.comp_degree is None:
        args.comp_degree = max(C.degree(), 0)
    hs = _hitting_set(args, sys_)
    res = blackbox_pit(CompositionBlackbox(Composition(sys_.m, C), sys_), hs)
    if isinstance(res, NonzeroAt):
        pt = [res.point[("x", i + 1)] for i in range(sys_.n)]
        return {"verdict": "NonzeroAt", "point": pt, "value": res.value, "candidate": res.candidate,
                "size": len(hs)}
    return {"verdict": "Zero", "points": res.points_checked, "size": len(hs)}


COMMANDS = {
    "test": cmd_test, "min-t": cmd_min_t, "rank": cmd_rank, "annihilator": cmd_annihilator,
    "faithful": cmd_faithful, "hitset": cmd_hitset, "pit": cmd_pit,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, required=True, help="field characteristic")
    common.add_argument("--ext-degree", type=int, default=1, help="extension degree e of F_{p^e}")
    common.add_argument("--n", type=int, default=None, help="number of variables")
    common.add_argument("--poly", action="append", help="polynomial in x1..xn (repeatable)")
    common.add_argument("--file", help="file with one polynomial per line, '#' comments")
    common.add_argument("--t", type=int, default=1, help="truncation order")
    common.add_argument("--t-max", type=int, default=None, help="largest t tried")
    common.add_argument("--k", type=int, default=None, help="target rank")
    common.add_argument("--degree", type=int, default=4, help="annihilator degree bound")
    common.add_argument("--comp-degree", type=int, default=None, help="composition degree bound")
    common.add_argument("--comp", help="composition in z1..zm (pit)")
    common.add_argument("--setting", choices=["sparse", "disjoint-product"], default="sparse")
    common.add_argument("--weights", type=int, default=3, help="isolating weight candidates")
    common.add_argument("--generators", type=int, default=3, help="generator candidates")
    common.add_argument("--emit", type=int, default=0, help="print the first N hitting-set points")
    common.add_argument("--mode", choices=["auto", "exact", "randomized"], default="auto")
    common.add_argument("--trials", type=int, default=3)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--jacobian", action="store_true", help="test: use the Jacobian criterion")
    common.add_argument("--json", action="store_true", help="one JSON object instead of key=value")
    common.add_argument("--timing", action="store_true", help="append elapsed seconds")
    parser = argparse.ArgumentParser(prog="algind", description="Algebraic independence tools.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1 or args.trials < 1:
        parser.error("--threads and --trials must be >= 1")
    if args.command == "hitset" and args.comp_degree is None:
        parser.error("hitset needs --comp-degree")
    start = time.perf_counter()
    try:
        sys_ = _system(args)
        rec = COMMANDS[args.command](args, sys_)
    except UsageError as exc:
        parser.error(str(exc))
    except (SizeLimitError, GridSizeError, ConfigurationError, FieldError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    rec.update({"mode": args.mode, "seed": args.seed, "trials": args.trials})
    if args.timing:
        rec["seconds"] = round(time.perf_counter() - start, 3)
    emit(rec, args.json, out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
