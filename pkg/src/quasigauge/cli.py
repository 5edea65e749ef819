"""Command-line front end and a small expression language.

Grammar (products associate to the left unless parenthesized):

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | scalar | symbol | ('d' | 'inv') '(' expr ')' | '(' expr ')'
    scalar := rational ['i'] | 'i'
    symbol := u | v | w | e[bits] | tau[k] | x[k] | dx[k]
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import cochain as cc
from . import forms as fm
from . import fuzzy as fz
from . import gauge as gg
from . import moduli as md
from .core import (
    GENERATOR_NAMES,
    AlgebraElement,
    DimensionError,
    GroupVector,
    bitstring,
    format_element,
    format_scalar,
    is_exact,
    scalar,
)
from .quasialg import (
    SingularGaugeElement,
    TwistedAlgebra,
    bullet,
    compare_with_printed,
    invert,
    star_expand,
    star_mismatches,
)


class ParseError(ValueError):
    def __init__(self, message, pos):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class EvalError(ValueError):
    pass


# ---------------------------------------------------------------- AST


@dataclass(frozen=True)
class Num:
    value: object


@dataclass(frozen=True)
class Sym:
    name: str
    index: str | None = None


@dataclass(frozen=True)
class Call:
    fn: str
    arg: object


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Group:
    """Explicit parentheses, kept so that printing reproduces the user's bracketing."""

    inner: object


def to_text(node) -> str:
    if isinstance(node, Num):
        v = node.value
        if isinstance(v, Fraction):
            return str(v)
        return "(" + format_scalar(v).replace(" i", "i") + ")" if v.re else format_scalar(v).replace(" i", "i")
    if isinstance(node, Sym):
        return node.name if node.index is None else f"{node.name}[{node.index}]"
    if isinstance(node, Call):
        return f"{node.fn}({to_text(node.arg)})"
    if isinstance(node, Neg):
        return "-" + to_text(node.arg)
    if isinstance(node, Group):
        return "(" + to_text(node.inner) + ")"
    if isinstance(node, BinOp):
        sep = f" {node.op} " if node.op in "+-" else node.op
        return to_text(node.left) + sep + to_text(node.right)
    raise TypeError(node)


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)(?P<imag>i(?![A-Za-z_\[]))?|(?P<name>[A-Za-z_]+)(?:\[(?P<index>[^\]]*)\])?|(?P<op>[-+*/()]))"
)


def tokenize(text: str) -> list:
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}", pos)
        start = m.start() + (len(m.group(0)) - len(m.group(0).lstrip()))
        if m.group("num") is not None:
            out.append(("num", (m.group("num"), bool(m.group("imag"))), start))
        elif m.group("name") is not None:
            out.append(("name", (m.group("name"), m.group("index")), start))
        else:
            out.append(("op", m.group("op"), start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, op):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", pos)

    def parse(self):
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        kind, val, pos = self.take()
        if kind == "op" and val == "-":
            return Neg(self.factor())
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect(")")
            return Group(inner)
        if kind == "num":
            text, imag = val
            return Num(scalar(0, Fraction(text)) if imag else Fraction(text))
        if kind == "name":
            name, index = val
            if name in ("d", "inv") and index is None and self.peek()[:2] == ("op", "("):
                self.take()
                arg = self.expr()
                self.expect(")")
                return Call(name, arg)
            if name == "i" and index is None:
                return Num(scalar(0, 1))
            return Sym(name, index)
        raise ParseError("expected a scalar, symbol or '('" if kind != "end" else "unexpected end of input", pos)


def parse(text: str):
    return Parser(text).parse()


# ---------------------------------------------------------------- contexts


@dataclass
class Context:
    name: str
    kind: str
    n: int
    alg: TwistedAlgebra | None = None
    cochain: fz.DiffCochain | None = None
    K: int | None = None


_FUZZY = re.compile(r"^fuzzy-(\d+)-(\d+)((?:-[a-z]+[^-]*)*)$")


def make_context(name: str) -> Context:
    if name in ("octonion", "octonion-variant"):
        return Context(name, "group", 3, TwistedAlgebra(cc.octonion_cochain(name.endswith("variant"))))
    if name == "quaternion":
        return Context(name, "group", 2, TwistedAlgebra(cc.quaternion_cochain()))
    m = re.match(r"^(clifford|classical)-(\d+)$", name)
    if m:
        n = int(m.group(2))
        F = cc.clifford_cochain(n) if m.group(1) == "clifford" else cc.trivial_cochain(n)
        return Context(name, "group", n, TwistedAlgebra(F))
    m = _FUZZY.match(name)
    if m:
        n, K = int(m.group(1)), int(m.group(2))
        mm, lam, family = 2, Fraction(1), "negative-power"
        for opt in filter(None, m.group(3).split("-")):
            if opt in ("gaussian", "exponential"):
                family = opt
            elif opt[0] == "m" and opt[1:].isdigit():
                mm = int(opt[1:])
            elif opt[0] == "l":
                lam = Fraction(opt[1:])
            else:
                raise ValueError(f"unknown fuzzy option {opt!r}")
        F = fz.DiffCochain(family, n, lam, mm if family == "negative-power" else None)
        return Context(name, "fuzzy", n, cochain=F, K=K)
    raise ValueError(f"unknown context {name!r}")


def _resolve(sym: Sym, ctx: Context):
    n = ctx.n
    if ctx.kind == "group":
        if sym.index is None and sym.name in GENERATOR_NAMES[:n] and n <= 3:
            return AlgebraElement.basis(1 << GENERATOR_NAMES.index(sym.name), n)
        if sym.name == "e" and sym.index is not None:
            if len(sym.index) != n:
                raise DimensionError(f"e[{sym.index}] needs {n} bits")
            return AlgebraElement.basis(GroupVector(sym.index).mask, n)
        if sym.name == "tau" and sym.index is not None:
            return fm.tau(int(sym.index), n)
    else:
        if sym.name in ("x", "dx") and sym.index is not None:
            k = int(sym.index)
            if not 1 <= k <= n:
                raise DimensionError(f"{sym.name}[{k}] out of range for n={n}")
            if sym.name == "x":
                return fz.Jet.variable(k, n, ctx.K)
            return fz.FuzzyForm.dx(k, n, ctx.K)
    label = sym.name if sym.index is None else f"{sym.name}[{sym.index}]"
    raise EvalError(f"unknown symbol {label!r} in context {ctx.name}")


def _is_scalar(x):
    return is_exact(x)


def _promote(x, ctx: Context):
    if not _is_scalar(x):
        return x
    if ctx.kind == "group":
        return AlgebraElement.constant(x, ctx.n)
    return fz.Jet.constant(x, ctx.n, ctx.K)


def _add(x, y, ctx, sign=1):
    if _is_scalar(x) and _is_scalar(y):
        return x + y if sign > 0 else x - y
    x, y = _promote(x, ctx), _promote(y, ctx)
    if ctx.kind == "group" and (isinstance(x, fm.DifferentialForm) or isinstance(y, fm.DifferentialForm)):
        x, y = fm.as_form(x), fm.as_form(y)
    if ctx.kind == "fuzzy" and (isinstance(x, fz.FuzzyForm) or isinstance(y, fz.FuzzyForm)):
        x, y = fz.as_fuzzy(x), fz.as_fuzzy(y)
    return x + y if sign > 0 else x - y


def _mul(x, y, ctx):
    if _is_scalar(x) and _is_scalar(y):
        return x * y
    if _is_scalar(x):
        return y * x
    if _is_scalar(y):
        return x * y
    if ctx.kind == "group":
        if isinstance(x, AlgebraElement) and isinstance(y, AlgebraElement):
            return bullet(x, y, ctx.alg)
        return fm.bullet_wedge(x, y, ctx.alg)
    return fz.bullet_jet(x, y, ctx.cochain)


def evaluate(node, ctx: Context):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Sym):
        return _resolve(node, ctx)
    if isinstance(node, Group):
        return evaluate(node.inner, ctx)
    if isinstance(node, Neg):
        return -evaluate(node.arg, ctx)
    if isinstance(node, Call):
        x = evaluate(node.arg, ctx)
        if node.fn == "d":
            if _is_scalar(x):
                x = _promote(x, ctx)
            return fm.d(x) if ctx.kind == "group" else fz.d_fuzzy(x)
        if _is_scalar(x):
            return Fraction(1) / x
        if ctx.kind == "group":
            if not isinstance(x, AlgebraElement):
                raise EvalError("inv() applies to functions, not forms")
            return invert(x)
        if not isinstance(x, fz.Jet):
            raise EvalError("inv() applies to functions, not forms")
        return x.inverse(ctx.K)
    if isinstance(node, BinOp):
        x, y = evaluate(node.left, ctx), evaluate(node.right, ctx)
        if node.op == "+":
            return _add(x, y, ctx)
        if node.op == "-":
            return _add(x, y, ctx, -1)
        if node.op == "*":
            return _mul(x, y, ctx)
        if not _is_scalar(y):
            raise EvalError("division is only by scalars; use inv() for functions")
        return x / y if not _is_scalar(x) else x / y
    raise TypeError(node)


def evaluate_text(text: str, context: str | Context):
    ctx = make_context(context) if isinstance(context, str) else context
    return evaluate(parse(text), ctx)


def format_value(x) -> str:
    if _is_scalar(x):
        return format_scalar(x)
    if isinstance(x, AlgebraElement):
        return format_element(x)
    if isinstance(x, fm.DifferentialForm):
        return fm.format_form(x)
    return str(x)


def value_json(x):
    if _is_scalar(x):
        return {"schema": "quasigauge.scalar/1", "value": format_scalar(x)}
    out = x.to_json()
    if isinstance(x, AlgebraElement):
        out = {"schema": "quasigauge.element/1", **out} if "schema" not in out else out
    return out


# ---------------------------------------------------------------- subcommands


def _emit(args, text, data):
    if getattr(args, "json", False):
        print(json.dumps(data, indent=2))
    else:
        print(text)


def cmd_table(args):
    ctx = make_context(args.algebra)
    N = 1 << ctx.n
    names = [format_element(AlgebraElement.basis(a, ctx.n)) for a in range(N)]
    rows = []
    for a in range(N):
        rows.append([format_element(bullet(AlgebraElement.basis(a, ctx.n), AlgebraElement.basis(b, ctx.n), ctx.alg)) for b in range(N)])
    width = max(len(s) for s in names + [c for r in rows for c in r]) + 1
    lines = [" " * width + "|" + "".join(s.rjust(width) for s in names)]
    lines.append("-" * len(lines[0]))
    for a in range(N):
        lines.append(names[a].rjust(width) + "|" + "".join(s.rjust(width) for s in rows[a]))
    _emit(args, "\n".join(lines), {
        "schema": "quasigauge.table/1", "algebra": args.algebra,
        "basis": names, "products": rows,
    })
    return 0


def cmd_phi(args):
    ctx = make_context(args.algebra)
    n = ctx.n
    a, b, c = (GroupVector(s).mask for s in (args.a, args.b, args.c))
    for s in (args.a, args.b, args.c):
        if len(s) != n:
            raise DimensionError(f"{s!r} needs {n} bits")
    value = ctx.alg.phi.value(a, b, c)
    status = 0
    data = {"schema": "quasigauge.phi/1", "algebra": args.algebra, "a": args.a, "b": args.b, "c": args.c,
            "phi": format_scalar(value)}
    text = format_scalar(value)
    if args.verify_cocycle:
        ok = cc.is_cocycle(ctx.alg.phi)
        data["cocycle"] = ok
        text += f"\ncocycle identity: {'holds' if ok else 'FAILS'}"
        status = 0 if ok else 1
    _emit(args, text, data)
    return status


def _expected_position_form(name: str, n: int):
    if name.startswith("octonion"):
        return cc.octonion_position_form()
    if name.startswith("clifford") or name == "quaternion":
        return cc.clifford_position_form(n)
    return None


def cmd_fourier(args):
    ctx = make_context(args.algebra)
    F = ctx.alg.F
    P = cc.fourier_cochain(F)
    N = 1 << ctx.n
    fitted = cc.fit_exponent_form(P.normalized, ctx.n)
    relab = cc.fourier_relabellings(F)
    expected = _expected_position_form(args.algebra, ctx.n)
    lines = [f"F(y,z) = {N} (-1)^[{cc.describe_exponent(fitted, 'yz')}]"]
    data = {"schema": "quasigauge.fourier-cochain/1", "algebra": args.algebra, "factor": N,
            "exponent": fitted.to_json(), "position": P.to_json(),
            "self_dual_under": [{"perm": [p + 1 for p in perm], "swap": swap} for perm, swap in relab]}
    status = 0
    if expected is not None:
        bad = cc.fourier_mismatches(F, expected)
        data["expected_exponent"] = expected.to_json()
        data["mismatched_pairs"] = [[bitstring(y, ctx.n), bitstring(z, ctx.n)] for y, z in bad]
        lines.append(f"expected {N} (-1)^[{cc.describe_exponent(expected, 'yz')}]: "
                     + ("matches on all pairs" if not bad else f"differs on {len(bad)} of {N * N} pairs"))
        status = 1 if bad else 0
    if relab:
        for perm, swap in relab:
            lines.append("same form as F after relabelling directions ("
                         + ", ".join(f"{i + 1}->{p + 1}" for i, p in enumerate(perm)) + ")"
                         + (" and swapping arguments" if swap else ""))
    else:
        lines.append("no relabelling makes the transform equal to F")
    _emit(args, "\n".join(lines), data)
    return status


def _printed_name(algebra: str):
    if algebra.startswith("octonion"):
        return "octonion"
    if algebra == "clifford-3":
        return "clifford-3"
    return None


def cmd_star(args):
    ctx = make_context(args.algebra)
    op = star_expand(cc.fourier_cochain(ctx.alg.F))
    bad = star_mismatches(op, ctx.alg)
    lines = [str(op), f"reproduces the bullet product on all basis pairs: {'yes' if not bad else 'NO'}"]
    data = {"schema": "quasigauge.star-expand/1", "algebra": args.algebra, "operator": op.to_json(),
            "reproduces_bullet": not bad}
    status = 0 if not bad else 1
    printed = _printed_name(args.algebra)
    if printed:
        diff = compare_with_printed(op, printed)
        lines.append(f"diff against the printed {printed} table:")
        lines.append(diff.report())
        data["diff"] = diff.to_json()
        if diff.unexplained():
            status = 1
    _emit(args, "\n".join(lines), data)
    return status


def _load_connection(args, ctx):
    if args.connection:
        with open(args.connection) as fh:
            conn = gg.Connection.from_json(json.load(fh))
    elif args.alpha:
        conn = gg.Connection(fm.as_form(evaluate(parse(args.alpha), ctx), ctx.n))
    else:
        raise SystemExit("one of --connection or --alpha is required")
    if conn.n != ctx.n:
        raise DimensionError(f"connection has n={conn.n}, algebra has n={ctx.n}")
    return conn


def cmd_curvature(args):
    ctx = make_context(args.algebra)
    conn = _load_connection(args, ctx)
    plain = gg.curvature(conn)
    data = {"schema": "quasigauge.curvature/1", "algebra": args.algebra, "curvature": plain.to_json()}
    lines = [f"F(alpha) = {fm.format_form(plain)}"]
    status = 0
    if args.twisted:
        tw = gg.curvature_twisted(conn, ctx.alg)
        same = tw == plain
        data["twisted"] = tw.to_json()
        data["equal"] = same
        lines.append(f"twisted F(alpha) = {fm.format_form(tw)}")
        lines.append(f"equal to the untwisted curvature: {'yes' if same else 'NO'}")
        status = 0 if same else 1
    _emit(args, "\n".join(lines), data)
    return status


def cmd_gauge(args):
    ctx = make_context(args.algebra)
    conn = _load_connection(args, ctx)
    gamma = evaluate(parse(args.gamma), ctx)
    gamma = _promote(gamma, ctx)
    if not isinstance(gamma, AlgebraElement):
        raise EvalError("gamma must be a function")
    plain = gg.gauge_transform(conn, gamma)
    data = {"schema": "quasigauge.gauge/1", "algebra": args.algebra, "gamma": gamma.to_json(),
            "connection": plain.to_json()}
    lines = [f"alpha^gamma = {fm.format_form(plain.alpha)}"]
    status = 0
    if args.twisted:
        tw = gg.gauge_transform_twisted(conn, gamma, ctx.alg)
        same = tw == plain
        data["twisted"] = tw.to_json()
        data["equal"] = same
        lines.append(f"twisted alpha^gamma = {fm.format_form(tw.alpha)}")
        lines.append(f"equal to the untwisted transform: {'yes' if same else 'NO'}")
        status = 0 if same else 1
    _emit(args, "\n".join(lines), data)
    return status


_ANGLE = re.compile(r"^\s*([+-]?(?:\d+(?:\.\d*)?|\.\d+)?)\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$")


def parse_angle(text: str) -> float:
    m = _ANGLE.match(text)
    if m:
        coef = m.group(1)
        c = 1.0 if coef in ("", "+") else -1.0 if coef == "-" else float(coef)
        return c * math.pi / (float(m.group(2)) if m.group(2) else 1.0)
    return float(text)


def parse_list(text: str, conv=float) -> list:
    return [conv(t) for t in text.split(",") if t.strip()] if text.strip() else []


def cmd_moduli_search(args):
    amps = parse_list(args.amps)
    phases = parse_list(args.phases, parse_angle)
    result = md.search_flat(args.n, amps, phases, args.tol, workers=args.workers)
    for hit in result.hits:
        row = hit.to_json()
        row["schema"] = md.SCHEMA
        print(json.dumps(row))
    summary = {"schema": md.SCHEMA, "summary": True, "n": args.n, "scanned": result.scanned,
               "flat": len(result), "counts": result.counts(), "unclassified": len(result.unclassified)}
    print(json.dumps(summary), file=sys.stderr)
    return 1 if result.unclassified else 0


def cmd_moduli_classify(args):
    if args.connection:
        with open(args.connection) as fh:
            conn = md.HermitianConnection.from_json(json.load(fh))
    else:
        params = parse_list(args.params) if args.params else []
        conn = md.canonical_flat(args.family, tuple(params), args.n)
    try:
        cls = md.classify_flat(conn, args.tol)
    except (md.NotFlat, md.UnclassifiedPattern, md.HolonomyObstruction, md.FlatnessViolation) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    _emit(args, cls.describe(), {"schema": "quasigauge.flat-classification/1",
                                 "residual": md.flatness_residual(conn), **cls.to_json()})
    return 0


def cmd_eval(args):
    ctx = make_context(args.context)
    node = parse(args.expr)
    value = evaluate(node, ctx)
    if args.json:
        print(json.dumps({"schema": "quasigauge.eval/1", "context": args.context, "expr": to_text(node),
                          "value": format_value(value), "data": value_json(value)}, indent=2))
    else:
        if args.show_ast:
            print(to_text(node))
        print(format_value(value))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quasigauge", description="Gauge theory on cochain-twisted quasialgebras.")
    sub = p.add_subparsers(dest="command", required=True)

    def algebra_arg(sp, default="octonion"):
        sp.add_argument("--algebra", default=default,
                        help="octonion, octonion-variant, quaternion, clifford-N or classical-N")
        sp.add_argument("--json", action="store_true", help="emit JSON")

    sp = sub.add_parser("table", help="basis multiplication table")
    algebra_arg(sp)
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("phi", help="associator value on three basis labels")
    algebra_arg(sp)
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("c")
    sp.add_argument("--verify-cocycle", action="store_true")
    sp.set_defaults(func=cmd_phi)

    sp = sub.add_parser("fourier-cochain", help="position-space form of the cochain")
    algebra_arg(sp)
    sp.set_defaults(func=cmd_fourier)

    sp = sub.add_parser("star-expand", help="bidifferential expansion of the bullet product")
    algebra_arg(sp)
    sp.set_defaults(func=cmd_star)

    for name, func, helptext in (("curvature", cmd_curvature, "curvature of a connection"),
                                 ("gauge", cmd_gauge, "gauge transform of a connection")):
        sp = sub.add_parser(name, help=helptext)
        algebra_arg(sp)
        sp.add_argument("--connection", help="connection JSON file")
        sp.add_argument("--alpha", help="connection as an expression, e.g. 'u*tau[1] - tau[2]'")
        sp.add_argument("--twisted", action="store_true", help="also compute in the twisted theory and compare")
        if name == "gauge":
            sp.add_argument("--gamma", required=True, help="gauge function as an expression")
        sp.set_defaults(func=func)

    sp = sub.add_parser("moduli", help="flat connections on Z_2^n")
    msub = sp.add_subparsers(dest="moduli_command", required=True)
    ms = msub.add_parser("search", help="exhaustive search on a grid of edge values")
    ms.add_argument("--n", type=int, default=2)
    ms.add_argument("--amps", default="0,1")
    ms.add_argument("--phases", default="0,pi")
    ms.add_argument("--tol", type=float, default=None)
    ms.add_argument("--workers", type=int, default=1)
    ms.set_defaults(func=cmd_moduli_search)
    mc = msub.add_parser("classify", help="classify a flat connection")
    mc.add_argument("--connection", help="edge-value JSON file")
    mc.add_argument("--family", default="constant-maximal",
                    help="zero-family, constant-maximal, cube-case-iii or cube-case-iii-mirror")
    mc.add_argument("--params", default="")
    mc.add_argument("--n", type=int, default=3)
    mc.add_argument("--tol", type=float, default=None)
    mc.add_argument("--json", action="store_true")
    mc.set_defaults(func=cmd_moduli_classify)

    sp = sub.add_parser("eval", help="evaluate an expression")
    sp.add_argument("--context", default="octonion",
                    help="an algebra name or fuzzy-N-K[-m<m>][-l<lambda>][-gaussian|-exponential]")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--show-ast", action="store_true", help="print the parsed expression first")
    sp.add_argument("expr")
    sp.set_defaults(func=cmd_eval)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, EvalError, DimensionError, SingularGaugeElement, fz.NonInvertibleJet, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
