"""Command-line surface: expression evaluation, dumps, and check suites.

Grammar: generators t[a,b], one-forms w[a,b], the canonical element X,
differentials d(...), del(...), dlt(...), operators + - * / ^ and the
wedge /\\ with precedence ^ > * / > /\\ > + -.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .scalars import Scalar, ONE, ZERO, render_scalar
from .algebra import (AlgebraElement, load_rmatrix, dump_rmatrix,
                      render_element, RMatrixError)
from .calculus import (assemble, map_in_to_out, map_out_to_in,
                       roundtrip_check, DEFAULT_RMATRIX)
from .forms import GradeCapError
from .bicomplex import build_grid, cartan_check, grid_check
from .suites import hopf_suite, bicovariance_suite, leibniz_suite


class CliError(Exception):
    pass


class ExprError(CliError):
    def __init__(self, message, pos=None):
        if pos is not None:
            message = "%s (at position %d)" % (message, pos)
        super().__init__(message)
        self.pos = pos


# ---------------------------------------------------------------------------
# tokenizer

_NAMES = ("del", "dlt", "d", "t", "w", "X", "q")


def tokenize(text):
    toks = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if text.startswith("/\\", i):
            toks.append(("wedge", "/\\", i))
            i += 2
            continue
        if c in "+-*/^()[],":
            toks.append((c, c, i))
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("int", int(text[i:j]), i))
            i = j
            continue
        if c.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            name = text[i:j]
            if name not in _NAMES:
                raise ExprError("unknown symbol %r" % name, i)
            toks.append(("name", name, i))
            i = j
            continue
        raise ExprError("unexpected character %r" % c, i)
    return toks


# ---------------------------------------------------------------------------
# parser (precedence climbing); AST nodes are tuples

_PREC = {"+": 0, "-": 0, "wedge": 1, "*": 2, "/": 2, "^": 3}


class _Stream:
    def __init__(self, toks, text):
        self.toks = toks
        self.pos = 0
        self.text = text

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self):
        t = self.peek()
        if t is None:
            raise ExprError("unexpected end of input", len(self.text))
        self.pos += 1
        return t

    def expect(self, kind):
        t = self.next()
        if t[0] != kind:
            raise ExprError("expected %r, found %r" % (kind, t[1]), t[2])
        return t


def parse(text):
    """Parse an expression; returns an AST of nested tuples."""
    toks = tokenize(text)
    stream = _Stream(toks, text)
    ast = _parse_expr(stream, 0)
    rest = stream.peek()
    if rest is not None:
        raise ExprError("trailing input %r" % (rest[1],), rest[2])
    return ast


def _parse_expr(s, min_prec):
    lhs = _parse_atom(s)
    while True:
        t = s.peek()
        if t is None or t[0] not in _PREC:
            return lhs
        op = t[0]
        prec = _PREC[op]
        if prec < min_prec:
            return lhs
        s.next()
        if op == "^":
            rhs = _parse_exponent(s)
            lhs = ("pow", lhs, rhs)
            continue
        rhs = _parse_expr(s, prec + 1)
        lhs = (op if op != "wedge" else "wedge", lhs, rhs)
    return lhs


def _parse_exponent(s):
    t = s.peek()
    sign = 1
    if t is not None and t[0] == "-":
        s.next()
        sign = -1
    if s.peek() is not None and s.peek()[0] == "(":
        s.next()
        num = _parse_signed_int(s)
        s.expect("/")
        den = _parse_signed_int(s)
        s.expect(")")
        return sign * Fraction(num, den)
    t = s.expect("int")
    return sign * t[1]


def _parse_signed_int(s):
    sign = 1
    if s.peek() is not None and s.peek()[0] == "-":
        s.next()
        sign = -1
    return sign * s.expect("int")[1]


def _parse_atom(s):
    t = s.next()
    kind, val, pos = t
    if kind == "(":
        inner = _parse_expr(s, 0)
        s.expect(")")
        return inner
    if kind == "-":
        # unary minus binds looser than exponentiation: -q^2 = -(q^2)
        return ("neg", _parse_expr(s, _PREC["^"]))
    if kind == "int":
        return ("int", val)
    if kind == "name":
        if val == "q":
            return ("q",)
        if val == "X":
            return ("X",)
        if val in ("d", "del", "dlt"):
            s.expect("(")
            inner = _parse_expr(s, 0)
            s.expect(")")
            return (val, inner)
        if val in ("t", "w"):
            s.expect("[")
            a = _parse_signed_int(s)
            s.expect(",")
            b = _parse_signed_int(s)
            s.expect("]")
            return (val, a, b, pos)
    raise ExprError("unexpected token %r" % (val,), pos)


def print_ast(ast):
    """Canonical rendering of a parse tree (round-trips through parse)."""
    kind = ast[0]
    if kind == "int":
        return str(ast[1])
    if kind == "q":
        return "q"
    if kind == "X":
        return "X"
    if kind in ("t", "w"):
        return "%s[%d,%d]" % (kind, ast[1], ast[2])
    if kind in ("d", "del", "dlt"):
        return "%s(%s)" % (kind, print_ast(ast[1]))
    if kind == "neg":
        return "-%s" % _wrap(ast[1], 9)
    if kind == "pow":
        e = ast[2]
        es = str(e) if isinstance(e, int) else "(%d/%d)" % (e.numerator,
                                                            e.denominator)
        return "%s^%s" % (_wrap(ast[1], 9), es)
    op = {"+": " + ", "-": " - ", "*": "*", "/": "/", "wedge": " /\\ "}[kind]
    prec = _PREC[kind if kind != "wedge" else "wedge"]
    return "%s%s%s" % (_wrap(ast[1], prec), op, _wrap(ast[2], prec + 1))


def _wrap(ast, outer_prec):
    inner = print_ast(ast)
    kind = ast[0]
    if kind in _PREC and _PREC[kind] < outer_prec:
        return "(%s)" % inner
    if kind == "neg" and outer_prec > 0:
        return "(%s)" % inner
    return inner


# ---------------------------------------------------------------------------
# evaluation

def evaluate_ast(ast, calc):
    kind = ast[0]
    sp = calc.space
    qg = calc.qg
    if kind == "int":
        return sp.from_algebra(AlgebraElement.from_scalar(
            qg.rs, Scalar.from_int(ast[1])))
    if kind == "q":
        return sp.from_algebra(AlgebraElement.from_scalar(qg.rs, Scalar.q()))
    if kind == "X":
        return calc.X
    if kind == "t":
        _, a, b, pos = ast
        if not (1 <= a <= qg.N and 1 <= b <= qg.N):
            raise ExprError("unknown symbol t[%d,%d] for N=%d" % (a, b, qg.N),
                            pos)
        return sp.from_algebra(qg.generator(a, b))
    if kind == "w":
        _, a, b, pos = ast
        if not (1 <= a <= qg.N and 1 <= b <= qg.N):
            raise ExprError("unknown symbol w[%d,%d] for N=%d" % (a, b, qg.N),
                            pos)
        return sp.one_form(sp.basis.index(a, b))
    if kind == "neg":
        return evaluate_ast(ast[1], calc).negate()
    if kind in ("+", "-"):
        x = evaluate_ast(ast[1], calc)
        y = evaluate_ast(ast[2], calc)
        return x + y if kind == "+" else x - y
    if kind == "*":
        x = evaluate_ast(ast[1], calc)
        y = evaluate_ast(ast[2], calc)
        return _mul_values(x, y)
    if kind == "wedge":
        x = evaluate_ast(ast[1], calc)
        y = evaluate_ast(ast[2], calc)
        return x.wedge(y)
    if kind == "/":
        x = evaluate_ast(ast[1], calc)
        y = evaluate_ast(ast[2], calc)
        s = _as_scalar(y)
        if s is None:
            raise CliError("division is only defined by scalar values")
        if s.is_zero():
            raise CliError("division by zero")
        return x.scalar_mul(ONE / s)
    if kind == "pow":
        x = evaluate_ast(ast[1], calc)
        e = ast[2]
        s = _as_scalar(x)
        if isinstance(e, Fraction):
            if s is None or not (s.den.is_one() and len(s.num.terms) == 1
                                 and s.num.leading_coeff() == 1):
                raise CliError("fractional powers only apply to powers of q")
            return calc.space.from_algebra(AlgebraElement.from_scalar(
                calc.qg.rs, Scalar.q_power(s.num.max_exp() * e)))
        if s is not None:
            return calc.space.from_algebra(AlgebraElement.from_scalar(
                calc.qg.rs, s ** e))
        alg = _as_algebra(x)
        if alg is None or e < 0:
            raise CliError("powers of forms (or negative powers of algebra "
                           "elements) are not defined")
        return calc.space.from_algebra(alg ** e)
    if kind == "d":
        return calc.d(evaluate_ast(ast[1], calc))
    if kind == "del":
        return calc.partial(evaluate_ast(ast[1], calc))
    if kind == "dlt":
        return calc.delta(evaluate_ast(ast[1], calc))
    raise CliError("unhandled expression node %r" % (kind,))


def _mul_values(x, y):
    ax, ay = _as_algebra(x), _as_algebra(y)
    if ax is not None and ay is not None:
        return x.space.from_algebra(ax * ay)
    if ax is not None:
        return y.algebra_mul_left(ax)
    if ay is not None:
        return x.algebra_mul_right(ay)
    raise CliError("use /\\ to multiply forms of positive grade")


def _as_algebra(x):
    if x.is_zero():
        return AlgebraElement.zero(x.space.qg.rs)
    if x.grades() == [0]:
        return x.terms[()]
    return None


def _as_scalar(x):
    alg = _as_algebra(x)
    if alg is None:
        return None
    if alg.is_zero():
        return ZERO
    if set(alg.terms) == {()}:
        return alg.terms[()]
    return None


def render_value(x):
    alg = _as_algebra(x)
    if alg is not None:
        return render_element(alg)
    return x.render()


# ---------------------------------------------------------------------------
# session handling

SESSION_FORMAT = "qdc-session 1"


def write_session(path, rmatrix_text, f00, degree, cap):
    r = load_rmatrix(rmatrix_text)
    lines = ["format %s" % SESSION_FORMAT,
             "f00 %s" % f00,
             "degree %d" % degree,
             "cap %d" % cap,
             "begin rmatrix"]
    lines.append(dump_rmatrix(r).rstrip("\n"))
    lines.append("end rmatrix")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_session(path):
    cfg = {"f00": "trace", "degree": 3, "cap": 3}
    rmatrix_lines = []
    in_rmatrix = False
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if line.strip() == "begin rmatrix":
                in_rmatrix = True
                continue
            if line.strip() == "end rmatrix":
                in_rmatrix = False
                continue
            if in_rmatrix:
                rmatrix_lines.append(line)
                continue
            parts = line.split(None, 1)
            if not parts:
                continue
            key, rest = parts[0], parts[1] if len(parts) > 1 else ""
            if key == "format" and rest != SESSION_FORMAT:
                raise CliError("unsupported session format %r" % rest)
            if key == "f00":
                cfg["f00"] = rest.strip()
            elif key == "degree":
                cfg["degree"] = int(rest)
            elif key == "cap":
                cfg["cap"] = int(rest)
    if not rmatrix_lines:
        raise CliError("session file %s carries no R-matrix block" % path)
    cfg["rmatrix"] = "\n".join(rmatrix_lines) + "\n"
    return cfg


def _packaged_default_rmatrix():
    try:
        from importlib import resources
        return (resources.files("qdc") / "data" / "slq2.rmatrix").read_text()
    except Exception:
        return DEFAULT_RMATRIX


def resolve_config(args):
    if getattr(args, "rmatrix", None):
        with open(args.rmatrix, encoding="utf-8") as fh:
            text = fh.read()
        return {"rmatrix": text, "f00": args.f00 or "trace",
                "degree": args.degree or 3, "cap": args.cap or 3}
    if getattr(args, "descriptor", None):
        if not os.path.exists(args.descriptor):
            raise CliError("descriptor %s is missing (run qdc init first)"
                           % args.descriptor)
        cfg = read_session(args.descriptor)
    else:
        env = os.environ.get("QDC_DEFAULT_RMATRIX")
        if env:
            with open(env, encoding="utf-8") as fh:
                cfg = {"rmatrix": fh.read()}
        else:
            cfg = {"rmatrix": _packaged_default_rmatrix()}
        cfg.setdefault("f00", "trace")
        cfg.setdefault("degree", 3)
        cfg.setdefault("cap", 3)
    if args.f00:
        cfg["f00"] = args.f00
    if args.degree:
        cfg["degree"] = args.degree
    if args.cap:
        cfg["cap"] = args.cap
    return cfg


def build_calculus(cfg):
    f00 = {"trace": "trace", "counit": "counit"}.get(cfg["f00"])
    if f00 is None:
        raise CliError("unknown f00 choice %r" % cfg["f00"])
    return assemble(cfg["rmatrix"], grade_cap=cfg["cap"],
                    degree_bound=cfg["degree"], f00_choice=f00)


# ---------------------------------------------------------------------------
# commands

def cmd_init(args, out):
    cfg = resolve_config(args)
    calc = build_calculus(cfg)   # assembles and validates before persisting
    path = args.out or "qdc-session.qdc"
    write_session(path, cfg["rmatrix"], cfg["f00"], cfg["degree"], cfg["cap"])
    payload = {"written": path, "N": calc.qg.N,
               "one_form_dimension": calc.space.M,
               "wedge_dimensions": calc.space.table.dimensions()}
    if args.format == "structured":
        out.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        out.write("descriptor written to %s (N=%d, wedge dimensions %s)\n"
                  % (path, calc.qg.N, payload["wedge_dimensions"]))
    return 0


def cmd_relations(args, out):
    cfg = resolve_config(args)
    calc = build_calculus(cfg)
    qg = calc.qg
    payload = {"algebra_rules": [], "bimodule": [], "vector_fields": [],
               "wedge": {}}
    for lhs in sorted(qg.rs.rules, key=qg.rs.word_key):
        rhs = AlgebraElement(qg.rs, qg.rs.rules[lhs], reduce=False)
        payload["algebra_rules"].append(
            ["*".join("t[%d,%d]" % g for g in lhs), render_element(rhs)])
    for label, gen, v in calc.dual.f.generator_table():
        payload["bimodule"].append([label, gen, render_scalar(v)])
    for label, gen, v in calc.dual.chi.generator_table():
        payload["vector_fields"].append([label, gen, render_scalar(v)])
    table = calc.space.table
    for k in range(2, table.dense_limit + 1):
        rows = []
        for w in sorted(table.pivot_rows[k]):
            red = table.reduce_word(w)
            rows.append([_wedge_word_str(calc, w),
                         " + ".join("%s %s" % (render_scalar(c),
                                               _wedge_word_str(calc, u))
                                    for u, c in sorted(red.items())) or "0"])
        payload["wedge"][str(k)] = {
            "dimension": table.dimension(k),
            "basis": [_wedge_word_str(calc, w) for w in table.basis[k]],
            "rules": rows,
        }
    if args.format == "structured":
        out.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        out.write("algebra rewrite rules:\n")
        for lhs, rhs in payload["algebra_rules"]:
            out.write("  %s -> %s\n" % (lhs, rhs))
        out.write("bimodule commutation table (functional, generator, value):\n")
        for row in payload["bimodule"]:
            out.write("  %s  %s  %s\n" % tuple(row))
        out.write("vector-field table:\n")
        for row in payload["vector_fields"]:
            out.write("  %s  %s  %s\n" % tuple(row))
        for k, info in sorted(payload["wedge"].items()):
            out.write("wedge grade %s: dimension %d\n" % (k, info["dimension"]))
            out.write("  basis: %s\n" % ", ".join(info["basis"]))
            for lhs, rhs in info["rules"]:
                out.write("  %s -> %s\n" % (lhs, rhs))
    return 0


def _wedge_word_str(calc, w):
    if not w:
        return "1"
    return " /\\ ".join(calc.space.basis.label(i) for i in w)


def cmd_eval(args, out):
    cfg = resolve_config(args)
    calc = build_calculus(cfg)
    ast = parse(args.expression)
    try:
        value = evaluate_ast(ast, calc)
    except GradeCapError as err:
        raise CliError(str(err))
    rendered = render_value(value)
    if args.format == "structured":
        out.write(json.dumps({"expression": print_ast(ast),
                              "value": rendered}, sort_keys=True,
                             indent=2) + "\n")
    else:
        out.write(rendered + "\n")
    return 0


SUITES = ("hopf", "bicovariance", "leibniz", "cartan", "roundtrip")


def run_suite(calc, name, degree, samples=8):
    if name == "hopf":
        return [hopf_suite(calc, degree)]
    if name == "bicovariance":
        return [bicovariance_suite(calc, degree)]
    if name == "leibniz":
        return [leibniz_suite(calc, degree)]
    if name == "cartan":
        reports = [cartan_check(calc, degree, f00_choice=c, samples=samples)
                   for c in ("trace", "counit")]
        reports.append(grid_check(calc))
        return reports
    if name == "roundtrip":
        outer = map_in_to_out(calc)
        return [roundtrip_check(outer, calc.resolve_f00(c), degree)
                for c in ("trace", "counit")]
    raise CliError("unknown suite %r (expected one of %s)"
                   % (name, ", ".join(SUITES)))


def cmd_check(args, out):
    cfg = resolve_config(args)
    calc = build_calculus(cfg)
    names = [args.suite] if args.suite else list(SUITES)
    reports = []
    for name in names:
        reports.extend(run_suite(calc, name, cfg["degree"]))
    if args.format == "structured":
        out.write(json.dumps([r.as_dict() for r in reports],
                             sort_keys=True, indent=2) + "\n")
    else:
        for r in reports:
            out.write(r.render() + "\n")
    return 0 if all(r.passed() for r in reports) else 1


def cmd_maps(args, out):
    cfg = resolve_config(args)
    calc = build_calculus(cfg)
    outer = map_in_to_out(calc)
    f00 = calc.f00
    ext = map_out_to_in(outer, f00)
    reports = [roundtrip_check(outer, calc.resolve_f00(c), cfg["degree"])
               for c in ("trace", "counit")]
    payload = {
        "inner": {"mode": calc.mode, "one_form_dimension": calc.space.M},
        "outer": {"mode": outer.mode, "rank": outer.rank,
                  "basis": outer.labels,
                  "twist": {"t[%d,%d]" % g:
                            render_scalar(outer.twist.on_generator(*g))
                            for g in calc.qg.rs.gens}},
        "extended": ext.summary(),
        "roundtrip": [r.as_dict() for r in reports],
    }
    if args.format == "structured":
        out.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        out.write("inner calculus: %d one-forms\n" % calc.space.M)
        out.write("quotient (outer) calculus: rank %d, basis %s\n"
                  % (outer.rank, ", ".join(outer.labels)))
        out.write("extension: rank %d with sector functional %s\n"
                  % (ext.rank, f00.label))
        for r in reports:
            out.write(r.render() + "\n")
    return 0 if all(r.passed() for r in reports) else 1


def cmd_bicomplex(args, out):
    cfg = resolve_config(args)
    calc = build_calculus(cfg)
    grid = build_grid(calc, cfg["cap"])
    if args.format == "structured":
        out.write(json.dumps(grid.as_dict(), sort_keys=True, indent=2) + "\n")
    else:
        out.write(grid.render() + "\n")
        out.write(grid_check(calc, cfg["cap"]).render() + "\n")
    return 0


SHARED_FLAGS = [
    ("--rmatrix", {"help": "R-matrix config file"}),
    ("--descriptor", {"help": "session descriptor written by init"}),
    ("--degree", {"type": int, "help": "degree bound for checks"}),
    ("--cap", {"type": int, "help": "grade cap for forms"}),
    ("--f00", {"choices": ("trace", "counit"),
               "help": "one-dimensional sector functional"}),
    ("--format", {"choices": ("text", "structured")}),
]


def _add_shared(parser, suffix):
    for flag, kw in SHARED_FLAGS:
        parser.add_argument(flag, dest=flag.lstrip("-") + suffix,
                            default=None, **kw)


def make_parser():
    p = argparse.ArgumentParser(
        prog="qdc",
        description="exact bicovariant differential calculus engine")
    _add_shared(p, "_pre")
    sub = p.add_subparsers(dest="command", required=True)

    def command(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        _add_shared(sp, "_post")
        return sp

    sp = command("init", "assemble and persist a descriptor")
    sp.add_argument("--out", help="output path (default qdc-session.qdc)")
    command("relations", "dump algebra, bimodule and wedge relations")
    sp = command("eval", "evaluate an expression to normal form")
    sp.add_argument("expression")
    sp = command("check", "run verification suites")
    sp.add_argument("--suite", choices=SUITES)
    command("maps", "quotient/extension maps and the round trip")
    command("bicomplex", "print the bidegree grid")
    return p


def _merge_shared(args):
    """Flags may appear before or after the subcommand; later ones win."""
    for flag, _ in SHARED_FLAGS:
        name = flag.lstrip("-")
        pre = getattr(args, name + "_pre", None)
        post = getattr(args, name + "_post", None)
        setattr(args, name, post if post is not None else pre)
    if args.format is None:
        args.format = "text"
    return args


_COMMANDS = {"init": cmd_init, "relations": cmd_relations, "eval": cmd_eval,
             "check": cmd_check, "maps": cmd_maps, "bicomplex": cmd_bicomplex}


def run(argv, out=None):
    out = out if out is not None else sys.stdout
    parser = make_parser()
    args = _merge_shared(parser.parse_args(argv))
    try:
        return _COMMANDS[args.command](args, out)
    except (CliError, RMatrixError, GradeCapError) as err:
        sys.stderr.write("error: %s\n" % err)
        return 2


def main():
    try:
        sys.exit(run(sys.argv[1:]))
    except BrokenPipeError:
        sys.exit(0)


if __name__ == "__main__":
    main()
