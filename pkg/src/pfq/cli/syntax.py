"""Tokenizer, AST, LL(1) parser and printer for the scenario language.

A script is a sequence of lines.  Each non-empty line is one statement::

    field K = laurent(Q, x, y)
    let p = pf[x, y] | 1 over K
    linked-sep 1 p pf[2*x, y] | 1 over K expect no
    verify thm51 --count 10 --seed 3 expect yes

``#`` starts a comment.  Identifiers are resolved while parsing, so a
misspelled name is reported with its line and column before anything runs.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

# -- tokens ---------------------------------------------------------------------------


class ScriptSyntaxError(Exception):
    def __init__(self, line: int, col: int, expected: str, got: str = ""):
        self.line, self.col, self.expected, self.got = line, col, expected, got
        msg = f"line {line}, col {col}: expected {expected}"
        super().__init__(msg + (f", got {got!r}" if got else ""))


@dataclass(frozen=True)
class Tok:
    kind: str  # INT IDENT FLAG OP END
    text: str
    line: int
    col: int


_TOKEN = re.compile(
    r"(?P<ws>[ \t]+)|(?P<comment>#.*)"
    r"|(?P<FLAG>--[a-z][a-z0-9-]*)"
    r"|(?P<INT>\d+)"
    r"|(?P<WORD>(?:linked-sep|linked-insep|chain-step|separation-dims|thm41-triples|thm41-converse)(?![A-Za-z0-9_]))"
    r"|(?P<IDENT>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<OP>\*\*|[-+*/^()\[\],;|=])"
)


def tokenize_line(text: str, line: int) -> list[Tok]:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ScriptSyntaxError(line, pos + 1, "a token", text[pos])
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            tok = m.group()
            kind = "IDENT" if kind == "WORD" else kind
            out.append(Tok(kind, "^" if tok == "**" else tok, line, pos + 1))
        pos = m.end()
    out.append(Tok("END", "", line, len(text) + 1))
    return out


# -- AST ------------------------------------------------------------------------------
# Nodes compare by content only; line numbers ride along for diagnostics.


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Bin:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int


@dataclass(frozen=True)
class Ref:
    name: str
    kind: str  # pf, form, elem


@dataclass(frozen=True)
class PfLit:
    slots: tuple
    as_slot: object | None
    shared: int = 0


@dataclass(frozen=True)
class MoveLit:
    kind: str
    args: tuple


@dataclass(frozen=True)
class MoveApp:
    pf: object
    move: MoveLit


@dataclass(frozen=True)
class FormCall:
    name: str  # diag pairs expand orth neg scale theta
    args: tuple
    quasi: tuple = ()


@dataclass(frozen=True)
class FieldExpr:
    kind: str  # Q R Fp F2 laurent ref
    args: tuple = ()


@dataclass(frozen=True)
class FieldDecl:
    name: str
    expr: FieldExpr
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Let:
    name: str
    value: object
    over: FieldExpr | None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Expect:
    kind: str  # yes no unknown hyperbolic error value
    value: object = None


@dataclass(frozen=True)
class Command:
    verb: str
    args: tuple
    over: FieldExpr | None = None
    expects: tuple = ()
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Script:
    statements: tuple = ()


# -- parser ---------------------------------------------------------------------------

FORM_CALLS = ("diag", "pairs", "expand", "orth", "neg", "scale", "theta")
MOVES = {"square": "ie", "swap": "i", "twist": "i", "norm": "iee", "as": "e", "c2norm": "iee"}
EXPECT_WORDS = ("yes", "no", "unknown", "hyperbolic", "error")
VERIFY_TARGETS = ("thm41", "thm41-triples", "thm41-converse", "thm51", "invariance")
FLAGS = ("--count", "--seed", "--k", "--folds")

# verb -> argument shapes: f form, p presentation, v value, e element, i integer,
# P one or more presentations, B basis, o optional pair of presentations
VERBS = {
    "isotropic": "f",
    "witt": "f",
    "hyperbolic": "v",
    "isometric": "ff",
    "dim": "v",
    "signature": "f",
    "linked-sep": "ipp",
    "linked-insep": "ipp",
    "invariant": "iP",
    "chain-step": "fBBo",
    "squareclass": "e",
    "issquare": "e",
    "valuation": "e",
    "springer": "f",
    "separation-dims": "wiii",
    "verify": "V",
}


class Parser:
    def __init__(self, symbols: dict | None = None):
        # name -> ("field", var names) | ("pf" | "form" | "elem", field name or None)
        self.symbols: dict = dict(symbols or {})
        self.symbols.setdefault("Q", ("field", ()))
        self.symbols.setdefault("R", ("field", ()))
        self.current_field = "Q"
        self.toks: list[Tok] = []
        self.i = 0

    # token helpers
    @property
    def tok(self) -> Tok:
        return self.toks[self.i]

    def fail(self, expected: str):
        t = self.tok
        raise ScriptSyntaxError(t.line, t.col, expected, t.text or "end of line")

    def take(self, kind: str | None = None, text: str | None = None) -> Tok:
        t = self.tok
        if (kind and t.kind != kind) or (text is not None and t.text != text):
            self.fail(repr(text) if text is not None else kind.lower())
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("OP", "IDENT", "FLAG")

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    # script
    def parse(self, text: str) -> Script:
        stmts = []
        for n, raw in enumerate(text.splitlines(), 1):
            s = self.parse_line(raw, n)
            if s is not None:
                stmts.append(s)
        return Script(tuple(stmts))

    def parse_line(self, raw: str, n: int):
        self.toks = tokenize_line(raw, n)
        self.i = 0
        if self.tok.kind == "END":
            return None
        stmt = self.statement(n)
        self.take("END")
        return stmt

    def statement(self, n: int):
        t = self.tok
        if t.kind != "IDENT":
            self.fail("a statement keyword")
        if t.text == "field":
            self.i += 1
            name = self.take("IDENT").text
            self.take("OP", "=")
            fe = self.field_expr()
            self.symbols[name] = ("field", self._field_vars(fe))
            self.current_field = name
            return FieldDecl(name, fe, n)
        if t.text == "let":
            self.i += 1
            name_tok = self.take("IDENT")
            self.take("OP", "=")
            start = self.i
            value = self.value()
            over = self.over()
            self._check_names(value, over, start)
            self.symbols[name_tok.text] = (self._kind(value), self._field_name(over))
            return Let(name_tok.text, value, over, n)
        if t.text in VERBS:
            self.i += 1
            start = self.i
            args = self.command_args(t.text)
            over = self.over()
            self._check_names(args, over, start)
            expects = self.expects(over)
            return Command(t.text, args, over, expects, n)
        self.fail("field, let or a command")

    def over(self):
        if self.accept("over"):
            return self.field_expr()
        return None

    def expects(self, over):
        if not self.accept("expect"):
            return ()
        out = [self.expect_item(over)]
        while self.accept(","):
            out.append(self.expect_item(over))
        return tuple(out)

    def expect_item(self, over):
        t = self.take("IDENT")
        if t.text in EXPECT_WORDS:
            return Expect(t.text)
        if t.text == "value":
            self.take("OP", "=")
            start = self.i
            v = self.value()
            self._check_names(v, over, start)
            return Expect("value", v)
        self.i -= 1
        self.fail("yes, no, unknown, hyperbolic, error or value=")

    # fields
    def field_expr(self) -> FieldExpr:
        t = self.take("IDENT")
        if t.text in ("Q", "R") and not self.at("("):
            return FieldExpr(t.text)
        if t.text == "Fp":
            self.take("OP", "(")
            p = int(self.take("INT").text)
            self.take("OP", ")")
            return FieldExpr("Fp", (p,))
        if t.text == "F2":
            self.take("OP", "(")
            names = self.names()
            self.take("OP", ")")
            return FieldExpr("F2", names)
        if t.text == "laurent":
            self.take("OP", "(")
            base = self.field_expr()
            self.take("OP", ",")
            names = self.names()
            self.take("OP", ")")
            return FieldExpr("laurent", (base,) + names)
        if self.symbols.get(t.text, ("",))[0] == "field":
            return FieldExpr("ref", (t.text,))
        self.i -= 1
        self.fail("a field (Q, R, Fp(p), F2(vars), laurent(...) or a declared field)")

    def names(self) -> tuple:
        out = [self.take("IDENT").text]
        while self.accept(","):
            out.append(self.take("IDENT").text)
        return tuple(out)

    def _field_vars(self, fe: FieldExpr) -> tuple:
        if fe.kind == "F2":
            return fe.args
        if fe.kind == "laurent":
            return self._field_vars(fe.args[0]) + fe.args[1:]
        if fe.kind == "ref":
            return self.symbols[fe.args[0]][1]
        return ()

    def _field_name(self, over):
        if over is None:
            return self.current_field
        return over.args[0] if over.kind == "ref" else None

    # values
    def value(self):
        t = self.tok
        if t.kind == "IDENT":
            if t.text == "pf" or t.text == "move":
                return self.pf()
            if t.text in FORM_CALLS:
                return self.form()
            kind = self.symbols.get(t.text, ("",))[0]
            if kind in ("pf", "form"):
                self.i += 1
                return Ref(t.text, kind)
        return self.elem()

    def pf(self):
        t = self.tok
        if t.text == "move":
            self.i += 1
            self.take("OP", "(")
            p = self.pf()
            self.take("OP", ",")
            m = self.move()
            self.take("OP", ")")
            return MoveApp(p, m)
        if t.text == "pf":
            self.i += 1
            self.take("OP", "[")
            slots, as_slot = [], None
            if not self.at(";") and not self.at("]"):
                slots = list(self.elems())
            if self.accept(";"):
                as_slot = self.elem()
            self.take("OP", "]")
            shared = 0
            if self.accept("|"):
                shared = int(self.take("INT").text)
            return PfLit(tuple(slots), as_slot, shared)
        if t.kind == "IDENT" and self.symbols.get(t.text, ("",))[0] == "pf":
            self.i += 1
            return Ref(t.text, "pf")
        self.fail("a presentation (pf[...], move(...) or a pf name)")

    def move(self) -> MoveLit:
        t = self.take("IDENT")
        shape = MOVES.get(t.text)
        if shape is None:
            self.i -= 1
            self.fail("a move (" + ", ".join(MOVES) + ")")
        self.take("OP", "(")
        args = []
        for j, c in enumerate(shape):
            if j:
                self.take("OP", ",")
            args.append(int(self.take("INT").text) if c == "i" else self.elem())
        self.take("OP", ")")
        return MoveLit(t.text, tuple(args))

    def form(self):
        t = self.tok
        if t.kind == "IDENT" and t.text in FORM_CALLS:
            self.i += 1
            self.take("OP", "(")
            name = t.text
            quasi = ()
            if name == "diag":
                args = self.elems()
            elif name == "pairs":
                pairs = []
                if self.at("("):
                    pairs.append(self.pair())
                    while self.accept(","):
                        pairs.append(self.pair())
                if self.accept(";"):
                    quasi = self.elems()
                args = tuple(pairs)
            elif name == "expand":
                args = (self.pf(),)
            elif name == "theta":
                args = (self.pf(),)
                self.take("OP", ",")
                args += (int(self.take("INT").text),)
            elif name == "orth":
                args = [self.form()]
                while self.accept(","):
                    args.append(self.form())
                args = tuple(args)
            elif name == "neg":
                args = (self.form(),)
            else:  # scale
                args = (self.elem(),)
                self.take("OP", ",")
                args += (self.form(),)
            self.take("OP", ")")
            return FormCall(name, tuple(args), tuple(quasi))
        if t.kind == "IDENT" and t.text in ("pf", "move"):
            return self.pf()
        if t.kind == "IDENT" and self.symbols.get(t.text, ("",))[0] in ("pf", "form"):
            self.i += 1
            return Ref(t.text, self.symbols[t.text][0])
        self.fail("a form (diag, pairs, expand, orth, neg, scale, theta, pf or a form name)")

    def pair(self):
        self.take("OP", "(")
        c = self.elem()
        self.take("OP", ",")
        a = self.elem()
        self.take("OP", ")")
        return (c, a)

    def elems(self) -> tuple:
        out = [self.elem()]
        while self.accept(","):
            out.append(self.elem())
        return tuple(out)

    # element expressions: sum of products of signed powers
    def elem(self):
        node = self.term()
        while self.tok.kind == "OP" and self.tok.text in "+-":
            op = self.take().text
            node = Bin(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.tok.kind == "OP" and self.tok.text in "*/":
            op = self.take().text
            node = Bin(op, node, self.unary())
        return node

    def unary(self):
        if self.accept("-"):
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.accept("^"):
            return Pow(base, int(self.take("INT").text))
        return base

    def atom(self):
        t = self.tok
        if t.kind == "INT":
            self.i += 1
            return Num(int(t.text))
        if t.kind == "IDENT":
            self.i += 1
            kind = self.symbols.get(t.text, ("",))[0]
            if kind == "elem":
                return Ref(t.text, "elem")
            return Var(t.text)
        if self.accept("("):
            node = self.elem()
            self.take("OP", ")")
            return node
        self.fail("a number, variable or '('")

    # commands
    def command_args(self, verb: str) -> tuple:
        args = []
        for c in VERBS[verb]:
            if c == "f":
                args.append(self.form())
            elif c == "p":
                args.append(self.pf())
            elif c == "v":
                args.append(self.value())
            elif c == "e":
                args.append(self.elem())
                if verb in ("valuation",) and self.accept("at"):
                    args.append(Var(self.take("IDENT").text))
            elif c == "i":
                args.append(int(self.take("INT").text))
            elif c == "w":
                w = self.take("IDENT")
                if w.text not in ("sep", "insep"):
                    self.i -= 1
                    self.fail("sep or insep")
                args.append(w.text)
            elif c == "P":
                args.append(self.pf())
                while self.tok.kind == "IDENT" and self.tok.text not in ("over", "expect"):
                    args.append(self.pf())
            elif c == "B":
                args.append(self.basis())
            elif c == "o":
                if self.tok.kind == "IDENT" and self.tok.text not in ("over", "expect"):
                    args.append(self.pf())
                    args.append(self.pf())
            elif c == "V":
                w = self.take("IDENT")
                if w.text not in VERIFY_TARGETS:
                    self.i -= 1
                    self.fail(" or ".join(VERIFY_TARGETS))
                args.append(w.text)
                while self.tok.kind == "FLAG":
                    f = self.take("FLAG").text
                    if f not in FLAGS:
                        self.i -= 1
                        self.fail("one of " + ", ".join(FLAGS))
                    vals = [int(self.take("INT").text)]
                    while self.accept(","):
                        vals.append(int(self.take("INT").text))
                    args.append((f, tuple(vals)))
        if verb == "springer" and self.accept("at"):
            args.append(Var(self.take("IDENT").text))
        return tuple(args)

    def basis(self) -> tuple:
        self.take("OP", "[")
        vecs = [self.vector()]
        while self.accept(","):
            vecs.append(self.vector())
        self.take("OP", "]")
        return tuple(vecs)

    def vector(self) -> tuple:
        self.take("OP", "(")
        v = self.elems()
        self.take("OP", ")")
        return v

    # name resolution
    def _kind(self, value) -> str:
        if isinstance(value, (PfLit, MoveApp)):
            return "pf"
        if isinstance(value, FormCall):
            return "form"
        if isinstance(value, Ref):
            return value.kind
        return "elem"

    def _check_names(self, node, over, start):
        fname = self._field_name(over)
        if over is None and fname not in self.symbols:
            self.i = start
            self.fail("a declared field")
        allowed = set(self._field_vars(over) if over is not None else self.symbols[fname][1])
        for v in _walk_vars(node):
            if v not in allowed:
                bad = next((t for t in self.toks[start:] if t.text == v), self.toks[start])
                raise ScriptSyntaxError(bad.line, bad.col, f"a variable of the field or a bound name", v)


def _walk_vars(node):
    if isinstance(node, Var):
        yield node.name
    elif isinstance(node, (tuple, list)):
        for x in node:
            yield from _walk_vars(x)
    elif isinstance(node, (Neg, Bin, Pow, PfLit, MoveLit, MoveApp, FormCall)):
        for f in node.__dataclass_fields__:
            yield from _walk_vars(getattr(node, f))


def parse(text: str) -> Script:
    return Parser().parse(text)


# -- printer --------------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def fmt_elem(node, prec: int = 0) -> str:
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, (Var, Ref)):
        return node.name
    if isinstance(node, Neg):
        s = "-" + fmt_elem(node.arg, 3)
        return f"({s})" if prec > 2 else s
    if isinstance(node, Pow):
        return f"{fmt_elem(node.base, 4)}^{node.exp}"
    if isinstance(node, Bin):
        p = _PREC[node.op]
        s = f"{fmt_elem(node.left, p)} {node.op} {fmt_elem(node.right, p + 1)}"
        return f"({s})" if p < prec else s
    raise TypeError(node)


def fmt_value(node) -> str:
    if isinstance(node, Ref):
        return node.name
    if isinstance(node, PfLit):
        body = ", ".join(fmt_elem(s) for s in node.slots)
        if node.as_slot is not None:
            body = f"{body}; {fmt_elem(node.as_slot)}" if node.slots else f"; {fmt_elem(node.as_slot)}"
        return f"pf[{body}]" + (f" | {node.shared}" if node.shared else "")
    if isinstance(node, MoveApp):
        return f"move({fmt_value(node.pf)}, {fmt_move(node.move)})"
    if isinstance(node, FormCall):
        if node.name == "diag":
            inner = ", ".join(fmt_elem(e) for e in node.args)
        elif node.name == "pairs":
            inner = ", ".join(f"({fmt_elem(c)}, {fmt_elem(a)})" for c, a in node.args)
            if node.quasi:
                inner += "; " + ", ".join(fmt_elem(e) for e in node.quasi)
        elif node.name == "theta":
            inner = f"{fmt_value(node.args[0])}, {node.args[1]}"
        elif node.name == "scale":
            inner = f"{fmt_elem(node.args[0])}, {fmt_value(node.args[1])}"
        else:
            inner = ", ".join(fmt_value(a) for a in node.args)
        return f"{node.name}({inner})"
    return fmt_elem(node)


def fmt_move(m: MoveLit) -> str:
    return f"{m.kind}(" + ", ".join(str(a) if isinstance(a, int) else fmt_elem(a) for a in m.args) + ")"


def fmt_field(fe: FieldExpr) -> str:
    if fe.kind in ("Q", "R"):
        return fe.kind
    if fe.kind == "Fp":
        return f"Fp({fe.args[0]})"
    if fe.kind == "F2":
        return "F2(" + ", ".join(fe.args) + ")"
    if fe.kind == "laurent":
        return f"laurent({fmt_field(fe.args[0])}, " + ", ".join(fe.args[1:]) + ")"
    return fe.args[0]


def fmt_arg(a) -> str:
    if isinstance(a, int):
        return str(a)
    if isinstance(a, str):
        return a
    if isinstance(a, tuple) and a and isinstance(a[0], str) and a[0].startswith("--"):
        return f"{a[0]} " + ",".join(map(str, a[1]))
    if isinstance(a, tuple):  # basis
        return "[" + ", ".join("(" + ", ".join(fmt_elem(e) for e in v) + ")" for v in a) + "]"
    if isinstance(a, Var):
        return f"at {a.name}"
    return fmt_value(a)


def fmt_statement(s) -> str:
    if isinstance(s, FieldDecl):
        return f"field {s.name} = {fmt_field(s.expr)}"
    if isinstance(s, Let):
        out = f"let {s.name} = {fmt_value(s.value)}"
        return out + (f" over {fmt_field(s.over)}" if s.over else "")
    parts = [s.verb] + [fmt_arg(a) for a in s.args]
    if s.over:
        parts.append(f"over {fmt_field(s.over)}")
    if s.expects:
        parts.append("expect " + ", ".join(e.kind if e.kind != "value" else f"value={fmt_value(e.value)}" for e in s.expects))
    return " ".join(parts)


def print_script(s: Script) -> str:
    return "".join(fmt_statement(st) + "\n" for st in s.statements)
