"""Abstract syntax, concrete grammar and printer for formulas and programs.

Derived connectives (false, &, ->, <->, [pi]) and the readability /
writability statements R(p), W(p) are parser sugar: they are expanded to the
primitive nodes on the way in and recognised again by the printer.

Grammar (EBNF, lowest precedence first)::

    formula  ::= imp ('<->' imp)*
    imp      ::= or ('->' imp)?
    or       ::= and ('|' and)*
    and      ::= unary ('&' unary)*
    unary    ::= '~' unary | '<' program '>' unary | '[' program ']' unary
               | 'true' | 'false' | VAR | 'R(' VAR ')' | 'W(' VAR ')'
               | '(' formula ')'
    program  ::= choice ('||' choice)*
    choice   ::= seq ('U' seq)*
    seq      ::= postfix (';' postfix)*
    postfix  ::= primary ('*' | '^' NUM | '^' '<=' NUM)*
    primary  ::= ('+' | '-') (VAR | 'R(' VAR ')' | 'W(' VAR ')')
               | formula '?' | formula '?!' | '(' program ')'

All binary operators are left-associative except '->' and '<->'.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, fields
from typing import Iterable, Union

RESERVED_PREFIX = "$"
KEYWORDS = frozenset({"true", "false", "U"})

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", offset: int = 0):
        self.line = text.count("\n", 0, offset) + 1
        self.column = offset - (text.rfind("\n", 0, offset) + 1) + 1
        self.message = message
        super().__init__(f"line {self.line}, column {self.column}: {message}")


class Node:
    """Immutable AST node with structural equality and a cached hash."""

    _field_names: tuple = ()

    def _items(self):
        return tuple(getattr(self, f) for f in self._field_names)

    def __hash__(self):
        d = self.__dict__
        h = d.get("_hash")
        if h is None:
            h = hash((type(self).__name__,) + self._items())
            d["_hash"] = h
        return h

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other) or hash(self) != hash(other):
            return False
        return self._items() == other._items()

    def __ne__(self, other):
        return not self == other

    def __str__(self):
        return pretty_print(self)


def _node(cls):
    cls = dataclass(frozen=True, eq=False, repr=True)(cls)
    cls._field_names = tuple(f.name for f in fields(cls))
    return cls


# -- formulas ---------------------------------------------------------------

@_node
class Atom(Node):
    name: str


@_node
class Top(Node):
    pass


@_node
class Not(Node):
    arg: "Formula"


@_node
class Or(Node):
    left: "Formula"
    right: "Formula"


@_node
class Diamond(Node):
    prog: "Program"
    body: "Formula"


# -- programs ---------------------------------------------------------------

@_node
class AssignTrue(Node):
    var: str


@_node
class AssignFalse(Node):
    var: str


@_node
class MakeReadable(Node):
    var: str


@_node
class MakeUnreadable(Node):
    var: str


@_node
class MakeWritable(Node):
    var: str


@_node
class MakeUnwritable(Node):
    var: str


@_node
class ExoTest(Node):
    cond: "Formula"


@_node
class EndoTest(Node):
    cond: "Formula"


@_node
class Seq(Node):
    first: "Program"
    second: "Program"


@_node
class Choice(Node):
    left: "Program"
    right: "Program"


@_node
class Star(Node):
    body: "Program"


@_node
class Par(Node):
    left: "Program"
    right: "Program"


# -- atomic formulas of the reduced / DL-PA languages ------------------------

@_node
class Prop(Node):
    name: str


@_node
class Read(Node):
    name: str


@_node
class Write(Node):
    name: str


Formula = Union[Atom, Top, Not, Or, Diamond]
Program = Union[AssignTrue, AssignFalse, MakeReadable, MakeUnreadable,
                MakeWritable, MakeUnwritable, ExoTest, EndoTest, Seq, Choice,
                Star, Par]
AtomicFormula = Union[Prop, Read, Write]

ASSIGNMENTS = (AssignTrue, AssignFalse, MakeReadable, MakeUnreadable,
               MakeWritable, MakeUnwritable)
ATOMS = (Prop, Read, Write)

TOP = Top()
BOT = Not(TOP)


# -- sugar ------------------------------------------------------------------

def conj(a, b):
    return Not(Or(Not(a), Not(b)))


def imp(a, b):
    return Or(Not(a), b)


def iff(a, b):
    return conj(imp(a, b), imp(b, a))


def box(prog, body):
    return Not(Diamond(prog, Not(body)))


def conj_all(items: Iterable) -> "Formula":
    out = None
    for f in items:
        out = f if out is None else conj(out, f)
    return TOP if out is None else out


def disj_all(items: Iterable) -> "Formula":
    out = None
    for f in items:
        out = f if out is None else Or(out, f)
    return BOT if out is None else out


def seq_all(items: Iterable) -> "Program":
    """Left-nested sequence; the empty sequence is the trivial test."""
    out = None
    for p in items:
        out = p if out is None else Seq(out, p)
    return ExoTest(TOP) if out is None else out


def choice_all(items: Iterable) -> "Program":
    out = None
    for p in items:
        out = p if out is None else Choice(out, p)
    if out is None:
        raise ValueError("empty choice")
    return out


def power(prog, n: int):
    """``prog^n``: n-fold sequence terminated by the trivial test."""
    if n < 0:
        raise ValueError("exponent must be non-negative")
    out = ExoTest(TOP)
    for _ in range(n):
        out = Seq(prog, out)
    return out


def power_upto(prog, n: int):
    """``prog^{<=n}``: at most n repetitions."""
    if n < 0:
        raise ValueError("exponent must be non-negative")
    out = ExoTest(TOP)
    for _ in range(n):
        out = Choice(ExoTest(TOP), Seq(prog, out))
    return out


def writable_stmt(p: str):
    return Diamond(AssignTrue(p), TOP)


def readable_stmt(p: str):
    return Or(Diamond(EndoTest(Atom(p)), TOP),
              Diamond(EndoTest(Not(Atom(p))), TOP))


def match_writable(f):
    if type(f) is Diamond and f.body == TOP and type(f.prog) is AssignTrue:
        return f.prog.var
    return None


def match_readable(f):
    if type(f) is not Or:
        return None
    a, b = f.left, f.right
    if (type(a) is Diamond and type(b) is Diamond and a.body == TOP
            and b.body == TOP and type(a.prog) is EndoTest
            and type(b.prog) is EndoTest and type(a.prog.cond) is Atom
            and b.prog.cond == Not(a.prog.cond)):
        return a.prog.cond.name
    return None


# -- variables --------------------------------------------------------------

def vars_of_formula(f) -> frozenset:
    out: set = set()
    _collect(f, out)
    return frozenset(out)


def vars_of_program(p) -> frozenset:
    out: set = set()
    _collect(p, out)
    return frozenset(out)


def vars_of(x) -> frozenset:
    out: set = set()
    _collect(x, out)
    return frozenset(out)


def _collect(x, out):
    stack = [x]
    while stack:
        n = stack.pop()
        t = type(n)
        if t is Atom or t in ATOMS:
            out.add(n.name)
        elif t in ASSIGNMENTS:
            out.add(n.var)
        elif t is Top:
            pass
        elif t is Not:
            stack.append(n.arg)
        elif t is Diamond:
            stack.append(n.prog)
            stack.append(n.body)
        elif t is ExoTest or t is EndoTest:
            stack.append(n.cond)
        elif t is Star:
            stack.append(n.body)
        else:
            stack.extend(n._items())


def size(x) -> int:
    """Number of AST nodes."""
    count = 0
    stack = [x]
    while stack:
        n = stack.pop()
        count += 1
        for item in n._items():
            if isinstance(item, Node):
                stack.append(item)
    return count


def check_name(name: str, allow_reserved: bool = False) -> str:
    body = name
    if name.startswith(RESERVED_PREFIX):
        if not allow_reserved:
            raise ValueError(f"variable name {name!r} uses the reserved prefix")
        body = name[1:]
        return name if body else _bad(name)
    if not _NAME_RE.match(body) or body in KEYWORDS:
        _bad(name)
    return name


def _bad(name):
    raise ValueError(f"invalid variable name {name!r}")


# -- tokenizer --------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<rw>[RW]\()
  | (?P<name>\$[A-Za-z0-9_]+|[A-Za-z][A-Za-z0-9_]*)
  | (?P<num>[0-9]+)
  | (?P<op><->|->|\|\||\?!|<=|[?<>\[\]()~&|;*+\-^])
""", re.VERBOSE)


class _Tok:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind, text, pos):
        self.kind, self.text, self.pos = kind, text, pos

    def __repr__(self):
        return f"{self.kind}:{self.text}"


def _tokenize(text: str):
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            val = m.group()
            if kind == "name":
                if val in KEYWORDS:
                    kind = val
            elif kind == "op" or kind == "rw":
                kind = val
            toks.append(_Tok(kind, val, pos))
        pos = m.end()
    toks.append(_Tok("eof", "", n))
    return toks


# -- parser -----------------------------------------------------------------

class _Fail(Exception):
    pass


class _Parser:
    def __init__(self, text, allow_reserved):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.allow_reserved = allow_reserved
        self.furthest = (0, "unexpected input")

    @property
    def tok(self):
        return self.toks[self.i]

    def fail(self, msg):
        pos = self.tok.pos
        if pos >= self.furthest[0]:
            self.furthest = (pos, msg)
        raise _Fail()

    def expect(self, kind):
        if self.tok.kind != kind:
            self.fail(f"expected {kind!r}, found {self.tok.text or 'end of input'!r}")
        self.i += 1

    def accept(self, kind):
        if self.tok.kind == kind:
            self.i += 1
            return True
        return False

    def var(self):
        t = self.tok
        if t.kind != "name":
            self.fail(f"expected a variable, found {t.text or 'end of input'!r}")
        if t.text.startswith(RESERVED_PREFIX) and not self.allow_reserved:
            raise ParseError(f"variable name {t.text!r} uses the reserved prefix '$'",
                             self.text, t.pos)
        self.i += 1
        return t.text

    # formulas
    def formula(self):
        left = self.imp()
        while self.accept("<->"):
            left = iff(left, self.imp())
        return left

    def imp(self):
        left = self.or_()
        if self.accept("->"):
            return imp(left, self.imp())
        return left

    def or_(self):
        left = self.and_()
        while self.accept("|"):
            left = Or(left, self.and_())
        return left

    def and_(self):
        left = self.unary()
        while self.accept("&"):
            left = conj(left, self.unary())
        return left

    def unary(self):
        k = self.tok.kind
        if k == "~":
            self.i += 1
            return Not(self.unary())
        if k == "<":
            self.i += 1
            prog = self.program()
            self.expect(">")
            return Diamond(prog, self.unary())
        if k == "[":
            self.i += 1
            prog = self.program()
            self.expect("]")
            return box(prog, self.unary())
        if k == "true":
            self.i += 1
            return TOP
        if k == "false":
            self.i += 1
            return BOT
        if k == "name":
            return Atom(self.var())
        if k == "R(" or k == "W(":
            self.i += 1
            v = self.var()
            self.expect(")")
            return readable_stmt(v) if k == "R(" else writable_stmt(v)
        if k == "(":
            self.i += 1
            f = self.formula()
            self.expect(")")
            return f
        self.fail(f"expected a formula, found {self.tok.text or 'end of input'!r}")

    # programs
    def program(self):
        left = self.choice()
        while self.accept("||"):
            left = Par(left, self.choice())
        return left

    def choice(self):
        left = self.seq()
        while self.accept("U"):
            left = Choice(left, self.seq())
        return left

    def seq(self):
        left = self.postfix()
        while self.accept(";"):
            left = Seq(left, self.postfix())
        return left

    def postfix(self):
        p = self.primary()
        while True:
            if self.accept("*"):
                p = Star(p)
            elif self.accept("^"):
                upto = self.accept("<=")
                t = self.tok
                if t.kind != "num":
                    self.fail("expected a non-negative integer exponent")
                self.i += 1
                n = int(t.text)
                p = power_upto(p, n) if upto else power(p, n)
            else:
                return p

    def primary(self):
        k = self.tok.kind
        if k == "+" or k == "-":
            self.i += 1
            pos = k == "+"
            if self.tok.kind in ("R(", "W("):
                kind = self.tok.kind
                self.i += 1
                v = self.var()
                self.expect(")")
                if kind == "R(":
                    return MakeReadable(v) if pos else MakeUnreadable(v)
                return MakeWritable(v) if pos else MakeUnwritable(v)
            v = self.var()
            return AssignTrue(v) if pos else AssignFalse(v)
        start = self.i
        try:
            f = self.formula()
            if self.accept("?"):
                return ExoTest(f)
            if self.accept("?!"):
                return EndoTest(f)
            self.fail("expected '?' or '?!' after test formula")
        except _Fail:
            self.i = start
            if k != "(":
                raise
        self.i += 1
        p = self.program()
        self.expect(")")
        return p


def _run(text, rule, allow_reserved):
    p = _Parser(text, allow_reserved)
    try:
        out = getattr(p, rule)()
        if p.tok.kind != "eof":
            p.fail(f"unexpected {p.tok.text!r}")
    except _Fail:
        pos, msg = p.furthest
        raise ParseError(msg, text, pos) from None
    return out


def parse_formula(text: str, allow_reserved: bool = False):
    return _run(text, "formula", allow_reserved)


def parse_program(text: str, allow_reserved: bool = False):
    return _run(text, "program", allow_reserved)


# -- printer ----------------------------------------------------------------

# formula levels: 1 <->, 2 ->, 3 |, 4 &, 5 unary
# program levels: 1 ||, 2 U, 3 ;, 4 postfix/primary

def _match_and(f):
    if type(f) is Not and type(f.arg) is Or:
        a, b = f.arg.left, f.arg.right
        if type(a) is Not and type(b) is Not:
            return a.arg, b.arg
    return None


def _atom_text(n, dlpa):
    if type(n) is Prop or type(n) is Atom:
        return n.name
    if dlpa:
        return ("r_" if type(n) is Read else "w_") + n.name
    return ("R(" if type(n) is Read else "W(") + n.name + ")"


def _pf(f, level, dlpa):
    t = type(f)
    if t is Top:
        return "true"
    if t is Atom or t in ATOMS:
        return _atom_text(f, dlpa)
    if not dlpa:
        v = match_readable(f)
        if v is not None:
            return f"R({v})"
        v = match_writable(f)
        if v is not None:
            return f"W({v})"
    if t is Not:
        a = f.arg
        if a == TOP:
            return "false"
        if type(a) is Diamond and type(a.body) is Not:
            return f"[{_pp(a.prog, 1, dlpa)}] {_pf(a.body.arg, 5, dlpa)}"
        pair = _match_and(f)
        if pair is not None:
            s = f"{_pf(pair[0], 4, dlpa)} & {_pf(pair[1], 5, dlpa)}"
            return s if level <= 4 else f"({s})"
        return "~" + _pf(a, 5, dlpa)
    if t is Or:
        if type(f.left) is Not:
            s = f"{_pf(f.left.arg, 3, dlpa)} -> {_pf(f.right, 2, dlpa)}"
            return s if level <= 2 else f"({s})"
        s = f"{_pf(f.left, 3, dlpa)} | {_pf(f.right, 4, dlpa)}"
        return s if level <= 3 else f"({s})"
    if t is Diamond:
        return f"<{_pp(f.prog, 1, dlpa)}> {_pf(f.body, 5, dlpa)}"
    raise TypeError(f"not a formula: {f!r}")


_ASSIGN_TEXT = {
    AssignTrue: "+{}", AssignFalse: "-{}",
    MakeReadable: "+R({})", MakeUnreadable: "-R({})",
    MakeWritable: "+W({})", MakeUnwritable: "-W({})",
}


def _pp(p, level, dlpa):
    t = type(p)
    fmt = _ASSIGN_TEXT.get(t)
    if fmt is not None:
        return fmt.format(p.var)
    if t is ExoTest or t is EndoTest:
        mark = "?" if t is ExoTest else "?!"
        return f"{_pf(p.cond, 5, dlpa)} {mark}"
    if t is Star:
        return f"({_pp(p.body, 1, dlpa)})*"
    if t is Seq:
        s = f"{_pp(p.first, 3, dlpa)} ; {_pp(p.second, 4, dlpa)}"
        return s if level <= 3 else f"({s})"
    if t is Choice:
        s = f"{_pp(p.left, 2, dlpa)} U {_pp(p.right, 3, dlpa)}"
        return s if level <= 2 else f"({s})"
    if t is Par:
        s = f"{_pp(p.left, 1, dlpa)} || {_pp(p.right, 2, dlpa)}"
        return s if level <= 1 else f"({s})"
    # DL-PA assignment of an atomic formula, see dlpa.Assign
    text = getattr(p, "dlpa_text", None)
    if text is not None:
        return text()
    raise TypeError(f"not a program: {p!r}")


_PROGRAM_TYPES = ASSIGNMENTS + (ExoTest, EndoTest, Seq, Choice, Star, Par)


def pretty_print(x, dlpa: bool = False) -> str:
    """Render a formula or program in the concrete grammar.

    With ``dlpa=True`` read/write atoms print as ``r_p``/``w_p`` and no
    abbreviation is folded back.
    """
    if type(x) in _PROGRAM_TYPES or hasattr(x, "dlpa_text"):
        return _pp(x, 1, dlpa)
    return _pf(x, 1, dlpa)
