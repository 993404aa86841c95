"""Compilation of formulas to modality-free boolean formulas.

Parallel composition is sequentialised over fresh copies of its variables
(split, store, copied subprograms, okchange test, merge); every other program
operator and every atomic assignment is then eliminated by its reduction
axiom.  Intermediate boolean formulas are kept as decision diagrams, which
serve as the canonical normal form.

Copies and store variables carry the reserved ``$`` prefix:

* ``$c<path>_<p>``  value copy of ``p`` for the parallel branch ``path``
* ``$r<path>_<p>``  readability of that copy just after the split
* ``$w<path>_<p>``  writability of that copy just after the split

``path`` is a string over ``1``/``2``; copying a copy extends its path, so
nested parallel compositions never share live copies.
"""
from __future__ import annotations

import re
from typing import Iterable

from .bdd import BDD, TRUE, NodeLimit
from .syntax import (ASSIGNMENTS, AssignFalse, AssignTrue, Atom, Choice,
                     Diamond, EndoTest, ExoTest, MakeReadable, MakeUnreadable,
                     MakeUnwritable, MakeWritable, Node, Not, Or, Par, Prop,
                     Read, Seq, Star, Top, Write, choice_all, conj, conj_all,
                     iff, imp, match_readable, readable_stmt, seq_all, vars_of,
                     writable_stmt, RESERVED_PREFIX)

DEFAULT_BUDGET = 10**6


class ResourceLimit(RuntimeError):
    def __init__(self, message, size=0):
        super().__init__(message)
        self.size = size


# -- copy names -------------------------------------------------------------

_RESERVED_RE = re.compile(r"\$([crw])([12]+)_(.+)\Z")


def parse_reserved(name: str):
    """Split a generated name into (kind, path, base), or None for user names."""
    m = _RESERVED_RE.match(name)
    if m is None:
        return None
    return m.group(1), m.group(2), m.group(3)


def copy_var(name: str, k) -> str:
    k = str(k)
    parsed = parse_reserved(name)
    if parsed is None:
        if name.startswith(RESERVED_PREFIX):
            raise ValueError(f"cannot copy {name!r}")
        return f"$c{k}_{name}"
    kind, path, base = parsed
    if kind != "c":
        raise ValueError(f"store variable {name!r} is never copied")
    return f"$c{path}{k}_{base}"


def read_store(name: str, k) -> str:
    """Store recording readability of ``copy_var(name, k)``."""
    return "$r" + copy_var(name, k)[2:]


def write_store(name: str, k) -> str:
    return "$w" + copy_var(name, k)[2:]


def rename(x, fn):
    """Apply ``fn`` to every variable occurring in ``x``."""
    memo = {}

    def go(n):
        r = memo.get(id(n))
        if r is not None:
            return r[1]
        t = type(n)
        if t is Atom or t is Prop or t is Read or t is Write:
            out = t(fn(n.name))
        elif t in ASSIGNMENTS:
            out = t(fn(n.var))
        elif t is Top:
            out = n
        else:
            out = t(*(go(c) if isinstance(c, Node) else c for c in n._items()))
        memo[id(n)] = (n, out)
        return out

    return go(x)


def copy(x, k):
    """Replace every variable of ``x`` by its copy for branch ``k``."""
    return rename(x, lambda name: copy_var(name, k))


# -- the auxiliary programs of the sequentialisation ------------------------

def _order(names: Iterable[str]) -> list:
    return sorted(set(names))


def _R(p):
    return readable_stmt(p)


def _W(p):
    return writable_stmt(p)


def _set_to(cond, x):
    """x := cond, as (cond? ; +x) U (~cond? ; -x)."""
    return Choice(Seq(ExoTest(cond), AssignTrue(x)), Seq(ExoTest(Not(cond)), AssignFalse(x)))


def prog_split(names: Iterable[str]):
    steps = []
    for p in _order(names):
        c1, c2 = copy_var(p, 1), copy_var(p, 2)
        steps.append(seq_all([
            MakeWritable(c1), MakeWritable(c2),
            Choice(seq_all([ExoTest(Atom(p)), AssignTrue(c1), AssignTrue(c2)]),
                   seq_all([ExoTest(Not(Atom(p))), AssignFalse(c1), AssignFalse(c2)])),
            MakeUnreadable(c1), MakeUnreadable(c2),
            choice_all([
                ExoTest(Not(_R(p))),
                Seq(ExoTest(_W(p)), Choice(MakeWritable(c1), MakeWritable(c2))),
                Seq(ExoTest(conj(Not(_W(p)), _R(p))),
                    choice_all([MakeReadable(c1), MakeReadable(c2),
                                Seq(MakeReadable(c1), MakeReadable(c2))])),
            ]),
        ]))
    return seq_all(steps)


def prog_store(names: Iterable[str]):
    steps = []
    for p in _order(names):
        for k in (1, 2):
            c, rs, ws = copy_var(p, k), read_store(p, k), write_store(p, k)
            steps.append(seq_all([MakeWritable(rs), MakeWritable(ws),
                                  _set_to(_R(c), rs), _set_to(_W(c), ws)]))
    return seq_all(steps)


def fml_okchange(names: Iterable[str]):
    parts = []
    for p in _order(names):
        for k in (1, 2):
            c, rs, ws = copy_var(p, k), read_store(p, k), write_store(p, k)
            parts.append(conj_all([
                iff(Atom(rs), _R(c)),
                iff(Atom(ws), _W(c)),
                imp(Not(Atom(ws)), iff(Atom(p), Atom(c))),
            ]))
    return conj_all(parts)


def prog_merge(names: Iterable[str]):
    steps = []
    for p in _order(names):
        c1, c2 = copy_var(p, 1), copy_var(p, 2)
        steps.append(choice_all([
            ExoTest(Not(_W(p))),
            Seq(ExoTest(Or(conj(_W(c1), Atom(c1)), conj(_W(c2), Atom(c2)))), AssignTrue(p)),
            Seq(ExoTest(Or(conj(_W(c1), Not(Atom(c1))), conj(_W(c2), Not(Atom(c2))))),
                AssignFalse(p)),
        ]))
        for k in (1, 2):
            c, rs, ws = copy_var(p, k), read_store(p, k), write_store(p, k)
            steps.append(seq_all([
                AssignFalse(rs), AssignFalse(ws), MakeWritable(c), AssignFalse(c),
                MakeUnreadable(rs), MakeUnreadable(ws), MakeUnreadable(c),
            ]))
    return seq_all(steps)


def assigned_vars(x) -> frozenset:
    out = set()
    stack = [x]
    while stack:
        n = stack.pop()
        if type(n) is AssignTrue or type(n) is AssignFalse:
            out.add(n.var)
        elif isinstance(n, Node):
            stack.extend(c for c in n._items() if isinstance(c, Node))
    return frozenset(out)


def prog_flatten(left, right, restrict_to_assigned: bool = False):
    """Sequential emulation of ``left || right``.

    ``restrict_to_assigned`` limits the copied variables to those assigned
    by +p/-p; this shortening is not sound when a subprogram reads a
    writable variable it never assigns, so it is off by default.
    """
    names = vars_of(Par(left, right))
    if restrict_to_assigned:
        names = assigned_vars(Par(left, right))
        fn1 = lambda n: copy_var(n, 1) if n in names else n  # noqa: E731
        fn2 = lambda n: copy_var(n, 2) if n in names else n  # noqa: E731
        left1, right2 = rename(left, fn1), rename(right, fn2)
    else:
        left1, right2 = copy(left, 1), copy(right, 2)
    return seq_all([prog_split(names), prog_store(names), left1, right2,
                    ExoTest(fml_okchange(names)), prog_merge(names)])


def toggle_unreadable(names: Iterable[str]):
    """Program reaching exactly the models read-indistinguishable from the
    current one, varying the given variables.

    An unreadable variable is not writable, so it is made writable for the
    assignment and then made unreadable again, which restores both sets.
    """
    steps = []
    for p in _order(names):
        steps.append(Choice(
            ExoTest(_R(p)),
            seq_all([ExoTest(Not(_R(p))), MakeWritable(p),
                     Choice(AssignTrue(p), AssignFalse(p)), MakeUnreadable(p)])))
    return seq_all(steps)


def toggle_unreadable_literal(names: Iterable[str]):
    """The toggle program without the writability detour (for comparison)."""
    steps = []
    for p in _order(names):
        steps.append(Choice(
            ExoTest(_R(p)),
            Seq(ExoTest(Not(_R(p))), Choice(AssignTrue(p), AssignFalse(p)))))
    return seq_all(steps)


def star_bound(prog, formula) -> int:
    """6^|P(prog) u P(formula)|: one more than the number of steps of any
    shortest path between models over those variables needs."""
    return 6 ** len(vars_of(prog) | vars_of(formula))


def star_bound_literal(formula) -> int:
    return 2 ** len(vars_of(formula))


# -- reduction --------------------------------------------------------------

_KIND_RANK = {Write: 0, Read: 1, Prop: 2}


def atom_key(atom):
    """Sort key clustering all atoms about one user variable together."""
    name = atom.name
    parsed = parse_reserved(name)
    if parsed is None:
        return (name, 0, "", "", _KIND_RANK[type(atom)])
    kind, path, base = parsed
    return (base, 1, path, kind, _KIND_RANK[type(atom)])


def _where(pos: str) -> str:
    # positions are dotted child indices; "f" marks a flattened parallel
    # composition and "t" the toggle program of an endogenous test
    return pos.lstrip(".") or "root"


_ATOMIC_ID = {
    AssignTrue: "+p", AssignFalse: "-p", MakeReadable: "+R", MakeUnreadable: "-R",
    MakeWritable: "+W", MakeUnwritable: "-W",
}


class Reducer:
    """Applies the reduction axioms innermost-first.

    One instance keeps its diagram store and memo tables, so reducing several
    formulas with the same instance shares work.
    """

    def __init__(self, budget: int = DEFAULT_BUDGET, trace=None,
                 restrict_to_assigned: bool = False, star_bound_fn=None):
        self.bdd = BDD(atom_key, limit=budget)
        self.budget = budget
        self.trace = trace
        self.restrict_to_assigned = restrict_to_assigned
        self.star_bound_fn = star_bound_fn
        self._red = {}
        self._dia = {}

    def _log(self, axiom, pos, before, after):
        if self.trace is not None:
            b = self.bdd
            self.trace(f"{axiom} @{_where(pos)} in={b.size(before)} out={b.size(after)}")

    def formula(self, f, pos=""):
        try:
            return self._formula(f, pos)
        except NodeLimit as exc:
            raise ResourceLimit(
                f"reduction exceeded the budget of {self.budget} diagram nodes",
                size=exc.args[0]) from None

    def _formula(self, f, pos):
        out = self._red.get(f)
        if out is not None:
            return out
        b = self.bdd
        t = type(f)
        if t is Atom or t is Prop:
            out = b.var(Prop(f.name))
        elif t is Read or t is Write:
            out = b.var(f)
        elif t is Top:
            out = TRUE
        elif t is Not:
            out = b.neg(self._formula(f.arg, pos + ".0"))
        elif t is Or:
            name = match_readable(f)
            if name is not None:
                out = b.var(Read(name))
            else:
                out = b.disj(self._formula(f.left, pos + ".0"),
                             self._formula(f.right, pos + ".1"))
        elif t is Diamond:
            body = self._formula(f.body, pos + ".1")
            out = self._diamond(f.prog, body, pos + ".0")
        else:
            raise TypeError(f"not a formula: {f!r}")
        self._red[f] = out
        return out

    def diamond(self, prog, body: int, pos=""):
        try:
            return self._diamond(prog, body, pos)
        except NodeLimit as exc:
            raise ResourceLimit(
                f"reduction exceeded the budget of {self.budget} diagram nodes",
                size=exc.args[0]) from None

    def _diamond(self, prog, x: int, pos):
        key = (prog, x)
        out = self._dia.get(key)
        if out is not None:
            return out
        b = self.bdd
        t = type(prog)
        if t in _ATOMIC_ID:
            p = prog.var
            if t is AssignTrue:
                out = b.conj(b.var(Write(p)), b.restrict(x, {Prop(p): True}))
            elif t is AssignFalse:
                out = b.conj(b.var(Write(p)), b.restrict(x, {Prop(p): False}))
            elif t is MakeReadable:
                out = b.restrict(x, {Read(p): True})
            elif t is MakeUnreadable:
                out = b.restrict(x, {Read(p): False, Write(p): False})
            elif t is MakeWritable:
                out = b.restrict(x, {Read(p): True, Write(p): True})
            else:
                out = b.restrict(x, {Write(p): False})
            self._log(f"assign[{_ATOMIC_ID[t]}]", pos, x, out)
        elif t is ExoTest:
            out = b.conj(x, self._formula(prog.cond, pos + ".0"))
            self._log("prog[?]", pos, x, out)
        elif t is EndoTest:
            cond = self._formula(prog.cond, pos + ".0")
            toggles = toggle_unreadable(vars_of(prog.cond))
            everywhere = b.neg(self._diamond(toggles, b.neg(cond), pos + ".t"))
            out = b.conj(x, everywhere)
            self._log("prog[?!]", pos, x, out)
        elif t is Seq:
            out = self._diamond(prog.first,
                                self._diamond(prog.second, x, pos + ".1"), pos + ".0")
            self._log("prog[;]", pos, x, out)
        elif t is Choice:
            out = b.disj(self._diamond(prog.left, x, pos + ".0"),
                         self._diamond(prog.right, x, pos + ".1"))
            self._log("prog[U]", pos, x, out)
        elif t is Star:
            out = self._star(prog, x, pos)
        elif t is Par:
            flat = prog_flatten(prog.left, prog.right, self.restrict_to_assigned)
            out = self._diamond(flat, x, pos + ".f")
            self._log("prog[||]", pos, x, out)
        else:
            raise TypeError(f"not a program: {prog!r}")
        self._dia[key] = out
        return out

    def _star(self, prog, x, pos):
        b = self.bdd
        body_vars = {a.name for a in b.support(x)}
        if self.star_bound_fn is None:
            bound = 6 ** len(vars_of(prog.body) | body_vars)
        else:
            bound = self.star_bound_fn(prog.body, body_vars)
        # <body^{<=n}> x for n = 0..bound; once two stages coincide the
        # sequence is constant, so stopping early gives the same diagram
        acc = x
        steps = 0
        while steps < bound:
            nxt = b.disj(x, self._diamond(prog.body, acc, pos + ".0"))
            steps += 1
            if nxt == acc:
                break
            acc = nxt
        if self.trace is not None:
            self.trace(f"prog[*] @{_where(pos)} bound={bound} unrolled={steps} "
                       f"in={b.size(x)} out={b.size(acc)}")
        return acc

    def to_boolean(self, node: int):
        return self.bdd.to_formula(node)


def reduce(f, budget: int = DEFAULT_BUDGET, trace=None, restrict_to_assigned=False):
    """Equivalent boolean combination of p, R(p) and W(p) atoms."""
    r = Reducer(budget=budget, trace=trace, restrict_to_assigned=restrict_to_assigned)
    node = r.formula(f)
    out = r.to_boolean(node)
    leftover = [n for n in vars_of(out) if n.startswith(RESERVED_PREFIX)]
    if leftover:
        raise AssertionError(f"generated variables survived reduction: {leftover}")
    return out


def to_formula(boolean):
    """Read a reduced formula back as a formula, expanding R(p) and W(p)."""
    t = type(boolean)
    if t is Prop:
        return Atom(boolean.name)
    if t is Read:
        return readable_stmt(boolean.name)
    if t is Write:
        return writable_stmt(boolean.name)
    if t is Top or t is Atom:
        return boolean
    if t is Not:
        return Not(to_formula(boolean.arg))
    if t is Or:
        return Or(to_formula(boolean.left), to_formula(boolean.right))
    raise TypeError(f"not a boolean formula: {boolean!r}")


def is_boolean(f) -> bool:
    stack = [f]
    while stack:
        n = stack.pop()
        t = type(n)
        if t is Not:
            stack.append(n.arg)
        elif t is Or:
            stack.append(n.left)
            stack.append(n.right)
        elif t not in (Top, Prop, Read, Write, Atom):
            return False
    return True
