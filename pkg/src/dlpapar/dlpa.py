"""Plain DL-PA: valuation semantics, translation from DLPA||, satisfiability.

In the target language readability and writability are ordinary atoms
``r_p``/``w_p`` (``Read(p)``/``Write(p)`` nodes) and programs only assign
atoms unconditionally.  A valuation is a frozenset of ``Prop``/``Read``/
``Write`` nodes.
"""
from __future__ import annotations

import itertools
from typing import Iterable

from .models import Model, UniverseTooSmall
from .rewrite import (DEFAULT_BUDGET, ResourceLimit, copy, copy_var, read_store,
                      write_store, _order)
from .syntax import (ATOMS, AssignFalse, AssignTrue, Atom, Choice, Diamond,
                     EndoTest, ExoTest, MakeReadable, MakeUnreadable,
                     MakeUnwritable, MakeWritable, Node, Not, Or, Par, Prop, Read,
                     Seq, Star, Top, Write, _atom_text, _node, box, choice_all,
                     conj, conj_all, iff, imp, seq_all, vars_of)

ENUMERATION_LIMIT = 20


@_node
class SetAtom(Node):
    atom: Node

    def dlpa_text(self):
        return "+" + _atom_text(self.atom, True)


@_node
class ClearAtom(Node):
    atom: Node

    def dlpa_text(self):
        return "-" + _atom_text(self.atom, True)


def assign_to(cond, atom):
    """atom := cond."""
    return Choice(Seq(ExoTest(cond), SetAtom(atom)), Seq(ExoTest(Not(cond)), ClearAtom(atom)))


# -- the auxiliary programs, DL-PA version ------------------------------------

def _pair(p):
    return copy_var(p, 1), copy_var(p, 2)


def dlpa_split(names: Iterable[str]):
    steps = []
    for p in _order(names):
        c1, c2 = _pair(p)
        r1, w1, r2, w2 = Read(c1), Write(c1), Read(c2), Write(c2)
        steps.append(seq_all([
            Choice(seq_all([ExoTest(Prop(p)), SetAtom(Prop(c1)), SetAtom(Prop(c2))]),
                   seq_all([ExoTest(Not(Prop(p))), ClearAtom(Prop(c1)), ClearAtom(Prop(c2))])),
            ClearAtom(w1), ClearAtom(r1), ClearAtom(w2), ClearAtom(r2),
            choice_all([
                ExoTest(Not(Read(p))),
                Seq(ExoTest(Write(p)), Choice(Seq(SetAtom(r1), SetAtom(w1)),
                                              Seq(SetAtom(r2), SetAtom(w2)))),
                Seq(ExoTest(conj(Not(Write(p)), Read(p))),
                    choice_all([SetAtom(r1), SetAtom(r2), Seq(SetAtom(r1), SetAtom(r2))])),
            ]),
        ]))
    return seq_all(steps)


def dlpa_store(names: Iterable[str]):
    steps = []
    for p in _order(names):
        for k in (1, 2):
            c = copy_var(p, k)
            steps.append(Seq(assign_to(Read(c), Prop(read_store(p, k))),
                             assign_to(Write(c), Prop(write_store(p, k)))))
    return seq_all(steps)


def dlpa_okchange(names: Iterable[str]):
    parts = []
    for p in _order(names):
        for k in (1, 2):
            c = copy_var(p, k)
            rs, ws = Prop(read_store(p, k)), Prop(write_store(p, k))
            parts.append(conj_all([iff(rs, Read(c)), iff(ws, Write(c)),
                                   imp(Not(ws), iff(Prop(p), Prop(c)))]))
    return conj_all(parts)


def dlpa_merge(names: Iterable[str]):
    steps = []
    for p in _order(names):
        c1, c2 = _pair(p)
        steps.append(choice_all([
            ExoTest(Not(Write(p))),
            Seq(ExoTest(Or(conj(Write(c1), Prop(c1)), conj(Write(c2), Prop(c2)))),
                SetAtom(Prop(p))),
            Seq(ExoTest(Or(conj(Write(c1), Not(Prop(c1))), conj(Write(c2), Not(Prop(c2))))),
                ClearAtom(Prop(p))),
        ]))
        for k in (1, 2):
            c = copy_var(p, k)
            steps.append(seq_all([
                ClearAtom(Prop(read_store(p, k))), ClearAtom(Prop(write_store(p, k))),
                ClearAtom(Prop(c)), ClearAtom(Write(c)), ClearAtom(Read(c)),
            ]))
    return seq_all(steps)


def dlpa_flatten(left, right):
    names = vars_of(Par(left, right))
    return seq_all([
        dlpa_split(names), dlpa_store(names),
        translate_program(copy(left, 1)), translate_program(copy(right, 2)),
        ExoTest(dlpa_okchange(names)), dlpa_merge(names),
    ])


# -- the translation ----------------------------------------------------------

def _endo(cond):
    toggles = seq_all(
        Choice(ExoTest(Read(p)),
               Seq(ExoTest(Not(Read(p))), Choice(SetAtom(Prop(p)), ClearAtom(Prop(p)))))
        for p in _order(vars_of(cond)))
    return ExoTest(box(toggles, translate_formula(cond)))


def translate_program(p):
    t = type(p)
    if t is AssignTrue or t is AssignFalse:
        cls = SetAtom if t is AssignTrue else ClearAtom
        return Seq(ExoTest(Write(p.var)), cls(Prop(p.var)))
    if t is MakeReadable:
        return SetAtom(Read(p.var))
    if t is MakeUnreadable:
        return Seq(ClearAtom(Write(p.var)), ClearAtom(Read(p.var)))
    if t is MakeWritable:
        return Seq(SetAtom(Read(p.var)), SetAtom(Write(p.var)))
    if t is MakeUnwritable:
        return ClearAtom(Write(p.var))
    if t is ExoTest:
        return ExoTest(translate_formula(p.cond))
    if t is EndoTest:
        return _endo(p.cond)
    if t is Seq:
        return Seq(translate_program(p.first), translate_program(p.second))
    if t is Choice:
        return Choice(translate_program(p.left), translate_program(p.right))
    if t is Star:
        return Star(translate_program(p.body))
    if t is Par:
        return dlpa_flatten(p.left, p.right)
    if t is SetAtom or t is ClearAtom:
        return p
    raise TypeError(f"not a program: {p!r}")


def translate_formula(f):
    t = type(f)
    if t is Atom:
        return Prop(f.name)
    if t is Top or t in ATOMS:
        return f
    if t is Not:
        return Not(translate_formula(f.arg))
    if t is Or:
        return Or(translate_formula(f.left), translate_formula(f.right))
    if t is Diamond:
        return Diamond(translate_program(f.prog), translate_formula(f.body))
    raise TypeError(f"not a formula: {f!r}")


def translate(x):
    if type(x) in (Atom, Top, Not, Or, Diamond) or type(x) in ATOMS:
        return translate_formula(x)
    return translate_program(x)


def atoms_of(x) -> frozenset:
    """Atoms of a DL-PA formula or program."""
    out = set()
    stack = [x]
    while stack:
        n = stack.pop()
        if type(n) in ATOMS:
            out.add(n)
        elif isinstance(n, Node):
            stack.extend(c for c in n._items() if isinstance(c, Node))
    return frozenset(out)


def atoms_for(names: Iterable[str]) -> list:
    """Prop, Read and Write atoms of each name, grouped per name in sorted order."""
    out = []
    for p in _order(names):
        out += [Prop(p), Read(p), Write(p)]
    return out


def v_plus(m: Model) -> frozenset:
    return frozenset([Prop(p) for p in m.v] + [Read(p) for p in m.rd]
                     + [Write(p) for p in m.wr])


def from_valuation(val: Iterable) -> Model:
    """Inverse of v_plus on valuations satisfying the inclusion constraint."""
    val = list(val)
    return Model(frozenset(a.name for a in val if type(a) is Read),
                 frozenset(a.name for a in val if type(a) is Write),
                 frozenset(a.name for a in val if type(a) is Prop))


# -- semantics ------------------------------------------------------------------

class DlpaEvaluator:
    """Valuations are bitmasks over a fixed atom list."""

    def __init__(self, atoms: Iterable, budget: int = DEFAULT_BUDGET):
        self.atoms = tuple(sorted(set(atoms), key=lambda a: (a.name, type(a).__name__)))
        self.index = {a: i for i, a in enumerate(self.atoms)}
        self.budget = budget
        self._sat = {}
        self._succ = {}

    def check(self, x):
        missing = atoms_of(x) - set(self.atoms)
        if missing:
            raise UniverseTooSmall(
                f"atoms {sorted(_atom_text(a, True) for a in missing)} are not in the atom set")

    def encode(self, val) -> int:
        out = 0
        for a in val:
            try:
                out |= 1 << self.index[a]
            except KeyError:
                raise UniverseTooSmall(f"atom {_atom_text(a, True)} is not in the atom set") from None
        return out

    def decode(self, state: int) -> frozenset:
        return frozenset(a for i, a in enumerate(self.atoms) if state >> i & 1)

    def holds(self, state: int, f) -> bool:
        t = type(f)
        if t in ATOMS:
            return bool(state >> self.index[f] & 1)
        if t is Top:
            return True
        if t is Not:
            return not self.holds(state, f.arg)
        if t is Or:
            return self.holds(state, f.left) or self.holds(state, f.right)
        if t is not Diamond:
            raise TypeError(f"not a DL-PA formula: {f!r}")
        key = (f, state)
        out = self._sat.get(key)
        if out is None:
            out = any(self.holds(s, f.body) for s in self.succ(state, f.prog))
            self._sat[key] = out
        return out

    def succ(self, state: int, p) -> frozenset:
        key = (p, state)
        out = self._succ.get(key)
        if out is None:
            if len(self._succ) >= self.budget:
                raise ResourceLimit(
                    f"DL-PA evaluation exceeded the budget of {self.budget} cached transitions",
                    size=len(self._succ))
            out = self._succ[key] = frozenset(self._succ_uncached(state, p))
        return out

    def _succ_uncached(self, state, p):
        t = type(p)
        if t is SetAtom:
            return (state | 1 << self.index[p.atom],)
        if t is ClearAtom:
            return (state & ~(1 << self.index[p.atom]),)
        if t is ExoTest:
            return (state,) if self.holds(state, p.cond) else ()
        if t is Seq:
            out = set()
            for s in self.succ(state, p.first):
                out |= self.succ(s, p.second)
            return out
        if t is Choice:
            return self.succ(state, p.left) | self.succ(state, p.right)
        if t is Star:
            seen = {state}
            frontier = [state]
            while frontier:
                nxt = []
                for s in frontier:
                    for s2 in self.succ(s, p.body):
                        if s2 not in seen:
                            seen.add(s2)
                            nxt.append(s2)
                frontier = nxt
            return seen
        raise TypeError(f"not a DL-PA program: {p!r}")


def dlpa_satisfies(val, f, atoms) -> bool:
    ev = DlpaEvaluator(atoms)
    ev.check(f)
    return ev.holds(ev.encode(val), f)


def dlpa_successors(val, p, atoms) -> set:
    ev = DlpaEvaluator(atoms)
    ev.check(p)
    return {ev.decode(s) for s in ev.succ(ev.encode(val), p)}


# -- satisfiability ---------------------------------------------------------------

def inclusion_constraint(names: Iterable[str]):
    return conj_all(imp(Write(p), Read(p)) for p in _order(names))


def _valuations(names):
    """User-atom valuations respecting w_p -> r_p, as atom lists."""
    per_var = []
    for p in _order(names):
        a, r, w = Prop(p), Read(p), Write(p)
        per_var.append(([], [a], [r], [r, a], [r, w], [r, w, a]))
    for combo in itertools.product(*per_var):
        yield [x for part in combo for x in part]


def sat(f, budget: int = DEFAULT_BUDGET) -> bool:
    """Satisfiability of a DLPA|| formula through its DL-PA translation.

    Up to ENUMERATION_LIMIT user atoms the translated formula is evaluated on
    every valuation satisfying the inclusion constraint, with every generated
    atom false (generated atoms are always assigned before they are read).
    Beyond that the formula is reduced and handed to the clause solver.
    """
    names = vars_of(f)
    if 3 * len(names) > ENUMERATION_LIMIT:
        from .cnf import satisfiable_boolean
        from .rewrite import reduce
        return satisfiable_boolean(conj(reduce(f, budget=budget), inclusion_constraint(names)))
    tf = translate_formula(f)
    ev = DlpaEvaluator(set(atoms_for(names)) | atoms_of(tf), budget=budget)
    return any(ev.holds(ev.encode(val), tf) for val in _valuations(names))


def valid(f, budget: int = DEFAULT_BUDGET) -> bool:
    return not sat(Not(f), budget=budget)


def translation_size(f) -> int:
    from .syntax import size
    return size(translate(f))

