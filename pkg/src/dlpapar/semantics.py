"""Direct interpretation of formulas and programs over a finite universe."""
from __future__ import annotations

from functools import lru_cache

from . import kernels
from .models import Model, Universe, UniverseTooSmall, enumerate_states
from .syntax import (AssignFalse, AssignTrue, Atom, Choice, Diamond, EndoTest,
                     ExoTest, MakeReadable, MakeUnreadable, MakeUnwritable,
                     MakeWritable, Not, Or, Par, Prop, Read, Seq, Star, Top,
                     Write, vars_of)


class Evaluator:
    """Memoising evaluator over one universe; states are bitmask triples."""

    def __init__(self, universe: Universe):
        self.u = universe
        self.wide = len(universe) > kernels.WIDTH
        self._sat = {}
        self._succ = {}
        self._vars = {}

    def check(self, x):
        missing = vars_of(x) - set(self.u.vars)
        if missing:
            raise UniverseTooSmall(
                f"variables {sorted(missing)} are not in the universe {self.u}")

    def clear(self):
        self._sat.clear()
        self._succ.clear()

    def _mask_of(self, f):
        m = self._vars.get(f)
        if m is None:
            m = self._vars[f] = self.u.mask(vars_of(f))
        return m

    def holds(self, state, f) -> bool:
        t = type(f)
        if t is Atom or t is Prop:
            return bool(state[2] & (1 << self.u.index[f.name]))
        if t is Top:
            return True
        if t is Not:
            return not self.holds(state, f.arg)
        if t is Or:
            return self.holds(state, f.left) or self.holds(state, f.right)
        if t is Read:
            return bool(state[0] & (1 << self.u.index[f.name]))
        if t is Write:
            return bool(state[1] & (1 << self.u.index[f.name]))
        key = (f, state)
        out = self._sat.get(key)
        if out is None:
            if t is not Diamond:
                raise TypeError(f"not a formula: {f!r}")
            out = False
            for s in self.succ(state, f.prog):
                if self.holds(s, f.body):
                    out = True
                    break
            self._sat[key] = out
        return out

    def succ(self, state, p) -> frozenset:
        key = (p, state)
        out = self._succ.get(key)
        if out is None:
            out = self._succ[key] = frozenset(self._succ_uncached(state, p))
        return out

    def _succ_uncached(self, state, p):
        rd, wr, v = state
        t = type(p)
        if t is AssignTrue or t is AssignFalse:
            b = 1 << self.u.index[p.var]
            if not wr & b:
                return ()
            return ((rd, wr, v | b if t is AssignTrue else v & ~b),)
        if t is MakeReadable:
            return ((rd | (1 << self.u.index[p.var]), wr, v),)
        if t is MakeUnreadable:
            b = 1 << self.u.index[p.var]
            return ((rd & ~b, wr & ~b, v),)
        if t is MakeWritable:
            b = 1 << self.u.index[p.var]
            return ((rd | b, wr | b, v),)
        if t is MakeUnwritable:
            return ((rd, wr & ~(1 << self.u.index[p.var]), v),)
        if t is ExoTest:
            return (state,) if self.holds(state, p.cond) else ()
        if t is EndoTest:
            hidden = self._mask_of(p.cond) & ~rd
            for w in kernels.valuation_variants(v, hidden):
                if not self.holds((rd, wr, w), p.cond):
                    return ()
            return (state,)
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
        if t is Par:
            cases = []
            for rd1, wr1, rd2, wr2 in kernels.split_masks(rd, wr):
                s1 = self.succ((rd1, wr1, v), p.left)
                if not s1:
                    continue
                s2 = self.succ((rd2, wr2, v), p.right)
                if s2:
                    cases.append((rd1, wr1, rd2, wr2, s1, s2))
            return kernels.par_combine(v, cases, not self.wide)
        raise TypeError(f"not a program: {p!r}")

    def relation(self, p) -> frozenset:
        out = set()
        for s in enumerate_states(self.u):
            for s2 in self.succ(s, p):
                out.add((s, s2))
        return frozenset(out)


@lru_cache(maxsize=16)
def evaluator(u: Universe) -> Evaluator:
    return Evaluator(u)


def _universe(u) -> Universe:
    return u if isinstance(u, Universe) else Universe(u)


def _state(ev: Evaluator, m: Model):
    if not m.rd | m.v <= set(ev.u.vars):
        raise UniverseTooSmall(f"model {m} mentions variables outside {ev.u}")
    return ev.u.encode(m)


def satisfies(m: Model, f, u) -> bool:
    ev = evaluator(_universe(u))
    ev.check(f)
    return ev.holds(_state(ev, m), f)


def successors(m: Model, p, u) -> set:
    ev = evaluator(_universe(u))
    ev.check(p)
    return {ev.u.decode(s) for s in ev.succ(_state(ev, m), p)}


def program_relation(p, u) -> frozenset:
    """All pairs (m, m') of models over ``u`` related by ``p``."""
    ev = evaluator(_universe(u))
    ev.check(p)
    dec = ev.u.decode
    return frozenset((dec(a), dec(b)) for a, b in ev.relation(p))


def valid(f, u) -> bool:
    ev = evaluator(_universe(u))
    ev.check(f)
    return all(ev.holds(s, f) for s in enumerate_states(ev.u))


def satisfiable_direct(f, u) -> bool:
    ev = evaluator(_universe(u))
    ev.check(f)
    return any(ev.holds(s, f) for s in enumerate_states(ev.u))


def eval_boolean(m: Model, f) -> bool:
    """Truth of a modality-free formula over Prop/Read/Write (or Atom) leaves."""
    t = type(f)
    if t is Top:
        return True
    if t is Not:
        return not eval_boolean(m, f.arg)
    if t is Or:
        return eval_boolean(m, f.left) or eval_boolean(m, f.right)
    if t is Atom or t is Prop:
        return f.name in m.v
    if t is Read:
        return f.name in m.rd
    if t is Write:
        return f.name in m.wr
    raise TypeError(f"not a boolean formula: {f!r}")
