"""Reduced ordered decision diagrams over atomic formulas.

Used as the canonical normal form of modality-free formulas during reduction.
Variables are ordered by a caller-supplied sort key, so new atoms can be
introduced at any time without reordering existing nodes.
"""
from __future__ import annotations

from .syntax import TOP, BOT, Not, Or, conj

FALSE = 0
TRUE = 1


class NodeLimit(Exception):
    pass


class BDD:
    def __init__(self, key, limit: int = 10**6):
        self.key = key
        self.limit = limit
        # node id -> (atom, sort key, low, high); terminals have no atom
        self.nodes = [(None, None, 0, 0), (None, None, 1, 1)]
        self.unique = {}
        self._ite = {}
        self._not = {}
        self._vars = {}

    def __len__(self):
        return len(self.nodes)

    def var(self, atom) -> int:
        n = self._vars.get(atom)
        if n is None:
            n = self._vars[atom] = self._mk(atom, self.key(atom), FALSE, TRUE)
        return n

    def _mk(self, atom, key, lo, hi):
        if lo == hi:
            return lo
        k = (key, lo, hi)
        n = self.unique.get(k)
        if n is None:
            n = len(self.nodes)
            if n >= self.limit:
                raise NodeLimit(n)
            self.nodes.append((atom, key, lo, hi))
            self.unique[k] = n
        return n

    def neg(self, f: int) -> int:
        if f < 2:
            return 1 - f
        out = self._not.get(f)
        if out is None:
            atom, key, lo, hi = self.nodes[f]
            out = self._mk(atom, key, self.neg(lo), self.neg(hi))
            self._not[f] = out
        return out

    def ite(self, f: int, g: int, h: int) -> int:
        if f == TRUE:
            return g
        if f == FALSE:
            return h
        if g == h:
            return g
        if g == TRUE and h == FALSE:
            return f
        if g == FALSE and h == TRUE:
            return self.neg(f)
        k = (f, g, h)
        out = self._ite.get(k)
        if out is not None:
            return out
        nodes = self.nodes
        top = None
        for x in (f, g, h):
            if x > 1:
                nk = nodes[x][1]
                if top is None or nk < top[1]:
                    top = nodes[x]
        atom, key = top[0], top[1]
        f0, f1 = self._cof(f, key)
        g0, g1 = self._cof(g, key)
        h0, h1 = self._cof(h, key)
        out = self._mk(atom, key, self.ite(f0, g0, h0), self.ite(f1, g1, h1))
        self._ite[k] = out
        return out

    def _cof(self, f, key):
        if f < 2:
            return f, f
        node = self.nodes[f]
        if node[1] == key:
            return node[2], node[3]
        return f, f

    def conj(self, f, g):
        return self.ite(f, g, FALSE)

    def disj(self, f, g):
        return self.ite(f, TRUE, g)

    def restrict(self, f: int, values: dict) -> int:
        """Substitute truth constants for the atoms in ``values``."""
        memo = {}

        def go(n):
            if n < 2:
                return n
            r = memo.get(n)
            if r is None:
                atom, key, lo, hi = self.nodes[n]
                val = values.get(atom)
                if val is None:
                    r = self._mk(atom, key, go(lo), go(hi))
                else:
                    r = go(hi if val else lo)
                memo[n] = r
            return r

        return go(f)

    def size(self, f: int) -> int:
        seen = set()
        stack = [f]
        while stack:
            n = stack.pop()
            if n in seen:
                continue
            seen.add(n)
            if n > 1:
                stack.append(self.nodes[n][2])
                stack.append(self.nodes[n][3])
        return len(seen)

    def support(self, f: int) -> set:
        seen = set()
        out = set()
        stack = [f]
        while stack:
            n = stack.pop()
            if n < 2 or n in seen:
                continue
            seen.add(n)
            atom, _, lo, hi = self.nodes[n]
            out.add(atom)
            stack.append(lo)
            stack.append(hi)
        return out

    def to_formula(self, f: int):
        """Rewrite a diagram as a formula built from its atoms, ~, | and &."""
        memo = {}

        def go(n):
            if n == TRUE:
                return TOP
            if n == FALSE:
                return BOT
            r = memo.get(n)
            if r is None:
                x, _, lo, hi = self.nodes[n]
                if lo == FALSE and hi == TRUE:
                    r = x
                elif lo == TRUE and hi == FALSE:
                    r = Not(x)
                elif lo == FALSE:
                    r = conj(x, go(hi))
                elif hi == FALSE:
                    r = conj(Not(x), go(lo))
                elif hi == TRUE:
                    r = Or(x, go(lo))
                elif lo == TRUE:
                    r = Or(Not(x), go(hi))
                else:
                    r = Or(conj(x, go(hi)), conj(Not(x), go(lo)))
                memo[n] = r
            return r

        return go(f)
