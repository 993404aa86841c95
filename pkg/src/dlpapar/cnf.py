"""Clausal form, a small DPLL solver, and DIMACS export of reduced formulas.

Numbering is fixed so that exports are reproducible byte for byte: every
user variable mentioned by the formula contributes three consecutive
indices (p, r_p, w_p) in sorted name order, and definition variables of the
structure-preserving clausification follow in first-visit order.  The clause
list starts with the unit clause for the root, then one inclusion clause
``-w_p r_p`` per variable, then the definitions.
"""
from __future__ import annotations

from .syntax import ATOMS, Atom, Not, Or, Prop, Read, Top, Write, _atom_text, vars_of


def fold(f):
    """Remove constants; returns TOP, Not(TOP) or a constant-free formula."""
    t = type(f)
    if t is Not:
        a = fold(f.arg)
        if type(a) is Not:
            return a.arg
        return Not(a)
    if t is Or:
        a, b = fold(f.left), fold(f.right)
        for x, y in ((a, b), (b, a)):
            if type(x) is Top:
                return x
            if type(x) is Not and type(x.arg) is Top:
                return y
        return Or(a, b)
    if t is Atom:
        return Prop(f.name)
    if t is Top or t in ATOMS:
        return f
    raise TypeError(f"not a boolean formula: {f!r}")


class Clausifier:
    def __init__(self, names):
        self.index = {}
        self.atoms = []
        for p in sorted(set(names)):
            for a in (Prop(p), Read(p), Write(p)):
                self.atoms.append(a)
                self.index[a] = len(self.atoms)
        self.nvars = len(self.atoms)
        self.defs = []
        self._memo = {}

    def literal(self, f) -> int:
        t = type(f)
        if t in ATOMS:
            return self.index[f]
        if t is Not:
            return -self.literal(f.arg)
        if t is not Or:
            raise TypeError(f"unexpected node in clausification: {f!r}")
        lit = self._memo.get(f)
        if lit is None:
            a = self.literal(f.left)
            b = self.literal(f.right)
            self.nvars += 1
            lit = self.nvars
            self.defs += [[-lit, a, b], [lit, -a], [lit, -b]]
            self._memo[f] = lit
        return lit

    def inclusion(self):
        return [[-self.index[Write(a.name)], self.index[Read(a.name)]]
                for a in self.atoms if type(a) is Prop]


def clausify(f):
    """Return (number of variables, clauses, atom list)."""
    g = fold(f)
    if type(g) is Top:
        return 1, [[1, -1]], []
    if type(g) is Not and type(g.arg) is Top:
        return 0, [[]], []
    c = Clausifier(vars_of(g))
    root = c.literal(g)
    clauses = [[root]] + c.inclusion() + c.defs
    return c.nvars, clauses, list(c.atoms)


def dimacs_text(nvars: int, clauses) -> str:
    lines = [f"p cnf {nvars} {len(clauses)}"]
    for cl in clauses:
        lines.append(" ".join(str(x) for x in cl + [0]))
    return "\n".join(lines) + "\n"


def manifest_text(atoms) -> str:
    return "".join(f"{i} {_atom_text(a, True)}\n" for i, a in enumerate(atoms, 1))


def export_dimacs(f, sink) -> str:
    """Write the DIMACS encoding of ``f`` to ``sink``; return the manifest text."""
    nvars, clauses, atoms = clausify(f)
    sink.write(dimacs_text(nvars, clauses))
    return manifest_text(atoms)


def dpll(nvars: int, clauses):
    """A satisfying assignment {var: bool}, or None.

    Unit propagation plus branching on the lowest unassigned variable, true
    first; fully deterministic.
    """
    clauses = [list(c) for c in clauses]
    if any(not c for c in clauses):
        return None
    assign = {}

    def propagate(assign):
        changed = True
        while changed:
            changed = False
            for cl in clauses:
                unassigned = None
                count = 0
                sat = False
                for lit in cl:
                    v = assign.get(abs(lit))
                    if v is None:
                        count += 1
                        unassigned = lit
                    elif v == (lit > 0):
                        sat = True
                        break
                if sat:
                    continue
                if count == 0:
                    return False
                if count == 1:
                    assign[abs(unassigned)] = unassigned > 0
                    changed = True
        return True

    def search(assign):
        if not propagate(assign):
            return None
        for v in range(1, nvars + 1):
            if v not in assign:
                break
        else:
            return assign
        for val in (True, False):
            trial = dict(assign)
            trial[v] = val
            out = search(trial)
            if out is not None:
                return out
        return None

    return search(assign)


def satisfiable_boolean(f) -> bool:
    nvars, clauses, _ = clausify(f)
    return dpll(nvars, clauses) is not None


def evaluate_cnf(clauses, assign: dict) -> bool:
    return all(any(assign.get(abs(lit), False) == (lit > 0) for lit in cl) for cl in clauses)


def parse_dimacs(text: str):
    nvars = 0
    clauses = []
    current = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            nvars = int(line.split()[2])
            continue
        for tok in line.split():
            x = int(tok)
            if x == 0:
                clauses.append(current)
                current = []
            else:
                current.append(x)
    return nvars, clauses
