import io
import itertools
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dlpapar.cnf import (clausify, dpll, evaluate_cnf, export_dimacs, fold,
                         parse_dimacs, satisfiable_boolean)
from dlpapar.models import Universe, enumerate_models
from dlpapar.rewrite import reduce
from dlpapar.semantics import satisfies
from dlpapar.syntax import TOP, Not, Or, Prop, Read, Write, parse_formula, vars_of

GOLDEN = Path(__file__).parent / "golden"
CASES = sorted(p.stem for p in GOLDEN.glob("*.formula"))


def _atoms_of_manifest(text):
    out = {}
    for line in text.splitlines():
        idx, name = line.split()
        out[name] = int(idx)
    return out


def _cnf_allows(nvars, clauses, fixed):
    """Does some assignment of the remaining variables satisfy every clause?"""
    free = [v for v in range(1, nvars + 1) if v not in fixed]
    for bits in itertools.product((False, True), repeat=len(free)):
        assign = dict(fixed)
        assign.update(zip(free, bits))
        if evaluate_cnf(clauses, assign):
            return True
    return False


@pytest.mark.parametrize("name", CASES)
def test_golden_bytes(name):
    text = (GOLDEN / f"{name}.formula").read_text().strip()
    sink = io.StringIO()
    manifest = export_dimacs(reduce(parse_formula(text)), sink)
    assert sink.getvalue() == (GOLDEN / f"{name}.cnf").read_text()
    assert manifest == (GOLDEN / f"{name}.cnf.map").read_text()


@pytest.mark.parametrize("name", CASES)
def test_golden_meaning(name):
    """Projected onto its atoms, each golden CNF holds exactly in the models
    of its source formula (checked by truth table, not by the solver)."""
    f = parse_formula((GOLDEN / f"{name}.formula").read_text())
    nvars, clauses = parse_dimacs((GOLDEN / f"{name}.cnf").read_text())
    index = _atoms_of_manifest((GOLDEN / f"{name}.cnf.map").read_text())
    u = Universe(vars_of(f))
    for m in enumerate_models(u):
        fixed = {}
        for p in u:
            fixed[index[p]] = p in m.v
            fixed[index["r_" + p]] = p in m.rd
            fixed[index["w_" + p]] = p in m.wr
        assert _cnf_allows(nvars, clauses, fixed) == satisfies(m, f, u)
    # valuations breaking w_p -> r_p are excluded
    for p in u:
        assert not _cnf_allows(nvars, clauses, {index["w_" + p]: True, index["r_" + p]: False})


def test_constants():
    assert clausify(TOP) == (1, [[1, -1]], [])
    assert clausify(Not(TOP)) == (0, [[]], [])
    assert fold(Or(Prop("p"), Not(Not(TOP)))) == TOP
    assert fold(Or(Not(TOP), Prop("p"))) == Prop("p")


def test_dpll_examples():
    assert dpll(2, [[1, 2], [-1], [-2]]) is None
    assert dpll(2, [[1, 2], [-1]]) == {1: False, 2: True}
    assert dpll(0, []) == {}


leaves = st.sampled_from([Prop("p"), Prop("q"), Read("p"), Write("p"), Read("q"), Write("q"), TOP])
booleans = st.recursive(leaves, lambda c: st.one_of(
    c.map(Not), st.tuples(c, c).map(lambda t: Or(*t))), max_leaves=8)


def _truth(f, val):
    t = type(f)
    if t is Not:
        return not _truth(f.arg, val)
    if t is Or:
        return _truth(f.left, val) or _truth(f.right, val)
    if t is type(TOP):
        return True
    return f in val


@settings(max_examples=200, deadline=None)
@given(booleans)
def test_solver_agrees_with_truth_table(f):
    atoms = [a(n) for n in ("p", "q") for a in (Prop, Read, Write)]
    want = False
    for bits in itertools.product((False, True), repeat=len(atoms)):
        val = {a for a, b in zip(atoms, bits) if b}
        if any(Write(n) in val and Read(n) not in val for n in ("p", "q")):
            continue
        if _truth(f, val):
            want = True
            break
    assert satisfiable_boolean(f) == want
    nvars, clauses, _ = clausify(f)
    sol = dpll(nvars, clauses)
    assert (sol is not None) == want
    if sol is not None:
        assert evaluate_cnf(clauses, sol)
