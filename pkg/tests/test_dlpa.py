import pytest
from hypothesis import given, settings

from dlpapar import dlpa
from dlpapar.dlpa import (ClearAtom, SetAtom, atoms_for, atoms_of, dlpa_satisfies,
                          dlpa_successors, from_valuation, sat, translate,
                          translate_formula, translate_program, v_plus)
from dlpapar.models import Universe, UniverseTooSmall, enumerate_models
from dlpapar.oracle import lemma7_case
from dlpapar.semantics import satisfiable_direct, satisfies
from dlpapar.syntax import (TOP, ExoTest, Prop, Read, Seq, Write, parse_formula,
                            parse_program, pretty_print, size, vars_of)
from strategies import formulas, models, programs

F, P = parse_formula, parse_program


def test_translation_examples():
    assert translate_program(P("+p")) == Seq(ExoTest(Write("p")), SetAtom(Prop("p")))
    assert translate_program(P("+W(p)")) == Seq(SetAtom(Read("p")), SetAtom(Write("p")))
    assert translate_program(P("-R(p)")) == Seq(ClearAtom(Write("p")), ClearAtom(Read("p")))
    assert translate_program(P("-W(p)")) == ClearAtom(Write("p"))
    assert translate_program(P("+R(p)")) == SetAtom(Read("p"))
    assert translate_program(P("true ?")) == ExoTest(TOP)
    assert pretty_print(translate(F("<+W(p)> true")), dlpa=True) == "<+r_p ; +w_p> true"


def test_translation_has_no_dlpa_par_primitives():
    out = translate(F("<(p ?! ; +R(q)) || -W(p)> R(q)"))
    text = pretty_print(out, dlpa=True)
    assert "?!" not in text and "||" not in text and "R(" not in text


def test_dlpa_semantics_examples():
    w = Write("p")
    assert dlpa_successors(frozenset(), SetAtom(w), [w]) == {frozenset({w})}
    assert dlpa_successors(frozenset(), translate_program(P("+p")), atoms_for("p")) == set()
    assert dlpa_satisfies(frozenset({Prop("p")}), Prop("p"), [Prop("p")])
    with pytest.raises(UniverseTooSmall):
        dlpa_satisfies(frozenset(), Prop("q"), [Prop("p")])


def test_v_plus_round_trip():
    for m in enumerate_models(Universe("pq")):
        assert from_valuation(v_plus(m)) == m


def test_sat_examples():
    assert sat(F("<+p || -p> true")) is False
    assert sat(TOP) is True
    assert sat(F("p & ~<p ?!> true")) is True
    assert dlpa.valid(F("W(p) -> R(p)"))


@pytest.mark.parametrize("text", [
    "+p || -q", "p ?! || +W(q)", "(+p U -p) || (q ? ; -R(q))", "(+p || +q) || -R(p)",
    "(+W(p) ; +p)*", "p ?! ; -R(p) ; (+R(p))*",
])
def test_lemma7_exhaustive(text):
    prog = P(text)
    u = Universe(vars_of(prog))
    for m in enumerate_models(u):
        assert lemma7_case(m, prog, u) is True


@settings(max_examples=150, deadline=None)
@given(programs(max_leaves=3), models())
def test_lemma7_random(prog, m):
    assert lemma7_case(m, prog, Universe("pq")) is True


@settings(max_examples=150, deadline=None)
@given(formulas(), models())
def test_formula_translation(f, m):
    tf = translate_formula(f)
    atoms = set(atoms_for("pq")) | atoms_of(tf)
    assert dlpa_satisfies(v_plus(m), tf, atoms) == satisfies(m, f, "pq")


@settings(max_examples=100, deadline=None)
@given(formulas())
def test_sat_agrees_with_direct(f):
    assert sat(f) == satisfiable_direct(f, sorted(vars_of(f)))


def test_large_formulas_go_through_the_solver(monkeypatch):
    monkeypatch.setattr(dlpa, "ENUMERATION_LIMIT", 2)
    for text in ("<+p || -p> true", "p & ~<p ?!> true", "<+p || +q> (p & q)", "W(p) & ~R(p)"):
        f = F(text)
        assert sat(f) == satisfiable_direct(f, sorted(vars_of(f)))


def test_translation_size_is_modest():
    """Measured, not a theorem: |t(phi)| stays within a small multiple of |phi|^2."""
    from dlpapar.oracle import corpus, Limits
    ratios = [size(translate(f)) / size(f) ** 2 for f in corpus(3, Limits(cases=200))]
    assert max(ratios) < 60
