import pytest

from dlpapar.models import make_model
from dlpapar.oracle import (SUITES, Counterexample, Generator, Limits, corpus,
                            equiv_formulas, equiv_programs, run_suite, sat_by,
                            assign_axiom_rhs, valid_by)
from dlpapar.syntax import (AssignTrue, Atom, Par, parse_formula,
                            parse_program, pretty_print, writable_stmt)
from dlpapar.models import UniverseTooSmall

F, P = parse_formula, parse_program
SMALL = Limits(cases=12)


def test_equiv_formulas():
    f = F("<+p> q | R(q)")
    assert equiv_formulas(f, f, "pq") is True
    assert equiv_formulas(F("<+p> true"), writable_stmt("p"), "p") is True
    cex = equiv_formulas(Atom("p"), F("<p ?!> true"), "p")
    assert isinstance(cex, Counterexample) and not cex
    assert cex.models == (make_model(v="p"),)
    assert cex.replay()
    with pytest.raises(UniverseTooSmall):
        equiv_formulas(Atom("q"), Atom("q"), "p")


def test_equiv_programs():
    a, b = P("+p ; -R(q)"), P("q ?! U -W(p)")
    assert equiv_programs(Par(a, b), Par(b, a), "pq") is True
    cex = equiv_programs(P("+p"), P("-p"), "p")
    assert not cex and cex.replay()
    assert "from:" in str(cex)


def test_assign_axiom_rhs_spot_checks():
    assert assign_axiom_rhs(AssignTrue("p"), "prop", "p") == writable_stmt("p")
    assert pretty_print(assign_axiom_rhs(P("-R(p)"), "write", "p")) == "false"
    assert pretty_print(assign_axiom_rhs(P("-W(p)"), "read", "p")) == "R(p)"


def test_generator_is_deterministic():
    a = [pretty_print(f) for f in corpus(5, SMALL)]
    b = [pretty_print(f) for f in corpus(5, SMALL)]
    assert a == b and a != [pretty_print(f) for f in corpus(6, SMALL)]


def test_generated_universe_has_a_junk_variable():
    gen = Generator(0, SMALL)
    f = F("<+p> q")
    u = gen.universe(f)
    assert set(u.vars) == {"p", "q", "z"}


def test_methods_agree_on_worked_formulas():
    for text in ("[+p || -p] false", "W(p) -> R(p)", "p -> [true ?! || true ?!] p"):
        assert {valid_by(m, F(text)) for m in ("direct", "reduce", "translate")} == {True}
    assert {sat_by(m, F("p & ~<p ?!> true")) for m in ("direct", "reduce", "translate")} == {True}
    with pytest.raises(ValueError):
        sat_by("oracle", F("p"))


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suites_pass_and_repeat(name):
    first = run_suite(name, 11, SMALL)
    assert first.ok, first.text()
    assert first.text() == run_suite(name, 11, SMALL).text()
    assert first.text().startswith(f"SUITE {name} SEED 11 PASS ")


def test_report_counterexamples_replay():
    rep = run_suite("star", 0, SMALL)
    assert any("literal bound" in n for n in rep.notes)
    with pytest.raises(ValueError):
        run_suite("nonsense")
