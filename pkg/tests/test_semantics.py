import pytest
from hypothesis import given, settings

from dlpapar.models import Universe, UniverseTooSmall, enumerate_models, make_model, restrict
from dlpapar.semantics import (program_relation, satisfiable_direct, satisfies,
                               successors, valid)
from dlpapar.syntax import (EndoTest, ExoTest, Par, Star, parse_formula,
                            parse_program, power_upto)
from strategies import ATOMIC, formulas, models, programs

U2 = Universe("pq")


def F(s):
    return parse_formula(s)


def P(s):
    return parse_program(s)


def test_endogenous_test_example():
    assert satisfies(make_model("p", "p", "p"), F("<p?!> true"), "p")
    assert not satisfies(make_model(v="p"), F("<p?!> true"), "p")
    assert satisfies(make_model(v="p"), F("<p?> true"), "p")
    assert satisfies(make_model("pqr", "pqr", "pqr"), F("<+p || -q>(p & ~q & r)"), "pqr")


def test_parallel_examples():
    m = make_model("pqr", "pq", "pqr")
    assert successors(m, P("-p || -q"), "pqr") == {make_model("pqr", "pq", "r")}
    assert successors(make_model("pqr", "pqr", "pqr"), P("+p || -q"), "pqr") == \
        {make_model("pqr", "pqr", "pr")}
    mp = make_model("p", "p", "p")
    assert successors(mp, P("+p || +p"), "p") == set()
    assert successors(mp, P("+p || (+W(p) ; -p ; -R(p))"), "p") == set()
    assert mp in successors(mp, P("+p || (+W(p) ; +p ; -R(p))"), "p")


def test_relations():
    u = Universe("p")
    ident = {(m, m) for m in enumerate_models(u)}
    assert program_relation(P("true ?"), u) == ident
    assert program_relation(P("+p || -p"), u) == frozenset()
    assert program_relation(P("+p"), u) == {
        (make_model("p", "p"), make_model("p", "p", "p")),
        (make_model("p", "p", "p"), make_model("p", "p", "p"))}


def test_validity_examples():
    assert valid(F("p -> [true?! || true?!] p"), "p")
    assert valid(F("W(p) -> R(p)"), "p")
    assert not valid(F("p -> <p?!> true"), "p")
    assert valid(F("<p?!> true -> p"), "p")
    assert satisfiable_direct(F("p & ~<p?!> true"), "p")


def test_universe_must_cover_the_input():
    with pytest.raises(UniverseTooSmall):
        satisfies(make_model(), F("q"), "p")
    with pytest.raises(UniverseTooSmall):
        successors(make_model("q"), P("+p"), "p")


@given(models())
def test_atomic_programs_are_deterministic(m):
    for name in ("p", "q"):
        for cls in ATOMIC:
            assert len(successors(m, cls(name), U2)) <= 1


@settings(max_examples=100, deadline=None)
@given(programs(max_leaves=3), programs(max_leaves=3))
def test_parallel_commutes(a, b):
    assert program_relation(Par(a, b), U2) == program_relation(Par(b, a), U2)


@settings(max_examples=100, deadline=None)
@given(programs(max_leaves=3), models())
def test_parallel_frame(a, m):
    for m2 in successors(m, Par(a, EndoTest(parse_formula("true"))), U2):
        assert (m2.rd, m2.wr) == (m.rd, m.wr)


@settings(max_examples=100, deadline=None)
@given(formulas(), programs(), models(), models(("z",)))
def test_restriction_invariance(f, p, m, junk):
    """Adding a variable that nothing mentions changes nothing."""
    big = make_model(m.rd | junk.rd, m.wr | junk.wr, m.v | junk.v)
    assert satisfies(m, f, U2) == satisfies(big, f, "pqz")
    images = {restrict(x, "pq") for x in successors(big, p, "pqz")}
    assert images == successors(m, p, U2)
    for x in successors(big, p, "pqz"):
        assert restrict(x, "z") == junk


@settings(max_examples=100, deadline=None)
@given(programs(max_leaves=3))
def test_star_is_bounded_union(p):
    rel = program_relation(Star(p), U2)
    assert rel == program_relation(power_upto(p, 6 ** len(U2)), U2)


@settings(max_examples=150, deadline=None)
@given(formulas(), models())
def test_endogenous_implies_exogenous(f, m):
    assert successors(m, EndoTest(f), U2) <= successors(m, ExoTest(f), U2)
