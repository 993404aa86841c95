import pytest
from hypothesis import given, settings

from dlpapar.models import Universe, enumerate_models, make_model, restrict, splits, merge
from dlpapar.oracle import equiv_formulas, equiv_programs, generated_vars
from dlpapar.rewrite import (Reducer, ResourceLimit, copy, copy_var, fml_okchange,
                             is_boolean, parse_reserved, prog_flatten, prog_merge,
                             prog_split, prog_store, read_store, reduce,
                             star_bound, star_bound_literal, to_formula,
                             toggle_unreadable, toggle_unreadable_literal, write_store)
from dlpapar.semantics import satisfies, successors
from dlpapar.syntax import (TOP, AssignTrue, Atom, Diamond, EndoTest, ExoTest,
                            MakeUnreadable, Not, Par, Prop, Seq, Star, Write,
                            box, conj, parse_formula, parse_program, power_upto,
                            pretty_print, seq_all, vars_of)
from strategies import formulas, models, programs

F, P = parse_formula, parse_program


def test_copy_names():
    assert copy_var("p", 1) == "$c1_p"
    assert copy_var("$c1_p", 2) == "$c12_p"
    assert read_store("p", 2) == "$r2_p" and write_store("$c1_p", 1) == "$w11_p"
    assert parse_reserved("$w11_p") == ("w", "11", "p")
    assert parse_reserved("p") is None
    with pytest.raises(ValueError):
        copy_var("$r1_p", 1)


def test_copy():
    assert copy(P("+p ; q?!"), 1) == Seq(AssignTrue("$c1_p"), EndoTest(Atom("$c1_q")))
    assert copy(P("true ?"), 2) == P("true ?")


@settings(max_examples=60, deadline=None)
@given(programs(par=False, max_leaves=3), models(("p",)))
def test_copy_commutes_with_semantics(p, m):
    """Renaming the program and the model together preserves the relation."""
    def cm(x):
        r = {copy_var(n, 1) for n in x.rd}
        return make_model(r, {copy_var(n, 1) for n in x.wr}, {copy_var(n, 1) for n in x.v})
    ps = [x for x in (p,) if vars_of(x) <= {"p"}]
    for p in ps:
        cu = Universe({copy_var("p", 1)})
        assert {cm(x) for x in successors(m, p, "p")} == successors(cm(m), copy(p, 1), cu)


def _projected(m, prog, names):
    """Successors of m under prog, split into the two copy models."""
    ext = Universe(set(vars_of(prog)) | set(m.rd) | set(m.v))
    out = set()
    for x in successors(m, prog, ext):
        sides = []
        for k in (1, 2):
            back = {copy_var(n, k): n for n in names}
            sides.append(make_model({back[n] for n in x.rd & back.keys()},
                                    {back[n] for n in x.wr & back.keys()},
                                    {back[n] for n in x.v & back.keys()}))
        out.add(tuple(sides))
    return out


@pytest.mark.parametrize("names", ["p", "pq"])
def test_split_program_simulates_split(names):
    for m in enumerate_models(Universe(names)):
        assert _projected(m, prog_split(names), names) == set(splits(m))


def test_split_program_examples():
    assert prog_split(()) == ExoTest(TOP)
    assert len(successors(make_model("p", "p", "p"), prog_split("p"),
                          Universe(["p", "$c1_p", "$c2_p"]))) == 2


def test_store_records_access_rights():
    names = "p"
    prog = Seq(prog_split(names), prog_store(names))
    u = Universe(vars_of(prog))
    outs = successors(make_model("p", "p", "p"), prog, u)
    assert outs
    for x in outs:
        assert ("$w1_p" in x.v) != ("$w2_p" in x.v)
        assert {"$r1_p", "$w1_p", "$r2_p", "$w2_p"} <= x.wr
        assert satisfies(x, fml_okchange(names), u)
        bumped = successors(x, MakeUnreadable("$c1_p"), u)
        if "$c1_p" in x.rd:
            assert not any(satisfies(y, fml_okchange(names), u) for y in bumped)
    assert prog_store(()) == ExoTest(TOP) and fml_okchange(()) == TOP


def test_merge_program_simulates_merge():
    names = "p"
    u1 = Universe("p")
    ext = Universe(vars_of(prog_merge(names)))
    stores = {read_store("p", k) for k in (1, 2)} | {write_store("p", k) for k in (1, 2)}
    for m in enumerate_models(u1):
        for m1, m2 in splits(m):
            for m1b in enumerate_models(u1):
                for m2b in enumerate_models(u1):
                    if (m1b.rd, m1b.wr, m2b.rd, m2b.wr) != (m1.rd, m1.wr, m2.rd, m2.wr):
                        continue
                    if m1b.v - m1.wr != m.v - m1.wr or m2b.v - m2.wr != m.v - m2.wr:
                        continue
                    state = make_model(
                        m.rd | stores | {copy_var(n, 1) for n in m1b.rd}
                        | {copy_var(n, 2) for n in m2b.rd},
                        m.wr | stores | {copy_var(n, 1) for n in m1b.wr}
                        | {copy_var(n, 2) for n in m2b.wr},
                        m.v | {copy_var(n, 1) for n in m1b.v} | {copy_var(n, 2) for n in m2b.v})
                    outs = successors(state, prog_merge(names), ext)
                    assert outs == {merge(m1b, m2b)}
    assert prog_merge(()) == ExoTest(TOP)


@pytest.mark.parametrize("a, b", [
    ("+p", "-q"), ("p?!", "+W(q)"), ("(+p U -p)", "q ?"), ("+p", "(+W(p) ; +p ; -R(p))"),
    ("(-W(p))*", "q ?! ; +q"), ("true ?!", "true ?!"), ("+p", "-p"),
])
def test_flatten_emulates_parallel(a, b):
    a, b = P(a), P(b)
    flat = prog_flatten(a, b)
    u = Universe(vars_of(Par(a, b)) | {"z"})
    assert equiv_programs(Par(a, b), flat, u, generated_vars(flat)) is True


def test_flatten_emulates_nested_parallel():
    a, b = P("+p || -q"), P("+R(p)")
    flat = prog_flatten(a, b)
    assert equiv_programs(Par(a, b), flat, "pq", generated_vars(flat)) is True


def test_flatten_leaves_no_trace():
    flat = prog_flatten(P("+p ; -R(q)"), P("q ?! U +W(p)"))
    ext = Universe(vars_of(flat))
    for m in enumerate_models(Universe("pq")):
        for x in successors(m, flat, ext):
            assert restrict(x, generated_vars(flat)) == make_model()


def test_flatten_of_conflicting_writes_is_empty():
    flat = prog_flatten(P("+p"), P("-p"))
    u = Universe("p")
    ext = Universe(vars_of(flat))
    assert not any(successors(m, flat, ext) for m in enumerate_models(u))


def test_reduce_examples():
    assert reduce(F("<+p> true")) == Write("p")
    assert reduce(F("<+p> q")) == conj(Write("p"), Prop("q"))
    assert reduce(F("<-p> p")) == Not(TOP)
    assert reduce(F("<+R(p)> R(p)")) == TOP
    assert pretty_print(reduce(F("<p?!> true"))) == "R(p) & p"


def test_star_bound():
    assert star_bound(P("+p"), Atom("p")) == 6
    assert star_bound(P("true ?"), TOP) == 1
    assert star_bound_literal(Atom("p")) == 2
    f = F("<(+p)*> p")
    g = Diamond(power_upto(P("+p"), 6), Atom("p"))
    assert equiv_formulas(to_formula(reduce(f)), g, "p") is True


def test_literal_star_bound_is_too_small():
    prog = P("(~R(p) ? ; +R(p)) U ((R(p) & ~W(p)) ? ; +W(p)) U (W(p) ? ; +p)")
    lhs = Diamond(Star(prog), Atom("p"))
    short = Diamond(power_upto(prog, star_bound_literal(Atom("p"))), Atom("p"))
    cex = equiv_formulas(lhs, short, "p")
    assert not cex and cex.models[0] == make_model() and cex.replay()
    assert equiv_formulas(lhs, reduce(lhs), "p") is True


def test_endogenous_axiom_needs_writable_toggles():
    lhs = F("<p ?!> true")
    literal = box(toggle_unreadable_literal("p"), Atom("p"))
    repaired = box(toggle_unreadable("p"), Atom("p"))
    cex = equiv_formulas(lhs, literal, "p")
    assert not cex and cex.models[0] == make_model()
    hidden_true = make_model(v="p")
    assert not satisfies(hidden_true, lhs, "p") and satisfies(hidden_true, literal, "p")
    assert equiv_formulas(lhs, repaired, "p") is True


def test_assigned_only_shortcut_is_unsound():
    f = F("<q ?! || q ?!> true")
    exact = reduce(f)
    short = reduce(f, restrict_to_assigned=True)
    assert equiv_formulas(f, exact, "q") is True
    cex = equiv_formulas(f, short, "q")
    assert not cex and cex.replay()


def test_resource_limit():
    with pytest.raises(ResourceLimit) as exc:
        reduce(F("<(+p || -q) || +W(r)> p"), budget=100)
    assert exc.value.size == 100


def test_trace_lines():
    lines = []
    reduce(F("<+p ; q ?> p"), trace=lines.append)
    assert lines == [
        "prog[?] @0.1 in=3 out=4",
        "assign[+p] @0.0 in=4 out=4",
        "prog[;] @0 in=3 out=4",
    ]


def test_reducer_shares_work_between_calls():
    r = Reducer()
    a = r.formula(F("<+p || -q> p"))
    size = len(r.bdd)
    assert r.formula(F("<+p || -q> p")) == a and len(r.bdd) == size


@settings(max_examples=150, deadline=None)
@given(formulas())
def test_reduction_is_sound(f):
    out = reduce(f)
    assert is_boolean(out)
    assert not any(n.startswith("$") for n in vars_of(out))
    assert equiv_formulas(f, out, Universe(vars_of(f) | {"z"})) is True


@settings(max_examples=100, deadline=None)
@given(formulas(par=False))
def test_reduction_is_idempotent(f):
    once = reduce(f)
    assert reduce(to_formula(once)) == once


@pytest.mark.parametrize("order", [("p", "q"), ("q", "p")])
def test_variable_order_is_irrelevant(order):
    """Sequencing the split over P in either order gives the same relation."""
    canonical = prog_split("pq")
    alt = seq_all(prog_split(n) for n in order)
    ext = Universe(vars_of(canonical))
    for m in enumerate_models(Universe("pq")):
        assert successors(m, canonical, ext) == successors(m, alt, ext)
