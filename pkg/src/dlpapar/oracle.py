"""Brute-force cross-validation and the seeded property suites.

Every check here enumerates models over a small universe and compares the
direct semantics with whatever is being validated.  Reports are plain text
and depend only on (suite, seed, limits).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Optional

from . import dlpa, rewrite
from .cnf import satisfiable_boolean
from .models import (Model, Universe, enumerate_models, format_model, make_model,
                     merge, splits)
from .rewrite import DEFAULT_BUDGET, ResourceLimit
from .semantics import Evaluator, satisfiable_direct
from .syntax import (TOP, AssignFalse, AssignTrue, Atom, Choice, Diamond, EndoTest,
                     ExoTest, MakeReadable, MakeUnreadable, MakeUnwritable,
                     MakeWritable, Not, Or, Par, Seq, Star, box, conj, imp,
                     parse_formula, parse_program, power_upto,
                     pretty_print, readable_stmt, vars_of, writable_stmt)

METHODS = ("direct", "reduce", "translate")


# -- equivalence ----------------------------------------------------------------

@dataclass(frozen=True)
class Counterexample:
    """A witness of non-equivalence; always falsy."""

    lhs: object
    rhs: object
    universe: Universe
    models: tuple
    detail: str = ""
    extra: tuple = ()

    def __bool__(self):
        return False

    def replay(self) -> bool:
        """True when the witness still separates lhs and rhs."""
        ev = Evaluator(Universe(set(self.universe.vars) | set(self.extra)))
        states = [ev.u.encode(m) for m in self.models]
        if len(states) == 1:
            return ev.holds(states[0], self.lhs) != ev.holds(states[0], self.rhs)
        a, b = states
        return (b in ev.succ(a, self.lhs)) != (b in ev.succ(a, self.rhs))

    def __str__(self):
        lines = [f"  lhs: {pretty_print(self.lhs)}", f"  rhs: {pretty_print(self.rhs)}",
                 f"  universe: {self.universe}"]
        if len(self.models) == 1:
            lines.append(f"  model: {format_model(self.models[0])}")
        else:
            lines.append(f"  from: {format_model(self.models[0])}")
            lines.append(f"  to:   {format_model(self.models[1])}")
        if self.detail:
            lines.append(f"  {self.detail}")
        return "\n".join(lines)


def _universe(u) -> Universe:
    return u if isinstance(u, Universe) else Universe(u)


def equiv_formulas(f, g, u, extra: Iterable[str] = ()):
    """True when f and g hold in the same models over ``u``.

    ``extra`` names variables that may occur in f or g but are absent from
    every compared model (unreadable and false), such as generated copies.
    """
    u = _universe(u)
    extra = tuple(sorted(set(extra) - set(u.vars)))
    ev = Evaluator(Universe(set(u.vars) | set(extra)))
    ev.check(f)
    ev.check(g)
    for m in enumerate_models(u):
        s = ev.u.encode(m)
        a, b = ev.holds(s, f), ev.holds(s, g)
        if a != b:
            return Counterexample(f, g, u, (m,), f"lhs {a}, rhs {b}", extra)
    return True


def equiv_programs(p1, p2, u, extra: Iterable[str] = ()):
    """True when p1 and p2 relate the same pairs of models out of ``u``."""
    u = _universe(u)
    extra = tuple(sorted(set(extra) - set(u.vars)))
    ev = Evaluator(Universe(set(u.vars) | set(extra)))
    ev.check(p1)
    ev.check(p2)
    for m in enumerate_models(u):
        s = ev.u.encode(m)
        a, b = ev.succ(s, p1), ev.succ(s, p2)
        if a != b:
            diff = sorted(a ^ b)[0]
            side = "lhs" if diff in a else "rhs"
            return Counterexample(p1, p2, u, (m, ev.u.decode(diff)), f"only {side}", extra)
    return True


def generated_vars(x) -> frozenset:
    return frozenset(n for n in vars_of(x) if n.startswith("$"))


# -- the three decision procedures ---------------------------------------------------

def sat_by(method: str, f, budget: int = DEFAULT_BUDGET) -> bool:
    if method == "direct":
        return satisfiable_direct(f, sorted(vars_of(f)))
    if method == "reduce":
        return satisfiable_boolean(rewrite.reduce(f, budget=budget))
    if method == "translate":
        return dlpa.sat(f, budget=budget)
    raise ValueError(f"unknown method {method!r}")


def valid_by(method: str, f, budget: int = DEFAULT_BUDGET) -> bool:
    return not sat_by(method, Not(f), budget)


# -- generators -------------------------------------------------------------------

@dataclass(frozen=True)
class Limits:
    vars: int = 2
    depth: int = 3          # modal depth of formulas
    program_depth: int = 3  # nesting of program operators
    par_nesting: int = 1
    cases: int = 100
    budget: int = DEFAULT_BUDGET


DEFAULT_LIMITS = Limits()
_NAMES = ("p", "q", "r", "s")
_ATOMIC = (AssignTrue, AssignFalse, MakeReadable, MakeUnreadable, MakeWritable,
           MakeUnwritable)


class Generator:
    """Seeded random formulas and programs over the first ``limits.vars`` names."""

    def __init__(self, seed: int, limits: Limits = DEFAULT_LIMITS):
        self.rng = random.Random(seed)
        self.limits = limits
        self.names = _NAMES[:limits.vars]

    def name(self):
        return self.rng.choice(self.names)

    def boolean(self, size: int = 2):
        r = self.rng.random()
        if size <= 0 or r < 0.4:
            x = self.rng.random()
            if x < 0.1:
                return TOP
            if x < 0.75:
                return Atom(self.name())
            if x < 0.88:
                return readable_stmt(self.name())
            return writable_stmt(self.name())
        if r < 0.6:
            return Not(self.boolean(size - 1))
        if r < 0.8:
            return Or(self.boolean(size - 1), self.boolean(size - 1))
        return conj(self.boolean(size - 1), self.boolean(size - 1))

    def program(self, depth=None, par=None, star=True):
        if depth is None:
            depth = self.limits.program_depth
        if par is None:
            par = self.limits.par_nesting
        r = self.rng.random()
        if depth <= 0:
            r *= 0.7
        if r < 0.5:
            return self.rng.choice(_ATOMIC)(self.name())
        if r < 0.7:
            cls = ExoTest if self.rng.random() < 0.5 else EndoTest
            return cls(self.boolean(1))
        if r < 0.9:
            cls = Seq if self.rng.random() < 0.5 else Choice
            return cls(self.program(depth - 1, par, star), self.program(depth - 1, par, star))
        if r < 0.95:
            if star:
                return Star(self.program(depth - 1, par, False))
            return self.rng.choice(_ATOMIC)(self.name())
        if par > 0:
            return Par(self.program(depth - 1, par - 1, star),
                       self.program(depth - 1, par - 1, star))
        return Seq(self.program(depth - 1, par, star), self.program(depth - 1, par, star))

    def formula(self, depth=None, par=None):
        if depth is None:
            depth = self.limits.depth
        if par is None:
            par = self.limits.par_nesting
        r = self.rng.random()
        if depth <= 0 or r < 0.2:
            return self.boolean(1)
        if r < 0.35:
            return Not(self.formula(depth, par))
        if r < 0.5:
            return Or(self.formula(depth - 1, par), self.formula(depth - 1, par))
        prog = self.program(min(2, self.limits.program_depth), par)
        return Diamond(prog, self.formula(depth - 1, par))

    def universe(self, x) -> Universe:
        """Mentioned variables plus one variable mentioned nowhere."""
        names = set(n for n in vars_of(x) if not n.startswith("$"))
        junk = next(n for n in ("z", "y", "x") if n not in names)
        return Universe(names | {junk})


# -- reports ------------------------------------------------------------------------

@dataclass
class Report:
    name: str
    seed: int
    passed: int = 0
    failed: int = 0
    limited: int = 0
    blocks: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def record(self, label: str, outcome, detail: str = ""):
        """Count one case; ``outcome`` is True, a Counterexample or False."""
        if outcome is True:
            self.passed += 1
            return
        self.failed += 1
        body = str(outcome) if isinstance(outcome, Counterexample) else detail
        self.blocks.append(f"FAIL {label}\n{body}".rstrip())

    def limit(self, label: str, exc: ResourceLimit):
        self.limited += 1
        self.blocks.append(f"LIMIT {label}\n  {exc}")

    def note(self, text: str):
        self.notes.append(text)

    def text(self) -> str:
        head = f"SUITE {self.name} SEED {self.seed} PASS {self.passed} FAIL {self.failed}"
        if self.limited:
            head += f" LIMIT {self.limited}"
        parts = [head] + self.blocks + [f"NOTE {n}" for n in self.notes]
        return "\n".join(parts) + "\n"


def _case(report: Report, label: str, fn):
    try:
        outcome = fn()
    except ResourceLimit as exc:
        report.limit(label, exc)
        return
    report.record(label, outcome)


# -- suite: worked examples ------------------------------------------------------------

def _expect(got, want, what):
    if got == want:
        return True
    return False if want is None else _Mismatch(what, got, want)


class _Mismatch:
    def __init__(self, what, got, want):
        self.what, self.got, self.want = what, got, want

    def __bool__(self):
        return False

    def __str__(self):
        return f"  {self.what}: got {self.got}, expected {self.want}"


def _models_text(ms):
    return "{" + ", ".join(sorted(format_model(m) for m in ms)) + "}"


def _record_plain(report, label, outcome):
    if outcome is True:
        report.passed += 1
    else:
        report.failed += 1
        report.blocks.append(f"FAIL {label}\n{outcome}")


def suite_paper_examples(seed: int, limits: Limits) -> Report:
    from .semantics import successors
    rep = Report("paper-examples", seed)
    m = make_model("pqr", "pq", "pqr")
    m1, m2 = make_model("pr", "p", "pqr"), make_model("qr", "q", "pqr")
    _record_plain(rep, "split-pqr", _expect((m1, m2) in splits(m), True, "split pair present"))
    n1, n2 = make_model("pr", "p", "qr"), make_model("qr", "q", "pr")
    _record_plain(rep, "merge-pqr",
                  _expect(merge(n1, n2), make_model("pqr", "pq", "r"), "merge"))

    def run(model, prog):
        prog = parse_program(prog)
        return successors(model, prog, sorted(model.support() | vars_of(prog)))

    got = run(m, "-p || -q")
    want = {make_model("pqr", "pq", "r")}
    _record_plain(rep, "par-clear-pq", _expect(got, want, "successors") if got == want
                  else _Mismatch("successors", _models_text(got), _models_text(want)))
    full = make_model("pqr", "pqr", "pqr")
    got = run(full, "+p || -q")
    _record_plain(rep, "par-set-clear", True if got == {make_model("pqr", "pqr", "pr")}
                  else _Mismatch("successors", _models_text(got), "{R{p,q,r} W{p,q,r} V{p,r}}"))
    mp = make_model("p", "p", "p")
    for label, prog, want in (
            ("par-write-conflict", "+p || +p", set()),
            ("par-handoff-clear", "+p || (+W(p) ; -p ; -R(p))", set()),
            ("par-handoff-set", "+p || (+W(p) ; +p ; -R(p))", {mp})):
        got = run(mp, prog)
        _record_plain(rep, label, True if got == want
                      else _Mismatch("successors", _models_text(got), _models_text(want)))
    hidden = make_model("", "", "p")
    got_exo, got_endo = run(hidden, "p ?"), run(hidden, "p ?!")
    _record_plain(rep, "hidden-test", True if (got_exo == {hidden} and not got_endo)
                  else _Mismatch("p? / p?!", f"{_models_text(got_exo)} / {_models_text(got_endo)}",
                                 f"{{{hidden}}} / {{}}"))
    gen = Generator(seed, limits)
    instances = [parse_formula(s) for s in ("p", "~p & q", "R(p) -> W(q)", "<+q> p")]
    instances += [gen.formula(1) for _ in range(4)]
    par_valid = [imp(f, box(Par(EndoTest(TOP), EndoTest(TOP)), f)) for f in instances]
    par_valid += [parse_formula(s) for s in
                 ("[+p || -p] false", "[+p || +p] false", "[p?! || +p] false")]
    for f in par_valid:
        verdicts = {meth: valid_by(meth, f, limits.budget) for meth in METHODS}
        ok = all(verdicts.values())
        _record_plain(rep, f"par-valid {pretty_print(f)}", True if ok else _Mismatch(
            "validity", verdicts, "all True"))
    return rep


# -- suite: axiom validity ----------------------------------------------------------------

def axiom_instances(gen: Generator, count: int):
    """Yield (id, lhs, rhs, extra) instances of the reduction axioms."""
    rng = gen.rng
    templates = ["prog[?]", "prog[?!]", "prog[;]", "prog[U]", "prog[*]", "prog[||]",
                 "assign[top]", "assign[not]", "assign[or]", "assign[prop]", "assign[read]", "assign[write]"]
    for i in range(count):
        tid = templates[i % len(templates)]
        phi = gen.formula(1, 0)
        if tid == "prog[?]":
            cond = gen.boolean(2)
            yield tid, Diamond(ExoTest(cond), phi), conj(phi, cond), ()
        elif tid == "prog[?!]":
            cond = gen.boolean(2)
            toggles = rewrite.toggle_unreadable(vars_of(cond))
            yield tid, Diamond(EndoTest(cond), phi), conj(phi, box(toggles, cond)), ()
        elif tid == "prog[;]":
            a, b = gen.program(1, 0), gen.program(1, 0)
            yield tid, Diamond(Seq(a, b), phi), Diamond(a, Diamond(b, phi)), ()
        elif tid == "prog[U]":
            a, b = gen.program(1, 0), gen.program(1, 0)
            yield tid, Diamond(Choice(a, b), phi), Or(Diamond(a, phi), Diamond(b, phi)), ()
        elif tid == "prog[*]":
            a = gen.program(1, 0, star=False)
            bound = rewrite.star_bound(a, phi)
            yield tid, Diamond(Star(a), phi), Diamond(power_upto(a, bound), phi), ()
        elif tid == "prog[||]":
            a, b = gen.program(1, 0), gen.program(1, 0)
            flat = rewrite.prog_flatten(a, b)
            yield tid, Diamond(Par(a, b), phi), Diamond(flat, phi), tuple(generated_vars(flat))
        else:
            p = gen.name()
            atomic = rng.choice(_ATOMIC)(p)
            if tid == "assign[top]":
                rhs = writable_stmt(p) if atomic.__class__ in (AssignTrue, AssignFalse) else TOP
                yield tid, Diamond(atomic, TOP), rhs, ()
            elif tid == "assign[not]":
                neg = Not(Diamond(atomic, phi))
                rhs = conj(writable_stmt(p), neg) if type(atomic) in (AssignTrue, AssignFalse) else neg
                yield tid, Diamond(atomic, Not(phi)), rhs, ()
            elif tid == "assign[or]":
                psi = gen.formula(1, 0)
                yield tid, Diamond(atomic, Or(phi, psi)), Or(Diamond(atomic, phi), Diamond(atomic, psi)), ()
            else:
                q = gen.name()
                kind = tid[7:-1]
                target = {"prop": Atom(q), "read": readable_stmt(q), "write": writable_stmt(q)}[kind]
                yield tid, Diamond(atomic, target), assign_axiom_rhs(atomic, kind, q), ()


def assign_axiom_rhs(atomic, kind: str, q: str):
    """Right-hand side of the assignment axiom for <atomic> target(q)."""
    p = atomic.var
    t = type(atomic)
    w_p, same = writable_stmt(p), p == q
    bot = Not(TOP)
    target = {"prop": Atom(q), "read": readable_stmt(q), "write": writable_stmt(q)}[kind]
    if t in (AssignTrue, AssignFalse):
        if kind == "prop" and same:
            return w_p if t is AssignTrue else bot
        return conj(w_p, target)
    if kind == "prop":
        return target
    if kind == "read":
        if not same or t is MakeUnwritable:
            return target
        return TOP if t in (MakeReadable, MakeWritable) else bot
    if not same or t is MakeReadable:
        return target
    return TOP if t is MakeWritable else bot


def suite_axiom_validity(seed: int, limits: Limits) -> Report:
    rep = Report("axiom-validity", seed)
    gen = Generator(seed, limits)
    for i, (tid, lhs, rhs, extra) in enumerate(axiom_instances(gen, max(limits.cases, 12))):
        u = gen.universe(Or(lhs, rhs))
        _case(rep, f"#{i} {tid}", lambda: equiv_formulas(lhs, rhs, u, extra))
    # the endogenous-test axiom with the toggle (+p U -p) used verbatim
    literal_bad = 0
    gen = Generator(seed, limits)
    for _ in range(max(10, limits.cases // 12)):
        cond = gen.boolean(2)
        phi = gen.formula(1, 0)
        toggles = rewrite.toggle_unreadable_literal(vars_of(cond))
        out = equiv_formulas(Diamond(EndoTest(cond), phi), conj(phi, box(toggles, cond)),
                             gen.universe(Or(cond, phi)))
        literal_bad += out is not True
    rep.note(f"endogenous-test axiom with unguarded toggles: {literal_bad} of "
             f"{max(10, limits.cases // 12)} instances not valid")
    return rep


# -- suite: reduction soundness ------------------------------------------------------------

def suite_reduction_soundness(seed: int, limits: Limits) -> Report:
    rep = Report("reduction-soundness", seed)
    gen = Generator(seed, limits)
    for i in range(limits.cases):
        f = gen.formula()
        label = f"#{i} {pretty_print(f)}"
        _case(rep, label, lambda: equiv_formulas(
            f, rewrite.reduce(f, budget=limits.budget), gen.universe(f)))
    return rep


# -- suite: translation ---------------------------------------------------------------------

def lemma7_case(m: Model, prog, u) -> object:
    """Compare successors of m with those of V+ under the translation."""
    from .semantics import successors
    tp = dlpa.translate_program(prog)
    ev = dlpa.DlpaEvaluator(set(dlpa.atoms_for(u)) | dlpa.atoms_of(tp))
    want = {dlpa.v_plus(x) for x in successors(m, prog, u)}
    got = {ev.decode(s) for s in ev.succ(ev.encode(dlpa.v_plus(m)), tp)}
    if want == got:
        return True
    return _Mismatch(f"successors of {format_model(m)} under {pretty_print(prog)}",
                     sorted(sorted(pretty_print(a, dlpa=True) for a in v) for v in got),
                     sorted(sorted(pretty_print(a, dlpa=True) for a in v) for v in want))


def suite_translation(seed: int, limits: Limits) -> Report:
    rep = Report("translation", seed)
    gen1 = Generator(seed, Limits(vars=1, par_nesting=limits.par_nesting,
                                  program_depth=limits.program_depth))
    u1 = Universe(["p"])
    for i in range(max(1, limits.cases // 4)):
        prog = gen1.program()
        for m in enumerate_models(u1):
            _record_plain(rep, f"u1 #{i}", lemma7_case(m, prog, u1))
    gen = Generator(seed + 1, limits)
    u2 = Universe(gen.names)
    models = list(enumerate_models(u2))
    for i in range(limits.cases):
        prog = gen.program()
        m = gen.rng.choice(models)
        _record_plain(rep, f"u2 #{i}", lemma7_case(m, prog, u2))
    for i in range(limits.cases // 4):
        f = gen.formula()
        want = satisfiable_direct(f, sorted(vars_of(f)))
        try:
            got = dlpa.sat(f, budget=limits.budget)
        except ResourceLimit as exc:
            rep.limit(f"sat #{i}", exc)
            continue
        _record_plain(rep, f"sat #{i} {pretty_print(f)}",
                      True if got == want else _Mismatch("sat", got, want))
    return rep


# -- suite: algebraic properties ------------------------------------------------------------

def _frame(prog, u: Universe):
    """A parallel composition keeps Rd and Wr, and variables outside P(prog)
    keep their value too."""
    from .semantics import program_relation
    outside = set(u.vars) - vars_of(prog)
    for a, b in program_relation(prog, u):
        if a.rd != b.rd or a.wr != b.wr:
            return Counterexample(prog, prog, u, (a, b), "access rights changed")
        for n in outside:
            if (n in a.rd, n in a.wr, n in a.v) != (n in b.rd, n in b.wr, n in b.v):
                return Counterexample(prog, prog, u, (a, b), f"{n} changed")
    return True


def suite_algebraic(seed: int, limits: Limits) -> Report:
    rep = Report("algebraic", seed)
    gen = Generator(seed, limits)
    for i in range(limits.cases):
        a, b, c = (gen.program(2, 0) for _ in range(3))
        u = gen.universe(Seq(Seq(a, b), c))
        _case(rep, f"#{i} comm", lambda: equiv_programs(Par(a, b), Par(b, a), u))
        _case(rep, f"#{i} assoc", lambda: equiv_programs(Par(a, Par(b, c)), Par(Par(a, b), c), u))
        _case(rep, f"#{i} frame", lambda: _frame(Par(a, b), u))
    for u in (Universe(), Universe("p"), Universe("pq")):
        bad = []
        for m in enumerate_models(u):
            for m1, m2 in splits(m):
                if merge(m1, m2) != m:
                    bad.append(f"  {format_model(m)} -> {format_model(m1)} + {format_model(m2)}")
        _record_plain(rep, f"split-merge {u}", True if not bad else "\n".join(bad[:3]))
    return rep


# -- suite: star ---------------------------------------------------------------------------

def literal_bound_counterexample():
    """A pair (prog, phi) over one variable on which the bound 2^|P(phi)| is too small."""
    prog = parse_program("(~R(p) ? ; +R(p)) U ((R(p) & ~W(p)) ? ; +W(p)) U (W(p) ? ; +p)")
    return prog, Atom("p")


def suite_star(seed: int, limits: Limits) -> Report:
    rep = Report("star", seed)
    gen = Generator(seed, Limits(vars=1, par_nesting=0, program_depth=limits.program_depth))
    pairs = [literal_bound_counterexample()]
    pairs += [(gen.program(star=False), gen.formula(1, 0)) for _ in range(limits.cases)]
    literal_bad = []
    u = Universe(["p"])
    for i, (prog, phi) in enumerate(pairs):
        lhs = Diamond(Star(prog), phi)
        rhs = Diamond(power_upto(prog, rewrite.star_bound(prog, phi)), phi)
        _case(rep, f"#{i} unroll", lambda: equiv_formulas(lhs, rhs, u))
        _case(rep, f"#{i} reduce", lambda: equiv_formulas(
            lhs, rewrite.reduce(lhs, budget=limits.budget), u))
        lit = Diamond(power_upto(prog, rewrite.star_bound_literal(phi)), phi)
        out = equiv_formulas(lhs, lit, u)
        if out is not True:
            literal_bad.append(f"{pretty_print(lhs)} at {format_model(out.models[0])}")
    rep.note(f"literal bound 2^|P(phi)| fails on {len(literal_bad)} of {len(pairs)} pairs")
    for line in literal_bad[:3]:
        rep.note(f"  {line}")
    return rep


# -- suite: tri-pipeline agreement -------------------------------------------------------------

def corpus(seed: int, limits: Limits) -> list:
    gen = Generator(seed, limits)
    return [gen.formula() for _ in range(limits.cases)]


def suite_tri_pipeline(seed: int, limits: Limits) -> Report:
    rep = Report("tri-pipeline", seed)
    for i, f in enumerate(corpus(seed, limits)):
        label = f"#{i} {pretty_print(f)}"
        try:
            verdicts = {m: sat_by(m, f, limits.budget) for m in METHODS}
        except ResourceLimit as exc:
            rep.limit(label, exc)
            continue
        agree = len(set(verdicts.values())) == 1
        _record_plain(rep, label, True if agree else _Mismatch("sat", verdicts, "agreement"))
    return rep


SUITES = {
    "paper-examples": suite_paper_examples,
    "axiom-validity": suite_axiom_validity,
    "reduction-soundness": suite_reduction_soundness,
    "translation": suite_translation,
    "algebraic": suite_algebraic,
    "star": suite_star,
    "tri-pipeline": suite_tri_pipeline,
}


def run_suite(name: str, seed: int = 0, limits: Optional[Limits] = None) -> Report:
    try:
        fn = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}") from None
    return fn(seed, limits or DEFAULT_LIMITS)
