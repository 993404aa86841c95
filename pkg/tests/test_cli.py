import pytest

from dlpapar.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check(capsys):
    assert run(capsys, "check", "R{p,q,r} W{p,q} V{p,q,r}", "<-p || -q>(~p & ~q & r)") == (0, "HOLDS\n", "")
    assert run(capsys, "check", "R{} W{} V{}", "true")[:2] == (0, "HOLDS\n")
    assert run(capsys, "check", "R{p} W{p} V{p}", "<+p || +p> true")[:2] == (1, "FAILS\n")


def test_run(capsys):
    assert run(capsys, "run", "R{p,q,r} W{p,q} V{p,q,r}", "+p || -q")[:2] == (0, "R{p,q,r} W{p,q} V{p,r}\n")
    assert run(capsys, "run", "R{} W{} V{}", "true ?")[:2] == (0, "R{} W{} V{}\n")
    assert run(capsys, "run", "R{p} W{p} V{p}", "+p || (+W(p); +p; -R(p))")[:2] == (0, "R{p} W{p} V{p}\n")
    assert run(capsys, "run", "R{p} W{p} V{p}", "+p || +p")[:2] == (1, "")


@pytest.mark.parametrize("method", ["direct", "reduce", "translate", "all"])
def test_decisions(capsys, method):
    m = f"--method={method}"
    assert run(capsys, "valid", "[+p || -p] false", m)[:2] == (0, "VALID\n")
    assert run(capsys, "valid", "W(p) -> R(p)", m)[:2] == (0, "VALID\n")
    assert run(capsys, "sat", "p & ~<p?!> true", m)[:2] == (0, "SAT\n")
    assert run(capsys, "valid", "p -> <p ?!> true", m)[:2] == (1, "INVALID\n")
    assert run(capsys, "sat", "<+p || -p> true", m)[:2] == (1, "UNSAT\n")


def test_reduce_and_translate(capsys):
    assert run(capsys, "reduce", "<+p> true")[:2] == (0, "W(p)\n")
    assert run(capsys, "reduce", "true")[:2] == (0, "true\n")
    assert run(capsys, "translate", "<+W(p)> true")[:2] == (0, "<+r_p ; +w_p> true\n")
    assert run(capsys, "translate", "--program", "+p")[:2] == (0, "w_p ? ; +p\n")


def test_trace_goes_to_stderr(capsys):
    code, out, err = run(capsys, "reduce", "--trace", "<+p ; q ?> p")
    assert out == "W(p) & q\n"
    assert err.splitlines()[-1].startswith("prog[;] @0 ")


def test_dimacs(capsys, tmp_path):
    code, out, _ = run(capsys, "dimacs", "p")
    assert (code, out) == (0, "p cnf 3 2\n1 0\n-3 2 0\n")
    target = tmp_path / "f.cnf"
    assert run(capsys, "dimacs", "true", "-o", str(target))[0] == 0
    assert target.read_text() == "p cnf 1 1\n1 -1 0\n"
    assert (tmp_path / "f.cnf.map").read_text() == ""


def test_input_errors(capsys):
    code, _, err = run(capsys, "check", "R{p}", "true")
    assert code == 2 and "malformed model" in err
    code, _, err = run(capsys, "sat", "p &")
    assert code == 2 and "line 1, column 4" in err
    code, _, err = run(capsys, "check", "R{} W{} V{}", "q", "--universe", "p")
    assert code == 2
    assert run(capsys, "check", "R{} W{} V{}", "~q", "--universe", "p,q")[:2] == (0, "HOLDS\n")


def test_budget(capsys, monkeypatch):
    code, _, err = run(capsys, "reduce", "<(+p || -q) || +W(r)> p", "--budget", "100")
    assert code == 3 and "resource limit" in err
    monkeypatch.setenv("DLPAPAR_BUDGET", "100")
    assert run(capsys, "reduce", "<(+p || -q) || +W(r)> p")[0] == 3
    monkeypatch.setenv("DLPAPAR_BUDGET", "lots")
    assert run(capsys, "reduce", "true")[0] == 2


def test_props(capsys):
    code, out, _ = run(capsys, "props", "paper-examples", "--seed", "3")
    assert code == 0 and out.startswith("SUITE paper-examples SEED 3 PASS ")
