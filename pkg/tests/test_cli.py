import pytest

from acworkbench import cli, moves, search, words
from acworkbench.cli import ERROR, INCONCLUSIVE, NEGATIVE, OK, main


@pytest.fixture
def files(tmp_path):
    def make(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return make


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_reduce(capsys):
    assert run(capsys, "reduce", "abBA")[:2] == (OK, "\n")
    assert run(capsys, "reduce", "aaB")[:2] == (OK, "aaB\n")
    code, _, err = run(capsys, "reduce", "a1A")
    assert code == ERROR and "position 1" in err


def test_apply(capsys, files):
    t = files("t.txt", "2 2\na\nb\n")
    code, out, _ = run(capsys, "apply", t, files("m.txt", "R 1 2 +\n"))
    assert code == OK and words.parse_tuple_file(out) == words.WordTuple.from_strings(["ab", "b"])
    code, out, _ = run(capsys, "apply", t, files("e.txt", ""))
    assert code == OK and out == "2 2\na\nb\n"
    code, _, err = run(capsys, "apply", t, files("bad.txt", "R 1 3 +\n"))
    assert code == ERROR and err.startswith("error:")


def test_ak_roundtrip(capsys, tmp_path):
    out_path = tmp_path / "ak3.txt"
    assert run(capsys, "ak", "3", "--out", str(out_path))[0] == OK
    t = words.parse_tuple_file(out_path.read_text())
    assert [str(w) for w in t.entries] == ["aaaBBBB", "abaBAB"]
    assert run(capsys, "ak", "1")[0] == ERROR


def test_search_and_verify(capsys, files, tmp_path):
    t = files("t.txt", "2 2\nab\nb\n")
    cert_path = tmp_path / "cert.txt"
    code, _, _ = run(capsys, "search", t, "--cap", "4", "--seed", "9", "--out", str(cert_path))
    assert code == OK
    text = cert_path.read_text()
    assert text.startswith("# seed=9 threads=")
    cert = search.parse_certificate(text)
    assert list(cert.moves) == [moves.R(1, 2, -1)]
    assert search.parse_certificate(search.format_certificate(cert)) == cert
    code, out, _ = run(capsys, "verify", str(cert_path))
    assert (code, out) == (OK, "valid moves=1 trivialization=yes\n")
    tampered = files("bad.txt", text.replace("R 1 2 -", "R 1 2 +"))
    code, out, _ = run(capsys, "verify", tampered)
    assert code == NEGATIVE and out.startswith("invalid")


def test_search_negative_and_inconclusive(capsys, files):
    # (a, a) has |det| 0: provably unreachable
    code, out, _ = run(capsys, "search", files("aa.txt", "2 2\na\na\n"), "--cap", "6")
    assert code == NEGATIVE and "exhausted" in out
    t = files("far.txt", "2 2\naab\nab\n")
    code, out, _ = run(capsys, "search", t, "--cap", "9", "--budget", "3")
    assert code == INCONCLUSIVE and "budget" in out
    with pytest.raises(SystemExit) as exc:
        main(["search", t, "--strategy", "dfs"])
    assert exc.value.code == ERROR


def test_search_independent_of_threads(capsys, files, monkeypatch):
    t = files("t.txt", "2 2\nabAB\nab\n")
    _, one, _ = run(capsys, "search", t, "--cap", "8", "--threads", "1")
    monkeypatch.setenv("AC_WORKBENCH_THREADS", "3")
    parser = cli.build_parser()
    assert parser.parse_args(["search", t]).threads == 3
    _, three, _ = run(capsys, "search", t, "--cap", "8", "--threads", "3")
    assert one.splitlines()[1:] == three.splitlines()[1:]


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "--enum-cap", "2", "--cap", "4")
    assert code == OK
    assert out.splitlines()[-1] == "component 0 size 8 rep a b"
    code, _, _ = run(capsys, "classify", "--enum-cap", "4", "--cap", "6", "--budget", "50")
    assert code == INCONCLUSIVE


def test_identity(capsys, files):
    code, out, _ = run(capsys, "identity", files("ii.txt", "I 1\nI 1\n"))
    assert code == OK and out.endswith("identity=yes\n")
    code, out, _ = run(capsys, "identity", files("r.txt", "R 1 2 +\n"))
    assert code == NEGATIVE
    assert out.splitlines()[0] == "W1 = x1 x2"


def test_witness(capsys, files):
    t = files("t.txt", "2 2\na\nb\n")
    code, out, _ = run(capsys, "witness", files("c.txt", "C 1 a\n"), t)
    assert code == OK
    lines = dict(line.split(": ", 1) for line in out.splitlines())
    point = words.parse_tuple_inline(lines["point"], 2)
    assert words.parse_tuple_inline(lines["image"], 2) == moves.apply_sequence(point, [moves.C(1, 1)])
    assert point != moves.apply_sequence(point, [moves.C(1, 1)])
    code, _, _ = run(capsys, "witness", files("id.txt", "C 1 a\nC 1 A\n"), t)
    assert code == NEGATIVE
    assert run(capsys, "witness", files("c2.txt", "I 1\n"), files("e.txt", "2 2\na\n\n"))[0] == ERROR


def test_finite(capsys, files):
    code, out, _ = run(capsys, "finite", files("z2.txt", "order 2\n0 1\n1 0\n"))
    assert code == OK
    assert out.splitlines()[1] == "fac_order=6 ac_order=6 kernel_order=1 transitive_on_N=yes orbit_sizes=1,3"
    fields = dict(kv.split("=") for kv in out.splitlines()[1].split())
    assert int(fields["fac_order"]) == int(fields["ac_order"]) * int(fields["kernel_order"])
    bad = files("bad.txt", "order 2\n0 1\n1 1\n")
    code, _, err = run(capsys, "finite", bad)
    assert code == ERROR and "inverses" in err


def test_argument_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == ERROR
    assert run(capsys, "reduce", "a", "--threads", "0")[0] == ERROR
    assert run(capsys, "apply", "/nonexistent/t", "/nonexistent/m")[0] == ERROR
