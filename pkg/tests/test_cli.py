import csv
import io
import json

import pytest

from worked_examples import NOT_ONF_TEXT, NOT_WD_TEXT, P_SEVEN, PROFESSOR_NT, Q2, Q_TEXT
from wdsparql.cli import main
from wdsparql.surface import parse_pattern, print_pattern


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return {
        "q": write("q.rq", Q_TEXT),
        "bad": write("bad.rq", NOT_WD_TEXT),
        "nonf": write("nonf.rq", NOT_ONF_TEXT),
        "broken": write("broken.rq", "{?x p"),
        "seven": write("seven.rq", print_pattern(P_SEVEN)),
        "data": write("professor.nt", PROFESSOR_NT),
        "empty": write("empty.nt", ""),
        "write": write,
    }


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestCheck:
    def test_well_designed(self, capsys, files):
        assert run(capsys, "check", files["q"]) == (0, "", "")

    def test_violation(self, capsys, files):
        code, out, _ = run(capsys, "check", files["bad"])
        assert code == 1
        assert out.startswith("BadOptVariable:") and out.count("\n") == 1

    def test_json(self, capsys, files):
        code, out, _ = run(capsys, "check", "--format", "json", files["bad"])
        assert code == 1 and json.loads(out)["variable"] == "?z"

    def test_parse_error(self, capsys, files):
        code, _, err = run(capsys, "check", files["broken"])
        assert code == 2 and "error" in err

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "check", str(tmp_path / "nope.rq"))[0] == 2

    def test_usage(self, capsys):
        assert run(capsys, "frobnicate")[0] == 2
        assert run(capsys, "approx")[0] == 2


class TestApprox:
    def test_professor_k1(self, capsys, files):
        code, out, _ = run(capsys, "approx", "-k", "1", files["q"])
        assert code == 0 and parse_pattern(out) == Q2

    def test_k0_is_opt_free(self, capsys, files):
        _, out, _ = run(capsys, "approx", "-k", "0", files["seven"])
        assert "OPTIONAL" not in out

    def test_profile(self, capsys, files):
        _, out, _ = run(capsys, "approx", "-k", "1", "--profile", files["seven"])
        assert out.splitlines()[1:] == ["k=0 opts=0", "k=1 opts=2", "k=2 opts=4",
                                        "k=3 opts=5"]

    def test_tree(self, capsys, files):
        _, out, _ = run(capsys, "approx", "-k", "2", "--tree", files["seven"])
        assert "OPT3" in out and "OPT5" not in out
        assert "Traversal List" in out

    def test_not_well_designed(self, capsys, files):
        assert run(capsys, "approx", "-k", "1", files["bad"])[0] == 1

    def test_no_normalize(self, capsys, files):
        p = files["write"]("wd_nonf.rq", "{{?x p ?y OPTIONAL {?x q ?z}} ?x r ?w}")
        assert run(capsys, "approx", "-k", "0", "--no-normalize", p)[0] == 1
        code, out, _ = run(capsys, "approx", "-k", "0", p)
        assert code == 0 and parse_pattern(out) == parse_pattern("{?x p ?y . ?x r ?w}")

    def test_negative_k(self, capsys, files):
        assert run(capsys, "approx", "-k", "-1", files["q"])[0] == 2


class TestEval:
    def test_exact(self, capsys, files):
        code, out, err = run(capsys, "eval", files["q"], files["data"])
        assert code == 0
        assert out == "?x=JonSmith\t?y=SemanticUniversity\t?z=LizBen\n"
        assert err.startswith("# answers=1 ")

    def test_k0(self, capsys, files):
        _, out, _ = run(capsys, "eval", files["q"], files["data"], "-k", "0")
        assert out == "?x=JonSmith\n"

    def test_empty_data(self, capsys, files):
        code, out, err = run(capsys, "eval", files["q"], files["empty"])
        assert (code, out) == (0, "") and "answers=0" in err

    def test_json_via_env(self, capsys, files, monkeypatch):
        monkeypatch.setenv("WDSPARQL_FORMAT", "json")
        _, out, _ = run(capsys, "eval", files["q"], files["data"], "-k", "1")
        assert json.loads(out) == {"?x": "JonSmith", "?y": "SemanticUniversity"}

    def test_bad_env_format(self, capsys, files, monkeypatch):
        monkeypatch.setenv("WDSPARQL_FORMAT", "xml")
        assert run(capsys, "eval", files["q"], files["data"])[0] == 2

    def test_bad_data(self, capsys, files):
        data = files["write"]("bad.nt", "<s> <p> <o>\n")
        code, _, err = run(capsys, "eval", files["q"], data)
        assert code == 2 and "line 1" in err

    def test_byte_stable(self, capsys, files):
        outs = {run(capsys, "eval", files["seven"], files["data"])[1] for _ in range(3)}
        assert len(outs) == 1

    @pytest.mark.parametrize("k", [0, 1, 2, 3])
    def test_approx_then_eval_matches_eval_k(self, capsys, files, k):
        _, approx_text, _ = run(capsys, "approx", "-k", str(k), files["q"])
        approx_file = files["write"](f"q{k}.rq", approx_text)
        _, via_file, _ = run(capsys, "eval", approx_file, files["data"])
        _, direct, _ = run(capsys, "eval", files["q"], files["data"], "-k", str(k))
        assert via_file == direct


class TestOtherCommands:
    def test_normalize(self, capsys, files):
        p = files["write"]("wd_nonf.rq", "{{?x p ?y OPTIONAL {?x q ?z}} ?x r ?w}")
        code, out, err = run(capsys, "normalize", "-v", p)
        assert code == 0
        assert out.strip() == "{?x p ?y . ?x r ?w OPTIONAL {?x q ?z}}"
        assert "R2" in err

    def test_normalize_rejects(self, capsys, files):
        assert run(capsys, "normalize", files["nonf"])[0] == 1

    def test_depth(self, capsys, files):
        assert run(capsys, "depth", files["seven"])[1] == "depth=3 opts=5\n"

    def test_tree(self, capsys, files):
        code, out, _ = run(capsys, "tree", files["seven"])
        assert code == 0 and out.splitlines()[0] == "OPT1"

    def test_reductions(self, capsys, files):
        _, out, _ = run(capsys, "reductions", files["q"])
        got = {parse_pattern(line) for line in out.splitlines()}
        assert got == {parse_pattern("{?x rdf:type professor}"), Q2}

    def test_bench_csv(self, capsys):
        code, out, _ = run(capsys, "bench", "--shapes", "left-deep,full", "--opts", "4,7",
                           "--scales", "1", "--k-max", "2", "--repeats", "1",
                           "--format", "csv")
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert len(rows) == 2 * 3
        assert {r["query"] for r in rows} == {"left-deep/4", "full/7"}

    def test_bench_bad_shape(self, capsys):
        assert run(capsys, "bench", "--shapes", "full", "--opts", "4")[0] == 2
        assert run(capsys, "bench", "--shapes", "spiral")[0] == 2
