import json
from pathlib import Path

import numpy as np
import pytest

from intrinsic_risk import InputError, VaRSet
from intrinsic_risk.cli import main
from intrinsic_risk.io import load_acceptance, load_measures, load_scenarios

DATA = Path(__file__).resolve().parents[1] / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def files(set_name="var.json", scenarios="demo.json"):
    return ["--scenarios", DATA / scenarios, "--set", DATA / set_name, "--position", "X", "--asset", "S"]


class TestLoading:
    def test_json(self):
        book = load_scenarios(DATA / "demo.json")
        assert book.space.size == 4
        assert book.position("X").initial_value == 10.0
        np.testing.assert_array_equal(book.asset("S").payoff, np.ones(4))

    def test_csv_matches_json(self):
        a, b = load_scenarios(DATA / "demo.json"), load_scenarios(DATA / "demo.csv")
        np.testing.assert_array_equal(a.position("X").payoff, b.position("X").payoff)
        np.testing.assert_array_equal(a.space.probabilities, b.space.probabilities)

    def test_unknown_name(self):
        with pytest.raises(InputError, match="no position named 'Z'"):
            load_scenarios(DATA / "demo.json").position("Z")

    def test_acceptance(self):
        space = load_scenarios(DATA / "demo.json").space
        assert isinstance(load_acceptance(DATA / "var.json", space), VaRSet)
        assert load_acceptance(DATA / "es.json", space, alpha=0.25).alpha == 0.25

    def test_measures(self):
        space = load_scenarios(DATA / "demo.json").space
        assert load_measures(DATA / "measures.json", space).shape == (3, 4)

    def test_json_syntax_error(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"probabilities": [0.5, 0.5],\n "positions": }')
        with pytest.raises(InputError, match="line 2"):
            load_scenarios(bad)

    def test_missing_field(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"probabilities": [1.0], "positions": {"X": {"payoff": [1]}}}))
        with pytest.raises(InputError, match="positions.X: missing field 'initial_value'"):
            load_scenarios(bad)

    def test_csv_bad_cell(self, tmp_path):
        (tmp_path / "s.csv").write_text("scenario,probability,X\na,0.5,1\nb,0.5,oops\n")
        (tmp_path / "s.meta.json").write_text('{"positions": {"X": {"initial_value": 1}}}')
        with pytest.raises(InputError, match="line 3: field 'X'"):
            load_scenarios(tmp_path / "s.csv")

    def test_csv_bad_header(self, tmp_path):
        (tmp_path / "s.csv").write_text("id,p,X\na,1,1\n")
        (tmp_path / "s.meta.json").write_text("{}")
        with pytest.raises(InputError, match="line 1"):
            load_scenarios(tmp_path / "s.csv")

    def test_bad_probabilities(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"probabilities": [0.5, 0.6]}))
        with pytest.raises(InputError, match="probabilities"):
            load_scenarios(bad)


class TestCli:
    def test_compare_json(self, capsys):
        code, out, _ = run(capsys, "compare", *files(), "--format", "json")
        assert code == 0
        d = json.loads(out)
        assert d["intrinsic"] == pytest.approx(1 / 6, abs=1e-12)
        assert d["monetary"] == pytest.approx(2.0, abs=1e-12)

    def test_compare_table_and_figures(self, capsys, tmp_path):
        code, out, _ = run(capsys, "compare", *files("es.json"), "--benchmark", "B", "--figures", tmp_path)
        assert code == 0 and "capital" in out
        for name in ("payoffs.png", "segment.png"):
            assert (tmp_path / name).stat().st_size > 0

    def test_intrinsic_csv(self, capsys):
        code, out, _ = run(capsys, "intrinsic", *files(scenarios="demo.csv"), "--format", "json")
        assert code == 0 and json.loads(out)["intrinsic"] == pytest.approx(1 / 6, abs=1e-9)

    def test_monetary(self, capsys):
        code, out, _ = run(capsys, "monetary", *files("es.json"), "--format", "json")
        assert code == 0 and json.loads(out)["monetary"] == pytest.approx(6.0, abs=1e-8)

    def test_dual_check_es(self, capsys):
        code, out, _ = run(capsys, "dual-check", *files("es.json"), "--format", "json")
        d = json.loads(out)
        assert code == 0 and d["gap"] <= 1e-6 and d["measures"] == 6

    def test_dual_check_generator(self, capsys):
        code, out, _ = run(capsys, "dual-check", *files("generator.json"), "--format", "json", "--tol", "5e-3")
        assert code == 0 and json.loads(out)["gap"] <= 5e-3

    def test_dual_check_user_measures(self, capsys):
        code, out, _ = run(capsys, "dual-check", *files("es.json"), "--measures", DATA / "measures.json",
                           "--format", "json")
        assert code == 0 and json.loads(out)["dual"] == pytest.approx(0.375, abs=1e-12)

    def test_dual_check_breach(self, capsys, tmp_path):
        # the base measure alone misses the maximising vertex
        q = tmp_path / "q.json"
        q.write_text(json.dumps({"measures": [[0.25] * 4]}))
        code, out, _ = run(capsys, "dual-check", *files("es.json"), "--measures", q, "--format", "json")
        assert code == 4 and json.loads(out)["gap"] == pytest.approx(0.375 - 1.5 / 11.5, abs=1e-9)

    def test_dual_check_var_precondition(self, capsys):
        code, _, err = run(capsys, "dual-check", *files("var.json"))
        assert code == 3 and "precondition" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "compare", "--scenarios", tmp_path / "nope.json", "--set", DATA / "var.json",
                           "--position", "X", "--asset", "S")
        assert code == 2 and "cannot read" in err

    def test_malformed(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{\n  \"probabilities\": [0.5, 0.5,\n")
        code, _, err = run(capsys, "intrinsic", "--scenarios", bad, "--set", DATA / "var.json",
                           "--position", "X", "--asset", "S")
        assert code == 2 and "line" in err

    def test_bad_arguments(self, capsys):
        assert run(capsys, "compare")[0] == 2

    def test_props_deterministic(self, capsys):
        argv = ("props", "--instances", "30", "--seed", "7", "--format", "json",
                "--only", "relevance", "translation", "s_additivity")
        code1, out1, _ = run(capsys, *argv)
        code2, out2, _ = run(capsys, *argv)
        assert code1 == code2 == 0
        assert json.loads(out1) == json.loads(out2)
