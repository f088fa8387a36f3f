import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from quivermod import QuiverPair, emit_dot, enumerate_fundamental, load_fixture
from quivermod.cli import run
from quivermod.io import (
    FormatError, dumps_pair, fixture_names, fixture_path, load_table, loads_pair,
    pair_from_dict, read_table, table_to_string,
)

from conftest import kronecker
from golden_cases import CASES

GOLDEN = Path(__file__).parent / "golden"
PATHS = {n: str(fixture_path(n)) for n in fixture_names()}


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


class TestJson:
    def test_fixtures_shipped(self):
        assert set(fixture_names()) == {"fig1", "defn23", "kronecker", "k3", "dtilde4plus"}

    @pytest.mark.parametrize("name", sorted(PATHS))
    def test_round_trip(self, name):
        text = Path(PATHS[name]).read_text()
        pair, theta = loads_pair(text)
        assert dumps_pair(pair, theta) == text
        again = loads_pair(dumps_pair(pair, theta))
        assert again == (pair, theta)

    def test_unknown_fields_rejected(self):
        data = json.loads(Path(PATHS["k3"]).read_text())
        data["colour"] = "red"
        with pytest.raises(FormatError, match="unknown field"):
            pair_from_dict(data)
        data = json.loads(Path(PATHS["k3"]).read_text())
        data["arrows"][0]["weight"] = 2
        with pytest.raises(FormatError, match=r"arrows\[0\]"):
            pair_from_dict(data)

    def test_bad_values_named(self):
        data = json.loads(Path(PATHS["k3"]).read_text())
        data["alpha"]["v1"] = "one"
        with pytest.raises(FormatError, match=r"alpha\.v1"):
            pair_from_dict(data)
        data["alpha"] = {"v1": 1}
        with pytest.raises(FormatError, match="vertex set"):
            pair_from_dict(data)

    def test_syntax_error_has_position(self):
        with pytest.raises(FormatError, match="line 2, column"):
            loads_pair('{"vertices": ["a"],\n "arrows": [,]}')


class TestDot:
    def test_single_vertex(self):
        text = emit_dot(QuiverPair.from_edges(["v1"], [], [1]))
        assert text == 'digraph {\n  "v1" [label="v1:1"];\n}\n'

    def test_kronecker_edges(self):
        text = emit_dot(kronecker())
        assert text.count('"v1" -> "v2"') == 2

    def test_fig1_with_weight(self):
        pair, theta = load_fixture("fig1")
        text = emit_dot(pair, theta)
        assert text.count("->") == 4
        assert '[label="v1:2/-2"]' in text


class TestCsv:
    def test_round_trip(self):
        rows = enumerate_fundamental(2, 2, 3, 2, max_depth=3)
        text = table_to_string(rows)
        back = read_table(io.StringIO(text))
        assert [(r.canonical_key, r.pair, r.d, r.minimal_verdict) for r in back] == \
               [(r.canonical_key, r.pair, r.d, r.minimal_verdict) for r in rows]

    def test_quoting(self):
        from quivermod import Arrow, Quiver, canonical_key
        from quivermod.search import ClassificationRow
        q = Quiver(("a,b", 'say "x"'), (Arrow("e", "a,b", 'say "x"'),))
        p = QuiverPair(q, {"a,b": 1, 'say "x"': 2})
        text = table_to_string([ClassificationRow(canonical_key(p), p, 1, "NotSearched")])
        assert '"a,b;say ""x"""' in text
        assert read_table(io.StringIO(text))[0].pair == p

    def test_bad_header(self):
        with pytest.raises(FormatError, match="header"):
            read_table(io.StringIO("a,b\n"))

    def test_tampered_key(self, tmp_path):
        rows = enumerate_fundamental(2, 2, 3, 2, search=False)
        text = table_to_string(rows).replace("v1;v2", "v2;v1", 1)
        f = tmp_path / "t.csv"
        f.write_text(text)
        with pytest.raises(FormatError):
            load_table(f)


class TestCli:
    @pytest.mark.parametrize("name", sorted(CASES))
    def test_golden(self, name):
        code, out, _ = cli(*[a.format(**PATHS) for a in CASES[name]])
        assert code == 0
        assert out == (GOLDEN / f"{name}.json").read_text()

    def test_documented_outputs(self):
        _, out, _ = cli("classify", PATHS["fig1"])
        rep = json.loads(out)
        assert rep["graph_class"] == "Wild" and rep["in_fundamental_set"] is False
        _, out, _ = cli("stable", PATHS["fig1"])
        assert json.loads(out) == {"verdict": "Stable", "moduli_dimension": 4}
        _, out, _ = cli("reduce", PATHS["defn23"], "--op", "sigma:u")
        assert json.loads(out)["pair"]["alpha"]["u"] == 3

    def test_reduce_dot(self):
        code, out, _ = cli("reduce", PATHS["defn23"], "--op", "sigma:u", "--emit", "dot")
        assert code == 0 and "digraph {" in out
        code, out, _ = cli("reduce", PATHS["defn23"], "--op", "sigma:u", "--format", "dot")
        assert out.startswith("digraph {")

    def test_theta_override(self):
        code, out, _ = cli("stable", PATHS["kronecker"], "--theta", "1,-1")
        assert code == 0 and json.loads(out)["verdict"] == "NotSemistable"
        code, out, _ = cli("stable", PATHS["defn23"])
        assert code == 2

    def test_exit_codes(self, tmp_path):
        assert cli("reduce", PATHS["fig1"], "--op", "tau:v3")[0] == 1
        assert cli("reduce", PATHS["fig1"], "--op", "flip:v3")[0] == 2
        assert cli("classify", str(tmp_path / "missing.json"))[0] == 1
        assert cli("nonsense")[0] == 2
        assert cli("enumerate", "--d", "0")[0] == 2
        assert cli("classify", PATHS["fig1"], "--format", "csv")[0] == 2
        bad = tmp_path / "bad.json"
        bad.write_text("{\n  oops\n}")
        code, _, err = cli("classify", str(bad))
        assert code == 1 and "line 2" in err

    def test_enumerate_and_verify(self, tmp_path):
        out_csv = tmp_path / "table.csv"
        code, out, _ = cli("enumerate", "--d", "2", "--max-vertices", "3", "--max-arrows", "5",
                           "--max-entry", "3", "--out", str(out_csv))
        assert code == 0 and json.loads(out)["rows"] > 0
        code, out, _ = cli("verify-bounds", str(out_csv))
        assert code == 0 and json.loads(out)["passed"] is True
        code, out, _ = cli("verify-bounds", str(out_csv), "--format", "text")
        assert out.startswith("PASS")

    def test_affine_enumeration(self):
        code, out, _ = cli("enumerate", "--d", "2", "--affine")
        lines = out.strip().splitlines()
        assert code == 0 and len(lines) == 2
        assert lines[1].endswith(",1,2,NotSearched")

    def test_force_from_environment(self, tmp_path, monkeypatch):
        big = tmp_path / "big.json"
        big.write_text(json.dumps({
            "vertices": ["a", "b"], "arrows": [{"id": "x", "source": "a", "target": "b"}],
            "alpha": {"a": 4000, "b": 4000}, "theta": {"a": -1, "b": 1}}))
        code, _, err = cli("stable", str(big))
        assert code == 1 and "force" in err
        monkeypatch.setenv("QUIVERMOD_FORCE", "1")
        from quivermod.cli import _config, build_parser
        assert _config(build_parser().parse_args(["stable", str(big)])).force

    def test_console_script(self):
        proc = subprocess.run([sys.executable, "-m", "quivermod.cli", "stable", PATHS["k3"]],
                              capture_output=True, text=True)
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["moduli_dimension"] == 2
