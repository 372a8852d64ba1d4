import io
import json
import subprocess
import sys

import pytest
from conftest import DATA

from logdecomp.cli import EXIT_CAP, EXIT_OK, EXIT_PARSE, EXIT_SEMANTIC, EXIT_USAGE, run

WORKED = str(DATA / "worked.json")
WYNER = str(DATA / "wyner.json")
FIGURE = [0.275, 0.325, 0.361, 0.485, 0.551, 0.690, -0.210, -0.222, -0.251, -0.349, 0.191]


def ld(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def ld_json(*argv):
    code, out, err = ld(*argv, "--format", "json")
    assert code == EXIT_OK, err
    return json.loads(out)


def write(tmp_path, doc, name="sys.json"):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(path)


def doc(weights=(0.5, 0.5), variables=None):
    return {
        "schema": "ld-system/1",
        "outcomes": [{"label": str(i), "p": p} for i, p in enumerate(weights)],
        "variables": variables or {"X": [[str(i)] for i in range(len(weights))]},
    }


class TestTable:
    def test_matches_figure(self):
        rows = ld_json("table", WORKED)["atoms"]
        assert len(rows) == 11
        assert sorted(r["mu"] for r in rows) == pytest.approx(sorted(FIGURE), abs=5e-4)

    def test_order_by_degree_then_mask(self):
        rows = ld_json("table", WORKED)["atoms"]
        assert [r["atom"] for r in rows][:6] == ["12", "13", "23", "14", "24", "34"]

    def test_text(self):
        code, out, _ = ld("table", WORKED)
        assert code == 0
        assert "24      2    0.550977500" in out
        assert len(out.strip().splitlines()) == 12

    def test_nats(self):
        bits = ld_json("table", WORKED)["atoms"][0]["mu"]
        nats = ld_json("table", WORKED, "--base", "e")["atoms"][0]["mu"]
        assert nats == pytest.approx(bits * 0.6931471805599453, rel=1e-12)


class TestCommands:
    def test_quantity(self):
        code, out, _ = ld("quantity", "--kind", "mutual_information", "--vars", "X", "Y", WORKED)
        assert code == 0 and out.strip() == "0.005802149 bits"

    def test_quantity_json(self):
        rep = ld_json("quantity", "--kind", "mutual_information", "--vars", "X", "Y", WORKED)
        assert rep["value"] == pytest.approx(0.005802, abs=1e-6)
        assert rep["value"] == pytest.approx(rep["direct"], abs=1e-12)

    def test_discriminate(self):
        code, out, _ = ld("discriminate", "--system", "triadic")
        assert code == 0 and out.strip() == "1.000000000 bits"

    def test_discriminate_dyadic(self):
        assert ld_json("discriminate", "--system", "dyadic")["value"] == pytest.approx(0.0, abs=1e-9)

    def test_region(self):
        rep = ld_json("region", "--expr", "X ∩ Y", WORKED)
        assert len(rep["atoms"]) == 7
        assert rep["value"] == pytest.approx(0.005802149, abs=1e-9)

    def test_expr(self):
        rep = ld_json("expr", "--entropy", "H(X)+H(Y)-H(X,Y)", WORKED)
        assert rep["element"] == "23 + 14 + 123 + 124 + 134 + 234 + 1234"
        assert rep["value"] == pytest.approx(0.005802149, abs=1e-9)

    def test_common_gk(self):
        rep = ld_json("common", "--method", "gk", "--vars", "X", "Y", "--system", "redundant_pair")
        assert rep["value"] == pytest.approx(1.0, abs=1e-12)

    def test_common_wyner_joint(self):
        rep = ld_json("common", "--method", "wyner", "--over", "joint", "--vars", "X", "Y", WYNER)
        assert rep["ci_residual"] < 1e-12

    def test_refine_invariance(self):
        code, out, _ = ld("refine", "--check-invariance", WORKED)
        assert code == 0 and out.strip().endswith("invariant")

    def test_refine_map_flag(self):
        m = json.dumps({"1": [{"label": "1a", "p": 0.05}, {"label": "1b", "p": 0.05}]})
        rep = ld_json("refine", "--map", m, "--check-invariance", WORKED)
        assert rep["invariant"] is True

    def test_kl(self):
        rep = ld_json("kl", "--weights", "0.25", "0.75")
        assert rep["value"] == pytest.approx(0.188722, abs=1e-6)


class TestErrors:
    def test_unknown_subcommand(self):
        assert ld("bogus")[0] == EXIT_USAGE

    def test_unknown_flag(self):
        assert ld("table", "--frobnicate", WORKED)[0] == EXIT_USAGE

    def test_missing_file(self, tmp_path):
        assert ld("table", str(tmp_path / "nope.json"))[0] == EXIT_USAGE

    def test_no_system(self):
        assert ld("table")[0] == EXIT_USAGE

    def test_bad_json(self, tmp_path):
        code, _, err = ld("table", write(tmp_path, '{"outcomes": [\n  1,,\n]}'))
        assert code == EXIT_PARSE and "line 2" in err

    def test_schema_violation(self, tmp_path):
        bad = doc()
        del bad["outcomes"]
        assert ld("table", write(tmp_path, bad))[0] == EXIT_PARSE

    def test_overlapping_blocks(self, tmp_path):
        bad = doc((0.5, 0.5), {"X": [["0", "1"], ["1"]]})
        assert ld("table", write(tmp_path, bad))[0] == EXIT_SEMANTIC

    def test_bad_expression(self):
        assert ld("region", "--expr", "X &", WORKED)[0] == EXIT_PARSE

    def test_unknown_variable(self):
        assert ld("quantity", "--kind", "entropy", "--vars", "Q", WORKED)[0] == EXIT_SEMANTIC

    def test_cap(self, tmp_path):
        path = write(tmp_path, doc([1 / 9] * 9, {"X": [[str(i)] for i in range(9)],
                                                  "Y": [[str(i)] for i in range(9)]}))
        assert ld("common", "--method", "wyner", "--vars", "X", "Y", path)[0] == EXIT_CAP

    def test_weight_warning(self, tmp_path):
        code, out, err = ld("table", write(tmp_path, doc((0.5, 0.7))))
        assert code == EXIT_OK and "warning" in err and out

    def test_normalize_silences_warning(self, tmp_path):
        code, _, err = ld("table", "--normalize", write(tmp_path, doc((0.5, 0.7))))
        assert code == EXIT_OK and not err


class TestOutput:
    def test_json_round_trip(self):
        out = ld("quantity", "--kind", "co_information", "--vars", "X", "Y", "--format", "json",
                 WORKED)[1]
        rep = json.loads(out)
        assert json.loads(json.dumps(rep)) == rep
        assert json.dumps(rep, indent=2, ensure_ascii=False) == out.rstrip("\n")

    def test_deterministic(self):
        first = ld("table", WORKED, "--format", "json")
        for _ in range(3):
            assert ld("table", WORKED, "--format", "json") == first

    def test_console_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "logdecomp.cli", "discriminate", "--system",
                               "triadic"], capture_output=True, text=True)
        assert proc.returncode == 0 and proc.stdout.strip() == "1.000000000 bits"
