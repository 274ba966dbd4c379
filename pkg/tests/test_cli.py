import json
import subprocess
import sys

import pytest

from metriclie import cli, report

H3_DOC = {"dim": 3, "basis": ["e", "u", "v"], "brackets": [{"x": "u", "y": "v", "result": {"e": 1}}]}
EX2_DOC = {
    "dim": 6,
    "brackets": [
        {"x": 1, "y": 3, "result": {"1": -1}},
        {"x": 3, "y": 4, "result": {"2": 1}},
        {"x": 5, "y": 6, "result": {"2": 1}},
    ],
}


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


class TestAnalyze:
    def test_heisenberg(self, tmp_path, capsys):
        code, out, _ = run(["analyze", write(tmp_path, "h3.json", H3_DOC)], capsys)
        assert code == 0
        rep = json.loads(out)
        assert rep["schema"] == 1
        assert rep["soliton"]["Oracle"]["c"] == pytest.approx(-1.5)
        assert rep["soliton"]["Oracle"]["class"] == "Expanding"

    def test_example2_candidate(self, tmp_path, capsys):
        code, out, _ = run(["analyze", write(tmp_path, "ex2.json", EX2_DOC)], capsys)
        assert code == 0
        ora = json.loads(out)["soliton"]["Oracle"]
        assert not ora["is_soliton"] and ora["solution_kind"] == "infeasible"
        assert ora["candidates"] == [-1.5]

    def test_method_oracle_only(self, tmp_path, capsys):
        _, out, _ = run(["analyze", write(tmp_path, "h3.json", H3_DOC), "--method", "oracle"], capsys)
        rep = json.loads(out)
        assert list(rep["soliton"]) == ["Oracle"] and rep["discrepancies"] == []

    def test_method_theorem(self, tmp_path, capsys):
        _, out, _ = run(["analyze", write(tmp_path, "h3.json", H3_DOC), "--method", "theorem"], capsys)
        assert "Oracle" not in json.loads(out)["soliton"]

    def test_metric_override(self, tmp_path, capsys):
        g = write(tmp_path, "g.json", {"metric": [[1, 0, 0], [0, 2, 0], [0, 0, 2]]})
        _, out, _ = run(["analyze", write(tmp_path, "h3.json", H3_DOC), "--metric", g], capsys)
        # [u', v'] = 1/2 e' for the orthonormal frame, so c = -3/2 * 1/4
        assert json.loads(out)["soliton"]["Oracle"]["c"] == pytest.approx(-0.375)

    def test_output_file_and_markdown(self, tmp_path, capsys):
        dest = tmp_path / "r.md"
        code, out, _ = run(["analyze", write(tmp_path, "h3.json", H3_DOC), "--format", "md",
                            "--output", str(dest)], capsys)
        assert code == 0 and out == ""
        text = dest.read_text()
        assert "| nabla | e | u | v |" in text and "Expanding" in text


class TestExitCodes:
    def test_missing_file(self, capsys):
        code, _, err = run(["analyze", "/nonexistent/file.json"], capsys)
        assert code == 2 and "cannot read" in err

    def test_bad_json(self, tmp_path, capsys):
        assert run(["analyze", write(tmp_path, "bad.json", "{nope")], capsys)[0] == 2

    def test_wrong_order(self, tmp_path, capsys):
        doc = {"dim": 3, "basis": ["e", "u", "v"], "brackets": [{"x": "v", "y": "u", "result": {"e": 1}}]}
        code, _, err = run(["analyze", write(tmp_path, "x.json", doc)], capsys)
        assert code == 2 and "before" in err

    def test_index_out_of_range(self, tmp_path, capsys):
        doc = {"dim": 2, "brackets": [{"x": 1, "y": 3, "result": {"1": 1}}]}
        assert run(["analyze", write(tmp_path, "x.json", doc)], capsys)[0] == 2

    def test_non_spd(self, tmp_path, capsys):
        doc = dict(H3_DOC, metric=[[1, 0, 0], [0, -1, 0], [0, 0, 1]])
        code, _, err = run(["analyze", write(tmp_path, "x.json", doc)], capsys)
        assert code == 1 and "minor" in err

    def test_jacobi_failure(self, tmp_path, capsys):
        doc = {"dim": 3, "brackets": [{"x": 1, "y": 2, "result": {"3": 1}}, {"x": 1, "y": 3, "result": {"2": 1}},
                                      {"x": 2, "y": 3, "result": {"2": 1}}]}
        code, _, err = run(["analyze", write(tmp_path, "x.json", doc)], capsys)
        assert code == 1 and "Jacobi" in err

    def test_unknown_family(self, capsys):
        assert run(["catalog", "nosuch"], capsys)[0] == 2

    def test_bad_family_parameters(self, capsys):
        assert run(["catalog", "heisenberg", "--m", "0"], capsys)[0] == 2

    def test_usage(self, capsys):
        assert run([], capsys)[0] == 2

    def test_unsupported_derived_dim_still_reports(self, tmp_path, capsys):
        doc = {"dim": 3, "brackets": [{"x": 1, "y": 2, "result": {"3": 1}}, {"x": 2, "y": 3, "result": {"1": 1}},
                                      {"x": 1, "y": 3, "result": {"2": -1}}]}
        code, out, _ = run(["analyze", write(tmp_path, "so3.json", doc)], capsys)
        rep = json.loads(out)
        assert code == 0 and rep["derived"]["dim"] == 3 and rep["decomposition"] is None
        assert rep["soliton"]["Oracle"]["is_soliton"] and rep["soliton"]["Oracle"]["c"] == pytest.approx(0.5)


class TestCatalog:
    def test_heisenberg_expanding(self, capsys):
        code, out, _ = run(["catalog", "heisenberg", "--m", "1", "--abelian", "0"], capsys)
        assert code == 0 and json.loads(out)["soliton"]["Oracle"]["class"] == "Expanding"

    def test_affine_einstein(self, capsys):
        rep = json.loads(run(["catalog", "affine", "--abelian", "0"], capsys)[1])
        assert rep["soliton"]["Oracle"]["c"] == pytest.approx(-1.0)
        assert rep["ricci"]["trace_formula"] == [[-1.0, 0.0], [0.0, -1.0]]

    def test_connection_markdown_layout(self, capsys):
        _, out, _ = run(["catalog", "indecomp5p2k", "--k", "0", "--format", "md"], capsys)
        assert "| nabla | e1 | e2 | X3 | X4 | X5 |" in out
        assert "| e1 | 0 | 1/2 X3 | -1/2 e2 - 1/2 X4 | 1/2 X3 | 0 |" in out

    def test_disputed_flags(self, capsys):
        rep = json.loads(run(["catalog", "indecomp5p2k", "--k", "1"], capsys)[1])
        row = {r["key"]: r for r in rep["reference_comparison"]}["tr(f2^2)"]
        assert row["computed"] == pytest.approx(3 - 7) and row["reference"] == pytest.approx(1 - 7)
        assert row["disputed"] and not row["agree"]
        assert any(x["field"] == "tr(f2^2)" and x["against"].startswith("reference") for x in rep["discrepancies"])


class TestDeterminism:
    def test_byte_stable(self, tmp_path, capsys):
        a = run(["catalog", "indecomp6p2k-type2", "--k", "1", "--seed", "7"], capsys)[1]
        b = run(["catalog", "indecomp6p2k-type2", "--k", "1", "--seed", "7"], capsys)[1]
        assert a == b

    def test_round_trip(self, tmp_path, capsys):
        g = write(tmp_path, "g.json", [[2, 0.3, 0, 0, 0], [0.3, 1, 0.1, 0, 0], [0, 0.1, 1.5, 0, 0.2],
                                       [0, 0, 0, 1, 0], [0, 0, 0.2, 0, 0.7]])
        first = tmp_path / "first.json"
        second = tmp_path / "second.json"
        rep0 = run(["catalog", "indecomp5p2k", "--metric", g, "--emit-input", str(first)], capsys)[1]
        rep1 = run(["analyze", str(first), "--emit-input", str(second)], capsys)[1]
        rep2 = run(["analyze", str(second)], capsys)[1]
        assert rep1 == rep2
        assert first.read_text() == second.read_text()
        r0 = json.loads(rep0)
        r0.pop("family")
        assert report.to_json(r0) == rep1

    def test_catalog_matches_analyze_of_emitted_input(self, tmp_path, capsys):
        doc = tmp_path / "ex1.json"
        rep = json.loads(run(["catalog", "indecomp5p2k", "--emit-input", str(doc)], capsys)[1])
        for k in ("family", "reference_comparison"):
            rep.pop(k)
        rep["discrepancies"] = [x for x in rep["discrepancies"] if x["source"] != "computed"]
        assert report.to_json(rep) == run(["analyze", str(doc)], capsys)[1]

    def test_seventeen_digits(self):
        assert report.to_json({"x": 0.1}) == '{\n  "x": 0.10000000000000001\n}\n'
        assert report.to_json({"x": -0.0}) == '{\n  "x": 0\n}\n'


class TestSelftest:
    def test_passes(self, capsys):
        code, out, _ = run(["selftest", "--trials", "30"], capsys)
        assert code == 0 and "FAIL" not in out and "PASS  torsion-free" in out

    def test_module_entry_point(self):
        r = subprocess.run([sys.executable, "-m", "metriclie", "selftest", "--trials", "10"],
                           capture_output=True, text=True)
        assert r.returncode == 0
