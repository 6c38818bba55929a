"""End-to-end command-line verbs and document handling."""

import json

import pytest

from midconv.cli import main
from midconv.docio import parse_document, parse_json, render
from midconv.errors import DocumentError


def expr(exps=None, const="0"):
    return {"const": const, "exps": exps or {}}


def entry(exps, mult=1, const="0"):
    return {"value": expr(exps, const), "mult": mult}


def referee_document():
    return {
        "mode": "multiplicative",
        "points": 3,
        "generators": ["ap", "bp", "up", "vp", "gp", "hp", "x", "y"],
        "classes": [
            [entry({"ap": "1"}), entry({"bp": "1"})],
            [entry({"up": "1"}), entry({"vp": "1"})],
            [entry({"gp": "1"}), entry({"hp": "1"})],
        ],
        "convoluter": {
            "h": [expr({"x": "1"}), expr({"y": "1"}), expr({"hp": "-1"})],
            "v": "same-as-h",
        },
    }


def run_cli(tmp_path, verb, doc, *flags):
    inp = tmp_path / "in.json"
    outp = tmp_path / "out.json"
    inp.write_text(json.dumps(doc), encoding="utf-8")
    code = main([verb, "--input", str(inp), "--output", str(outp), *flags])
    text = outp.read_text(encoding="utf-8") if outp.exists() else ""
    return code, (json.loads(text) if text else None), text


class TestTransform:
    def test_referee_document(self, tmp_path):
        code, out, _ = run_cli(tmp_path, "transform", referee_document())
        assert code == 0
        assert out["status"] == "ok" and out["defect"] == 1
        classes = out["output"]["classes"]
        assert [len(c) for c in classes] == [3, 3, 2]
        # the third column carries z = hp^{-1} with multiplicity 2
        z_entry = [c for c in classes[2]
                   if c["value"]["exps"] == {"hp": "-1"}]
        assert z_entry and z_entry[0]["mult"] == 2

    def test_noneffective_exit_code(self, tmp_path):
        doc = {
            "mode": "multiplicative",
            "classes": [[entry({f"a{i}": "1"}, mult=2)] for i in range(3)],
        }
        code, out, _ = run_cli(tmp_path, "transform", doc)
        assert code == 2
        assert out["status"] == "EmptyNoneffective"

    def test_malformed_input_exit_code(self, tmp_path):
        doc = {"mode": "multiplicative", "classes": [[{"value": {}, "mult": "x"}]]}
        code, _, _ = run_cli(tmp_path, "transform", doc)
        assert code == 1


class TestDefectAndClassify:
    def test_defect_verb(self, tmp_path):
        code, out, _ = run_cli(tmp_path, "defect", referee_document())
        assert code == 0 and out["defect"] == 1 and out["rank"] == 2

    def test_classify_tri_ddd(self, tmp_path):
        doc = {
            "mode": "multiplicative",
            "classes": [[entry({f"e{i}_{j}": "1"}) for j in range(3)]
                        for i in range(3)],
        }
        code, out, _ = run_cli(tmp_path, "classify", doc)
        assert code == 0
        assert out["family"] == "Tri_ddd_x3"
        assert out["report"]["naive_dim"] == 2

    def test_classify_none(self, tmp_path):
        doc = {
            "mode": "multiplicative",
            "classes": [[entry({f"e{i}_{j}": "1"}) for j in range(3)]
                        for i in range(4)],
        }
        code, out, _ = run_cli(tmp_path, "classify", doc)
        assert code == 0 and out["family"] == "none"


class TestRun:
    def test_fully_diagonal_document(self, tmp_path):
        doc = {
            "mode": "multiplicative",
            "classes": [[entry({f"a{i}": "1"}, mult=3)] for i in range(3)],
        }
        code, out, _ = run_cli(tmp_path, "run", doc)
        assert code == 0
        assert out["status"] == "AllDiagonal"
        assert out["steps"] == []

    def test_hypergeometric_runs_to_rank_one(self, tmp_path):
        doc = {
            "mode": "multiplicative",
            "classes": [[entry({f"e{i}0": "1"}), entry({f"e{i}1": "1"})]
                        for i in range(3)],
        }
        code, out, _ = run_cli(tmp_path, "run", doc, "--max-steps", "5")
        assert code == 0
        assert out["status"] == "AllDiagonal"
        assert out["ranks"] == [2, 1]


class TestHiggs:
    def test_constructible_document(self, tmp_path):
        doc = {
            "mode": "circle",
            "classes": [[{"value": expr(const="1/4"), "mult": 1},
                         {"value": expr(const="3/4"), "mult": 1}]] * 5,
        }
        code, out, _ = run_cli(tmp_path, "higgs", doc)
        assert code == 0
        assert out["status"] == "constructed"
        assert out["data"]["degree_check"] == "0"
        assert out["verify"]["ok"]
        assert out["degree_forms_match"]["form_with_substituted_constant"]

    def test_dim2_family_negative(self, tmp_path):
        doc = {
            "mode": "circle",
            "classes": [[{"value": expr(const="1/4"), "mult": 1},
                         {"value": expr(const="3/4"), "mult": 1}]] * 4,
        }
        code, out, _ = run_cli(tmp_path, "higgs", doc)
        assert code == 2
        assert out["status"] == "PreconditionDim2"


class TestVerify:
    def test_generate_mode(self, tmp_path):
        doc = {"generate": {"rank": 2, "points": 3, "seed": 5}}
        code, out, _ = run_cli(tmp_path, "verify", doc)
        assert code == 0
        rep = out["report"]
        assert rep["ok"] and rep["raw_dim"] == 4
        assert rep["max_deviation"] < 1e-8

    def test_numeric_instance_round_trip(self, tmp_path):
        from midconv.homology import generate_instance
        inst = generate_instance(seed=9, r=2, n=3).instance
        doc = inst.to_json()
        code, out, _ = run_cli(tmp_path, "verify", doc)
        assert code == 0 and out["report"]["ok"]


class TestDeterminismAndBatch:
    def test_identical_runs_byte_identical(self, tmp_path):
        doc = {"generate": {"rank": 2, "points": 3, "seed": 11}}
        _, _, text1 = run_cli(tmp_path, "verify", doc)
        _, _, text2 = run_cli(tmp_path, "verify", doc)
        assert text1 == text2

    def test_batch_list_and_jobs(self, tmp_path):
        docs = [referee_document(), referee_document()]
        code, out, _ = run_cli(tmp_path, "transform", docs, "--jobs", "2")
        assert code == 0
        assert isinstance(out, list) and len(out) == 2
        assert out[0] == out[1]

    def test_document_round_trip(self):
        doc = referee_document()
        parsed = parse_document(doc)
        rendered = parse_json(render(parsed.vector.to_json()))
        assert parse_document({"mode": rendered["mode"],
                               "classes": rendered["classes"]}).vector == parsed.vector


class TestDocumentErrors:
    def test_position_annotated_error(self):
        with pytest.raises(DocumentError) as err:
            parse_document({"mode": "multiplicative",
                            "classes": [[{"value": expr(), "mult": 1.5}]]})
        assert "$.classes[0][0]" in str(err.value)

    def test_unknown_mode(self):
        with pytest.raises(DocumentError) as err:
            parse_document({"mode": "quaternionic", "classes": [[]]})
        assert "$.mode" in str(err.value)

    def test_points_disagreement(self):
        doc = referee_document()
        doc["points"] = 4
        with pytest.raises(DocumentError):
            parse_document(doc)
