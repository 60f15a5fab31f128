from __future__ import annotations

import json
import subprocess
import sys

import pytest

from cognipleasure.cli import main
from cognipleasure.emotions import Emotion, Intensity
from cognipleasure.inference import EmotionActivation
from cognipleasure.pa_space import IntensityScale, aggregate_pleasure

from oracles import weighted_pleasure

HEADER = "utterance_id,expectedness,likelihood,desirability,agency,controllability,calm,boredom,gold_label2,gold_label3"
ROWS = [
    # happiness-high path, calm high, boredom low
    "happy,2.6,4.0,4.8,4.0,2.0,4.0,1.0,pleasant,pleasant",
    # highly undesirable, no agency, low ctrl and likelihood: sadness
    "sad,1.0,1.0,0.3,1.0,1.0,1.0,2.0,unpleasant,unpleasant",
    # nothing fires in the tree; only calm and boredom
    "mid,2.5,2.5,2.5,2.5,2.5,2.5,2.5,unpleasant,neutral",
]


@pytest.fixture
def data(tmp_path):
    p = tmp_path / "in.csv"
    p.write_text(HEADER + "\n" + "\n".join(ROWS) + "\n")
    return p


def run(*argv):
    return main([str(a) for a in argv])


def read_jsonl(path):
    return [json.loads(line) for line in path.read_text().splitlines()]


class TestInfer:
    def test_scores(self, data, tmp_path):
        out = tmp_path / "out.jsonl"
        assert run("infer", "--input", data, "--out", out) == 0
        happy, sad, mid = read_jsonl(out)
        assert [a["emotion"] for a in happy["activations"]] == ["happiness", "boredom", "calm"]
        expected = weighted_pleasure([("happiness", 0.875, 3), ("calm", 0.875, 1), ("boredom", 0.375, 1)])
        assert happy["score"] == pytest.approx(expected, abs=1e-6)
        assert happy["label2"] == "pleasant"
        assert sad["score"] < 0 and sad["label2"] == "unpleasant"
        assert sad["activations"][0]["emotion"] == "sadness"
        assert len(mid["activations"]) == 2

    def test_unit_high_magnitude_config(self, data, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text('{"intensity": {"high": 1.0, "medium": 0.75, "low": 0.5}}')
        out = tmp_path / "out.jsonl"
        assert run("infer", "--input", data, "--out", out, "--config", cfg) == 0
        expected = weighted_pleasure([("happiness", 1.0, 3), ("calm", 1.0, 1), ("boredom", 0.5, 1)])
        assert read_jsonl(out)[0]["score"] == pytest.approx(expected, abs=1e-6)

    def test_matches_library(self, data, tmp_path, canonical):
        out = tmp_path / "out.jsonl"
        run("infer", "--input", data, "--out", out)
        acts = [EmotionActivation(Emotion(a["emotion"]), Intensity(a["intensity"]), a["weight"], a["strength"])
                for a in read_jsonl(out)[1]["activations"]]
        assert read_jsonl(out)[1]["score"] == pytest.approx(aggregate_pleasure(acts, IntensityScale()).score, abs=1e-6)

    def test_explain(self, data, capsys):
        assert run("infer", "--input", data, "--explain") == 0
        first = json.loads(capsys.readouterr().out.splitlines()[0])
        ex = first["explain"]
        assert ex["fired_rules"] == ["happiness_high_highdes_medexp_highlik"]
        assert ex["terms"]["desirability"] == [["highly_desirable", 1.0]]
        assert len(ex["contributions"]) == 3

    def test_csv_format(self, data, capsys):
        assert run("infer", "--input", data, "--format", "csv") == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "utterance_id,score,label2,label3,activations"
        assert len(lines) == 4

    def test_deterministic(self, data, tmp_path):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        run("infer", "--input", data, "--out", a, "--explain")
        run("infer", "--input", data, "--out", b, "--explain")
        assert a.read_bytes() == b.read_bytes()

    def test_empty_input(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text("")
        out = tmp_path / "out.jsonl"
        assert run("infer", "--input", empty, "--out", out) == 0
        assert out.read_text() == ""

    def test_custom_rules(self, data, tmp_path, capsys):
        rules = tmp_path / "r.far"
        rules.write_text("rule only { when likelihood is high then fear intensity high }\n")
        assert run("infer", "--input", data, "--rules", rules) == 0
        first = json.loads(capsys.readouterr().out.splitlines()[0])
        assert [a["source"] for a in first["activations"] if a["source"] != "direct"] == ["only"]

    def test_bad_data_exit_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text(HEADER + "\nx,1,6.2,1,1,1,1,1,,\n")
        assert run("infer", "--input", bad) == 2
        assert "row 2, column 'likelihood'" in capsys.readouterr().err

    def test_missing_file_exit_2(self, tmp_path):
        assert run("infer", "--input", tmp_path / "nope.csv") == 2

    def test_bad_config_exit_2(self, data, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text("{")
        assert run("infer", "--input", data, "--config", cfg) == 2


class TestUsage:
    @pytest.mark.parametrize("argv", [[], ["bogus"], ["infer"], ["evaluate", "--classes", "4"], ["bins"]])
    def test_exit_1(self, argv, capsys):
        with pytest.raises(SystemExit) as info:
            main(argv)
        assert info.value.code == 1

    def test_help_exit_0(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["--help"])
        assert info.value.code == 0

    def test_module_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "cognipleasure", "rules", "validate"],
                              capture_output=True, text=True)
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["leaf_count"] == 33


class TestEvaluate:
    def test_round_trip(self, data, tmp_path):
        out = tmp_path / "out.jsonl"
        run("infer", "--input", data, "--out", out)
        for classes in (2, 3):
            metrics = tmp_path / f"m{classes}.json"
            assert run("evaluate", "--pred", out, "--gold", out, "--classes", classes, "--out", metrics) == 0
            assert json.loads(metrics.read_text())["accuracy"] == 1.0
            assert metrics.with_suffix(".confusion.csv").exists()

    def test_against_gold_columns(self, data, tmp_path):
        out = tmp_path / "out.jsonl"
        run("infer", "--input", data, "--out", out)
        metrics = tmp_path / "m.json"
        assert run("evaluate", "--pred", out, "--gold", data, "--classes", 3, "--out", metrics,
                   "--confusion", tmp_path / "cm.csv") == 0
        doc = json.loads(metrics.read_text())
        assert doc["n"] == 3
        assert (tmp_path / "cm.csv").read_text().startswith("true\\pred,pleasant,unpleasant,neutral\n")

    def test_paper_two_class_counts(self, tmp_path):
        pred, gold = tmp_path / "p.csv", tmp_path / "g.csv"
        rows_p, rows_g = ["utterance_id,label2"], ["utterance_id,gold_label2"]
        i = 0
        for true, guess, count in [("pleasant", "pleasant", 50), ("pleasant", "unpleasant", 26),
                                   ("unpleasant", "pleasant", 27), ("unpleasant", "unpleasant", 54)]:
            for _ in range(count):
                rows_p.append(f"s{i},{guess}")
                rows_g.append(f"s{i},{true}")
                i += 1
        pred.write_text("\n".join(rows_p) + "\n")
        gold.write_text("\n".join(rows_g) + "\n")
        metrics = tmp_path / "m.json"
        assert run("evaluate", "--pred", pred, "--gold", gold, "--out", metrics) == 0
        doc = json.loads(metrics.read_text())
        assert doc["accuracy"] == 0.6624
        assert doc["macro"]["f1"] == 0.6622
        assert doc["weighted"]["precision"] == 0.6626

    def test_id_mismatch(self, data, tmp_path, capsys):
        pred = tmp_path / "p.jsonl"
        pred.write_text('{"utterance_id": "other", "label2": "pleasant"}\n')
        assert run("evaluate", "--pred", pred, "--gold", data) == 2
        assert "utterance ids differ" in capsys.readouterr().err

    def test_appraisal_accuracy(self, tmp_path, capsys):
        p = tmp_path / "a.csv"
        p.write_text(HEADER.split(",gold")[0] + ",gold_likelihood\n"
                     "a,1,1.0,1,1,1,1,1,1.5\nb,1,3.0,1,1,1,1,1,2.9\nc,1,4.5,1,1,1,1,1,4.8\n")
        assert run("evaluate", "--input", p) == 0
        doc = json.loads(capsys.readouterr().out)
        # 3.0 vs 2.9 straddles the binary threshold but shares the medium bin
        assert doc["variables"] == {"likelihood": {"n": 3, "acc2": 0.6667, "acc3": 1.0}}
        assert run("evaluate", "--input", p, "--binning", "strict") == 0
        assert json.loads(capsys.readouterr().out)["variables"]["likelihood"]["acc3"] == 1.0


class TestBinsAndRules:
    def test_bins_fit(self, tmp_path, capsys):
        p = tmp_path / "c.csv"
        p.write_text("x\n0\n0\n1\n1\n2\n2\n")
        assert run("bins", "fit", "--input", p, "--column", "x") == 0
        assert json.loads(capsys.readouterr().out) == {"x": [0.5, 1.5]}

    def test_bins_fit_constant(self, tmp_path, capsys):
        p = tmp_path / "c.csv"
        p.write_text("x\n2\n2\n2\n")
        assert run("bins", "fit", "--input", p, "--column", "x") == 2
        assert "distinct" in capsys.readouterr().err

    def test_bins_file_round_trip(self, tmp_path, capsys):
        p = tmp_path / "a.csv"
        p.write_text(HEADER.split(",gold")[0] + ",gold_likelihood\n"
                     "a,1,1.0,1,1,1,1,1,0.5\nb,1,3.0,1,1,1,1,1,2.5\nc,1,4.5,1,1,1,1,1,4.5\n")
        bins = tmp_path / "bins.json"
        assert run("bins", "fit", "--input", p, "--column", "gold_likelihood", "--out", bins) == 0
        assert run("evaluate", "--input", p, "--binning", "file", "--bins", bins) == 0
        assert json.loads(capsys.readouterr().out)["variables"]["likelihood"]["acc3"] == 1.0

    def test_rules_validate(self, capsys):
        assert run("rules", "validate") == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["leaf_count"] == 33
        assert doc["duplicate_regions"] == []
        assert doc["uncovered_count"] == 240

    def test_rules_validate_malformed(self, tmp_path, capsys):
        p = tmp_path / "bad.far"
        p.write_text("rule x { then happiness intensity high }")
        assert run("rules", "validate", p) == 2
        assert "line 1, column 10" in capsys.readouterr().err

    def test_rules_validate_duplicates(self, tmp_path, capsys):
        p = tmp_path / "dup.far"
        p.write_text("rule a { when likelihood is low then fear intensity low }\n"
                     "rule b { when likelihood is low then anger intensity low }\n")
        assert run("rules", "validate", p) == 0
        assert json.loads(capsys.readouterr().out)["duplicate_regions"] == [["a", "b"]]


class TestFusionDemo:
    def test_reproducible(self, capsys):
        assert run("fusion", "demo", "--seed", 3) == 0
        first = capsys.readouterr().out
        run("fusion", "demo", "--seed", 3)
        assert capsys.readouterr().out == first
        assert "fused_width=32" in first
        assert "masked_weight=0.0e+00" in first

    def test_bad_heads(self):
        assert run("fusion", "demo", "--heads", 3) == 2
