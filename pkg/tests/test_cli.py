import json
import math
import statistics

import pytest

from vomm import Sequence, load_model
from vomm.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture()
def abra_file(tmp_path):
    path = tmp_path / "abra.txt"
    path.write_bytes(b"abracadabra")
    return str(path)


@pytest.fixture()
def pattern_dir(tmp_path):
    d = tmp_path / "corpus"
    d.mkdir()
    (d / "a.txt").write_bytes(b"ab" * 30)
    (d / "b.txt").write_bytes(b"ab" * 25)
    return str(d)


class TestTrainAndShow:
    def test_train_reports_and_saves(self, tmp_path, abra_file, capsys):
        out_path = str(tmp_path / "model.json")
        code, out, _ = run(capsys, "train", abra_file, "--alg", "lz78", "--out", out_path)
        assert code == 0
        assert "trained lz78 on 1 sequence(s), 11 symbols" in out
        assert f"model: {out_path}" in out
        assert load_model(out_path).algorithm == "lz78"

    def test_show_lists_phrases_in_parse_order(self, tmp_path, abra_file, capsys):
        out_path = str(tmp_path / "model.json")
        run(capsys, "train", abra_file, "--alg", "lz78", "--out", out_path)
        code, out, _ = run(capsys, "show", out_path)
        assert code == 0
        doc = json.loads(out)
        assert doc["algorithm"] == "lz78"
        assert doc["phrases"] == ["a", "b", "r", "ac", "ad", "ab", "ra"]
        assert doc["nodes"] == 1 + 8 * 256  # root expansion + 7 phrase expansions

    def test_grid_training_records_tuning(self, tmp_path, capsys):
        data = tmp_path / "data.txt"
        data.write_bytes(b"ab" * 40)
        grid = tmp_path / "grid.json"
        grid.write_text(json.dumps([{"D": 1}, {"D": 2}]))
        out_path = str(tmp_path / "model.json")
        code, out, _ = run(capsys, "train", str(data), "--alg", "ppmc", "--grid", str(grid), "--out", out_path)
        assert code == 0
        assert "selected: " in out
        doc = json.loads((tmp_path / "model.json").read_text())
        assert doc["tuning"]["grid_points"] == 2
        assert len(doc["tuning"]["fold_losses"]) == 5

    def test_empty_input_rejected(self, tmp_path, capsys):
        empty = tmp_path / "empty.bin"
        empty.write_bytes(b"")
        code, _, err = run(capsys, "train", str(empty), "--alg", "lz78", "--out", str(tmp_path / "m.json"))
        assert code == 2
        assert "data error" in err


class TestProb:
    def model(self, tmp_path, abra_file, capsys, alg="ppmc", params="D=2"):
        out_path = str(tmp_path / "model.json")
        args = ["train", abra_file, "--alg", alg, "--out", out_path]
        if params:
            args += ["--params", params]
        assert run(capsys, *args)[0] == 0
        return out_path

    def test_default_output_is_shortest_round_trip(self, tmp_path, abra_file, capsys):
        path = self.model(tmp_path, abra_file, capsys)
        code, out, _ = run(capsys, "prob", "--model", path, "--context", "ra", "--symbol", "d")
        assert code == 0
        pred = load_model(path)
        ctx = Sequence(pred.alphabet, list(b"ra"))
        assert out.strip() == repr(pred.prob(ord("d"), ctx))
        assert float(out) == pred.prob(ord("d"), ctx)

    def test_precision_flag_rounds(self, tmp_path, abra_file, capsys):
        path = self.model(tmp_path, abra_file, capsys)
        code, out, _ = run(capsys, "prob", "--model", path, "--context", "ra", "--symbol", "d", "--precision", "4")
        assert code == 0
        assert out.strip() == "0.0833"

    def test_distribution_mode_lists_every_symbol(self, tmp_path, abra_file, capsys):
        path = self.model(tmp_path, abra_file, capsys)
        code, out, _ = run(capsys, "prob", "--model", path, "--context", "ra")
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 256  # byte alphabet
        probs = {}
        for line in lines:
            sym, val = line.split("\t")
            probs[int(sym)] = float(val)
        assert probs[ord("c")] == pytest.approx(0.5)
        assert sum(probs.values()) == pytest.approx(1.0, abs=1e-9)

    def test_bad_precision_value(self, tmp_path, abra_file, capsys):
        path = self.model(tmp_path, abra_file, capsys)
        code, _, err = run(capsys, "prob", "--model", path, "--symbol", "a", "--precision", "lots")
        assert code == 2
        assert "--precision" in err


class TestParse:
    def test_byte_phrases(self, abra_file, capsys):
        code, out, _ = run(capsys, "parse", abra_file, "--M", "0", "--S", "0")
        assert code == 0
        assert out.strip() == "a|b|r|ac|ad|ab|ra"

    def test_shifted_parse(self, abra_file, capsys):
        code, out, _ = run(capsys, "parse", abra_file, "--M", "1", "--S", "0")
        assert code == 0
        assert out.strip() == "a|ab|b|br|r|ra|ac|c|ca|ad|d|da|abr"

    def test_token_mode(self, tmp_path, capsys):
        f = tmp_path / "toks.txt"
        f.write_text("x y x y")
        code, out, _ = run(capsys, "parse", str(f), "--mode", "tokens")
        assert code == 0
        assert out.strip() == "x|y|x y"


class TestEval:
    def test_directory_rows_and_summary(self, pattern_dir, capsys):
        code, out, _ = run(capsys, "eval", pattern_dir, "--alg", "ppmc", "--params", "D=2")
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 3
        losses = []
        for line in lines[:2]:
            name, loss, note = line.split("\t")
            assert name.endswith(("a.txt", "b.txt"))
            assert note == "D=2"
            losses.append(float(loss))
        avg = sum(losses) / 2
        sem = statistics.stdev(losses) / math.sqrt(2)
        assert lines[2] == f"Average±SEM\t{avg:.2f}±{sem:.2f}"

    def test_single_file_has_no_summary_row(self, tmp_path, capsys):
        f = tmp_path / "one.txt"
        f.write_bytes(b"ab" * 30)
        code, out, _ = run(capsys, "eval", str(f), "--alg", "ppmc", "--params", "D=1")
        assert code == 0
        assert len(out.strip().splitlines()) == 1
        assert "Average" not in out

    def test_saved_model_scoring_with_history(self, tmp_path, capsys):
        train_f = tmp_path / "train.txt"
        train_f.write_bytes(b"ab" * 30)
        test_f = tmp_path / "test.txt"
        test_f.write_bytes(b"ab" * 10)
        model = str(tmp_path / "m.json")
        run(capsys, "train", str(train_f), "--alg", "ppmc", "--params", "D=2", "--out", model)
        code, out, _ = run(capsys, "eval", str(test_f), "--model", model, "--history", str(train_f))
        assert code == 0
        loss = float(out.strip().split("\t")[1])
        assert loss < 0.5

    def test_model_and_alg_together_rejected(self, tmp_path, abra_file, capsys):
        code, _, err = run(capsys, "eval", abra_file, "--model", "x.json", "--alg", "ppmc")
        assert code == 2
        assert "exactly one" in err

    def test_short_input_rejected(self, abra_file, capsys):
        code, _, err = run(capsys, "eval", abra_file, "--alg", "ppmc", "--params", "D=1")
        assert code == 2
        assert "at least 20 symbols" in err


class TestTune:
    def test_reports_selection(self, tmp_path, capsys):
        data = tmp_path / "data.txt"
        data.write_bytes(b"ab" * 40)
        grid = tmp_path / "grid.json"
        grid.write_text(json.dumps([{"D": 0}, {"D": 2}]))
        code, out, _ = run(capsys, "tune", str(data), "--alg", "ppmc", "--grid", str(grid))
        assert code == 0
        assert "grid points: 2" in out
        assert "selected: D=2" in out
        assert "median loss:" in out
        assert len(out.split("fold losses: ")[1].split()) == 5

    def test_bad_grid_file(self, tmp_path, capsys):
        data = tmp_path / "data.txt"
        data.write_bytes(b"ab" * 40)
        bad = tmp_path / "grid.json"
        bad.write_text("{not json")
        code, _, err = run(capsys, "tune", str(data), "--alg", "ppmc", "--grid", str(bad))
        assert code == 2
        assert "not valid JSON" in err


class TestAblate:
    def test_three_rows(self, tmp_path, capsys):
        data = tmp_path / "data.txt"
        data.write_bytes(b"abracadabra" * 10)
        code, out, _ = run(capsys, "ablate", str(data), "--Ms", "0,1", "--Ss", "0,1")
        assert code == 0
        lines = out.strip().splitlines()
        assert [ln.split("\t")[0] for ln in lines] == ["M only", "S only", "joint"]
        assert "(M=" in lines[0]


class TestClassifyFlows:
    @pytest.fixture()
    def corpus(self, tmp_path, capsys):
        d = str(tmp_path / "corpus")
        code, out, _ = run(capsys, "synth", "--out", d, "--classes", "2", "--per-class", "6", "--length", "80", "--seed", "3")
        assert code == 0
        assert "wrote 12 files" in out
        return d

    def test_classifier_training_and_labeling(self, tmp_path, corpus, capsys):
        clf_path = str(tmp_path / "clf.json")
        code, out, _ = run(
            capsys, "classify-train", corpus, "--alg", "ppmc", "--params", "D=2", "--out", clf_path
        )
        assert code == 0
        assert "class class0: 6 sequence(s)" in out
        assert "class class1: 6 sequence(s)" in out

        sample = str(tmp_path / "corpus" / "class1" / "seq000.txt")
        code, out, _ = run(capsys, "classify", sample, "--model", clf_path)
        assert code == 0
        assert out.strip() == f"{sample}\tclass1"

    def test_directory_scoring_against_saved_classifier(self, tmp_path, corpus, capsys):
        clf_path = str(tmp_path / "clf.json")
        run(capsys, "classify-train", corpus, "--alg", "ppmc", "--params", "D=2", "--out", clf_path)
        code, out, _ = run(capsys, "classify", corpus, "--model", clf_path)
        assert code == 0
        assert "class class0: error" in out
        assert "overall error:" in out

    def test_cross_validated_report(self, corpus, capsys):
        code, out, _ = run(capsys, "classify", corpus, "--alg", "ppmc", "--params", "D=2", "--folds", "3")
        assert code == 0
        for needle in ("sequences: 12", "macro error:", "weighted error:", "sem over folds:"):
            assert needle in out

    def test_flat_directory_rejected(self, tmp_path, capsys):
        d = tmp_path / "flat"
        d.mkdir()
        (d / "x.txt").write_bytes(b"abab")
        code, _, err = run(capsys, "classify", str(d), "--alg", "ppmc")
        assert code == 2
        assert "at least two class directories" in err


class TestExitCodes:
    def test_no_command_prints_help(self, capsys):
        code, _, err = run(capsys)
        assert code == 1
        assert "usage:" in err

    def test_unknown_algorithm_is_usage_error(self, abra_file, capsys):
        code, _, err = run(capsys, "train", abra_file, "--alg", "nope", "--out", "m.json")
        assert code == 1
        assert "invalid choice" in err

    def test_missing_file_is_data_error(self, tmp_path, capsys):
        code, _, err = run(capsys, "train", str(tmp_path / "nope.bin"), "--alg", "lz78", "--out", str(tmp_path / "m.json"))
        assert code == 2
        assert "cannot read" in err

    def test_empty_directory_is_data_error(self, tmp_path, capsys):
        d = tmp_path / "empty"
        d.mkdir()
        code, _, err = run(capsys, "eval", str(d), "--alg", "ppmc")
        assert code == 2
        assert "holds no files" in err

    def test_impossible_probability_is_numeric_error(self, tmp_path, capsys):
        train_f = tmp_path / "train.txt"
        train_f.write_bytes(b"ab" * 30)
        test_f = tmp_path / "test.txt"
        test_f.write_bytes(b"abc")
        model = str(tmp_path / "pst.json")
        code, _, _ = run(
            capsys, "train", str(train_f), "--alg", "pst", "--params", "Pmin=1.1,gamma=0", "--out", model
        )
        assert code == 0
        code, _, err = run(capsys, "eval", str(test_f), "--model", model)
        assert code == 3
        assert "numeric error" in err
        assert "position" in err


class TestMidiMode:
    def test_melody_round_trip_through_cli(self, tmp_path, capsys):
        csv = tmp_path / "melody.csv"
        rows = "\n".join(f"{60 + (i % 5)},100,240" for i in range(40))
        csv.write_text(rows + "\n")
        model = str(tmp_path / "m.json")
        code, out, _ = run(capsys, "train", str(csv), "--alg", "ppmc", "--params", "D=3", "--mode", "midi-csv", "--out", model)
        assert code == 0
        pred = load_model(model)
        assert pred.alphabet.size == 12
        code, out, _ = run(capsys, "eval", str(csv), "--model", model, "--mode", "midi-csv")
        assert code == 0
        assert float(out.strip().split("\t")[1]) >= 0.0
