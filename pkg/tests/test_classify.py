import math
import statistics

import pytest

from vomm import (
    Alphabet,
    DataError,
    Sequence,
    VommWarning,
    cross_validated_classification,
    fit_classifier,
    group_by_label,
    sequence_log_prob,
    synthetic_markov_corpus,
    train,
    wta_classify,
)

from conftest import text_seq

AB = Alphabet("ab")


def ab(text):
    return Sequence.of_text(AB, text)


class TestGroupByLabel:
    def test_orders_labels_by_first_appearance(self):
        pairs = [(ab("ab"), "x"), (ab("ba"), "y"), (ab("aa"), "x")]
        groups, names = group_by_label(pairs)
        assert names == ["x", "y"]
        assert [len(g) for g in groups] == [2, 1]
        assert groups[0][1].text() == "aa"

    def test_single_class_rejected(self):
        with pytest.raises(DataError, match="at least 2 classes"):
            group_by_label([(ab("ab"), "x"), (ab("ba"), "x")])

    def test_mixed_alphabets_rejected(self):
        other = Sequence.of_text(Alphabet("abc"), "ab")
        with pytest.raises(DataError, match="share one alphabet"):
            group_by_label([(ab("ab"), "x"), (other, "y")])

    def test_non_sequence_rejected(self):
        with pytest.raises(DataError):
            group_by_label([("ab", "x"), ("ba", "y")])


class TestWta:
    def models(self):
        m0 = train("ppmc", [ab("ab" * 20)], {"D": 2})
        m1 = train("ppmc", [ab("aabb" * 10)], {"D": 2})
        return [m0, m1]

    def test_picks_the_higher_scoring_model(self):
        models = self.models()
        best, scores = wta_classify(models, ab("abababab"))
        assert best == 0
        assert scores[0] > scores[1]
        best, _ = wta_classify(models, ab("aabbaabb"))
        assert best == 1

    def test_scores_are_sequence_log_probs_from_empty_history(self):
        models = self.models()
        seq = ab("abba")
        _, scores = wta_classify(models, seq)
        for m, s in zip(models, scores):
            assert s == sequence_log_prob(m, seq, history=Sequence.empty(AB))

    def test_tie_goes_to_the_lowest_index_with_warning(self):
        m = train("lz78", [ab("abab")])
        with pytest.warns(VommWarning, match="tie"):
            best, _ = wta_classify([m, m], ab("ab"))
        assert best == 0

    def test_permutation_equivariance(self):
        models = self.models()
        seq = ab("abab")
        _, fwd = wta_classify(models, seq)
        _, rev = wta_classify(models[::-1], seq)
        assert fwd == rev[::-1]


class TestFitClassifier:
    def test_shared_params(self):
        clf = fit_classifier("ppmc", [[ab("ab" * 10)], [ab("aabb" * 5)]], ["alt", "pairs"], params={"D": 2})
        assert clf.label_names == ["alt", "pairs"]
        assert clf.params_per_class == [{"D": 2}, {"D": 2}]
        label, scores = clf.classify(ab("abababab"))
        assert label == "alt" and len(scores) == 2
        assert clf.classify_index(ab("aabb")) == 1

    def test_default_integer_labels(self):
        clf = fit_classifier("lz78", [[ab("abab")], [ab("bbaa")]])
        assert clf.label_names == [0, 1]

    def test_empty_class_rejected(self):
        with pytest.raises(DataError, match="at least one training sequence"):
            fit_classifier("lz78", [[ab("abab")], []])

    def test_label_count_mismatch_rejected(self):
        with pytest.raises(DataError, match="one label per class"):
            fit_classifier("lz78", [[ab("abab")], [ab("bbaa")]], ["only"])

    def test_tuned_classes_pick_their_own_params(self):
        classes, names, _ = synthetic_markov_corpus(per_class=6, length=40, seed=3)
        clf = fit_classifier("ppmc", classes, names, grid=[{"D": 1}, {"D": 2}], tune=True)
        assert len(clf.params_per_class) == 2
        assert all(p in ({"D": 1}, {"D": 2}) for p in clf.params_per_class)

    def test_single_sequence_class_falls_back_with_warning(self):
        with pytest.warns(VommWarning, match="too few to cross-validate"):
            clf = fit_classifier(
                "ppmc", [[ab("ab" * 10)], [ab("aabb" * 5)]], grid=[{"D": 1}, {"D": 2}], tune=True
            )
        assert clf.params_per_class == [{"D": 1}, {"D": 1}]


class TestReportArithmetic:
    def synthetic_report(self):
        # identical training data for every class: ties send everything to
        # class 0, so class 0 scores perfectly and the rest always miss
        seqs = [ab("abab"), ab("abba"), ab("baba"), ab("aabb"), ab("abab")]
        classes = [list(seqs), list(seqs), list(seqs)]
        with pytest.warns(VommWarning, match="tie"):
            return cross_validated_classification("lz78", classes, ["p", "q", "s"], folds=5)

    def test_constant_prediction_errors(self):
        report = self.synthetic_report()
        assert report.per_class_error == {"p": 0.0, "q": 1.0, "s": 1.0}
        assert report.macro_error == pytest.approx(2 / 3)
        assert report.weighted_error == pytest.approx(2 / 3)
        assert report.total == 15

    def test_confusion_matrix_routes_everything_to_class_zero(self):
        report = self.synthetic_report()
        assert report.confusion == [[5, 0, 0], [5, 0, 0], [5, 0, 0]]

    def test_macro_vs_weighted_with_unbalanced_classes(self):
        # 1 mistake in 10 vs 12 in 30: macro averages rates, weighted
        # averages mistakes
        mistakes = {"small": (1, 10), "large": (12, 30)}
        macro = statistics.mean(m / n for m, n in mistakes.values())
        weighted = sum(m for m, _ in mistakes.values()) / sum(n for _, n in mistakes.values())
        assert macro == pytest.approx(0.25)
        assert weighted == pytest.approx(13 / 40)

    def test_sem_is_fold_stdev_over_sqrt_folds(self):
        report = self.synthetic_report()
        expect = statistics.stdev(report.fold_errors) / math.sqrt(len(report.fold_errors))
        assert report.sem == pytest.approx(expect)
        assert len(report.fold_errors) == 5

    def test_lines_render_every_metric(self):
        report = self.synthetic_report()
        text = "\n".join(report.lines())
        assert "sequences: 15" in text
        assert "class p: error 0.0000" in text
        assert "macro error: 0.6667" in text
        assert "weighted error: 0.6667" in text
        assert "sem over folds:" in text

    def test_too_few_sequences_per_class_rejected(self):
        with pytest.raises(DataError, match="at least 5 sequences"):
            cross_validated_classification("lz78", [[ab("abab")] * 3, [ab("bbaa")] * 5], folds=5)


class TestEndToEnd:
    def test_separable_corpus_classifies_well(self):
        classes, names, _ = synthetic_markov_corpus(per_class=10, length=120, n_classes=2, seed=11)
        report = cross_validated_classification("ppmc", classes, names, params={"D": 2}, folds=5)
        assert report.weighted_error <= 0.05
        assert report.total == 20

    def test_report_count_matches_corpus(self):
        classes, names, _ = synthetic_markov_corpus(per_class=5, length=60, n_classes=3, seed=12)
        report = cross_validated_classification("lzms", classes, names, params={"M": 2, "S": 1}, folds=5)
        assert report.total == 15
        assert sum(sum(row) for row in report.confusion) == 15

    def test_weighted_error_is_exactly_total_mistakes_over_total(self):
        classes, names, _ = synthetic_markov_corpus(per_class=7, length=40, n_classes=2, seed=13)
        report = cross_validated_classification("ppmc", classes, names, params={"D": 1}, folds=5)
        wrong = sum(
            report.confusion[t][p]
            for t in range(len(names))
            for p in range(len(names))
            if t != p
        )
        assert report.weighted_error == wrong / report.total
