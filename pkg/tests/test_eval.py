import json
from fractions import Fraction

import pytest

from lenpos.corpus import (WordRecord, default_tagset_mapping, read_flatfile,
                           write_flatfile)
from lenpos.evaluate import (EvalError, EvalReport, evaluate, evaluate_file,
                             split_corpus)
from lenpos.kb import build_kb
from lenpos.tagger import TagDecision, TaggingConfig


def _matched(tag, score=10):
    return TagDecision(tag, "matched", score)


def _report(pairs):
    report = EvalReport()
    for gold, predicted in pairs:
        report.record(gold, _matched(predicted))
    return report


class TestEvalReport:
    def test_counts(self):
        report = _report([("N", "N"), ("N", "V"), ("V", "V")])
        assert report.total == 3
        assert report.correct == 2
        assert report.confusion == {"N": {"N": 1, "V": 1}, "V": {"V": 1}}

    def test_accuracy_is_exact(self):
        report = _report([("N", "N"), ("N", "V"), ("V", "V")])
        assert report.accuracy == Fraction(2, 3)

    def test_published_figure(self):
        report = EvalReport(total=32777, correct=11118)
        assert report.accuracy_pct == "33.92"

    def test_rounds_half_up(self):
        assert EvalReport(total=800, correct=1).accuracy_pct == "0.13"
        assert EvalReport(total=8, correct=1).accuracy_pct == "12.50"
        assert EvalReport(total=3, correct=1).accuracy_pct == "33.33"
        assert EvalReport(total=3, correct=2).accuracy_pct == "66.67"
        assert EvalReport(total=1, correct=1).accuracy_pct == "100.00"

    def test_empty_report(self):
        report = EvalReport()
        assert report.accuracy == 0
        assert report.accuracy_pct == "0.00"

    def test_sources_tally(self):
        report = EvalReport()
        report.record("N", TagDecision("N", "matched", 4))
        report.record("N", TagDecision("V", "fallback_length", 0))
        report.record("N", TagDecision("V", "fallback_global", 0))
        assert report.sources == {"matched": 1, "fallback_length": 1,
                                  "fallback_global": 1}

    def test_per_tag(self):
        report = _report([("N", "N"), ("N", "V"), ("V", "V")])
        per_tag = report.per_tag()
        assert per_tag["N"] == {"precision": 1.0, "recall": 0.5}
        assert per_tag["V"] == {"precision": 0.5, "recall": 1.0}
        assert per_tag["Det"] == {"precision": 0.0, "recall": 0.0}
        assert len(per_tag) == 15

    def test_as_dict_shape(self):
        report = _report([("N", "N"), ("V", "N")])
        data = report.as_dict()
        assert list(data) == ["total", "correct", "accuracy", "accuracy_pct",
                              "confusion", "per_tag", "sources"]
        assert data["confusion"] == {"N": {"N": 1}, "V": {"N": 1}}

    def test_confusion_rows_follow_declaration_order(self):
        report = _report([("V", "V"), ("N", "N"), ("Adj", "N")])
        assert list(report.as_dict()["confusion"]) == ["N", "V", "Adj"]

    def test_to_json_round_trips(self):
        report = _report([("N", "N")])
        assert json.loads(report.to_json()) == report.as_dict()
        assert report.to_json().endswith("\n")

    def test_diagonal_sums_to_correct(self):
        pairs = [("N", "N"), ("N", "V"), ("V", "V"), ("Adj", "Adj"),
                 ("Det", "N")]
        report = _report(pairs)
        diagonal = sum(report.confusion.get(t, {}).get(t, 0)
                       for t in report.confusion)
        assert diagonal == report.correct
        assert sum(sum(row.values()) for row in report.confusion.values()) \
            == report.total


class TestEvaluate:
    def test_training_sentence_scores_perfectly(self, example_words):
        kb = build_kb([example_words])
        report = evaluate(kb, [example_words])
        assert (report.total, report.correct) == (5, 5)
        assert report.accuracy == 1
        assert report.sources["matched"] == 5

    def test_sees_lengths_only(self, example_words):
        kb = build_kb([example_words])
        # Corrupt every surface and gold tag except the lengths: decisions
        # must be identical to tagging the pristine sentence.
        scrambled = [WordRecord("Punct", w.length, None) for w in example_words]
        report = evaluate(kb, [scrambled])
        assert report.correct == 0
        predicted = [tag for row in report.confusion.values() for tag in row]
        assert set(predicted) == {"Det", "N", "Adj"}

    def test_unseen_lengths_still_tagged(self, example_words):
        kb = build_kb([example_words])
        report = evaluate(kb, [[WordRecord("N", 9), WordRecord("V", 9)]])
        assert report.total == 2
        assert report.sources["fallback_global"] == 2

    def test_empty_corpus(self, example_words):
        with pytest.raises(EvalError):
            evaluate(build_kb([example_words]), [])

    def test_evaluate_file(self, tmp_path, example_words):
        kb = build_kb([example_words])
        path = tmp_path / "test.flat"
        write_flatfile([example_words], path)
        report = evaluate_file(kb, path)
        assert report.correct == 5

    def test_multi_pass_config(self, example_words):
        kb = build_kb([example_words], with_context=True)
        cfg = TaggingConfig(mode="multi")
        report = evaluate(kb, [example_words], cfg)
        assert report.correct == 5


class TestSplitCorpus:
    def test_split_writes_both_files(self, synth_dir, tmp_path):
        train_out = tmp_path / "train.flat"
        test_out = tmp_path / "test.flat"
        train_report, test_report = split_corpus(
            synth_dir, default_tagset_mapping(), {"A", "G", "J"}, {"N"},
            train_out, test_out)
        assert train_report.tokens == sum(
            len(s) for s in read_flatfile(train_out))
        assert test_report.tokens == sum(
            len(s) for s in read_flatfile(test_out))
        assert train_report.per_genre.keys() <= {"A", "G", "J"}
        assert set(test_report.per_genre) == {"N"}

    def test_overlap_rejected(self, synth_dir, tmp_path):
        with pytest.raises(EvalError, match="overlap"):
            split_corpus(synth_dir, default_tagset_mapping(), {"A", "N"},
                         {"N"}, tmp_path / "a", tmp_path / "b")

    def test_empty_side_rejected(self, synth_dir, tmp_path):
        with pytest.raises(EvalError, match="non-empty"):
            split_corpus(synth_dir, default_tagset_mapping(), set(), {"N"},
                         tmp_path / "a", tmp_path / "b")

    def test_end_to_end_split_then_eval(self, synth_dir, tmp_path):
        train_out = tmp_path / "train.flat"
        test_out = tmp_path / "test.flat"
        split_corpus(synth_dir, default_tagset_mapping(), {"A", "G", "J"},
                     {"N"}, train_out, test_out)
        kb = build_kb(read_flatfile(train_out))
        report = evaluate_file(kb, test_out)
        assert report.total > 0
        assert 0 <= report.accuracy <= 1
        assert sum(report.sources.values()) == report.total
