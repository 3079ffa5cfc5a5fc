import json
import random
from datetime import date, timedelta

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpusgen import make_document, uniform_document
from ocrcorpus.filtering import (
    FilterConfig,
    RejectionReason,
    filter_document,
    load_filter_config,
    page_confidence,
    paragraph_confidence,
)
from ocrcorpus.ingest import OcrPage, OcrParagraph, OcrWord
from oracles import filter_oracle

CFG = FilterConfig()


def para(*confs):
    return OcrParagraph(tuple(OcrWord(f"w{i}", c) for i, c in enumerate(confs)))


class TestConfidences:
    def test_paragraph_mean(self):
        assert paragraph_confidence(para(0.9, 0.7, 0.8)) == pytest.approx(0.8)

    def test_single_word(self):
        assert paragraph_confidence(para(1.0)) == 1.0

    def test_empty_paragraph_is_zero(self):
        assert paragraph_confidence(OcrParagraph()) == 0.0

    def test_page_word_weighted(self):
        page = OcrPage((para(1.0), para(0.8, 0.8)))
        assert page_confidence(page) == pytest.approx((1.0 + 0.8 + 0.8) / 3)

    def test_page_uniform(self):
        page = OcrPage((para(0.9, 0.9), para(0.9)))
        assert page_confidence(page) == pytest.approx(0.9)

    def test_empty_page_is_zero(self):
        assert page_confidence(OcrPage()) == 0.0


class TestFilterDocument:
    def test_excluded_period_rejects(self):
        doc = uniform_document(
            "d", n_paragraphs=5, words_per_paragraph=10, digitization_date=date(2007, 6, 15)
        )
        retained, verdict = filter_document(doc, CFG)
        assert retained == []
        assert not verdict.accepted
        assert verdict.rejection_reasons == [RejectionReason.PERIOD_EXCLUDED]

    def test_period_boundaries(self):
        for d, rejected in [
            (date(2005, 12, 31), False),
            (date(2006, 1, 1), True),
            (date(2008, 12, 31), True),
            (date(2009, 1, 1), False),
        ]:
            doc = uniform_document("d", n_paragraphs=4, words_per_paragraph=10, digitization_date=d)
            _, verdict = filter_document(doc, CFG)
            assert verdict.accepted != rejected, d

    def test_born_digital_ignores_period(self):
        doc = uniform_document(
            "d",
            n_paragraphs=4,
            words_per_paragraph=10,
            digitization_date=date(2007, 1, 1),
            born_digital=True,
        )
        _, verdict = filter_document(doc, CFG)
        assert verdict.accepted

    def test_nineteen_words_rejected(self):
        doc = make_document("d", [[[1.0] * 19]])
        retained, verdict = filter_document(doc, CFG)
        assert retained == []
        assert verdict.rejection_reasons == [RejectionReason.TOO_FEW_WORDS]

    def test_twenty_words_accepted(self):
        doc = make_document("d", [[[1.0] * 20]])
        _, verdict = filter_document(doc, CFG)
        assert verdict.accepted

    def test_boundary_avg_six_accepted(self):
        doc = uniform_document(
            "d", n_paragraphs=4, words_per_paragraph=6, digitization_date=date(2015, 1, 1)
        )
        retained, verdict = filter_document(doc, CFG)
        assert verdict.accepted
        assert len(retained) == 4

    def test_below_avg_six_rejected(self):
        doc = make_document("d", [[[1.0] * 5, [1.0] * 5, [1.0] * 5, [1.0] * 9]])  # 24/4 = 6 ok
        _, v = filter_document(doc, CFG)
        assert v.accepted
        doc = make_document("d", [[[1.0] * 5, [1.0] * 5, [1.0] * 5, [1.0] * 8]])  # 23/4 < 6
        _, v = filter_document(doc, CFG)
        assert RejectionReason.LOW_AVG_PARAGRAPH_LENGTH in v.rejection_reasons

    def test_confidence_thresholds_inclusive(self):
        # page at exactly 0.9 passes, paragraph at exactly 0.8 passes
        doc = make_document("d", [[[0.9] * 10, [0.8] * 10, [1.0] * 10]])
        retained, verdict = filter_document(doc, CFG)
        assert verdict.accepted
        assert len(retained) == 3

    def test_low_confidence_page_dropped(self):
        # page mean 0.5 < 0.9: all its paragraphs go
        doc = make_document("d", [[[0.5] * 10, [0.5] * 10], [[1.0] * 30]])
        retained, verdict = filter_document(doc, CFG)
        assert verdict.accepted
        assert [i for i, _ in retained] == [2]
        assert verdict.retained_paragraph_count == 1
        assert verdict.dropped_paragraph_count == 2

    def test_low_confidence_paragraph_dropped_within_good_page(self):
        doc = make_document("d", [[[1.0] * 30, [0.7] * 2]])  # page mean 0.98
        retained, verdict = filter_document(doc, CFG)
        assert verdict.accepted
        assert [i for i, _ in retained] == [0]

    def test_verdict_partition(self):
        doc = make_document("d", [[[1.0] * 30, [0.7] * 2], [[0.5] * 4]])
        _, verdict = filter_document(doc, CFG)
        assert verdict.retained_paragraph_count + verdict.dropped_paragraph_count == 3

    def test_rejected_doc_lists_contributing_confidence_reasons(self):
        # all pages dropped -> too few words; low-page-confidence contributed
        doc = make_document("d", [[[0.5] * 30]])
        retained, verdict = filter_document(doc, CFG)
        assert retained == []
        assert RejectionReason.TOO_FEW_WORDS in verdict.rejection_reasons
        assert RejectionReason.LOW_PAGE_CONFIDENCE in verdict.rejection_reasons

    def test_accepted_implies_no_reasons(self):
        doc = make_document("d", [[[1.0] * 30, [0.7] * 2]])
        _, verdict = filter_document(doc, CFG)
        assert verdict.accepted and verdict.rejection_reasons == []

    def test_perfect_doc_always_accepted(self):
        doc = uniform_document(
            "d", n_paragraphs=3, words_per_paragraph=8, digitization_date=date(2015, 3, 3)
        )
        _, verdict = filter_document(doc, CFG)
        assert verdict.accepted


@st.composite
def documents(draw):
    pages = []
    for _ in range(draw(st.integers(0, 3))):
        paragraphs = []
        for _ in range(draw(st.integers(0, 4))):
            confs = draw(st.lists(st.floats(0, 1), max_size=12))
            paragraphs.append([round(c, 3) for c in confs])
        pages.append(paragraphs)
    offset = draw(st.integers(0, 6000))
    return make_document(
        "h",
        pages,
        digitization_date=date(2000, 1, 1) + timedelta(days=offset),
        born_digital=draw(st.booleans()),
    )


class TestProperties:
    @settings(max_examples=200, deadline=None)
    @given(documents())
    def test_matches_rule_oracle(self, doc):
        retained, verdict = filter_document(doc, CFG)
        assert [i for i, _ in retained] == filter_oracle(doc, CFG)
        total = sum(len(pg.paragraphs) for pg in doc.pages)
        assert verdict.retained_paragraph_count + verdict.dropped_paragraph_count == total

    @settings(max_examples=100, deadline=None)
    @given(
        documents(),
        st.floats(0, 1),
        st.floats(0, 1),
        st.integers(0, 40),
        st.floats(0, 12),
    )
    def test_monotonic_in_thresholds(self, doc, pc, gc, dw, avg):
        base = len(filter_document(doc, CFG)[0])
        raised = FilterConfig(
            min_paragraph_confidence=max(CFG.min_paragraph_confidence, pc),
            min_page_confidence=max(CFG.min_page_confidence, gc),
            min_doc_words=max(CFG.min_doc_words, dw),
            min_avg_words_per_paragraph=max(CFG.min_avg_words_per_paragraph, avg),
        )
        assert len(filter_document(doc, raised)[0]) <= base


class TestConfigIO:
    def test_defaults_match_production_values(self):
        cfg = FilterConfig()
        assert cfg.min_paragraph_confidence == 0.8
        assert cfg.min_page_confidence == 0.9
        assert cfg.min_doc_words == 20
        assert cfg.min_avg_words_per_paragraph == 6.0
        assert cfg.excluded_period_start == date(2006, 1, 1)
        assert cfg.excluded_period_end == date(2008, 12, 31)

    def test_load_from_file(self, tmp_path):
        f = tmp_path / "filter.cfg"
        f.write_text(
            "# thresholds\n"
            "min_paragraph_confidence = 0.85\n"
            "min_doc_words = 30\n"
            "excluded_period_start = 2005-01-01\n"
            "excluded_period_end = 2009-06-30\n"
        )
        cfg = load_filter_config(f)
        assert cfg.min_paragraph_confidence == 0.85
        assert cfg.min_doc_words == 30
        assert cfg.excluded_period_start == date(2005, 1, 1)
        assert cfg.min_page_confidence == 0.9  # default preserved

    def test_verdict_json_round_trip(self):
        doc = make_document("d", [[[0.5] * 4]])
        _, verdict = filter_document(doc, CFG)
        obj = json.loads(verdict.to_json())
        assert obj["doc_id"] == "d"
        assert obj["accepted"] is False
        assert "too-few-words" in obj["rejection_reasons"]

    def test_invalid_config_rejected(self):
        with pytest.raises(ValueError):
            FilterConfig(min_page_confidence=1.5)
        with pytest.raises(ValueError):
            FilterConfig(min_doc_words=-1)
