import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpusgen import synthetic_language_mix
from ocrcorpus.cleaning import CleanParagraph
from ocrcorpus.ingest import SourceKind
from ocrcorpus.langid import (
    UNKNOWN,
    CompositionReport,
    LanguageLexicon,
    classify_paragraph,
    classify_stream,
    composition_report,
    load_lexicons,
)

NB = LanguageLexicon("nb", {"jeg": 2.0, "ikke": 2.0, "og": 1.0})
EN = LanguageLexicon("en", {"the": 2.0, "and": 1.0})
LEX = [NB, EN]


def para(text, language=None):
    return CleanParagraph("d", 0, text, len(text.split()), SourceKind.BOOK, language)


class TestClassify:
    def test_pure_marker_paragraph(self):
        lang, score = classify_paragraph(para("jeg ikke og jeg"), LEX)
        assert lang == "nb"
        assert score == pytest.approx((2 + 2 + 1 + 2) / 4)

    def test_no_match_no_hint_is_unknown(self):
        lang, score = classify_paragraph(para("xyzzy quux"), LEX)
        assert lang == UNKNOWN
        assert score == 0.0

    def test_no_match_falls_back_to_hint(self):
        lang, _ = classify_paragraph(para("xyzzy quux", language="se"), LEX)
        assert lang == "se"

    def test_floor_is_strict(self):
        # exactly at the floor: not enough
        text = "og " + " ".join(f"x{i}" for i in range(19))
        assert classify_paragraph(para(text), LEX, score_floor=0.05)[0] == UNKNOWN
        text = "og " + " ".join(f"x{i}" for i in range(18))
        assert classify_paragraph(para(text), LEX, score_floor=0.05)[0] == "nb"

    def test_tie_breaks_by_language_order(self):
        tied = [LanguageLexicon("sv", {"ja": 1.0}), LanguageLexicon("en", {"ja": 1.0})]
        assert classify_paragraph(para("ja ja"), tied)[0] == "en"

    def test_punctuation_stripped_before_matching(self):
        lang, _ = classify_paragraph(para("Jeg, ikke!"), LEX)
        assert lang == "nb"

    def test_empty_lexicons_rejected(self):
        with pytest.raises(ValueError):
            classify_paragraph(para("x"), [])


class TestCompositionReport:
    def test_single_language(self):
        ps = list(classify_stream([para("jeg ikke og")], LEX))
        report = composition_report(ps)
        assert report.fractions == {"nb": 1.0}

    def test_word_weighted_mix(self):
        nb = para(" ".join(["jeg"] * 60))
        en = para(" ".join(["the"] * 40))
        report = composition_report(classify_stream([nb, en], LEX))
        assert report.fractions["nb"] == pytest.approx(0.6)
        assert report.fractions["en"] == pytest.approx(0.4)

    def test_fractions_sum_to_one(self):
        rng = random.Random(17)
        ps, lexicons, _ = synthetic_language_mix(
            rng, {"nb": 0.5, "en": 0.5}, n_paragraphs=200
        )
        report = composition_report(classify_stream(ps, lexicons))
        assert abs(sum(report.fractions.values()) - 1.0) < 1e-9

    def test_permutation_invariance(self):
        rng = random.Random(23)
        ps, lexicons, _ = synthetic_language_mix(
            rng, {"nb": 0.7, "en": 0.3}, n_paragraphs=300
        )
        classified = list(classify_stream(ps, lexicons))
        r1 = composition_report(classified)
        shuffled = classified[:]
        rng.shuffle(shuffled)
        assert composition_report(shuffled) == r1

    def test_full_mix_within_two_points(self):
        rng = random.Random(7)
        ps, lexicons, exact = synthetic_language_mix(
            rng, {"nb": 0.83, "nn": 0.12, "en": 0.04, "da": 0.01}
        )
        report = composition_report(classify_stream(ps, lexicons))
        for lang, frac in exact.items():
            assert abs(report.fractions.get(lang, 0.0) - frac) <= 0.02

    def test_empty_corpus(self):
        report = composition_report([])
        assert report.total_words == 0
        assert report.fractions == {}

    def test_json_shape(self):
        report = CompositionReport({"nb": 1.0}, {"nb": 10}, 10)
        assert '"total_words": 10' in report.to_json()


class TestShippedLexicons:
    def test_load_and_classify_real_sentences(self):
        lexicons = load_lexicons()
        langs = {l.language for l in lexicons}
        assert {"nb", "nn", "en", "da", "sv"} <= langs
        cases = {
            "jeg vet ikke hva det er": "nb",
            "eg veit ikkje kva det er": "nn",
            "the cat sat on the mat and slept": "en",
            "jag vet inte vad det är": "sv",
        }
        for text, expected in cases.items():
            assert classify_paragraph(para(text), lexicons)[0] == expected, text


class TestMonotonicity:
    @settings(max_examples=100, deadline=None)
    @given(st.integers(6, 30), st.integers(0, 10**6))
    def test_adding_positive_paragraph_never_decreases_fraction(self, n_words, seed):
        rng = random.Random(seed)
        ps, lexicons, _ = synthetic_language_mix(
            rng, {"nb": 0.6, "en": 0.4}, n_paragraphs=30
        )
        classified = list(classify_stream(ps, lexicons))
        before = composition_report(classified).fractions.get("nb", 0.0)
        extra = para(" ".join(["nbword0"] * n_words))
        classified.append(list(classify_stream([extra], lexicons))[0])
        after = composition_report(classified).fractions.get("nb", 0.0)
        assert after >= before
