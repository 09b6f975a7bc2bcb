import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unirec.bpe import Modality
from unirec.sdt import (
    RESERVED_SPECIALS,
    DecoupledVocabulary,
    UnbalancedDelimiterError,
    merge_decoupled,
    modality_overlap_report,
    segment_label,
)

from conftest import toy_model


class TestSegmentLabel:
    def test_inline_math(self):
        segs = segment_label("energy $E=mc^2$ here").segments
        assert [(s.content, s.modality) for s in segs] == [
            ("energy ", Modality.TEXT),
            ("$E=mc^2$", Modality.FORMULA),
            (" here", Modality.TEXT),
        ]

    def test_plain_text(self):
        segs = segment_label("plain text").segments
        assert [(s.content, s.modality) for s in segs] == [
            ("plain text", Modality.TEXT)
        ]

    def test_whole_string_formula(self):
        segs = segment_label("$x$").segments
        assert [(s.content, s.modality) for s in segs] == [
            ("$x$", Modality.FORMULA)
        ]

    @pytest.mark.parametrize(
        "label",
        [
            "a \\(x+y\\) b",
            "a \\[x+y\\] b",
            "a \\begin{equation}x\\end{equation} b",
        ],
    )
    def test_other_delimiters(self, label):
        segs = segment_label(label).segments
        assert [s.modality for s in segs] == [
            Modality.TEXT,
            Modality.FORMULA,
            Modality.TEXT,
        ]
        assert segs[1].content.startswith(("\\(", "\\[", "\\begin{equation}"))

    def test_concatenation_reproduces_label(self):
        label = "pre $a$ mid \\(b\\) post"
        assert segment_label(label).text == label

    def test_unbalanced_reports_byte_offset(self):
        with pytest.raises(UnbalancedDelimiterError) as err:
            segment_label("héllo $x")
        # "héllo " is 7 bytes in UTF-8
        assert err.value.offset == 7


class TestMergeDecoupled:
    def test_shared_surfaces_excluded(self):
        text = toy_model(["the", "sum", "("])
        formula = toy_model(["\\sum", "sum", "("], Modality.FORMULA)
        merged = merge_decoupled(text, formula)
        formula_surfaces = [
            e.surface for e in merged.merged if e.modality is Modality.FORMULA
        ]
        assert formula_surfaces == ["\\sum"]
        assert merged.excluded == ["sum", "("]

    def test_formula_subset_of_text(self):
        text = toy_model(["a", "b", "c"])
        formula = toy_model(["b", "c"], Modality.FORMULA)
        merged = merge_decoupled(text, formula)
        assert len(merged) == 3 + len(RESERVED_SPECIALS)
        assert merged.excluded == ["b", "c"]

    def test_disjoint_cardinality(self):
        text = toy_model([f"t{i}" for i in range(10)])
        formula = toy_model([f"f{i}" for i in range(8)], Modality.FORMULA)
        merged = merge_decoupled(text, formula)
        assert len(merged) == 23

    def test_text_ids_preserved(self):
        text = toy_model(["x", "y"])
        formula = toy_model(["z"], Modality.FORMULA)
        merged = merge_decoupled(text, formula)
        for entry in text.vocab:
            assert merged.id_of(entry.surface) == entry.id

    def test_cardinality_matches_set_union_oracle(self):
        rng = random.Random(42)
        pool = [f"s{i}" for i in range(60)] + RESERVED_SPECIALS[:2]
        for _ in range(100):
            text_surfaces = rng.sample(pool, rng.randint(1, 30))
            formula_surfaces = rng.sample(pool, rng.randint(1, 30))
            merged = merge_decoupled(
                toy_model(text_surfaces),
                toy_model(formula_surfaces, Modality.FORMULA),
            )
            expected = len(
                set(text_surfaces) | set(formula_surfaces) | set(RESERVED_SPECIALS)
            )
            assert len(merged) == expected

    def test_ids_dense_and_surfaces_unique(self, vocab):
        assert [e.id for e in vocab.merged] == list(range(len(vocab)))
        surfaces = [e.surface for e in vocab.merged]
        assert len(set(surfaces)) == len(surfaces)


class TestOverlapReport:
    def test_disjoint_is_empty(self):
        report = modality_overlap_report(
            toy_model(["a"]), toy_model(["b"], Modality.FORMULA)
        )
        assert report == []

    def test_equals_excluded(self, text_model, formula_model, vocab):
        report = modality_overlap_report(text_model, formula_model)
        assert [r.surface for r in report] == vocab.excluded

    def test_shared_stems_reported_with_frequencies(
        self, text_model, formula_model
    ):
        report = {r.surface: r for r in modality_overlap_report(text_model, formula_model)}
        # single characters are in both byte-level base alphabets
        assert "a" in report
        assert report[" "].text_freq > 0 and report[" "].formula_freq > 0


class TestEncodeDecode:
    def test_empty_label(self, vocab):
        assert vocab.encode("") == [vocab.bos_id, vocab.eos_id]
        assert vocab.decode([vocab.bos_id, vocab.eos_id]) == ""

    def test_hierarchical_special_is_atomic(self, vocab):
        ids = vocab.encode("A<|ln|>B")
        ln = vocab.id_of("<|ln|>")
        assert ids.count(ln) == 1
        assert vocab.decode(ids) == "A<|ln|>B"

    def test_contrast_formula_vs_text_stem(self, vocab):
        formula_ids = set(vocab.encode("$\\frac{a}{b}$"))
        text_ids = set(vocab.encode("frac"))
        entry = vocab.merged[vocab.id_of("\\frac")]
        assert entry.modality is Modality.FORMULA
        # the \frac region is carried by formula-modality ids
        assert any(
            vocab.merged[i].modality is Modality.FORMULA
            and "\\frac" in vocab.merged[i].surface
            for i in formula_ids
        )
        # and those never appear when encoding the plain-text stem
        assert not (formula_ids & text_ids & {
            i for i in range(len(vocab))
            if "frac" in vocab.merged[i].surface
        })
        assert all(
            vocab.merged[i].modality is not Modality.FORMULA for i in text_ids
        )

    def test_formula_ids_never_inside_text_segments(self, vocab):
        formula_only = {
            e.id for e in vocab.merged if e.modality is Modality.FORMULA
        }
        ids = vocab.encode("the sum of frac and infty words")
        assert not (set(ids) & formula_only)

    def test_out_of_range_id(self, vocab):
        with pytest.raises(ValueError, match=f"{len(vocab)}"):
            vocab.decode([len(vocab)])

    def test_roundtrip_mixed_corpus(self, vocab, mixed_labels):
        for label in mixed_labels:
            assert vocab.decode(vocab.encode(label)) == label

    @settings(max_examples=100, deadline=None)
    @given(st.text(max_size=60).filter(lambda s: s.count("$") % 2 == 0 and "\\" not in s))
    def test_roundtrip_property(self, vocab, label):
        assert vocab.decode(vocab.encode(label)) == label


def test_vocab_serialization_roundtrip(vocab, tmp_path):
    path = tmp_path / "sdt.json"
    vocab.save(path)
    loaded = DecoupledVocabulary.load(path)
    assert loaded.merged == vocab.merged
    assert loaded.excluded == vocab.excluded
    label = "sum $\\sum_{i=0}^{n} x_i$ done"
    assert loaded.encode(label) == vocab.encode(label)
