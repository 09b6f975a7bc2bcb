import pytest

from unirec.bpe import BpeModel, Modality, TokenEntry, train_bpe
from unirec.corpus import DocumentProfile, generate_document
from unirec.hst import encode_hst
from unirec.sdt import merge_decoupled

TEXT_CORPUS = [
    "the sum of the parts",
    "left and right margins",
    "frac of the total is the sum",
    "to infty and beyond the limit",
    "energy equals mass times speed",
]

FORMULA_CORPUS = [
    "\\sum_{i=0}^{n} x_i",
    "\\frac{a}{b} + \\frac{c}{d}",
    "\\left( x \\right)",
    "\\lim_{x \\to \\infty} f(x)",
    "\\sum \\infty \\left \\frac \\right",
]


def toy_model(surfaces, modality=Modality.TEXT):
    """Hand-built merge-free model for vocabulary-merge tests."""
    vocab = [TokenEntry(i, s, modality) for i, s in enumerate(surfaces)]
    return BpeModel(modality=modality, merges=[], vocab=vocab, base_alphabet=[])


@pytest.fixture(scope="session")
def text_model():
    return train_bpe(TEXT_CORPUS * 4, 300, Modality.TEXT)


@pytest.fixture(scope="session")
def formula_model():
    return train_bpe(FORMULA_CORPUS * 4, 300, Modality.FORMULA)


@pytest.fixture(scope="session")
def vocab(text_model, formula_model):
    return merge_decoupled(text_model, formula_model)


@pytest.fixture(scope="session")
def mixed_labels():
    """Seeded synthetic labels, both with and without supervision tokens."""
    from unirec.hst import strip_hst

    labels = []
    profile = DocumentProfile()
    for seed in range(50):
        doc = generate_document(seed, profile)
        label = encode_hst(doc)
        labels.append(label)
        labels.append(strip_hst(label))
    return labels
