"""Byte-level BPE training and application for a single modality."""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

# Merges never span word boundaries: runs of ASCII whitespace are separate
# chunks (ASCII only, so multi-byte UTF-8 symbols never split mid-character).
_CHUNKS = re.compile(r"[ \t\n\r\f\v]+|[^ \t\n\r\f\v]+")


class Modality(str, Enum):
    TEXT = "text"
    FORMULA = "formula"
    SPECIAL = "special"


# Internal symbol space: every byte 0..255 maps to one latin-1 character, so
# arbitrary UTF-8 input becomes a plain str of single-byte symbols and any
# learned surface round-trips losslessly.
BYTE_ALPHABET = [chr(b) for b in range(256)]


def to_byte_space(text: str) -> str:
    return text.encode("utf-8").decode("latin-1")


def from_byte_space(symbols: str) -> str:
    return symbols.encode("latin-1").decode("utf-8", errors="replace")


@dataclass(frozen=True)
class TokenEntry:
    id: int
    surface: str
    modality: Modality


@dataclass
class BpeModel:
    """A trained BPE model over the 256-byte base alphabet."""

    modality: Modality
    merges: list[tuple[str, str]]
    vocab: list[TokenEntry]
    base_alphabet: list[str] = field(default_factory=lambda: list(BYTE_ALPHABET))
    surface_freq: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        self._id_of = {e.surface: e.id for e in self.vocab}
        self._rank = {pair: i for i, pair in enumerate(self.merges)}

    @property
    def surfaces(self) -> set[str]:
        return set(self._id_of)

    def id_of(self, surface: str) -> int:
        return self._id_of[surface]

    def surface_of(self, token_id: int) -> str:
        return self.vocab[token_id].surface

    def apply_merges(self, symbols: str) -> list[str]:
        """Merge a byte-space symbol string into model tokens, rank order."""
        out: list[str] = []
        for chunk in _CHUNKS.findall(symbols):
            out.extend(self._merge_chunk(chunk))
        return out

    def _merge_chunk(self, chunk: str) -> list[str]:
        parts = list(chunk)
        if len(parts) < 2:
            return parts
        while True:
            best_rank = None
            best_idx = -1
            for i in range(len(parts) - 1):
                rank = self._rank.get((parts[i], parts[i + 1]))
                if rank is not None and (best_rank is None or rank < best_rank):
                    best_rank = rank
                    best_idx = i
            if best_rank is None:
                return parts
            parts[best_idx : best_idx + 2] = [parts[best_idx] + parts[best_idx + 1]]

    def encode(self, text: str) -> list[int]:
        """Token ids for a plain string (no special-token handling)."""
        return [self._id_of[s] for s in self.apply_merges(to_byte_space(text))]

    def decode(self, ids: list[int]) -> str:
        return from_byte_space("".join(self.vocab[i].surface for i in ids))

    def to_dict(self) -> dict:
        return {
            "modality": self.modality.value,
            "tokens": [
                {"id": e.id, "surface": e.surface, "modality": e.modality.value}
                for e in self.vocab
            ],
            "merges": [list(pair) for pair in self.merges],
            "surface_freq": self.surface_freq,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BpeModel":
        vocab = [
            TokenEntry(t["id"], t["surface"], Modality(t["modality"]))
            for t in data["tokens"]
        ]
        return cls(
            modality=Modality(data["modality"]),
            merges=[tuple(p) for p in data["merges"]],
            vocab=vocab,
            surface_freq=dict(data.get("surface_freq", {})),
        )

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, ensure_ascii=False, indent=1)

    @classmethod
    def load(cls, path) -> "BpeModel":
        with open(path, encoding="utf-8") as f:
            return cls.from_dict(json.load(f))


def train_bpe(corpus, target_vocab_size: int, modality: Modality) -> BpeModel:
    """Train a byte-level BPE model on a stream of strings.

    Merges the most frequent adjacent pair until the vocabulary reaches
    ``target_vocab_size`` or no pair occurs at least twice. Ties break on the
    lexicographically smallest concatenated surface, so training is
    deterministic for a given corpus order.
    """
    sequences = [
        list(chunk)
        for line in corpus
        for chunk in _CHUNKS.findall(to_byte_space(line))
    ]
    if not sequences or all(not s for s in sequences):
        raise ValueError("empty corpus")
    if target_vocab_size < len(BYTE_ALPHABET):
        raise ValueError("vocab too small")

    vocab_surfaces = list(BYTE_ALPHABET)
    merges: list[tuple[str, str]] = []
    while len(vocab_surfaces) < target_vocab_size:
        counts = Counter()
        for seq in sequences:
            for i in range(len(seq) - 1):
                counts[(seq[i], seq[i + 1])] += 1
        if not counts:
            break
        best = min(counts.items(), key=lambda kv: (-kv[1], kv[0][0] + kv[0][1]))
        (left, right), freq = best
        if freq < 2:
            break
        merges.append((left, right))
        vocab_surfaces.append(left + right)
        joined = left + right
        for seq in sequences:
            i = 0
            while i < len(seq) - 1:
                if seq[i] == left and seq[i + 1] == right:
                    seq[i : i + 2] = [joined]
                else:
                    i += 1

    freq = Counter()
    for seq in sequences:
        freq.update(seq)
    vocab = [
        TokenEntry(i, surface, modality) for i, surface in enumerate(vocab_surfaces)
    ]
    return BpeModel(
        modality=modality,
        merges=merges,
        vocab=vocab,
        surface_freq={s: freq.get(s, 0) for s in vocab_surfaces},
    )
