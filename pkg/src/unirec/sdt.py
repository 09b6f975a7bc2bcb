"""Semantic-decoupled vocabulary: merge text and formula tokenizers.

Formula tokens enter the merged table as atomic special-style entries, so a
surface shared by both modalities keeps its text id while unshared formula
surfaces get fresh ids of their own.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .bpe import BpeModel, Modality, TokenEntry, from_byte_space, to_byte_space

BOS = "<BOS>"
EOS = "<EOS>"
LN = "<|ln|>"
PN = "<|pn|>"
PAD = "<PAD>"
RESERVED_SPECIALS = [BOS, EOS, LN, PN, PAD]

# Math delimiters, searched left to right; each maps to its closer.
_MATH_DELIMS = [
    ("\\(", "\\)"),
    ("\\[", "\\]"),
    ("\\begin{equation}", "\\end{equation}"),
    ("$", "$"),
]


@dataclass(frozen=True)
class Segment:
    content: str
    modality: Modality


@dataclass
class SegmentedLabel:
    segments: list[Segment]

    @property
    def text(self) -> str:
        return "".join(s.content for s in self.segments)


class UnbalancedDelimiterError(ValueError):
    def __init__(self, opener: str, offset: int):
        self.opener = opener
        self.offset = offset
        super().__init__(
            f"unbalanced math delimiter {opener!r} at byte offset {offset}"
        )


def segment_label(label: str) -> SegmentedLabel:
    """Split a label into text/formula segments on LaTeX math delimiters.

    Delimiters stay attached to the formula segment. Raises
    UnbalancedDelimiterError (with the byte offset of the opener) when a
    closer is missing.
    """
    segments: list[Segment] = []
    pos = 0
    buf: list[str] = []

    def flush_text():
        if buf:
            segments.append(Segment("".join(buf), Modality.TEXT))
            buf.clear()

    while pos < len(label):
        hit = None
        for opener, closer in _MATH_DELIMS:
            if label.startswith(opener, pos):
                hit = (opener, closer)
                break
        if hit is None:
            buf.append(label[pos])
            pos += 1
            continue
        opener, closer = hit
        end = label.find(closer, pos + len(opener))
        if end < 0:
            byte_offset = len(label[:pos].encode("utf-8"))
            raise UnbalancedDelimiterError(opener, byte_offset)
        flush_text()
        segments.append(
            Segment(label[pos : end + len(closer)], Modality.FORMULA)
        )
        pos = end + len(closer)
    flush_text()
    return SegmentedLabel(segments)


@dataclass
class DecoupledVocabulary:
    text_model: BpeModel
    formula_model: BpeModel
    merged: list[TokenEntry]
    excluded: list[str]

    def __post_init__(self):
        self._id_of = {e.surface: e.id for e in self.merged}
        self._formula_surfaces = sorted(
            (e.surface for e in self.merged if e.modality is Modality.FORMULA),
            key=len,
            reverse=True,
        )
        # Specials split atomically before any merge is applied.
        self._special_re = re.compile(
            "("
            + "|".join(
                re.escape(e.surface)
                for e in self.merged
                if e.modality is Modality.SPECIAL
            )
            + ")"
        )

    def __len__(self) -> int:
        return len(self.merged)

    @property
    def bos_id(self) -> int:
        return self._id_of[BOS]

    @property
    def eos_id(self) -> int:
        return self._id_of[EOS]

    @property
    def pad_id(self) -> int:
        return self._id_of[PAD]

    def id_of(self, surface: str) -> int:
        return self._id_of[surface]

    def _encode_text_chunk(self, chunk: str) -> list[int]:
        out = []
        for part in self._special_re.split(chunk):
            if not part:
                continue
            if part in self._id_of and self._special_re.fullmatch(part):
                out.append(self._id_of[part])
            else:
                out.extend(
                    self._id_of[s]
                    for s in self.text_model.apply_merges(to_byte_space(part))
                )
        return out

    def _encode_formula_chunk(self, chunk: str) -> list[int]:
        # Longest match over formula-origin surfaces; residues fall back to
        # the text model (formula entries are atomic, they never re-merge).
        out: list[int] = []
        symbols = to_byte_space(chunk)
        residue: list[str] = []
        i = 0
        while i < len(symbols):
            match = None
            for surface in self._formula_surfaces:
                if symbols.startswith(surface, i):
                    match = surface
                    break
            if match is None:
                residue.append(symbols[i])
                i += 1
                continue
            if residue:
                out.extend(
                    self._id_of[s]
                    for s in self.text_model.apply_merges("".join(residue))
                )
                residue.clear()
            out.append(self._id_of[match])
            i += len(match)
        if residue:
            out.extend(
                self._id_of[s]
                for s in self.text_model.apply_merges("".join(residue))
            )
        return out

    def encode(self, label: str) -> list[int]:
        """<BOS> + modality-routed token ids + <EOS>."""
        ids = [self.bos_id]
        for seg in segment_label(label).segments:
            for part in self._special_re.split(seg.content):
                if not part:
                    continue
                if self._special_re.fullmatch(part):
                    ids.append(self._id_of[part])
                elif seg.modality is Modality.FORMULA:
                    ids.extend(self._encode_formula_chunk(part))
                else:
                    ids.extend(self._encode_text_chunk(part))
        ids.append(self.eos_id)
        return ids

    def decode(self, ids: list[int]) -> str:
        drop = {self.bos_id, self.eos_id, self.pad_id}
        pieces = []
        for pos, i in enumerate(ids):
            if not 0 <= i < len(self.merged):
                raise ValueError(f"token id {i} out of range at position {pos}")
            if i in drop:
                continue
            pieces.append(self.merged[i].surface)
        return from_byte_space("".join(pieces))

    def to_dict(self) -> dict:
        return {
            "tokens": [
                {"id": e.id, "surface": e.surface, "modality": e.modality.value}
                for e in self.merged
            ],
            "merges": [list(p) for p in self.text_model.merges],
            "excluded": list(self.excluded),
            "text_model": self.text_model.to_dict(),
            "formula_model": self.formula_model.to_dict(),
        }

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, ensure_ascii=False, indent=1)

    @classmethod
    def from_dict(cls, data: dict) -> "DecoupledVocabulary":
        return cls(
            text_model=BpeModel.from_dict(data["text_model"]),
            formula_model=BpeModel.from_dict(data["formula_model"]),
            merged=[
                TokenEntry(t["id"], t["surface"], Modality(t["modality"]))
                for t in data["tokens"]
            ],
            excluded=list(data["excluded"]),
        )

    @classmethod
    def load(cls, path) -> "DecoupledVocabulary":
        with open(path, encoding="utf-8") as f:
            return cls.from_dict(json.load(f))


def merge_decoupled(
    text_model: BpeModel, formula_model: BpeModel
) -> DecoupledVocabulary:
    """Merge two single-modality models into one decoupled vocabulary.

    Text ids are preserved; reserved specials come next; formula surfaces
    absent from the text vocabulary follow in formula-model id order.
    """
    merged = [
        TokenEntry(e.id, e.surface, Modality.TEXT) for e in text_model.vocab
    ]
    seen = {e.surface for e in merged}
    for surface in RESERVED_SPECIALS:
        if surface not in seen:
            merged.append(TokenEntry(len(merged), surface, Modality.SPECIAL))
            seen.add(surface)
    excluded = []
    text_surfaces = text_model.surfaces
    for entry in formula_model.vocab:
        if entry.surface in text_surfaces:
            excluded.append(entry.surface)
        elif entry.surface not in seen:
            merged.append(
                TokenEntry(len(merged), entry.surface, Modality.FORMULA)
            )
            seen.add(entry.surface)
    return DecoupledVocabulary(text_model, formula_model, merged, excluded)


@dataclass(frozen=True)
class SurfaceOverlap:
    surface: str
    text_freq: int
    formula_freq: int


def modality_overlap_report(
    text_model: BpeModel, formula_model: BpeModel
) -> list[SurfaceOverlap]:
    """Surfaces present in both vocabularies, with per-corpus frequencies.

    The surface list equals merge_decoupled(...).excluded.
    """
    text_surfaces = text_model.surfaces
    report = []
    for entry in formula_model.vocab:
        if entry.surface in text_surfaces:
            report.append(
                SurfaceOverlap(
                    surface=entry.surface,
                    text_freq=text_model.surface_freq.get(entry.surface, 0),
                    formula_freq=formula_model.surface_freq.get(
                        entry.surface, 0
                    ),
                )
            )
    return report
