"""Hierarchical supervision coding between structured documents and labels.

Labels carry <|ln|> between lines of a paragraph and <|pn|> after every
paragraph; inference-side decoding deletes <|ln|> and turns <|pn|> into a
blank line.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass
from enum import IntEnum

from .bpe import Modality
from .sdt import LN, PN


class HierLevel(IntEnum):
    CHARACTER = 0
    WORD = 1
    LINE = 2
    PARAGRAPH = 3
    MULTI_PARAGRAPH = 4

    @classmethod
    def parse(cls, name: str) -> "HierLevel":
        return cls[name.replace("-", "_").replace(" ", "_").upper()]


LEVEL_NAMES = {
    HierLevel.CHARACTER: "character",
    HierLevel.WORD: "word",
    HierLevel.LINE: "line",
    HierLevel.PARAGRAPH: "paragraph",
    HierLevel.MULTI_PARAGRAPH: "multi-paragraph",
}


@dataclass(frozen=True)
class Span:
    content: str
    kind: Modality  # TEXT or FORMULA

    def __post_init__(self):
        if not self.content:
            raise ValueError("empty span")
        if LN in self.content or PN in self.content:
            raise ValueError("span content contains a supervision token")


Line = list[Span]
Paragraph = list[Line]


@dataclass
class StructuredDocument:
    paragraphs: list[Paragraph]
    language: str = "EN"
    domain: str = "Book"

    def __post_init__(self):
        for para in self.paragraphs:
            if not para:
                raise ValueError("empty paragraph")
            for line in para:
                if not line:
                    raise ValueError("empty line")

    @property
    def n_lines(self) -> int:
        return sum(len(p) for p in self.paragraphs)

    def to_dict(self) -> dict:
        return {
            "language": self.language,
            "domain": self.domain,
            "paragraphs": [
                [
                    [
                        {"kind": span.kind.value, "content": span.content}
                        for span in line
                    ]
                    for line in para
                ]
                for para in self.paragraphs
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "StructuredDocument":
        return cls(
            paragraphs=[
                [
                    [
                        Span(s["content"], Modality(s["kind"]))
                        for s in line
                    ]
                    for line in para
                ]
                for para in data["paragraphs"]
            ],
            language=data.get("language", "EN"),
            domain=data.get("domain", "Book"),
        )

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, ensure_ascii=False, indent=1)

    @classmethod
    def load(cls, path) -> "StructuredDocument":
        with open(path, encoding="utf-8") as f:
            return cls.from_dict(json.load(f))


def render_line(line: Line) -> str:
    """Join spans: one space between adjacent text spans, none around formulas."""
    out = []
    prev_kind = None
    for span in line:
        if prev_kind is Modality.TEXT and span.kind is Modality.TEXT:
            out.append(" ")
        out.append(span.content)
        prev_kind = span.kind
    return "".join(out)


def encode_hst(doc: StructuredDocument) -> str:
    if not doc.paragraphs:
        raise ValueError("empty document")
    parts = []
    for para in doc.paragraphs:
        parts.append(LN.join(render_line(line) for line in para))
        parts.append(PN)
    return "".join(parts)


def decode_hst(pred: str) -> str:
    """Invert supervision tokens in a (possibly malformed) prediction."""
    return pred.replace(LN, "").replace(PN, "\n\n").rstrip()


_WS_RUN = re.compile(r"  +")


def strip_hst(label: str) -> str:
    """Ablation labels: drop supervision tokens, collapse doubled spaces."""
    return _WS_RUN.sub(" ", label.replace(LN, "").replace(PN, ""))


def derive_levels(
    doc: StructuredDocument, level: HierLevel, rng_seed: int = 0
) -> list[tuple[str, HierLevel]]:
    """Training samples of the requested granularity; [] when unavailable."""
    rng = random.Random(rng_seed)
    if level is HierLevel.CHARACTER:
        chars = [
            c
            for para in doc.paragraphs
            for line in para
            for span in line
            if span.kind is Modality.TEXT
            for c in span.content
            if not c.isspace()
        ]
        if not chars:
            return []
        k = min(5, len(chars))
        return [(c, level) for c in rng.sample(chars, k)]
    if level is HierLevel.WORD:
        samples = []
        for para in doc.paragraphs:
            for line in para:
                for span in line:
                    if span.kind is Modality.TEXT:
                        samples.extend(span.content.split())
                    else:
                        samples.append(span.content)
        return [(s, level) for s in samples]
    if level is HierLevel.LINE:
        return [
            (render_line(line), level)
            for para in doc.paragraphs
            for line in para
        ]
    if level is HierLevel.PARAGRAPH:
        return [
            (
                encode_hst(
                    StructuredDocument([para], doc.language, doc.domain)
                ),
                level,
            )
            for para in doc.paragraphs
        ]
    if level is HierLevel.MULTI_PARAGRAPH:
        if len(doc.paragraphs) < 2:
            return []
        return [
            (
                encode_hst(
                    StructuredDocument(
                        doc.paragraphs[i : i + 2], doc.language, doc.domain
                    )
                ),
                level,
            )
            for i in range(len(doc.paragraphs) - 1)
        ]
    raise ValueError(f"unknown level {level!r}")
