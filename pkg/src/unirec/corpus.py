"""Synthetic corpus generation and simulated color-based token alignment."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .bpe import Modality
from .hst import Span, StructuredDocument

EN_WORDS = (
    "the of and to in is that for with as energy field theory model value "
    "function matrix vector result method data sample line area sum total "
    "measure proof bound limit rate term order space group point system "
    "state form case study work paper section table figure left right frac "
    "infty norm over under between about during general simple common"
).split()

CH_WORDS = list("的一是在不了有大这中人上为个所我以要他时来用们生到作地于出就分对")

GREEK = ["\\alpha", "\\beta", "\\gamma", "\\lambda", "\\mu", "\\pi", "\\sigma", "\\theta"]
VARS = list("abcdefnxyz")

_FORMULA_TEMPLATES = [
    lambda r: "\\frac{%s}{%s}" % (r.choice(VARS), r.choice(VARS)),
    lambda r: "\\sum_{%s=0}^{%s} %s_%s"
    % (r.choice("ijk"), r.choice("nm"), r.choice(VARS), r.choice("ijk")),
    lambda r: "%s^{%s}" % (r.choice(VARS), r.choice("23n")),
    lambda r: "%s_{%s}" % (r.choice(VARS), r.choice("ijk")),
    lambda r: r.choice(GREEK),
    lambda r: "%s = %s + %s" % tuple(r.choice(VARS) for _ in range(3)),
    lambda r: "\\sqrt{%s}" % r.choice(VARS),
    lambda r: "\\int_{0}^{%s} %s \\, d%s"
    % (r.choice("1n"), r.choice(VARS), r.choice("xt")),
]


@dataclass
class DocumentProfile:
    paragraph_range: tuple[int, int] = (1, 3)
    line_range: tuple[int, int] = (1, 4)
    span_range: tuple[int, int] = (1, 3)
    formula_density: float = 0.3
    language: str = "EN"
    domain: str = "Book"

    @classmethod
    def from_dict(cls, data: dict) -> "DocumentProfile":
        kwargs = dict(data)
        for key in ("paragraph_range", "line_range", "span_range"):
            if key in kwargs:
                kwargs[key] = tuple(kwargs[key])
        return cls(**kwargs)


def random_formula(rng: random.Random) -> str:
    return "$" + rng.choice(_FORMULA_TEMPLATES)(rng) + "$"


def generate_document(seed: int, profile: DocumentProfile) -> StructuredDocument:
    """Deterministic synthetic mixed text/formula document."""
    if not 0.0 <= profile.formula_density <= 1.0:
        raise ValueError(f"formula density {profile.formula_density} not in [0,1]")
    rng = random.Random(seed)
    words = CH_WORDS if profile.language.upper() == "CH" else EN_WORDS
    paragraphs = []
    for _ in range(rng.randint(*profile.paragraph_range)):
        lines = []
        for _ in range(rng.randint(*profile.line_range)):
            spans = []
            for _ in range(rng.randint(*profile.span_range)):
                if rng.random() < profile.formula_density:
                    spans.append(Span(random_formula(rng), Modality.FORMULA))
                else:
                    n = rng.randint(1, 4)
                    spans.append(
                        Span(
                            " ".join(rng.choice(words) for _ in range(n)),
                            Modality.TEXT,
                        )
                    )
            lines.append(spans)
        paragraphs.append(lines)
    return StructuredDocument(paragraphs, profile.language, profile.domain)


RGB = tuple[int, int, int]

LINE_STEP = 10  # bbox row pitch; paragraphs add one extra step of gap
PARA_GAP = 2 * LINE_STEP


@dataclass(frozen=True)
class ColoredGlyphBox:
    token_index: int
    color: RGB
    page: int
    bbox: tuple[float, float, float, float]


@dataclass
class ColorMap:
    """Injective token-index -> color assignment plus token layout metadata."""

    colors: list[RGB]
    surfaces: list[str]
    separators: list[str]  # join string preceding each token within its line
    by_color: dict[RGB, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.by_color:
            self.by_color = {c: i for i, c in enumerate(self.colors)}

    def __getitem__(self, token_index: int) -> RGB:
        return self.colors[token_index]


def _line_tokens(line) -> list[tuple[str, str]]:
    """(separator, surface) pairs reproducing render_line exactly."""
    out = []
    prev_kind = None
    for span in line:
        if span.kind is Modality.TEXT:
            for j, word in enumerate(span.content.split()):
                if j == 0 and prev_kind is not Modality.TEXT:
                    sep = ""
                else:
                    sep = " "
                out.append((sep, word))
        else:
            out.append(("", span.content))
        prev_kind = span.kind
    return out


def _index_color(i: int) -> RGB:
    return ((i >> 16) & 0xFF, (i >> 8) & 0xFF, i & 0xFF)


def colorize_tokens(
    doc: StructuredDocument,
) -> tuple[ColorMap, list[ColoredGlyphBox]]:
    """Assign a unique color per token and lay tokens out as glyph boxes.

    Rows follow source lines; paragraph breaks leave a wider row gap so the
    structure is recoverable from geometry alone.
    """
    colors: list[RGB] = []
    surfaces: list[str] = []
    separators: list[str] = []
    boxes: list[ColoredGlyphBox] = []
    y = 0.0
    index = 0
    for para in doc.paragraphs:
        for line in para:
            x = 0.0
            for sep, surface in _line_tokens(line):
                if index >= 1 << 24:
                    raise ValueError("token count exceeds 24-bit color space")
                color = _index_color(index)
                colors.append(color)
                surfaces.append(surface)
                separators.append(sep)
                width = float(max(1, len(surface)))
                boxes.append(
                    ColoredGlyphBox(index, color, 0, (x, y, x + width, y + 1.0))
                )
                x += width + 1.0
                index += 1
            y += LINE_STEP
        y += PARA_GAP - LINE_STEP
    return ColorMap(colors, surfaces, separators), boxes


def recover_labels(
    render: list[ColoredGlyphBox], color_map: ColorMap
) -> dict[str, list[str]]:
    """Rebuild word/line/paragraph labels from rendered glyph geometry."""
    for box in render:
        if box.color not in color_map.by_color:
            raise ValueError(f"unknown color {box.color!r} in render")
    ordered = sorted(render, key=lambda b: (b.page, b.bbox[1], b.bbox[0]))

    paragraphs: list[list[list[ColoredGlyphBox]]] = []
    current_para: list[list[ColoredGlyphBox]] = []
    current_line: list[ColoredGlyphBox] = []
    prev_y = None
    for box in ordered:
        y = box.bbox[1]
        if prev_y is None or y == prev_y:
            current_line.append(box)
        else:
            current_para.append(current_line)
            if y - prev_y > LINE_STEP:
                paragraphs.append(current_para)
                current_para = []
            current_line = [box]
        prev_y = y
    if current_line:
        current_para.append(current_line)
    if current_para:
        paragraphs.append(current_para)

    def token(box: ColoredGlyphBox) -> tuple[str, str]:
        idx = color_map.by_color[box.color]
        return color_map.separators[idx], color_map.surfaces[idx]

    words = [token(b)[1] for b in ordered]
    lines = []
    para_labels = []
    from .sdt import LN, PN

    for para in paragraphs:
        rendered_lines = []
        for line in para:
            pieces = []
            for j, box in enumerate(line):
                sep, surface = token(box)
                pieces.append(("" if j == 0 else sep) + surface)
            rendered_lines.append("".join(pieces))
        lines.extend(rendered_lines)
        para_labels.append(LN.join(rendered_lines) + PN)
    return {"word": words, "line": lines, "paragraph": para_labels}


def length_filter(vocab, samples, max_len: int = 1024):
    """Split samples on encoded length (<BOS>/<EOS> included).

    Samples are dicts with at least "label"; dropped counts are reported per
    flattened tag value.
    """
    kept = []
    dropped = []
    dropped_by_tag: dict[str, int] = {}
    for sample in samples:
        n = len(vocab.encode(sample["label"]))
        if n <= max_len:
            kept.append(sample)
        else:
            dropped.append(sample)
            for key, value in sample.get("tags", {}).items():
                tag = f"{key}={value}"
                dropped_by_tag[tag] = dropped_by_tag.get(tag, 0) + 1
    return kept, dropped, dropped_by_tag
