"""Block-level benchmark harness: normalized edit distance aggregated over
modality, hierarchy level, language, and document domain."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .hst import decode_hst
from .metrics import normalized_ed

SCHEMA_VERSION = 1

MODALITIES = ["text", "formula", "mix"]
LEVELS = ["character", "word", "line", "paragraph", "multi-paragraph"]
LANGUAGES = ["CH", "EN", "Mix"]
DOMAINS = [
    "Book",
    "PPT2PDF",
    "Research Report",
    "Textbook",
    "Exam Paper",
    "Magazine",
    "Literature",
    "Note",
    "Newspaper",
]

AXES = {
    "modality": MODALITIES,
    "level": LEVELS,
    "language": LANGUAGES,
    "domain": DOMAINS,
}


@dataclass(frozen=True)
class EvalRecord:
    id: str
    gt: str
    pred: str
    tags: dict

    @classmethod
    def from_dict(cls, data: dict) -> "EvalRecord":
        return cls(
            id=str(data["id"]),
            gt=data["gt"],
            pred=data["pred"],
            tags=dict(data["tags"]),
        )


@dataclass
class Group:
    total: float = 0.0
    count: int = 0

    @property
    def mean(self) -> float:
        return self.total / self.count if self.count else 0.0


@dataclass
class EvalReport:
    groups: dict  # axis -> value -> Group
    overall: float
    n_scored: int
    rejected: list[tuple[str, str]] = field(default_factory=list)
    mode: str = "raw"


# Whitespace runs collapse to one space, but paragraph breaks survive.
_PARA = "\n\n"
_WS = re.compile(r"\s+")


def canonicalize(pred: str, mode: str = "raw") -> str:
    """Scoring normalization; "hst" inverts supervision tokens first."""
    if mode == "raw":
        return pred
    if mode != "hst":
        raise ValueError(f"unknown canonicalization mode {mode!r}")
    decoded = decode_hst(pred)
    parts = [_WS.sub(" ", p).strip() for p in decoded.split(_PARA)]
    return _PARA.join(parts)


def validate_tags(tags: dict) -> str | None:
    for axis, allowed in AXES.items():
        value = tags.get(axis)
        if value not in allowed:
            return f"unknown {axis} {value!r}"
    return None


def evaluate(records, mode: str = "raw") -> EvalReport:
    """Score records and aggregate unweighted means per group.

    The overall average is the mean of the three modality-group means,
    mirroring the benchmark table layout. Records with invalid tags are
    rejected with a reason; the run continues.
    """
    groups = {axis: {value: Group() for value in allowed} for axis, allowed in AXES.items()}
    rejected = []
    n_scored = 0
    for record in records:
        reason = validate_tags(record.tags)
        if reason is not None:
            rejected.append((record.id, reason))
            continue
        score = normalized_ed(
            canonicalize(record.gt, mode), canonicalize(record.pred, mode)
        )
        for axis in AXES:
            group = groups[axis][record.tags[axis]]
            group.total += score
            group.count += 1
        n_scored += 1
    if n_scored == 0 and not rejected:
        raise ValueError("no records")
    modality_means = [
        groups["modality"][m].mean
        for m in MODALITIES
        if groups["modality"][m].count
    ]
    overall = sum(modality_means) / len(modality_means) if modality_means else 0.0
    return EvalReport(
        groups=groups,
        overall=overall,
        n_scored=n_scored,
        rejected=rejected,
        mode=mode,
    )


def report_to_dict(report: EvalReport) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "mode": report.mode,
        "n_scored": report.n_scored,
        "n_rejected": len(report.rejected),
        "rejected": [list(r) for r in report.rejected],
        "overall": report.overall,
        "groups": {
            axis: {
                value: {"mean": g.mean, "count": g.count}
                for value, g in by_value.items()
            }
            for axis, by_value in report.groups.items()
        },
    }


def report_from_dict(data: dict) -> EvalReport:
    groups = {
        axis: {
            value: Group(
                total=cell["mean"] * cell["count"], count=cell["count"]
            )
            for value, cell in by_value.items()
        }
        for axis, by_value in data["groups"].items()
    }
    return EvalReport(
        groups=groups,
        overall=data["overall"],
        n_scored=data["n_scored"],
        rejected=[tuple(r) for r in data.get("rejected", [])],
        mode=data.get("mode", "raw"),
    )


def _fmt(group: Group) -> str:
    return f"{group.mean:.4f}" if group.count else "-"


def render_report(report: EvalReport, format: str = "table") -> str:
    """Delimited table or versioned JSON, stable column order."""
    if format == "json":
        return json.dumps(
            report_to_dict(report), ensure_ascii=False, indent=1, sort_keys=True
        )
    if format != "table":
        raise ValueError(f"unknown report format {format!r}")
    lines = []
    header = ["Avg"] + [m.capitalize() for m in MODALITIES]
    values = [f"{report.overall:.4f}"] + [
        _fmt(report.groups["modality"][m]) for m in MODALITIES
    ]
    lines.append("modality\t" + "\t".join(header))
    lines.append("score\t" + "\t".join(values))
    for axis in ("level", "language", "domain"):
        columns = AXES[axis]
        lines.append(axis + "\t" + "\t".join(columns))
        lines.append(
            "score\t"
            + "\t".join(_fmt(report.groups[axis][c]) for c in columns)
        )
    lines.append(f"scored\t{report.n_scored}\trejected\t{len(report.rejected)}")
    return "\n".join(lines) + "\n"
