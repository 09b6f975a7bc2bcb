"""End-to-end demo pipeline: corpus -> tokenizers -> labels -> mock decode ->
evaluation. Stages communicate only through files under the output directory,
and every artifact is reproducible byte-exact from (config, seed)."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field
from importlib import resources

from .bpe import Modality, train_bpe
from .corpus import DocumentProfile, generate_document, length_filter
from .decoding import NgramScorer, greedy_decode
from .evalbench import EvalRecord, evaluate, render_report, report_to_dict
from .figures import render_figures
from .hst import encode_hst, strip_hst
from .sampling import load_manifest, plan_epoch
from .sdt import merge_decoupled

LABEL_VARIANTS = ("full", "no_hst", "no_sdt")


@dataclass
class RunConfig:
    seed: int = 0
    outdir: str = "unirec-run"
    n_docs: int = 40
    vocab_size: int = 300
    max_len: int = 1024
    scale: float = 10000.0
    manifest: str | None = None  # default: bundled per-epoch manifest
    profile: DocumentProfile = field(default_factory=DocumentProfile)
    figures: bool = True

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        kwargs = dict(data)
        if "profile" in kwargs:
            kwargs["profile"] = DocumentProfile.from_dict(kwargs["profile"])
        return cls(**kwargs)


class PipelineError(RuntimeError):
    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage {stage!r} failed: {cause}")


def default_manifest_path() -> str:
    return str(resources.files("unirec.data") / "epoch_manifest.json")


def _write_json(path: str, obj) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(obj, f, ensure_ascii=False, indent=1, sort_keys=True)
        f.write("\n")


def _write_jsonl(path: str, rows) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for row in rows:
            f.write(json.dumps(row, ensure_ascii=False, sort_keys=True))
            f.write("\n")


def _doc_modality(doc) -> str:
    kinds = {
        span.kind
        for para in doc.paragraphs
        for line in para
        for span in line
    }
    if kinds == {Modality.TEXT}:
        return "text"
    if kinds == {Modality.FORMULA}:
        return "formula"
    return "mix"


def run_pipeline(config: RunConfig) -> dict:
    """Run all stages; returns a manifest of written artifact paths."""
    manifest_path = config.manifest or default_manifest_path()
    if not os.path.exists(manifest_path):
        raise FileNotFoundError(f"manifest not found: {manifest_path}")
    os.makedirs(config.outdir, exist_ok=True)
    written: list[str] = []
    artifacts: dict[str, str] = {}

    def out(name: str) -> str:
        path = os.path.join(config.outdir, name)
        written.append(path)
        artifacts[name] = path
        return path

    stage = "init"
    try:
        stage = "config"
        header = asdict(config)
        header.pop("outdir")  # artifacts stay byte-identical across run dirs
        _write_json(out("run.json"), header)

        stage = "generate"
        docs = [
            generate_document(config.seed + i, config.profile)
            for i in range(config.n_docs)
        ]
        _write_jsonl(out("docs.jsonl"), (d.to_dict() for d in docs))

        stage = "tokenize"
        text_lines, formula_lines = [], []
        for doc in docs:
            for para in doc.paragraphs:
                for line in para:
                    for span in line:
                        if span.kind is Modality.FORMULA:
                            formula_lines.append(span.content)
                        else:
                            text_lines.append(span.content)
        if not formula_lines:
            # density-0 profiles still need a formula model to merge against
            formula_lines = ["$\\frac{a}{b}$", "$\\sum_{i=0}^{n} x_i$"]
        text_model = train_bpe(text_lines, config.vocab_size, Modality.TEXT)
        formula_model = train_bpe(
            formula_lines, config.vocab_size, Modality.FORMULA
        )
        vocab = merge_decoupled(text_model, formula_model)
        vocab.save(out("sdt.json"))
        coupled_model = train_bpe(
            text_lines + formula_lines, config.vocab_size, Modality.TEXT
        )
        coupled = merge_decoupled(coupled_model, coupled_model)
        coupled.save(out("coupled.json"))

        stage = "label"
        samples = []
        for i, doc in enumerate(docs):
            hst_label = encode_hst(doc)
            samples.append(
                {
                    "id": f"doc-{i:04d}",
                    "label": strip_hst(hst_label),
                    "hst_label": hst_label,
                    "tags": {
                        "modality": _doc_modality(doc),
                        "level": "paragraph"
                        if len(doc.paragraphs) == 1
                        else "multi-paragraph",
                        "language": doc.language,
                        "domain": doc.domain,
                    },
                }
            )
        _write_jsonl(out("corpus.jsonl"), samples)

        stage = "filter"
        kept, dropped, by_tag = length_filter(
            vocab,
            [{"label": s["hst_label"], "tags": s["tags"], "id": s["id"]} for s in samples],
            config.max_len,
        )
        kept_ids = {s["id"] for s in kept}
        _write_json(
            out("filter_stats.json"),
            {
                "seed": config.seed,
                "kept": len(kept),
                "dropped": len(dropped),
                "dropped_by_tag": by_tag,
                "max_len": config.max_len,
            },
        )
        samples = [s for s in samples if s["id"] in kept_ids]

        stage = "plan"
        sources = load_manifest(manifest_path, scale=config.scale)
        plan = plan_epoch(sources, config.seed)
        _write_json(out("epoch_plan.json"), plan.to_dict())

        stage = "mock-decode"
        train_ids = [vocab.encode(s["hst_label"]) for s in samples[:4]]
        scorer = NgramScorer.train(train_ids, len(vocab), vocab.eos_id)
        scorer.save(out("ngram.json"))
        decoded = greedy_decode(scorer, vocab, max_len=config.max_len)
        _write_json(
            out("mock_decode.json"),
            {
                "seed": config.seed,
                "ids": decoded,
                "text": vocab.decode(decoded),
            },
        )

        stage = "evaluate"
        reports = {}
        for variant in LABEL_VARIANTS:
            records = []
            for s in samples:
                if variant == "full":
                    gt = s["hst_label"]
                    v = vocab
                elif variant == "no_hst":
                    gt = s["label"]
                    v = vocab
                else:
                    gt = s["hst_label"]
                    v = coupled
                pred = v.decode(v.encode(gt))
                records.append(
                    {"id": s["id"], "gt": gt, "pred": pred, "tags": s["tags"]}
                )
            _write_jsonl(out(f"records_{variant}.jsonl"), records)
            mode = "hst" if variant != "no_hst" else "raw"
            report = evaluate(
                (EvalRecord.from_dict(r) for r in records), mode=mode
            )
            with open(
                out(f"report_{variant}.json"), "w", encoding="utf-8"
            ) as f:
                f.write(render_report(report, "json"))
                f.write("\n")
            with open(out(f"report_{variant}.txt"), "w", encoding="utf-8") as f:
                f.write(render_report(report, "table"))
            reports[variant] = report_to_dict(report)

        if config.figures:
            stage = "figures"
            from .evalbench import report_from_dict

            figure_paths = render_figures(
                report_from_dict(reports["full"]),
                os.path.join(config.outdir, "figures"),
            )
            written.extend(figure_paths)

        return {"artifacts": artifacts, "reports": reports}
    except Exception as exc:
        for path in written:
            if os.path.exists(path):
                os.remove(path)
        raise PipelineError(stage, exc) from exc
