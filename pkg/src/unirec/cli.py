"""unirec command line interface."""

from __future__ import annotations

import json
import os
import sys

import click

from .bpe import BpeModel, Modality, train_bpe
from .corpus import DocumentProfile, generate_document, length_filter
from .decoding import NgramScorer, greedy_decode
from .evalbench import EvalRecord, evaluate, render_report
from .figures import render_figures
from .geometry import fit_geometry
from .hst import StructuredDocument, decode_hst, encode_hst
from .pipeline import PipelineError, RunConfig, run_pipeline
from .sampling import load_manifest, plan_epoch
from .sdt import DecoupledVocabulary, merge_decoupled


def _env_seed(seed: int) -> int:
    return int(os.environ.get("UNIREC_SEED", seed))


@click.group()
def main():
    """Unified text/formula recognition infrastructure."""


@main.group()
def tok():
    """Tokenizer training, merging, and label coding."""


@tok.command("train")
@click.option("--modality", type=click.Choice(["text", "formula"]), required=True)
@click.option("--vocab-size", type=int, required=True)
@click.option("--in", "inp", type=click.Path(exists=True), required=True)
@click.option("--out", "outp", type=click.Path(), required=True)
def tok_train(modality, vocab_size, inp, outp):
    with open(inp, encoding="utf-8") as f:
        corpus = [line.rstrip("\n") for line in f if line.strip()]
    try:
        model = train_bpe(corpus, vocab_size, Modality(modality))
    except ValueError as exc:
        raise click.ClickException(str(exc))
    model.save(outp)
    click.echo(f"trained {modality} model: {len(model.vocab)} tokens, "
               f"{len(model.merges)} merges -> {outp}")


@tok.command("merge")
@click.option("--text", "text_path", type=click.Path(exists=True), required=True)
@click.option("--formula", "formula_path", type=click.Path(exists=True), required=True)
@click.option("--out", "outp", type=click.Path(), required=True)
def tok_merge(text_path, formula_path, outp):
    vocab = merge_decoupled(BpeModel.load(text_path), BpeModel.load(formula_path))
    vocab.save(outp)
    click.echo(f"merged vocabulary: {len(vocab)} tokens "
               f"({len(vocab.excluded)} excluded) -> {outp}")


@tok.command("encode")
@click.option("--vocab", "vocab_path", type=click.Path(exists=True), required=True)
@click.option("--in", "inp", type=click.Path(exists=True), default=None)
@click.argument("label", required=False)
def tok_encode(vocab_path, inp, label):
    vocab = DecoupledVocabulary.load(vocab_path)
    if label is None:
        label = open(inp, encoding="utf-8").read() if inp else sys.stdin.read()
        label = label.rstrip("\n")
    click.echo(" ".join(str(i) for i in vocab.encode(label)))


@tok.command("decode")
@click.option("--vocab", "vocab_path", type=click.Path(exists=True), required=True)
@click.option("--in", "inp", type=click.Path(exists=True), default=None)
@click.argument("ids", required=False)
def tok_decode(vocab_path, inp, ids):
    vocab = DecoupledVocabulary.load(vocab_path)
    if ids is None:
        ids = open(inp, encoding="utf-8").read() if inp else sys.stdin.read()
    try:
        click.echo(vocab.decode([int(t) for t in ids.split()]))
    except ValueError as exc:
        raise click.ClickException(str(exc))


@main.group()
def hst():
    """Hierarchical supervision label coding."""


@hst.command("encode")
@click.option("--in", "inp", type=click.Path(exists=True), required=True)
@click.option("--out", "outp", type=click.Path(), default=None)
def hst_encode(inp, outp):
    doc = StructuredDocument.load(inp)
    try:
        label = encode_hst(doc)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    if outp:
        with open(outp, "w", encoding="utf-8") as f:
            f.write(label)
    else:
        click.echo(label)


@hst.command("decode")
@click.option("--in", "inp", type=click.Path(exists=True), default=None)
@click.option("--out", "outp", type=click.Path(), default=None)
def hst_decode_cmd(inp, outp):
    pred = open(inp, encoding="utf-8").read() if inp else sys.stdin.read()
    text = decode_hst(pred)
    if outp:
        with open(outp, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        click.echo(text)


@main.group("corpus")
def corpus_group():
    """Synthetic corpus generation and epoch planning."""


@corpus_group.command("gen")
@click.option("--seed", type=int, default=0)
@click.option("--n", type=int, default=10)
@click.option("--profile", "profile_path", type=click.Path(exists=True), default=None)
@click.option("--out", "outp", type=click.Path(), required=True)
def corpus_gen(seed, n, profile_path, outp):
    seed = _env_seed(seed)
    if profile_path:
        with open(profile_path, encoding="utf-8") as f:
            profile = DocumentProfile.from_dict(json.load(f))
    else:
        profile = DocumentProfile()
    with open(outp, "w", encoding="utf-8") as f:
        for i in range(n):
            doc = generate_document(seed + i, profile)
            f.write(json.dumps(doc.to_dict(), ensure_ascii=False, sort_keys=True))
            f.write("\n")
    click.echo(f"wrote {n} documents -> {outp}")


@corpus_group.command("plan")
@click.option("--manifest", type=click.Path(exists=True), required=True)
@click.option("--seed", type=int, default=0)
@click.option("--scale", type=float, default=1.0)
@click.option("--out", "outp", type=click.Path(), default=None)
def corpus_plan(manifest, seed, scale, outp):
    seed = _env_seed(seed)
    plan = plan_epoch(load_manifest(manifest, scale=scale), seed)
    payload = json.dumps(plan.to_dict(), ensure_ascii=False, indent=1, sort_keys=True)
    if outp:
        with open(outp, "w", encoding="utf-8") as f:
            f.write(payload + "\n")
        for sp in plan.sources:
            click.echo(f"{sp.source}\ttotal={sp.total}\tdistinct={sp.distinct}")
    else:
        click.echo(payload)


@corpus_group.command("filter")
@click.option("--vocab", "vocab_path", type=click.Path(exists=True), required=True)
@click.option("--in", "inp", type=click.Path(exists=True), required=True)
@click.option("--max-len", type=int, default=1024)
@click.option("--out", "outp", type=click.Path(), required=True)
def corpus_filter(vocab_path, inp, max_len, outp):
    vocab = DecoupledVocabulary.load(vocab_path)
    with open(inp, encoding="utf-8") as f:
        samples = [json.loads(line) for line in f if line.strip()]
    kept, dropped, by_tag = length_filter(vocab, samples, max_len)
    with open(outp, "w", encoding="utf-8") as f:
        for s in kept:
            f.write(json.dumps(s, ensure_ascii=False, sort_keys=True) + "\n")
    click.echo(f"kept {len(kept)}, dropped {len(dropped)}")
    for tag, count in sorted(by_tag.items()):
        click.echo(f"  dropped[{tag}] = {count}")


@main.command("eval")
@click.option("--in", "inp", type=click.Path(exists=True), required=True)
@click.option("--mode", type=click.Choice(["hst", "raw"]), default="raw")
@click.option("--format", "fmt", type=click.Choice(["table", "json"]), default="table")
@click.option("--golden", type=click.Path(exists=True), default=None)
@click.option("--figures", "figures_dir", type=click.Path(), default=None)
@click.option("--strict", is_flag=True)
def eval_cmd(inp, mode, fmt, golden, figures_dir, strict):
    records = []
    with open(inp, encoding="utf-8") as f:
        for line in f:
            if line.strip():
                records.append(EvalRecord.from_dict(json.loads(line)))
    try:
        report = evaluate(records, mode=mode)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    rendered = render_report(report, fmt)
    if not rendered.endswith("\n"):
        rendered += "\n"
    click.echo(rendered, nl=False)
    if figures_dir:
        for path in render_figures(report, figures_dir):
            click.echo(f"figure: {path}", err=True)
    if golden:
        with open(golden, encoding="utf-8") as f:
            expected = f.read()
        if render_report(report, "json") + "\n" != expected:
            raise click.ClickException("report does not match golden file")
        click.echo("golden: match", err=True)
    if strict and report.rejected:
        sys.exit(2)


@main.command("geom")
@click.option("--h", "height", type=int, required=True)
@click.option("--w", "width", type=int, required=True)
def geom_cmd(height, width):
    try:
        spec = fit_geometry(height, width)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    click.echo(json.dumps(spec.to_dict(), indent=1, sort_keys=True))


@main.command("decode-mock")
@click.option("--vocab", "vocab_path", type=click.Path(exists=True), required=True)
@click.option("--scorer", "scorer_path", type=click.Path(exists=True), required=True)
@click.option("--max-len", type=int, default=1024)
def decode_mock(vocab_path, scorer_path, max_len):
    vocab = DecoupledVocabulary.load(vocab_path)
    scorer = NgramScorer.load(scorer_path)
    ids = greedy_decode(scorer, vocab, max_len=max_len)
    click.echo(" ".join(str(i) for i in ids))
    click.echo(vocab.decode(ids))


@main.command("pipeline")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--seed", type=int, default=0)
@click.option("--out", "outdir", type=click.Path(), default="unirec-run")
@click.option("--n-docs", type=int, default=40)
@click.option("--vocab-size", type=int, default=300)
@click.option("--scale", type=float, default=10000.0)
@click.option("--no-figures", is_flag=True)
def pipeline_cmd(config_path, seed, outdir, n_docs, vocab_size, scale, no_figures):
    if config_path:
        with open(config_path, encoding="utf-8") as f:
            config = RunConfig.from_dict(json.load(f))
    else:
        config = RunConfig(
            seed=seed,
            outdir=outdir,
            n_docs=n_docs,
            vocab_size=vocab_size,
            scale=scale,
            figures=not no_figures,
        )
    config.seed = _env_seed(config.seed)
    try:
        result = run_pipeline(config)
    except (PipelineError, FileNotFoundError) as exc:
        raise click.ClickException(str(exc))
    for variant, report in result["reports"].items():
        click.echo(f"{variant}: overall={report['overall']:.4f} "
                   f"scored={report['n_scored']}")
    click.echo(f"artifacts in {config.outdir}")


if __name__ == "__main__":
    main()
