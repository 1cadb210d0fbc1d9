"""Single entry point: forge, dataset, pseudolabel, review, and bench
subcommands.

Exit codes: 0 success, 1 operational error, 2 usage/config error.
Diagnostics go to stderr; data goes to files or stdout. Every
artifact-producing command embeds {tool version, config echo, seed} in
its output.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import __version__
from .errors import ConfigError, OcrForgeError


@click.group()
@click.version_option(__version__)
def cli():
    """Synthetic OCR data forge, CER/WER scoring, and benchmark tooling."""


# ------------------------------------------------------------------- forge

@cli.group()
def forge():
    """Synthetic dataset generation."""


@forge.command("generate")
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--seed", type=int, default=None, help="Override master_seed.")
@click.option("--count", type=int, default=None, help="Override output.count.")
@click.option("--jobs", type=int, default=1)
@click.option("--overwrite", is_flag=True)
def forge_generate(config_path, out_dir, seed, count, jobs, overwrite):
    """Generate images + manifest.jsonl + stats.json into OUT."""
    import dataclasses

    from .forge import ForgeConfig, generate_dataset, validate_config
    from .forge.config import OutputSpec

    cfg = ForgeConfig.from_file(config_path)
    if seed is not None:
        cfg = dataclasses.replace(cfg, master_seed=seed)
    if count is not None:
        cfg = dataclasses.replace(
            cfg, output=OutputSpec(format=cfg.output.format, count=count))
    diags = validate_config(cfg)
    if diags:
        for d in diags:
            click.echo(f"config error: {d}", err=True)
        raise ConfigError("invalid forge config")
    manifest = generate_dataset(cfg, out_dir, jobs=jobs, overwrite=overwrite,
                                log=lambda msg: click.echo(msg, err=True))
    click.echo(f"wrote {manifest.stats['samples']} samples to {out_dir}", err=True)


# ----------------------------------------------------------------- dataset

@cli.group()
def dataset():
    """Manifest operations: split, merge, verify, stats, ingest."""


@dataset.command("split")
@click.option("--manifest", "manifest_path", required=True, type=click.Path(exists=True))
@click.option("--ratios", required=True,
              help='e.g. "train=0.87,validation=0.13"')
@click.option("--seed", type=int, default=0)
@click.option("--out", "out_dir", required=True, type=click.Path())
def dataset_split(manifest_path, ratios, seed, out_dir):
    from . import dataset as ds
    ratio_map = {k: float(v) for k, v in
                 (item.split("=") for item in ratios.split(","))}
    m = ds.split(ds.Manifest.load(manifest_path), ratio_map, seed)
    m.save(out_dir)
    counts = {}
    for s in m.split_assignments.values():
        counts[s] = counts.get(s, 0) + 1
    click.echo(json.dumps(counts))


@dataset.command("merge")
@click.option("--a", "path_a", required=True, type=click.Path(exists=True))
@click.option("--b", "path_b", required=True, type=click.Path(exists=True))
@click.option("--mix", default=None, help='e.g. "synthetic=0.86,real=0.14"')
@click.option("--seed", type=int, default=0)
@click.option("--out", "out_dir", required=True, type=click.Path())
def dataset_merge(path_a, path_b, mix, seed, out_dir):
    from . import dataset as ds
    target = None
    if mix:
        target = {k: float(v) for k, v in
                  (item.split("=") for item in mix.split(","))}
    m = ds.merge(ds.Manifest.load(path_a), ds.Manifest.load(path_b),
                 target_mix=target, seed=seed)
    m.save(out_dir)
    click.echo(json.dumps(m.stats))


@dataset.command("verify")
@click.option("--manifest", "manifest_path", required=True, type=click.Path(exists=True))
@click.option("--root", default=None, type=click.Path())
def dataset_verify(manifest_path, root):
    from . import dataset as ds
    if root is None:
        p = Path(manifest_path)
        root = p if p.is_dir() else p.parent
    diags = ds.verify(ds.Manifest.load(manifest_path), root)
    for d in diags:
        click.echo(d, err=True)
    if diags:
        raise OcrForgeError(f"{len(diags)} integrity problems")
    click.echo("clean")


@dataset.command("stats")
@click.option("--manifest", "manifest_path", required=True, type=click.Path(exists=True))
def dataset_stats(manifest_path):
    from . import dataset as ds
    m = ds.Manifest.load(manifest_path)
    click.echo(json.dumps(ds.compute_stats(m.records), ensure_ascii=False,
                          indent=2))


@dataset.command("ingest")
@click.option("--dir", "image_dir", required=True, type=click.Path(exists=True))
@click.option("--provenance", required=True,
              type=click.Choice(["scanned_literature", "social_media",
                                 "educational", "recipe", "external"]))
@click.option("--transcripts", default=None, type=click.Path(exists=True))
@click.option("--out", "out_dir", required=True, type=click.Path())
def dataset_ingest(image_dir, provenance, transcripts, out_dir):
    from . import dataset as ds
    m, diags = ds.ingest_real(image_dir, provenance, transcripts)
    for d in diags:
        click.echo(d, err=True)
    m.save(out_dir)
    click.echo(json.dumps(m.stats))


# ------------------------------------------------------------- pseudolabel

@cli.command("pseudolabel")
@click.option("--manifest", "manifest_path", required=True, type=click.Path(exists=True))
@click.option("--endpoint", required=True)
@click.option("--model", "model_id", default="default")
@click.option("--prompt", default=None)
@click.option("--rate-limit", type=int, default=60)
@click.option("--cache-dir", default="cache", type=click.Path())
@click.option("--image-root", default=".", type=click.Path())
@click.option("--out", "out_path", required=True, type=click.Path())
def pseudolabel_run(manifest_path, endpoint, model_id, prompt, rate_limit,
                    cache_dir, image_root, out_path):
    """Pseudo-label every manifest record lacking ground truth."""
    from .dataset import Manifest
    from .pseudolabel import Labeler, LabelerConfig, write_labels
    kwargs = dict(endpoint=endpoint, model_id=model_id,
                  rate_limit_per_minute=rate_limit, cache_dir=cache_dir)
    if prompt:
        kwargs["prompt_template"] = prompt
    labeler = Labeler(LabelerConfig(**kwargs))
    labels, failures = labeler.label_batch(Manifest.load(manifest_path),
                                           image_root=image_root)
    write_labels(labels, out_path)
    report = Path(out_path).with_suffix(".failures.json")
    report.write_text(json.dumps(failures, ensure_ascii=False, indent=2),
                      encoding="utf-8")
    click.echo(f"{len(labels)} labeled, {len(failures)} failed", err=True)
    if failures:
        click.echo(f"failure report: {report}", err=True)


# ------------------------------------------------------------------ review

@cli.group()
def review():
    """Human review of pseudo-labels."""


@review.command("create")
@click.option("--labels", "labels_path", required=True, type=click.Path(exists=True))
@click.option("--manifest", "manifest_path", required=True, type=click.Path(exists=True))
@click.option("--project", "project_dir", required=True, type=click.Path())
def review_create(labels_path, manifest_path, project_dir):
    from .dataset import Manifest
    from .pseudolabel import read_labels
    from .review import ReviewStore
    labels = [l for l in read_labels(labels_path) if not l.failed]
    store = ReviewStore.create_project(project_dir, labels,
                                       Manifest.load(manifest_path))
    click.echo(json.dumps(store.progress()))


@review.command("serve")
@click.option("--project", "project_dir", required=True, type=click.Path(exists=True))
@click.option("--port", type=int, default=8000)
@click.option("--host", default="127.0.0.1")
@click.option("--token", default=None)
@click.option("--image-root", default=".", type=click.Path())
@click.option("--static-dir", default=None, type=click.Path(exists=True),
              help="Built frontend assets to serve at /.")
def review_serve(project_dir, port, host, token, image_root, static_dir):
    import uvicorn

    from .review import ReviewStore, create_app
    store = ReviewStore.load(project_dir)
    app = create_app(store, token=token, image_root=image_root,
                     static_dir=static_dir)
    uvicorn.run(app, host=host, port=port)


@review.command("export")
@click.option("--project", "project_dir", required=True, type=click.Path(exists=True))
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--partial", is_flag=True)
def review_export(project_dir, out_dir, partial):
    from .review import ReviewStore
    store = ReviewStore.load(project_dir)
    manifest = store.export_benchmark(partial=partial)
    manifest.save(out_dir)
    click.echo(json.dumps(manifest.stats, ensure_ascii=False))


# ------------------------------------------------------------------- bench

@cli.group()
def bench():
    """Benchmark running, comparison, and import."""


@bench.command("run")
@click.option("--manifest", "manifest_path", required=True, type=click.Path(exists=True))
@click.option("--adapter", "adapter_spec", required=True,
              help='e.g. "echo_oracle", "noisy_oracle:p=0.1,seed=7", '
                   '"subprocess:cmd=./model.sh", "http_endpoint:url=..."')
@click.option("--norm", "norm_path", default=None, type=click.Path(exists=True),
              help="JSON normalization config; defaults to the standard protocol.")
@click.option("--image-root", default=None, type=click.Path())
@click.option("--jobs", type=int, default=4)
@click.option("--out", "out_path", required=True, type=click.Path())
def bench_run(manifest_path, adapter_spec, norm_path, image_root, jobs, out_path):
    from .bench import ModelAdapter, run_benchmark
    from .dataset import Manifest
    from .textnorm import NormalizationConfig
    norm = None
    if norm_path:
        norm = NormalizationConfig.from_dict(
            json.loads(Path(norm_path).read_text(encoding="utf-8")))
    if image_root is None:
        p = Path(manifest_path)
        image_root = p if p.is_dir() else p.parent
    report = run_benchmark(Manifest.load(manifest_path),
                           ModelAdapter.from_spec(adapter_spec),
                           norm=norm, image_root=image_root, concurrency=jobs)
    report.save(out_path)
    click.echo(json.dumps(report.aggregate.to_dict()))


@bench.command("compare")
@click.option("--reports", "report_glob", required=True,
              help="Glob of report JSON files.")
@click.option("--out", "out_base", required=True, type=click.Path(),
              help="Basename; writes .json, .csv and .svg next to it.")
def bench_compare(report_glob, out_base):
    import glob as globmod

    from .bench import (BenchReport, compare, plot_leaderboard,
                        write_leaderboard_csv)
    paths = sorted(globmod.glob(report_glob))
    if not paths:
        raise ConfigError(f"no reports match {report_glob!r}")
    board = compare([BenchReport.load(p) for p in paths])
    base = Path(out_base)
    base.with_suffix(".json").write_text(
        json.dumps(board, ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8")
    write_leaderboard_csv(board, base.with_suffix(".csv"))
    plot_leaderboard(board, base.with_suffix(".svg"))
    for row in board["rows"]:
        click.echo(f"{row['micro_cer']:.4f}  {row['model_id']}")


@bench.command("import")
@click.option("--dir", "directory", required=True, type=click.Path(exists=True))
@click.option("--format", "layout", default="images+txt",
              type=click.Choice(["images+txt", "images+jsonl"]))
@click.option("--out", "out_dir", required=True, type=click.Path())
def bench_import(directory, layout, out_dir):
    from .bench import import_external_benchmark
    manifest = import_external_benchmark(directory, layout)
    manifest.save(out_dir)
    click.echo(json.dumps(manifest.stats))


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.exceptions.Abort:
        return 1
    except click.exceptions.ClickException as e:
        e.show()
        return 2
    except (ConfigError, ValueError) as e:
        click.echo(f"error: {e}", err=True)
        return 2
    except OcrForgeError as e:
        click.echo(f"error: {e}", err=True)
        return 1
    except OSError as e:
        click.echo(f"error: {e}", err=True)
        return 1


if __name__ == "__main__":
    sys.exit(main())
