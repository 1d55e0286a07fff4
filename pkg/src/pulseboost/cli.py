"""Command-line interface.

Subcommands: fit, predict, evaluate, ablate, gen-synth, inspect-model.
Every run validates its configuration up front, echoes the effective
config into each output artifact, and never mutates its inputs. Domain
errors exit nonzero with one machine-parsable line on stderr:
``ERROR <ExceptionName>: <message>``.

The PULSEBOOST_WORKERS environment variable caps worker threads
(default: all cores); results are identical for any value.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from .ablation import fit_on_tables, run_ablation
from .boosting.model_io import load_model_with_header, save_model
from .boosting.training import count_leaves, feature_importance
from .errors import ParseError, PulseboostError
from .manifest import load_manifest
from .metrics import LEVELS, roc_auc
from .runconfig import RunConfig, load_run_config
from .scoring import score_levels
from .splits import split_by_video
from .synthetic import DEFAULT_SIGNAL_CATEGORIES, generate_synthetic


def _parse_overrides(pairs: list[str] | None) -> dict[str, str]:
    out: dict[str, str] = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise ParseError(f"--set expects key=value, got {pair!r}")
        key, _, value = pair.partition("=")
        out[key.strip()] = value.strip()
    return out


def _echo_lines(config: RunConfig) -> list[str]:
    return [f"# {k} = {v}" for k, v in config.as_flat_dict().items()]


def _write_scores_csv(path: Path, examples, config: RunConfig) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        for line in _echo_lines(config):
            fh.write(line + "\n")
        writer = csv.writer(fh)
        writer.writerow(["unit_id", "level", "label", "score"])
        for e in examples:
            writer.writerow([e.unit_id, e.level, e.label, repr(float(e.score))])


def cmd_fit(args) -> int:
    config = load_run_config(args.config, _parse_overrides(args.set))
    manifest, tables = load_manifest(args.manifest)
    split = split_by_video(manifest.entries(), config.ratios, config.seed)
    train_tables = [t for t in tables if t.video_id in split.train]
    categories = config.categories or manifest.schema.names
    print(
        f"fit: {len(train_tables)}/{len(tables)} videos in train, "
        f"categories: {'+'.join(categories)}"
    )
    ensemble = fit_on_tables(train_tables, categories, config)
    losses = ensemble.train_losses
    step = max(1, len(losses) // 10)
    shown = list(range(0, len(losses), step))
    if shown[-1] != len(losses) - 1:
        shown.append(len(losses) - 1)
    for i in shown:
        print(f"round {i:5d}  train_logloss {losses[i]:.6f}")
    extra = {
        "effective_config": config.as_flat_dict(),
        "split": {
            "train": sorted(split.train),
            "val": sorted(split.val),
            "test": sorted(split.test),
        },
    }
    save_model(args.out, ensemble, extra=extra)
    print(f"model written to {args.out} ({ensemble.n_trees} trees, "
          f"{count_leaves(ensemble)} leaves)")
    return 0


def _config_for_model(header: dict, args) -> RunConfig:
    """Effective run config at scoring time: model echo + CLI overrides."""
    stored = (header.get("run_config") or {}).get("effective_config") or {}
    overrides = dict(stored)
    if getattr(args, "config", None):
        overrides.update(
            {k: v for k, v in load_run_config(args.config).as_flat_dict().items()}
        )
    overrides.update(_parse_overrides(getattr(args, "set", None)))
    return load_run_config(None, overrides)


def cmd_predict(args) -> int:
    ensemble, header = load_model_with_header(args.model)
    config = _config_for_model(header, args)
    _, tables = load_manifest(args.manifest)
    scored = score_levels(ensemble, tables, config.segments, config.aggregation)
    _write_scores_csv(Path(args.out), scored[args.level], config)
    print(f"{len(scored[args.level])} {args.level}-level scores written to {args.out}")
    return 0


def cmd_evaluate(args) -> int:
    ensemble, header = load_model_with_header(args.model)
    config = _config_for_model(header, args)
    _, tables = load_manifest(args.manifest)
    scored = score_levels(ensemble, tables, config.segments, config.aggregation)
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        for line in _echo_lines(config):
            fh.write(line + "\n")
        writer = csv.writer(fh)
        writer.writerow(["level", "auc", "n_examples", "n_pos", "n_neg"])
        for level in LEVELS:
            examples = scored[level]
            n_pos = sum(e.label for e in examples)
            auc = roc_auc(examples)
            writer.writerow([
                level, repr(float(auc)), len(examples), n_pos, len(examples) - n_pos,
            ])
            print(f"{level:8s} AUC {auc:.4f}  ({len(examples)} examples)")
    print(f"report written to {args.out}")
    return 0


def cmd_ablate(args) -> int:
    config = load_run_config(args.config, _parse_overrides(args.set))
    _, tables = load_manifest(args.manifest)
    report = run_ablation(tables, config.combinations, config)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    report.write_csv(out_dir / "ablation.csv", config_echo=config.as_flat_dict())
    table = report.format_table()
    (out_dir / "ablation.txt").write_text(table + "\n", encoding="utf-8")
    print(table)
    print(f"reports written to {out_dir}")
    return 0


def cmd_gen_synth(args) -> int:
    signal = tuple(s for s in args.signal.split(",") if s) if args.signal else DEFAULT_SIGNAL_CATEGORIES
    manifest_path = generate_synthetic(
        out_dir=args.out_dir,
        seed=args.seed,
        n_videos=args.videos,
        frames_per_video=args.frames,
        fraction_fake=args.fake_frac,
        signal_categories=signal,
        roi_means=args.roi_means,
    )
    print(f"synthetic corpus written; manifest at {manifest_path}")
    return 0


def cmd_inspect_model(args) -> int:
    ensemble, header = load_model_with_header(args.model)
    print(f"model file        {args.model}")
    print(f"trees             {ensemble.n_trees}")
    print(f"leaves            {count_leaves(ensemble)}")
    print(f"features          {ensemble.n_features}")
    print(f"learning_rate     {ensemble.learning_rate}")
    print(f"base_score        {ensemble.base_score}")
    print(f"schema            {ensemble.input_schema.categories if ensemble.input_schema else None}")
    print(f"fingerprint       {ensemble.fingerprint()}")
    print(f"stats embedded    {ensemble.stats is not None}")
    print("train config:")
    for key, value in sorted(ensemble.config.to_dict().items()):
        print(f"  {key} = {value}")
    stored = (header.get("run_config") or {}).get("effective_config") or {}
    if stored:
        print("run config echo:")
        for key in sorted(stored):
            print(f"  {key} = {stored[key]}")
    _, per_category = feature_importance(ensemble)
    if per_category is not None:
        total = sum(per_category.values()) or 1.0
        print("per-category split gain:")
        width = max(len(n) for n in per_category)
        for name, gain in sorted(per_category.items(), key=lambda kv: -kv[1]):
            print(f"  {name.ljust(width)}  {gain:12.4f}  ({100.0 * gain / total:5.1f}%)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pulseboost",
        description="Deepfake detection with fused landmark + heart-rate "
                    "features and boosted trees.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="train a model from a dataset manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--config", default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--set", action="append", metavar="KEY=VALUE")
    p.set_defaults(fn=cmd_fit)

    p = sub.add_parser("predict", help="score a manifest with a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--level", required=True, choices=list(LEVELS))
    p.add_argument("--out", required=True)
    p.add_argument("--config", default=None)
    p.add_argument("--set", action="append", metavar="KEY=VALUE")
    p.set_defaults(fn=cmd_predict)

    p = sub.add_parser("evaluate", help="AUC report at frame/segment/video level")
    p.add_argument("--model", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--config", default=None)
    p.add_argument("--set", action="append", metavar="KEY=VALUE")
    p.set_defaults(fn=cmd_evaluate)

    p = sub.add_parser("ablate", help="per-category and combination ablation")
    p.add_argument("--manifest", required=True)
    p.add_argument("--config", default=None)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--set", action="append", metavar="KEY=VALUE")
    p.set_defaults(fn=cmd_ablate)

    p = sub.add_parser("gen-synth", help="write a seeded synthetic corpus")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--videos", type=int, required=True)
    p.add_argument("--frames", type=int, required=True)
    p.add_argument("--fake-frac", type=float, required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--signal", default=None,
                   help="comma-separated signal categories "
                        f"(default {','.join(DEFAULT_SIGNAL_CATEGORIES)})")
    p.add_argument("--roi-means", action="store_true",
                   help="ship heart-rate inputs as per-region channel means")
    p.set_defaults(fn=cmd_gen_synth)

    p = sub.add_parser("inspect-model", help="print config and importances")
    p.add_argument("--model", required=True)
    p.set_defaults(fn=cmd_inspect_model)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (PulseboostError, ValueError, OSError) as exc:
        message = " ".join(str(exc).split())
        print(f"ERROR {type(exc).__name__}: {message}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
