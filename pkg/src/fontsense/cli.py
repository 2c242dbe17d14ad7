"""Command-line driver for the full pipeline.

Subcommands: ``prepare`` (load, filter, aggregate, split), ``train``,
``eval``, ``augment``, ``analyze``, ``recommend``, and ``serve``. Every
subcommand that involves randomness takes ``--seed`` and is bit-reproducible
for a fixed value.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import analysis, augment as augment_mod, service
from .catalog import FontCatalog, default_catalog
from .corpus import (
    aggregate_corpus,
    average_distribution,
    filter_annotators,
    fleiss_kappa,
    load_corpus,
    load_labeled,
    save_labeled,
    split_corpus,
)
from .evaluation import evaluate, majority_baseline, ModelPredictor
from .features import (
    EmotionLexicon,
    ExternalFeaturizer,
    IntensityLexicon,
    NrcFeaturizer,
    SynonymTable,
    VadLexicon,
    WordVecFeaturizer,
    load_embeddings,
    load_external_vectors,
)
from .model import TrainConfig, load_model, model_id, save_model, train

__all__ = ["main"]


class CliError(Exception):
    pass


def _add_featurizer_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--features", choices=("nrc", "wordvec", "external"), default=None,
                        help="featurizer kind (defaults to the checkpoint's, where one is loaded)")
    parser.add_argument("--emotion-lex", help="emotion lexicon TSV (nrc)")
    parser.add_argument("--intensity-lex", help="intensity lexicon TSV (nrc)")
    parser.add_argument("--vad-lex", help="VAD lexicon TSV (nrc)")
    parser.add_argument("--synonyms", help="synonym table TSV (nrc, optional)")
    parser.add_argument("--embeddings", help="word vector text file (wordvec)")
    parser.add_argument("--external-vecs", help="precomputed sentence vectors JSONL (external)")


def _build_featurizer(args, expected: str | None = None):
    kind = args.features or expected
    if kind is None:
        raise CliError("--features is required")
    if expected is not None and kind != expected:
        raise CliError(f"model was trained with featurizer {expected!r}, got {kind!r}")
    if kind == "nrc":
        missing = [f for f in ("emotion_lex", "intensity_lex", "vad_lex") if not getattr(args, f)]
        if missing:
            flags = ", ".join("--" + f.replace("_", "-") for f in missing)
            raise CliError(f"nrc features need {flags}")
        synonyms = SynonymTable.load(args.synonyms) if args.synonyms else None
        return NrcFeaturizer(
            EmotionLexicon.load(args.emotion_lex),
            IntensityLexicon.load(args.intensity_lex),
            VadLexicon.load(args.vad_lex),
            synonyms,
        )
    if kind == "wordvec":
        if not args.embeddings:
            raise CliError("wordvec features need --embeddings")
        table, errors = load_embeddings(args.embeddings)
        for err in errors:
            print(f"warning: {args.embeddings}: {err}", file=sys.stderr)
        return WordVecFeaturizer(table)
    if not args.external_vecs:
        raise CliError("external features need --external-vecs")
    vectors, errors = load_external_vectors(args.external_vecs)
    for err in errors:
        print(f"warning: {args.external_vecs}: {err}", file=sys.stderr)
    return ExternalFeaturizer(vectors)


def _load_catalog(args) -> FontCatalog:
    if getattr(args, "catalog", None):
        return FontCatalog.from_json(_existing(args.catalog))
    return default_catalog()


def _existing(path: str) -> Path:
    p = Path(path)
    if not p.exists():
        raise CliError(f"file not found: {p}")
    return p


def _cmd_prepare(args) -> int:
    catalog = _load_catalog(args)
    report = load_corpus(_existing(args.data), n_fonts=len(catalog))
    for err in report.errors:
        where = f" ({err.instance_id})" if err.instance_id else ""
        print(f"warning: line {err.line_no}{where}: {err.message}", file=sys.stderr)

    filtered = filter_annotators(
        list(report.instances),
        same_choice_threshold=args.same_choice_threshold,
        min_annotations=args.min_annotations,
        rank_slot=args.rank_slot,
    )
    labeled = aggregate_corpus(filtered, n_fonts=len(catalog))
    split = split_corpus(labeled, seed=args.seed)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    save_labeled(labeled, out_dir / "labeled.jsonl")
    save_labeled(list(split.train), out_dir / "train.jsonl")
    save_labeled(list(split.dev), out_dir / "dev.jsonl")
    save_labeled(list(split.test), out_dir / "test.jsonl")

    summary = {
        "loaded": len(report.instances),
        "line_errors": len(report.errors),
        "after_filtering": len(filtered),
        "split_seed": args.seed,
        "sizes": {"train": len(split.train), "dev": len(split.dev), "test": len(split.test)},
        "fleiss_kappa": fleiss_kappa(filtered) if len(filtered) >= 2 else None,
        "average_distribution": [float(p) for p in average_distribution(labeled).probs],
    }
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
    print(json.dumps(summary["sizes"]))
    return 0


def _cmd_train(args) -> int:
    featurizer = _build_featurizer(args)
    train_set = load_labeled(_existing(args.train))
    dev_set = load_labeled(_existing(args.dev)) if args.dev else []

    from .corpus import SplitCorpus

    split = SplitCorpus(tuple(train_set), tuple(dev_set), (), split_seed=args.seed)
    config = TrainConfig(
        lr=args.lr,
        epochs=args.epochs,
        batch_size=args.batch,
        hidden_dim=args.hidden,
        seeds=tuple(args.seed + i for i in range(args.num_seeds)),
    )
    result = train(split, featurizer, config)

    save_model(result.best, args.model)
    log_path = Path(args.log) if args.log else Path(args.model).with_suffix(".log.json")
    log_payload = {
        "config": {
            "lr": config.lr, "epochs": config.epochs, "batch_size": config.batch_size,
            "hidden_dim": config.hidden_dim, "seeds": list(config.seeds),
        },
        "runs": [
            {
                "seed": run.seed,
                "best_epoch": run.best_epoch,
                "best_dev_f1": run.best_dev_f1,
                "epochs": [
                    {"epoch": e.epoch, "train_kl": e.train_kl, "dev_f1": e.dev_f1}
                    for e in run.log
                ],
            }
            for run in result.runs
        ],
    }
    log_path.write_text(json.dumps(log_payload, indent=2) + "\n", encoding="utf-8")
    for run in result.runs:
        print(f"seed {run.seed}: best dev F@1 {run.best_dev_f1:.2f} at epoch {run.best_epoch}")
    print(f"saved {args.model} (model_id {model_id(result.best)})")
    return 0


def _cmd_eval(args) -> int:
    model = load_model(_existing(args.model))
    test_set = load_labeled(_existing(args.test))
    if args.baseline:
        predictor = majority_baseline(load_labeled(_existing(args.baseline)))
        name = "majority"
    else:
        featurizer = _build_featurizer(args, expected=model.featurizer_name or None)
        predictor = ModelPredictor(model, featurizer)
        name = model.featurizer_name or "model"
    report = evaluate(predictor, test_set)
    if args.json:
        print(report.to_json())
    elif args.csv:
        print(report.to_csv(name), end="")
    else:
        print(report.to_table(name))
    return 0


def _cmd_augment(args) -> int:
    train_set = load_labeled(_existing(args.train))
    provider = augment_mod.make_provider(args.provider)
    config = augment_mod.AugmentConfig(
        pivot_langs=tuple(args.pivot_langs.split(",")),
        rarity_threshold=args.rarity_threshold,
        oversample_cap=args.cap,
        undersample_count=args.remove,
    )
    augmented = augment_mod.rebalance(train_set, config, provider)
    save_labeled(augmented, args.out)
    print(json.dumps({"input": len(train_set), "output": len(augmented)}))
    return 0


def _cmd_analyze(args) -> int:
    if args.what != "corr":
        raise CliError(f"unknown analysis {args.what!r} (expected: corr)")
    catalog = _load_catalog(args)
    instances = load_labeled(_existing(args.data))
    featurizer = _build_featurizer(args)
    matrix = analysis.correlation_matrix(instances, featurizer)
    analysis.write_correlation_csv(matrix, catalog.names, featurizer.feature_labels(), args.out)
    print(f"wrote {args.out}")
    return 0


def _cmd_recommend(args) -> int:
    model = load_model(_existing(args.model))
    featurizer = _build_featurizer(args, expected=model.featurizer_name or None)
    catalog = _load_catalog(args)
    if not args.text.strip():
        raise CliError("--text must be non-empty")
    if not 1 <= args.k <= len(catalog):
        raise CliError(f"--k must be in 1..{len(catalog)}")
    response = service.recommend_response(
        model, featurizer, catalog, args.text, args.k, model_id(model)
    )
    print(json.dumps(response.to_dict()))
    return 0


def _cmd_serve(args) -> int:
    model = load_model(_existing(args.model))
    featurizer = _build_featurizer(args, expected=model.featurizer_name or None)
    catalog = _load_catalog(args)
    server = service.build_server(
        args.host, args.port, model, featurizer, catalog, model_id(model), args.cors_origin
    )
    print(f"serving on http://{args.host}:{server.server_address[1]}")
    service.serve_forever(server)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fontsense", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prepare", help="validate, filter, aggregate, and split a raw corpus")
    p.add_argument("--data", required=True, help="raw annotation JSONL")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--catalog", help="font catalog JSON (default: built-in ten fonts)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--same-choice-threshold", type=float, default=0.9)
    p.add_argument("--min-annotations", type=int, default=6)
    p.add_argument("--rank-slot", choices=("first", "second", "third", "all"), default="first")
    p.set_defaults(func=_cmd_prepare)

    p = sub.add_parser("train", help="train the predictor over several seeds")
    p.add_argument("--train", required=True, help="labeled training JSONL")
    p.add_argument("--dev", help="labeled dev JSONL (snapshot selection)")
    p.add_argument("--model", required=True, help="output checkpoint path")
    p.add_argument("--log", help="training log path (default: <model>.log.json)")
    p.add_argument("--hidden", type=int, default=64)
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--epochs", type=int, default=100)
    p.add_argument("--batch", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--num-seeds", type=int, default=4)
    _add_featurizer_flags(p)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="score a model (or the majority baseline) on a test set")
    p.add_argument("--model", required=True)
    p.add_argument("--test", required=True, help="labeled test JSONL")
    p.add_argument("--baseline", help="score the majority baseline of this labeled JSONL instead")
    p.add_argument("--json", action="store_true")
    p.add_argument("--csv", action="store_true")
    _add_featurizer_flags(p)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("augment", help="back-translation oversampling plus undersampling")
    p.add_argument("--train", required=True, help="labeled training JSONL")
    p.add_argument("--out", required=True)
    p.add_argument("--provider", default="mock", help="mock | identity | http")
    p.add_argument("--pivot-langs", default="de,fr,es,ja")
    p.add_argument("--rarity-threshold", type=float, default=0.25)
    p.add_argument("--cap", type=int, default=170)
    p.add_argument("--remove", type=int, default=50)
    p.set_defaults(func=_cmd_augment)

    p = sub.add_parser("analyze", help="corpus analyses")
    p.add_argument("what", choices=("corr",), help="analysis to run")
    p.add_argument("--data", required=True, help="labeled JSONL")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--catalog")
    _add_featurizer_flags(p)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("recommend", help="print a recommendation for one text")
    p.add_argument("--text", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--catalog")
    _add_featurizer_flags(p)
    p.set_defaults(func=_cmd_recommend)

    p = sub.add_parser("serve", help="run the recommendation HTTP service")
    p.add_argument("--model", required=True)
    p.add_argument("--port", type=int, default=8321)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--catalog")
    p.add_argument("--cors-origin", help="value for Access-Control-Allow-Origin")
    _add_featurizer_flags(p)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, KeyError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
