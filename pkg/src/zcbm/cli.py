"""Command-line surface: bank building, indexing, inference, evaluation,
calibration, benchmarking, and the HTTP service.

Exit codes: 0 ok, 2 input error, 3 external-service error, 4 internal.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .bank import (
    BankBuildConfig,
    build_bank,
    caption_sources,
    load_bank,
    save_bank,
)
from .errors import ProviderError, ZcbmError
from .metrics.bench import DEFAULT_K_GRID, benchmark_inference, write_bench_csv
from .metrics.curves import deletion_curve, insertion_curve, write_curve_csv
from .metrics.scores import (
    EvalReport,
    clip_score,
    inner_redundancy,
    modality_gap,
    sparsity,
    top1_accuracy,
)
from .pipeline.calibrate import DEFAULT_GRID, DEFAULT_TARGET_RATIO, calibrate_lambda
from .pipeline.classes import load_class_set
from .pipeline.infer import DEFAULT_K, DEFAULT_LAMBDA, SolverConfig, infer
from .regress.types import ConceptWeights
from .retrieval.ivf import build_ivf, load_ivf, save_ivf
from .vecstore.io import load_matrix
from .vecstore.provider import ProviderConfig
from .vecstore.types import EmbeddingMatrix

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_EXTERNAL = 3
EXIT_INTERNAL = 4
HELP_WIDTH = 100

SOLVER_NAMES = ("lasso", "elastic_net", "htp", "least_squares", "similarity")


class CliInputError(Exception):
    pass


def _formatter(prog):
    return argparse.ArgumentDefaultsHelpFormatter(prog, width=HELP_WIDTH)


def _provider_from_args(args) -> ProviderConfig | None:
    endpoint = os.environ.get("ZCBM_PROVIDER_URL") or getattr(args, "provider_url", None)
    if not endpoint:
        return None
    return ProviderConfig(
        endpoint=endpoint,
        batch_size=getattr(args, "batch_size", 64),
        timeout=getattr(args, "timeout", 30.0),
        prompt_template=getattr(args, "prompt_template", "[TEXT]"),
    )


def _require_file(path, what: str) -> Path:
    p = Path(path)
    if not p.exists():
        raise CliInputError(f"{what} not found: {p}")
    return p


def _solver_from_args(args) -> SolverConfig:
    return SolverConfig(
        name=args.solver,
        l1=getattr(args, "lam", DEFAULT_LAMBDA),
        l2=getattr(args, "l2", 1e-4),
        s=getattr(args, "s", 256),
    )


def _load_classes(args, provider):
    _require_file(args.classes, "class file")
    embeddings = None
    if getattr(args, "class_embeddings", None):
        embeddings = load_matrix(_require_file(args.class_embeddings,
                                               "class embedding file"))
    return load_class_set(args.classes, embeddings=embeddings, provider=provider)


def _read_truths(path) -> list[int]:
    lines = Path(path).read_text().split()
    return [int(v) for v in lines]


# --- subcommands ---

def cmd_build_bank(args) -> int:
    captions = [_require_file(p, "caption file") for p in args.captions]
    provider = _provider_from_args(args)
    if provider is None:
        raise CliInputError(
            "an embedding provider is required: pass --provider-url or set ZCBM_PROVIDER_URL"
        )
    blocklist: frozenset[str] = frozenset()
    if args.blocklist:
        blocklist = frozenset(
            line.strip().casefold()
            for line in _require_file(args.blocklist, "blocklist").read_text().splitlines()
            if line.strip()
        )
    cfg = BankBuildConfig(
        name=args.name,
        max_chars=args.max_chars,
        max_words=args.max_words,
        dedup_threshold=args.dedup_threshold,
        dedup_top_m=args.dedup_top_m,
        class_filter_threshold=args.class_threshold,
        min_count=args.min_count,
        blocklist=blocklist,
    )
    class_embeddings = None
    if args.class_file:
        provider_classes = _load_classes(
            argparse.Namespace(classes=args.class_file, class_embeddings=None),
            provider,
        )
        class_embeddings = provider_classes.embeddings
    counts: dict[str, int] = {}
    bank = build_bank(caption_sources(captions), cfg, provider,
                      class_embeddings=class_embeddings, stage_counts=counts)
    manifest_path = save_bank(bank, args.out)
    for stage, value in counts.items():
        print(f"{stage}: {value}")
    print(manifest_path)
    return EXIT_OK


def cmd_index(args) -> int:
    bank = load_bank(_require_file(args.bank, "bank directory"))
    index = build_ivf(bank, n_list=args.n_list, seed=args.seed)
    path = save_ivf(index, args.out)
    print(path.parent)
    return EXIT_OK


def cmd_infer(args) -> int:
    bank = load_bank(_require_file(args.bank, "bank directory"))
    provider = _provider_from_args(args)
    classes = _load_classes(args, provider)
    inputs = load_matrix(_require_file(args.inputs, "input matrix"))
    index = None
    if args.index:
        index = load_ivf(_require_file(args.index, "index directory"))
    solver_cfg = _solver_from_args(args)
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        for i in range(inputs.count):
            prediction = infer(inputs.data[i], bank, classes, k=args.k,
                               solver_cfg=solver_cfg, index=index)
            record = {"index": i}
            record.update(prediction.to_record(include_scores=args.emit_class_scores))
            out.write(json.dumps(record, sort_keys=True) + "\n")
    finally:
        if args.out:
            out.close()
    return EXIT_OK


def cmd_eval(args) -> int:
    bank = load_bank(_require_file(args.bank, "bank directory"))
    provider = _provider_from_args(args)
    classes = _load_classes(args, provider)
    inputs = load_matrix(_require_file(args.inputs, "input matrix"))
    truths = _read_truths(_require_file(args.truth, "truth file"))
    if len(truths) != inputs.count:
        raise CliInputError(
            f"{len(truths)} truth labels for {inputs.count} inputs"
        )
    solver_cfg = _solver_from_args(args)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    predictions = [
        infer(inputs.data[i], bank, classes, k=args.k, solver_cfg=solver_cfg)
        for i in range(inputs.count)
    ]
    labels = [p.label_id for p in predictions]
    accuracy = top1_accuracy(labels, truths)

    mean_clip = None
    mean_redundancy = None
    if args.scorer_images and args.scorer_embeddings:
        scorer_images = load_matrix(_require_file(args.scorer_images,
                                                  "scorer image matrix"))
        scorer_bank = load_matrix(_require_file(args.scorer_embeddings,
                                                "scorer bank matrix"))
        if scorer_images.count != inputs.count:
            raise CliInputError("scorer image rows must match input rows")
        clip_vals = []
        redundancy_vals = []
        for i, p in enumerate(predictions):
            if p.weights.nonzero_count == 0:
                continue
            selected = ConceptWeights(w=p.weights.w, solver=p.weights.solver)
            bank_ids = p.retrieval.indices
            scorer_rows = EmbeddingMatrix(
                scorer_bank.data[bank_ids], normalized=scorer_bank.normalized
            )
            clip_vals.append(
                clip_score(scorer_images.data[i], scorer_rows, selected)
            )
            ranked = [idx for _, idx, _ in p.concepts[:10]]
            if len(ranked) >= 2:
                redundancy_vals.append(
                    inner_redundancy(EmbeddingMatrix(scorer_bank.data[ranked]))
                )
        mean_clip = float(np.mean(clip_vals)) if clip_vals else None
        mean_redundancy = (
            float(np.mean(redundancy_vals)) if redundancy_vals else None
        )

    recon = np.vstack([p.reconstructed for p in predictions])
    recon_norms = np.linalg.norm(recon, axis=1)
    valid = recon_norms > 1e-10
    gap_image = modality_gap(inputs, classes.embeddings)
    gap_concept = (
        modality_gap(EmbeddingMatrix(recon[valid].astype(np.float32)),
                     classes.embeddings)
        if valid.any() else None
    )

    report = EvalReport(
        dataset_name=args.dataset_name,
        n_samples=inputs.count,
        top1_accuracy=accuracy,
        mean_clip_score=mean_clip,
        mean_sparsity=float(np.mean([sparsity(p.weights, len(p.retrieval))
                                     for p in predictions])),
        mean_inner_redundancy=mean_redundancy,
        modality_gap_image_to_label=gap_image,
        modality_gap_concept_to_label=gap_concept,
    )
    (out_dir / "report.json").write_text(report.to_json())

    if args.deletion_grid:
        ratios = [float(v) for v in args.deletion_grid.split(",")]
        points = deletion_curve(predictions, truths, classes, ratios=ratios,
                                seed=args.seed)
        write_curve_csv(points, out_dir / "deletion_curve.csv", "ratio")
    if args.insertion_gt:
        gt_entries = json.loads(
            _require_file(args.insertion_gt, "insertion ground truth").read_text()
        )
        if len(gt_entries) != inputs.count:
            raise CliInputError("insertion ground truth must match input rows")
        vocab_lookup = {v.casefold(): i for i, v in enumerate(bank.vocab)}
        gt_lists = []
        for texts in gt_entries:
            resolved = []
            for text in texts:
                row = vocab_lookup.get(text.casefold())
                if row is None:
                    raise CliInputError(
                        f"insertion concept {text!r} not in bank vocabulary"
                    )
                resolved.append((text, bank.embeddings.data[row].astype(np.float64)))
            gt_lists.append(resolved)
        counts = [int(v) for v in args.insertion_counts.split(",")]
        points = insertion_curve(predictions, gt_lists, truths, classes,
                                 counts=counts)
        write_curve_csv(points, out_dir / "insertion_curve.csv", "count")
    print((out_dir / "report.json"))
    return EXIT_OK


def cmd_calibrate(args) -> int:
    bank = load_bank(_require_file(args.bank, "bank directory"))
    samples_matrix = load_matrix(_require_file(args.samples, "sample matrix"))
    grid = [float(v) for v in args.grid.split(",")]
    result = calibrate_lambda(
        [samples_matrix.data[i] for i in range(samples_matrix.count)],
        bank, k=args.k, grid=grid, target_ratio=args.target_ratio,
    )
    payload = {
        "chosen_lambda": result.chosen,
        "target_ratio": result.target_ratio,
        "no_qualifier": result.no_qualifier,
        "ratios": {f"{lam:g}": ratio for lam, ratio in result.ratios.items()},
    }
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    print(result.chosen)
    return EXIT_OK


def cmd_bench(args) -> int:
    bank = load_bank(_require_file(args.bank, "bank directory"))
    samples_matrix = load_matrix(_require_file(args.samples, "sample matrix"))
    classes = None
    truths = None
    if args.classes:
        provider = _provider_from_args(args)
        classes = _load_classes(args, provider)
        if args.truth:
            truths = _read_truths(_require_file(args.truth, "truth file"))
    k_grid = [int(v) for v in args.k_grid.split(",")]
    rows = benchmark_inference(
        bank,
        [samples_matrix.data[i] for i in range(samples_matrix.count)],
        k_grid=k_grid,
        solver_cfg=_solver_from_args(args),
        classes=classes,
        truths=truths,
        warmup=args.warmup,
    )
    write_bench_csv(rows, args.out)
    for row in rows:
        print(f"k={row.k} total={row.total_ms:.3f}ms retrieval={row.retrieval_ms:.3f}ms "
              f"regression={row.regression_ms:.3f}ms")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import create_app

    bank = load_bank(_require_file(args.bank, "bank directory"))
    provider = _provider_from_args(args)
    classes = _load_classes(args, provider)
    ui_dir = args.ui_dir if args.ui_dir and Path(args.ui_dir).is_dir() else None
    app = create_app(
        bank, classes, provider=provider,
        default_solver=_solver_from_args(args),
        session_ttl=args.session_ttl,
        cors_origins=tuple(args.cors_origin or ()),
        ui_dir=ui_dir,
    )
    host, _, port = args.addr.partition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000),
                log_level="warning")
    return EXIT_OK


# --- parser ---

def _add_provider_flags(sub):
    sub.add_argument("--provider-url", default=None,
                     help="embedding provider endpoint (ZCBM_PROVIDER_URL overrides)")
    sub.add_argument("--batch-size", type=int, default=64,
                     help="provider batch size")
    sub.add_argument("--timeout", type=float, default=30.0,
                     help="provider timeout in seconds")
    sub.add_argument("--prompt-template", default="[TEXT]",
                     help="prompt template with a [TEXT] placeholder")


def _add_solver_flags(sub):
    sub.add_argument("--solver", choices=SOLVER_NAMES, default="lasso",
                     help="importance-weight solver")
    sub.add_argument("--lambda", dest="lam", type=float, default=DEFAULT_LAMBDA,
                     help="l1 penalty for lasso/elastic_net")
    sub.add_argument("--l2", type=float, default=1e-4,
                     help="l2 penalty for elastic_net")
    sub.add_argument("--s", type=int, default=256,
                     help="support size for htp")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zcbm",
        description="Concept-bottleneck inference over precomputed embeddings.",
        formatter_class=_formatter,
    )
    parser.add_argument("--config", default=None,
                        help="JSON config file; explicit flags take precedence")
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("build-bank", formatter_class=_formatter,
                              help="construct a concept bank from tagged captions")
    sub.add_argument("--captions", nargs="+", required=True,
                     help="tagged caption files")
    sub.add_argument("--out", required=True, help="output bank directory")
    sub.add_argument("--name", default="bank", help="bank name for the manifest")
    sub.add_argument("--max-chars", type=int, default=30,
                     help="maximum concept length in characters")
    sub.add_argument("--max-words", type=int, default=5,
                     help="maximum concept length in words")
    sub.add_argument("--dedup-threshold", type=float, default=0.9,
                     help="cosine threshold for near-duplicate removal")
    sub.add_argument("--dedup-top-m", type=int, default=64,
                     help="neighbours fetched per concept during dedup")
    sub.add_argument("--min-count", type=int, default=1,
                     help="drop concepts seen fewer times than this")
    sub.add_argument("--blocklist", default=None,
                     help="file with one blocked concept per line")
    sub.add_argument("--class-file", default=None,
                     help="class-set JSON enabling the class-similarity filter")
    sub.add_argument("--class-threshold", type=float, default=0.85,
                     help="cosine threshold for the class-similarity filter")
    _add_provider_flags(sub)
    sub.set_defaults(func=cmd_build_bank)

    sub = commands.add_parser("index", formatter_class=_formatter,
                              help="build an inverted-file index over a bank")
    sub.add_argument("--bank", required=True, help="bank directory")
    sub.add_argument("--out", required=True, help="output index directory")
    sub.add_argument("--n-list", type=int, default=256,
                     help="number of k-means partitions")
    sub.add_argument("--seed", type=int, default=0, help="k-means seed")
    sub.set_defaults(func=cmd_index)

    sub = commands.add_parser("infer", formatter_class=_formatter,
                              help="predict labels and concepts for input embeddings")
    sub.add_argument("--bank", required=True, help="bank directory")
    sub.add_argument("--classes", required=True, help="class-set JSON file")
    sub.add_argument("--class-embeddings", default=None,
                     help="matrix of class embeddings (else fetched via provider)")
    sub.add_argument("--inputs", required=True,
                     help="matrix of input embeddings, one row per image")
    sub.add_argument("--out", default=None,
                     help="output JSON-lines file (default: stdout)")
    sub.add_argument("--k", type=int, default=DEFAULT_K,
                     help="retrieved concept count")
    sub.add_argument("--index", default=None,
                     help="inverted-file index directory for approximate retrieval")
    sub.add_argument("--emit-class-scores", action="store_true",
                     help="include per-class scores in each record")
    _add_solver_flags(sub)
    _add_provider_flags(sub)
    sub.set_defaults(func=cmd_infer)

    sub = commands.add_parser("eval", formatter_class=_formatter,
                              help="evaluate predictions against truth labels")
    sub.add_argument("--bank", required=True, help="bank directory")
    sub.add_argument("--classes", required=True, help="class-set JSON file")
    sub.add_argument("--class-embeddings", default=None,
                     help="matrix of class embeddings")
    sub.add_argument("--inputs", required=True, help="matrix of input embeddings")
    sub.add_argument("--truth", required=True,
                     help="file with one integer label per line")
    sub.add_argument("--out-dir", required=True, help="report output directory")
    sub.add_argument("--dataset-name", default="dataset",
                     help="name recorded in the report")
    sub.add_argument("--k", type=int, default=DEFAULT_K,
                     help="retrieved concept count")
    sub.add_argument("--scorer-images", default=None,
                     help="scorer-side image embedding matrix")
    sub.add_argument("--scorer-embeddings", default=None,
                     help="scorer-side bank embedding matrix")
    sub.add_argument("--deletion-grid", default=None,
                     help="comma-separated deletion ratios")
    sub.add_argument("--insertion-gt", default=None,
                     help="JSON file with ground-truth concepts per input")
    sub.add_argument("--insertion-counts", default="0,1,2,3",
                     help="comma-separated insertion counts")
    sub.add_argument("--seed", type=int, default=0,
                     help="seed for random-order deletion")
    _add_solver_flags(sub)
    _add_provider_flags(sub)
    sub.set_defaults(func=cmd_eval)

    sub = commands.add_parser("calibrate", formatter_class=_formatter,
                              help="pick the l1 penalty from a grid by density")
    sub.add_argument("--bank", required=True, help="bank directory")
    sub.add_argument("--samples", required=True,
                     help="matrix of sample embeddings")
    sub.add_argument("--k", type=int, default=DEFAULT_K,
                     help="retrieved concept count")
    sub.add_argument("--grid", default=",".join(f"{v:g}" for v in DEFAULT_GRID),
                     help="comma-separated penalty grid")
    sub.add_argument("--target-ratio", type=float, default=DEFAULT_TARGET_RATIO,
                     help="required mean nonzero ratio")
    sub.add_argument("--out", default=None, help="optional JSON result file")
    sub.set_defaults(func=cmd_calibrate)

    sub = commands.add_parser("bench", formatter_class=_formatter,
                              help="time retrieval and regression across a k grid")
    sub.add_argument("--bank", required=True, help="bank directory")
    sub.add_argument("--samples", required=True,
                     help="matrix of sample embeddings")
    sub.add_argument("--k-grid", default=",".join(str(v) for v in DEFAULT_K_GRID),
                     help="comma-separated k values")
    sub.add_argument("--out", required=True, help="output CSV file")
    sub.add_argument("--classes", default=None, help="class-set JSON file")
    sub.add_argument("--class-embeddings", default=None,
                     help="matrix of class embeddings")
    sub.add_argument("--truth", default=None,
                     help="file with one integer label per line")
    sub.add_argument("--warmup", type=int, default=3,
                     help="warm-up samples excluded from timing")
    _add_solver_flags(sub)
    _add_provider_flags(sub)
    sub.set_defaults(func=cmd_bench)

    sub = commands.add_parser("serve", formatter_class=_formatter,
                              help="run the HTTP service")
    sub.add_argument("--addr", default="127.0.0.1:8000", help="host:port to bind")
    sub.add_argument("--bank", required=True, help="bank directory")
    sub.add_argument("--classes", required=True, help="class-set JSON file")
    sub.add_argument("--class-embeddings", default=None,
                     help="matrix of class embeddings")
    sub.add_argument("--session-ttl", type=float, default=1800.0,
                     help="session expiry in seconds")
    sub.add_argument("--ui-dir", default=None,
                     help="static UI bundle served under /ui")
    sub.add_argument("--cors-origin", action="append", default=None,
                     help="allowed CORS origin (repeatable)")
    _add_solver_flags(sub)
    _add_provider_flags(sub)
    sub.set_defaults(func=cmd_serve)

    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    """Fill parser defaults from --config JSON; explicit flags win."""
    if "--config" not in argv:
        return argv
    at = argv.index("--config")
    config_path = argv[at + 1]
    values = json.loads(Path(config_path).read_text())
    if not isinstance(values, dict):
        raise CliInputError(f"{config_path}: config must be a JSON object")
    for action in parser._subparsers._group_actions:  # noqa: SLF001
        for sub in action.choices.values():
            known = {a.dest for a in sub._actions}  # noqa: SLF001
            sub.set_defaults(**{
                k.replace("-", "_"): v for k, v in values.items()
                if k.replace("-", "_") in known
            })
    return argv


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _apply_config(parser, argv)
        args = parser.parse_args(argv)
        return args.func(args)
    except CliInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (FileNotFoundError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ProviderError as exc:
        print(f"provider error: {exc}", file=sys.stderr)
        return EXIT_EXTERNAL
    except ZcbmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except KeyboardInterrupt:
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
