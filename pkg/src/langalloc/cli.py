"""Command-line entry point.

Subcommands: similarity, allocate, manifest, stats compare, simulate
tournament. Exit codes: 0 success, 1 input error, 2 constraint/degenerate
error, 3 I/O error. All outputs are written atomically and embed the
resolved configuration, so identical invocations produce byte-identical
files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from . import allocation, manifest, simulator, stats
from .errors import InputError, IOFailure, LangAllocError
from .similarity import SimilarityMatrix, build_similarity_matrix, load_embedding_dir


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so exit codes follow the
    documented contract (usage errors are input errors -> 1)."""

    def error(self, message):
        raise InputError(message)


def _resolve_out(path: str) -> str:
    """Relative output paths may be redirected with LANGALLOC_OUT_DIR; all
    other configuration is explicit flags."""
    base = os.environ.get("LANGALLOC_OUT_DIR")
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def _atomic_write(path: str, text: str) -> None:
    path = _resolve_out(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".langalloc-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _config_comment(args: argparse.Namespace, keys: list[str]) -> str:
    resolved = {k: getattr(args, k) for k in keys}
    return "# config: " + json.dumps(resolved, sort_keys=True)


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="langalloc",
        description="Budget-constrained source-language selection and allocation.",
        epilog="If LANGALLOC_OUT_DIR is set, relative --out paths are written "
               "under that directory; no other environment variables are read.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser(
        "similarity", parents=[], description="Build a similarity matrix from "
        "embedding files.", help="embedding files -> similarity matrix CSV",
    )
    p_sim.add_argument("--embeddings", required=True,
                       help="directory of embedding files (one per language)")
    p_sim.add_argument("--out", required=True, help="output CSV path")
    p_sim.add_argument("--provenance", default="",
                       help="free-text tag recording the embedding source")

    p_alloc = sub.add_parser(
        "allocate", help="compute an allocation vector for one strategy",
    )
    p_alloc.add_argument("--strategy", required=True, choices=allocation.STRATEGIES)
    p_alloc.add_argument("--budget", required=True, type=int,
                         help="total sentence budget B")
    p_alloc.add_argument("--k", type=int, default=5,
                         help="number of sources for top-K strategies (default: 5)")
    p_alloc.add_argument("--alpha", type=float, default=0.5,
                         help="diversity penalty weight (default: 0.5)")
    p_alloc.add_argument("--seed", required=True, type=int,
                         help="64-bit seed (required; used by random-k)")
    p_alloc.add_argument("--batch-size", type=int, default=500,
                         help="greedy-marginal batch size (default: 500)")
    p_alloc.add_argument("--saturation-c", type=float, default=1000.0,
                         help="greedy-marginal saturation scale (default: 1000)")
    p_alloc.add_argument("--similarity", required=True,
                         help="similarity matrix CSV")
    p_alloc.add_argument("--availability", required=True,
                         help="availability CSV (language,count)")
    p_alloc.add_argument("--target", required=True, help="target language code")
    p_alloc.add_argument("--out", required=True, help="output JSON path")

    p_man = sub.add_parser(
        "manifest", help="turn an allocation into a shuffled train/val manifest",
    )
    p_man.add_argument("--allocation", required=True, help="allocation JSON")
    p_man.add_argument("--index-dir", required=True,
                       help="directory of <lang>.txt id files")
    p_man.add_argument("--seed", required=True, type=int)
    p_man.add_argument("--val-fraction", type=float, default=0.1,
                       help="validation holdout fraction (default: 0.1)")
    p_man.add_argument("--out", required=True, help="output JSON Lines path")

    p_stats = sub.add_parser("stats", help="statistical comparison of run results")
    stats_sub = p_stats.add_subparsers(dest="stats_command", required=True)
    p_cmp = stats_sub.add_parser(
        "compare", help="paired t-test report between two strategies",
    )
    p_cmp.add_argument("--results", required=True, help="results CSV")
    p_cmp.add_argument("--a", required=True, help="first strategy")
    p_cmp.add_argument("--b", required=True,
                       help="second strategy (positive delta favors it)")
    p_cmp.add_argument("--family-size", type=int, default=1,
                       help="Bonferroni family size m (default: 1)")
    p_cmp.add_argument("--out", required=True, help="output report CSV")

    p_simu = sub.add_parser("simulate", help="synthetic strategy evaluation")
    simu_sub = p_simu.add_subparsers(dest="simulate_command", required=True)
    p_tour = simu_sub.add_parser(
        "tournament", help="cross-product strategy tournament from a spec file",
    )
    p_tour.add_argument("--spec", required=True, help="tournament spec JSON")
    p_tour.add_argument("--out", required=True, help="output results CSV")

    return parser


def _cmd_similarity(args) -> int:
    sets = load_embedding_dir(args.embeddings)
    matrix = build_similarity_matrix(sets, provenance=args.provenance)
    body = []
    if matrix.provenance:
        body.append(f"# provenance: {matrix.provenance}")
    body.append(_config_comment(args, ["embeddings", "out", "provenance"]))
    body.append("," + ",".join(matrix.languages))
    for i, lang in enumerate(matrix.languages):
        body.append(lang + "," + ",".join(f"{v:.17g}" for v in matrix.scores[i]))
    _atomic_write(args.out, "\n".join(body) + "\n")
    return 0


def _cmd_allocate(args) -> int:
    matrix = SimilarityMatrix.load_csv(args.similarity)
    availability = allocation.load_availability_csv(args.availability)
    pool = allocation.build_pool(args.target, availability, matrix=matrix)
    cfg = allocation.StrategyConfig(
        strategy=args.strategy,
        budget=args.budget,
        k=args.k,
        alpha=args.alpha,
        seed=args.seed,
        batch_size=args.batch_size,
        saturation_c=args.saturation_c,
    )
    vec = allocation.allocate(pool, cfg)
    _atomic_write(args.out, vec.to_json() + "\n")
    return 0


def _cmd_manifest(args) -> int:
    with open(args.allocation, encoding="utf-8") as fh:
        vec = allocation.AllocationVector.from_json(fh.read())
    indexes = []
    for entry in vec.entries:
        path = os.path.join(args.index_dir, f"{entry.language}.txt")
        if entry.amount > 0 and not os.path.exists(path):
            raise InputError(
                f"no index file for allocated language {entry.language!r} "
                f"(expected {path})"
            )
        if os.path.exists(path):
            indexes.append(manifest.load_index_file(path, entry.language))
    man = manifest.build_manifest(vec, indexes, args.seed, args.val_fraction)
    _atomic_write(args.out, man.to_jsonl())
    # manifests are streamed line-by-line, so the resolved configuration
    # goes to a sidecar instead of a trailing summary line
    meta = {
        "allocation": json.loads(vec.to_json()),
        "seed": args.seed,
        "val_fraction": args.val_fraction,
        "index_dir": args.index_dir,
    }
    _atomic_write(args.out + ".meta.json", json.dumps(meta, sort_keys=True, indent=2) + "\n")
    return 0


def _cmd_stats_compare(args) -> int:
    results = stats.load_results_csv(args.results)
    reports = stats.compare_strategies(results, args.a, args.b, args.family_size)
    header = _config_comment(args, ["results", "a", "b", "family_size", "out"])
    _atomic_write(args.out, header + "\n" + stats.report_to_csv(reports))
    sys.stdout.write(stats.report_to_text(reports))
    return 0


def _cmd_simulate_tournament(args) -> int:
    models, pools, cfgs, seeds = simulator.load_tournament_spec(args.spec)
    results = simulator.tournament(models, pools, cfgs, seeds)
    header = _config_comment(args, ["spec", "out"])
    _atomic_write(args.out, header + "\n" + stats.results_to_csv(results))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "similarity":
            return _cmd_similarity(args)
        if args.command == "allocate":
            return _cmd_allocate(args)
        if args.command == "manifest":
            return _cmd_manifest(args)
        if args.command == "stats":
            return _cmd_stats_compare(args)
        if args.command == "simulate":
            return _cmd_simulate_tournament(args)
        raise InputError(f"unknown command {args.command!r}")
    except LangAllocError as exc:
        print(f"langalloc: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"langalloc: i/o error: {exc}", file=sys.stderr)
        return IOFailure.exit_code


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
