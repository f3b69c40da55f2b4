"""Command-line pipeline: motifs, kernel, mssm, eval, selftest subcommands."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .evaluate import EvalConfig, cross_validate, report_json
from .fixtures import tiny_dataset  # noqa: F401  (handy in --help examples)
from .molio import MissingInputError, ParseError, canonical_json, load_json_graphs, load_tudataset
from .motif import motif_graphs_for_dataset
from .patterns import load_pattern_table
from .selftest import run_selftest
from .simgraph import (
    build_mssm_graph,
    compute_kernel_matrix,
    export_mssm,
    load_gram,
    quantize_scores,
    save_gram,
)
from .spkernel import KernelParams

__all__ = ["run", "main"]

log = logging.getLogger("mssm")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; the contract here is 1.
    def error(self, message):
        raise _UsageError(message)


def _build_parser():
    parser = _Parser(prog="mssm", description="Motif similarity graph pipeline")

    data = argparse.ArgumentParser(add_help=False)
    data.add_argument("--data", required=True, help="dataset path (TU directory or JSON file)")
    data.add_argument("--format", choices=("tu", "json"), default="tu", help="dataset format")
    data.add_argument("--patterns", help="functional-group pattern table (JSON)")

    kernel = argparse.ArgumentParser(add_help=False)
    kernel.add_argument("--c", type=int, default=2, help="length tolerance")
    kernel.add_argument("--wl-iters", type=int, default=3, help="refinement iteration cap")
    kernel.add_argument("--epsilon", type=float, default=1e-6, help="covariance ridge")
    kernel.add_argument(
        "--position-variant", choices=("mwl", "edit"), default="mwl",
        help="position similarity: refinement+Mahalanobis or edit distance",
    )
    kernel.add_argument("--threads", type=int, default=1, help="worker count (0 = auto)")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("motifs", parents=[data], help="dump motif dictionary and motif graphs")
    p.add_argument("--out", required=True, help="output JSON path")

    p = sub.add_parser("kernel", parents=[data, kernel], help="compute and cache the Gram matrix")
    p.add_argument("--out", required=True, help="Gram cache path")

    p = sub.add_parser("mssm", parents=[data, kernel], help="build and export the similarity graph")
    p.add_argument("--out", required=True, help="output path")
    p.add_argument("--export-format", choices=("json", "tsv"), default="json")
    p.add_argument("--use-cache", help="load the Gram matrix from a cache file")

    p = sub.add_parser("eval", parents=[data, kernel], help="kernel-kNN cross-validation")
    p.add_argument("--k", type=int, default=5, help="neighbor count")
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--weighting", choices=("raw_kernel", "mssm_weight"), default="raw_kernel")
    p.add_argument("--sweep-c", help="comma-separated c values; one report per value")
    p.add_argument("--use-cache", help="load the Gram matrix from a cache file")
    p.add_argument("--out", help="report path (stdout when omitted)")

    sub.add_parser("selftest", help="run the built-in oracle checks")
    return parser


def _load_dataset(args):
    if args.format == "tu":
        return load_tudataset(args.data)
    return load_json_graphs(args.data)


def _load_patterns(args):
    if args.patterns is None:
        return ()
    return load_pattern_table(args.patterns)


def _kernel_params(args, c=None):
    return KernelParams(
        c=args.c if c is None else c,
        wl_iterations=args.wl_iters,
        epsilon=args.epsilon,
        position_variant=args.position_variant,
    )


def _motifs_payload(dataset, dictionary, graphs):
    kinds = {}
    molecules = []
    for g in graphs:
        molecules.append(
            {
                "index": g.source_molecule,
                "class": g.class_label,
                "motifs": [
                    {
                        "kind": m.kind.value,
                        "label": m.canonical_label,
                        "label_id": dictionary.label_alphabet[m.canonical_label],
                        "atoms": sorted(m.node_indices),
                    }
                    for m in g.motifs
                ],
                "edges": [[u, v] for u, v in g.edges],
            }
        )
        for m in g.motifs:
            kinds[m.canonical_label] = m.kind.value
    return {
        "alphabet": dictionary.label_alphabet,
        "label_kinds": kinds,
        "molecules": molecules,
    }


def _gram_for(args, dataset, graphs):
    if getattr(args, "use_cache", None):
        gram = load_gram(args.use_cache)
        if gram.n != len(dataset):
            raise ValueError(
                f"cached Gram matrix is {gram.n}x{gram.n}, dataset has {len(dataset)} molecules"
            )
        return gram
    return compute_kernel_matrix(graphs, _kernel_params(args), threads=args.threads)


def _cmd_motifs(args):
    dataset = _load_dataset(args)
    dictionary, graphs = motif_graphs_for_dataset(dataset, _load_patterns(args))
    Path(args.out).write_text(
        canonical_json(_motifs_payload(dataset, dictionary, graphs)), encoding="utf-8"
    )
    log.info("wrote motif dump for %d molecules to %s", len(dataset), args.out)
    return 0


def _cmd_kernel(args):
    dataset = _load_dataset(args)
    _, graphs = motif_graphs_for_dataset(dataset, _load_patterns(args))
    gram = compute_kernel_matrix(graphs, _kernel_params(args), threads=args.threads)
    save_gram(gram, args.out)
    log.info("wrote %dx%d Gram cache to %s", gram.n, gram.n, args.out)
    return 0


def _cmd_mssm(args):
    dataset = _load_dataset(args)
    _, graphs = motif_graphs_for_dataset(dataset, _load_patterns(args))
    gram = _gram_for(args, dataset, graphs)
    weights = quantize_scores(gram)
    graph = build_mssm_graph(weights, graphs)
    export_mssm(graph, args.export_format, args.out)
    log.info("wrote similarity graph (%d edges) to %s", len(graph.edges), args.out)
    return 0


def _sweep_out_path(out, c):
    path = Path(out)
    return path.with_name(f"{path.stem}_c{c}{path.suffix or '.json'}")


def _cmd_eval(args):
    dataset = _load_dataset(args)
    patterns = _load_patterns(args)
    config = EvalConfig(k=args.k, folds=args.folds, seed=args.seed, weighting=args.weighting)

    c_values = [args.c]
    if args.sweep_c:
        try:
            c_values = [int(v) for v in args.sweep_c.split(",") if v.strip()]
        except ValueError:
            raise _UsageError(f"--sweep-c expects comma-separated integers, got {args.sweep_c!r}")
        if not c_values:
            raise _UsageError("--sweep-c lists no values")

    gram = None
    if args.use_cache:
        if args.sweep_c:
            raise _UsageError("--use-cache cannot serve a --sweep-c run (one cache, many c values)")
        gram = load_gram(args.use_cache)

    for c in c_values:
        report = cross_validate(
            dataset,
            _kernel_params(args, c=c),
            config,
            patterns=patterns,
            gram=gram,
            threads=args.threads,
        )
        text = report_json(report)
        if args.out:
            path = _sweep_out_path(args.out, c) if args.sweep_c else Path(args.out)
            Path(path).write_text(text, encoding="utf-8")
            log.info("wrote report (c=%d, mean accuracy %.4f) to %s", c, report.mean_accuracy, path)
        else:
            sys.stdout.write(text)
    return 0


def run(argv) -> int:
    """Entry point; returns 0 on success, 1 on validation errors, 2 on I/O errors."""
    level = os.environ.get("MSSM_LOG", "error").lower()
    logging.basicConfig(
        level={"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}.get(
            level, logging.ERROR
        ),
        format="%(levelname)s %(name)s: %(message)s",
    )

    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "selftest":
            return 0 if run_selftest() else 1
        handler = {
            "motifs": _cmd_motifs,
            "kernel": _cmd_kernel,
            "mssm": _cmd_mssm,
            "eval": _cmd_eval,
        }[args.command]
        return handler(args)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"mssm: error: {exc}", file=sys.stderr)
        return 1
    except MissingInputError as exc:
        print(f"mssm: i/o error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:  # includes ParseError
        print(f"mssm: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"mssm: i/o error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
