"""Command-line surface: classify, evaluate, sweep-k, discover-taxonomy, embeddings-info.

Exit status contract: 0 on success, 1 on usage errors (bad flags or flag
combinations), 2 on data errors (unreadable or malformed files, domain
failures). Every failure prints exactly one diagnostic line to stderr.
"""

from __future__ import annotations

import argparse
import sys
from typing import BinaryIO

import numpy as np

from . import evaluation, lingo
from .embeddings import DocVecTable, EmbeddingTable, load_docvecs, load_embeddings
from .errors import InputFormatError, TitlesimError, UnrepresentableError
from .evaluation import EvalCase
from .knn import (
    Cascade,
    KnnIndex,
    LabeledRef,
    build_cascade,
    build_index,
    classify,
    classify_cascade,
)
from .strategies import Strategy
from .text import CorpusStats, Document, build_corpus_stats


class UsageError(Exception):
    """Bad flags or flag combinations; maps to exit status 1."""


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags by default; route through UsageError
    # instead so the process exits 1 with a single diagnostic line.
    def error(self, message: str):
        raise UsageError(message)


def load_refs(source: BinaryIO) -> list[LabeledRef]:
    """Parse reference rows: id, title, fine_label, optional coarse_label, tab-separated."""
    refs: list[LabeledRef] = []
    seen: set[str] = set()
    data = source.read()
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    for lineno, line in enumerate(text.splitlines(), start=1):
        cols = line.split("\t")
        if len(cols) not in (3, 4):
            raise InputFormatError(
                f"line {lineno}: expected 3 or 4 tab-separated columns, got {len(cols)}"
            )
        ref_id, title, fine = cols[0], cols[1], cols[2]
        coarse = cols[3] if len(cols) == 4 else None
        if not ref_id:
            raise InputFormatError(f"line {lineno}: empty id")
        if not fine:
            raise InputFormatError(f"line {lineno}: empty fine_label")
        if coarse == "":
            raise InputFormatError(f"line {lineno}: empty coarse_label")
        if ref_id in seen:
            raise InputFormatError(f"line {lineno}: duplicate id '{ref_id}'")
        seen.add(ref_id)
        refs.append(
            LabeledRef(
                doc=Document.from_text(ref_id, title),
                fine_label=fine,
                coarse_label=coarse,
            )
        )
    if not refs:
        raise InputFormatError("no reference rows")
    return refs


def load_queries(source: BinaryIO) -> list[EvalCase]:
    """Parse query rows: id, title, gold_label, tab-separated."""
    cases: list[EvalCase] = []
    seen: set[str] = set()
    data = source.read()
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    for lineno, line in enumerate(text.splitlines(), start=1):
        cols = line.split("\t")
        if len(cols) != 3:
            raise InputFormatError(
                f"line {lineno}: expected 3 tab-separated columns, got {len(cols)}"
            )
        query_id, title, gold = cols
        if not query_id:
            raise InputFormatError(f"line {lineno}: empty id")
        if not gold:
            raise InputFormatError(f"line {lineno}: empty gold_label")
        if query_id in seen:
            raise InputFormatError(f"line {lineno}: duplicate id '{query_id}'")
        seen.add(query_id)
        cases.append(EvalCase(query=Document.from_text(query_id, title), gold_label=gold))
    if not cases:
        raise InputFormatError("no query rows")
    return cases


def _read_refs(path: str) -> list[LabeledRef]:
    try:
        with open(path, "rb") as fh:
            return load_refs(fh)
    except InputFormatError as exc:
        raise InputFormatError(f"{path}: {exc}") from None


def _read_queries(path: str) -> list[EvalCase]:
    try:
        with open(path, "rb") as fh:
            return load_queries(fh)
    except InputFormatError as exc:
        raise InputFormatError(f"{path}: {exc}") from None


def _read_embeddings(path: str) -> EmbeddingTable:
    try:
        with open(path, "rb") as fh:
            return load_embeddings(fh)
    except InputFormatError as exc:
        raise InputFormatError(f"{path}: {exc}") from None


def _read_docvecs(path: str) -> DocVecTable:
    try:
        with open(path, "rb") as fh:
            return load_docvecs(fh)
    except InputFormatError as exc:
        raise InputFormatError(f"{path}: {exc}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="titlesim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add_common(p: argparse.ArgumentParser, with_queries: bool = True) -> None:
        p.add_argument(
            "--strategy",
            required=True,
            choices=[s.value for s in Strategy],
            help="similarity strategy",
        )
        p.add_argument("--refs", required=True, help="reference TSV: id, title, fine_label[, coarse_label]")
        if with_queries:
            p.add_argument("--queries", required=True, help="query TSV: id, title, gold_label")
        p.add_argument("--embeddings", help="word vector file (avgw2v and wmd)")
        p.add_argument("--docvecs", help="document vector file (docvec)")
        p.add_argument("--prefetch", type=int, help="exact-distance prefetch size for pruned wmd search")
        p.add_argument("--cascade", action="store_true", help="coarse-to-vertical two-stage classification")
        p.add_argument("--q-threshold", type=float, default=0.8, help="squared singular mass retained by the coarse model")

    p_classify = sub.add_parser("classify", help="print one 'query_id<TAB>label' line per query")
    add_common(p_classify)
    p_classify.add_argument("--k", type=int, default=20, help="neighbors voted over")

    p_eval = sub.add_parser("evaluate", help="accuracy at a single k")
    add_common(p_eval)
    p_eval.add_argument("--k", type=int, default=20, help="neighbors voted over")
    p_eval.add_argument("--out", help="also write the one-row CSV here")

    p_sweep = sub.add_parser("sweep-k", help="accuracy for every k in a range, as CSV")
    add_common(p_sweep)
    p_sweep.add_argument("--k-min", type=int, default=1)
    p_sweep.add_argument("--k-max", type=int, default=20)
    p_sweep.add_argument("--out", help="CSV path (stdout when omitted)")

    p_disc = sub.add_parser("discover-taxonomy", help="print coarse clusters of the reference corpus")
    p_disc.add_argument("--refs", required=True, help="reference TSV")
    p_disc.add_argument("--q-threshold", type=float, default=0.8)

    p_info = sub.add_parser("embeddings-info", help="print vocabulary size, dimension, and norm summary")
    p_info.add_argument("--embeddings", required=True, help="word vector file")

    return parser


def _validate(args: argparse.Namespace) -> None:
    strategy_token = getattr(args, "strategy", None)
    if strategy_token is not None:
        strategy = Strategy.from_token(strategy_token)
        if strategy in (Strategy.AVG_W2V, Strategy.WMD) and not args.embeddings:
            raise UsageError(f"--strategy {strategy_token} requires --embeddings")
        if strategy is Strategy.DOC_VEC and not args.docvecs:
            raise UsageError("--strategy docvec requires --docvecs")
    if getattr(args, "k", None) is not None and args.k < 1:
        raise UsageError("--k must be >= 1")
    k_min = getattr(args, "k_min", None)
    k_max = getattr(args, "k_max", None)
    if k_min is not None and k_min < 1:
        raise UsageError("--k-min must be >= 1")
    if k_min is not None and k_max is not None and k_min > k_max:
        raise UsageError("--k-min must not exceed --k-max")
    prefetch = getattr(args, "prefetch", None)
    if prefetch is not None:
        k_floor = k_max if k_max is not None else args.k
        if prefetch < k_floor:
            raise UsageError("--prefetch must be >= the largest k searched")
    q = getattr(args, "q_threshold", None)
    if q is not None and not 0.0 < q <= 1.0:
        raise UsageError("--q-threshold must be in (0, 1]")


def _build_target(
    args: argparse.Namespace, refs: list[LabeledRef]
) -> tuple[KnnIndex | Cascade, CorpusStats | None]:
    strategy = Strategy.from_token(args.strategy)
    stats = None
    if strategy is Strategy.BOW_COSINE:
        stats = build_corpus_stats([ref.doc for ref in refs])
    table = _read_embeddings(args.embeddings) if args.embeddings else None
    docvecs = _read_docvecs(args.docvecs) if args.docvecs else None
    if args.cascade:
        target: KnnIndex | Cascade = build_cascade(
            refs,
            strategy,
            stats=stats,
            table=table,
            docvecs=docvecs,
            q=args.q_threshold,
        )
    else:
        target = build_index(refs, strategy, stats=stats, table=table, docvecs=docvecs)
    return target, stats


def _cmd_classify(args: argparse.Namespace) -> int:
    refs = _read_refs(args.refs)
    cases = _read_queries(args.queries)
    target, _ = _build_target(args, refs)
    out_lines = []
    for case in cases:
        try:
            if isinstance(target, Cascade):
                pred = classify_cascade(
                    target.coarse, target.verticals, case.query, k=args.k, prefetch=args.prefetch
                )
            else:
                pred = classify(target, case.query, k=args.k, prefetch=args.prefetch)
        except UnrepresentableError as exc:
            raise TitlesimError(f"query '{case.query.id}': {exc}") from None
        out_lines.append(f"{case.query.id}\t{pred.label}")
    print("\n".join(out_lines))
    return 0


def _cmd_evaluate(args: argparse.Namespace) -> int:
    refs = _read_refs(args.refs)
    cases = _read_queries(args.queries)
    target, _ = _build_target(args, refs)
    result = evaluation.sweep_k(
        target, cases, k_min=args.k, k_max=args.k, prefetch=args.prefetch
    )
    row = result.rows[0]
    print(
        f"accuracy={row.accuracy:.6f} n_queries={row.n_queries} n_skipped={row.n_skipped}"
    )
    if args.out:
        with open(args.out, "wb") as fh:
            evaluation.export_csv(result, fh)
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    refs = _read_refs(args.refs)
    cases = _read_queries(args.queries)
    target, _ = _build_target(args, refs)
    result = evaluation.sweep_k(
        target, cases, k_min=args.k_min, k_max=args.k_max, prefetch=args.prefetch
    )
    if args.out:
        with open(args.out, "wb") as fh:
            evaluation.export_csv(result, fh)
    else:
        evaluation.export_csv(result, sys.stdout.buffer)
        sys.stdout.buffer.flush()
    return 0


def _cmd_discover(args: argparse.Namespace) -> int:
    refs = _read_refs(args.refs)
    if not 0.0 < args.q_threshold <= 1.0:
        raise UsageError("--q-threshold must be in (0, 1]")
    model, _ = lingo.fit_cluster_model([ref.doc for ref in refs], q=args.q_threshold)
    out_lines = [
        f"{i}\t{cluster.label}\t{cluster.member_count}"
        for i, cluster in enumerate(model.clusters)
    ]
    print("\n".join(out_lines))
    return 0


def _cmd_info(args: argparse.Namespace) -> int:
    table = _read_embeddings(args.embeddings)
    print(f"{len(table.words)} {table.dim}")
    if table.matrix.shape[0]:
        norms = np.sqrt(np.sum(table.matrix * table.matrix, axis=1))
        print(
            f"norms min={norms.min():.6f} mean={norms.mean():.6f} max={norms.max():.6f}"
        )
    else:
        print("norms n/a")
    return 0


_COMMANDS = {
    "classify": _cmd_classify,
    "evaluate": _cmd_evaluate,
    "sweep-k": _cmd_sweep,
    "discover-taxonomy": _cmd_discover,
    "embeddings-info": _cmd_info,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _validate(args)
    except UsageError as exc:
        print(f"titlesim: {exc}", file=sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"titlesim: {exc}", file=sys.stderr)
        return 1
    except (TitlesimError, OSError) as exc:
        print(f"titlesim: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
