"""Command-line front end.

Subcommands:

* ``rank``   rank one corpus bundle and print a TSV ranking;
* ``eval``   compare the ranking strategies over a manifest of bundles;
* ``agg``    aggregate crowdsourced judgments into one grade per item;
* ``alpha``  inter-rater reliability of a judgments file.

Exit codes: 0 on success, 1 on any input problem, 2 when ``--strict`` is
set and an iterative stage failed to converge.  All numbers print with 12
significant digits and stdout is kept deterministic; timings and warnings
go to stderr.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

from .corpus import load_bundle
from .evaluation import compare_strategies
from .judgments import (
    filter_workers,
    format_qrels,
    krippendorff_alpha,
    load_judgments,
    load_qrels,
    majority_vote,
)
from .lsa import ConvergenceError
from .rank import STRATEGIES, PipelineParams, compute_priors, strategy
from .types import ConvergenceWarning, InputFormatError

__all__ = ["main"]


def _fmt(x: float) -> str:
    return format(x, ".12g")


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with code 1, not 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_pipeline_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--strategy",
        choices=STRATEGIES,
        default="LDRANK",
        help="teleport construction strategy (default: LDRANK)",
    )
    parser.add_argument(
        "--alpha", type=float, default=0.7,
        help="walk damping: weight of the graph vs the teleport (default: 0.7)",
    )
    parser.add_argument(
        "--ndim", type=int, default=1,
        help="latent dimensions kept by the truncated SVD (default: 1)",
    )
    parser.add_argument(
        "--stress", type=float, default=1000.0,
        help="row amplification applied to the resources under focus (default: 1000)",
    )
    parser.add_argument(
        "--tol", type=float, default=1e-10,
        help="L1 convergence tolerance of the power iteration (default: 1e-10)",
    )
    parser.add_argument(
        "--bidirectional", action="store_true",
        help="mirror every graph edge before walking",
    )
    parser.add_argument(
        "--lambda", dest="damping", type=float, default=0.5,
        help="consensus step size in (0, 1] (default: 0.5)",
    )
    parser.add_argument(
        "--consensus-eps", type=float, default=1e-9,
        help="consensus stopping threshold on the largest pairwise distance "
             "(default: 1e-9)",
    )
    parser.add_argument(
        "--consensus-max-iters", type=int, default=10000,
        help="consensus iteration cap (default: 10000)",
    )
    parser.add_argument(
        "--max-iters", type=int, default=1000,
        help="power iteration cap (default: 1000)",
    )
    parser.add_argument(
        "--strict", action="store_true",
        help="exit with code 2 if any iterative stage fails to converge",
    )


def _params_from(args) -> PipelineParams:
    return PipelineParams(
        alpha=args.alpha,
        ndim=args.ndim,
        stress=args.stress,
        tol=args.tol,
        bidirectional=args.bidirectional,
        damping=args.damping,
        consensus_epsilon=args.consensus_eps,
        consensus_max_iters=args.consensus_max_iters,
        power_max_iters=args.max_iters,
    )


def _drain_warnings(caught) -> bool:
    """Echo captured warnings to stderr; report whether any was a
    convergence failure."""
    nonconverged = False
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
        if issubclass(w.category, ConvergenceWarning):
            nonconverged = True
    return nonconverged


def _cmd_rank(args) -> int:
    bundle = load_bundle(args.graph, args.texts, args.serp, args.query)
    params = _params_from(args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        result = strategy(args.strategy, bundle, params)
        if args.emit_priors:
            priors = compute_priors(bundle, params)
            with open(args.emit_priors, "w", encoding="utf-8") as fh:
                fh.write("resource\tequi\thit\tsvd\tfinal\n")
                for i, rid in enumerate(bundle.resource_ids):
                    fh.write(
                        f"{rid}\t{_fmt(priors.equi.values[i])}"
                        f"\t{_fmt(priors.hit.values[i])}"
                        f"\t{_fmt(priors.svd.values[i])}"
                        f"\t{_fmt(priors.final.values[i])}\n"
                    )
    out = sys.stdout
    for pos, idx in enumerate(result.order, start=1):
        out.write(f"{pos}\t{result.resource_ids[idx]}\t{_fmt(result.scores.values[idx])}\n")
    if _drain_warnings(caught) and args.strict:
        return 2
    return 0


def _read_manifest(path):
    """Bundle manifest: per line, five tab-separated paths (graph, texts,
    serp, query, qrels), resolved relative to the manifest's directory."""
    base = Path(path).parent
    entries = []
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 5:
                raise InputFormatError(
                    path, line_no,
                    f"expected 5 tab-separated paths, got {len(fields)}",
                )
            entries.append(tuple(base / f for f in fields))
    return entries


def _cmd_eval(args) -> int:
    try:
        cutoffs = [int(tok) for tok in args.cutoffs.split(",") if tok.strip()]
    except ValueError:
        print(f"error: invalid cutoff list {args.cutoffs!r}", file=sys.stderr)
        return 1
    if not cutoffs:
        print("error: at least one cutoff required", file=sys.stderr)
        return 1
    if any(r < 1 for r in cutoffs):
        print("error: cutoffs must be positive", file=sys.stderr)
        return 1

    entries = _read_manifest(args.manifest)
    bundles, judgments = [], []
    for graph, texts, serp, query, qrels in entries:
        bundles.append(load_bundle(graph, texts, serp, query))
        judgments.append(load_qrels(qrels))

    params = _params_from(args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        table = compare_strategies(bundles, judgments, cutoffs, params)

    out = sys.stdout
    header = "strategy\t" + "\t".join(f"ndcg@{r}" for r in table.cutoffs)
    out.write(header + "\n")
    for name in table.strategies:
        if table.n_queries == 0:
            break
        cells = "\t".join(_fmt(table.mean_ndcg[name][r]) for r in table.cutoffs)
        out.write(f"{name}\t{cells}\n")
    if args.per_query and table.n_queries:
        out.write("\n")
        out.write("query\t" + header + "\n")
        for qi, row in enumerate(table.per_query_ndcg, start=1):
            for name in table.strategies:
                cells = "\t".join(_fmt(row[name][r]) for r in table.cutoffs)
                out.write(f"{qi}\t{name}\t{cells}\n")
    for name in table.strategies:
        if table.n_queries:
            print(
                f"timing: {name} mean {table.mean_seconds[name]:.6f}s",
                file=sys.stderr,
            )
    if _drain_warnings(caught) and args.strict:
        return 2
    return 0


def _cmd_agg(args) -> int:
    judgments = load_judgments(args.judgments)
    if args.filter_threshold is not None:
        judgments = filter_workers(judgments, args.filter_threshold)
    graded = majority_vote(judgments, tie_break=args.tie_break)
    sys.stdout.write(format_qrels(graded))
    return 0


def _cmd_alpha(args) -> int:
    judgments = load_judgments(args.judgments)
    if args.filter_threshold is not None:
        judgments = filter_workers(judgments, args.filter_threshold)
    print(_fmt(krippendorff_alpha(judgments)))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="ldrank",
        description=(
            "Query-biased ranking of linked-data resources: text-derived "
            "priors pooled into the teleport vector of a damped random walk."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_rank = sub.add_parser(
        "rank",
        help="rank one corpus bundle",
        description=(
            "Rank the resources of one corpus bundle and print "
            "rank<TAB>resource-id<TAB>score lines."
        ),
    )
    p_rank.add_argument("graph", help="tab-separated subject/predicate/object triples")
    p_rank.add_argument("texts", help="JSON Lines resource texts ({id, text})")
    p_rank.add_argument("serp", help="tab-separated rank/doc-id/resource-list page")
    p_rank.add_argument("query", help="query resource ids, one per line")
    _add_pipeline_flags(p_rank)
    p_rank.add_argument(
        "--emit-priors", metavar="PATH",
        help="also write the prior distributions and their consensus as TSV",
    )
    p_rank.set_defaults(func=_cmd_rank)

    p_eval = sub.add_parser(
        "eval",
        help="compare strategies over a manifest of bundles",
        description=(
            "Run every strategy over the bundles listed in MANIFEST (five "
            "tab-separated paths per line: graph, texts, serp, query, qrels) "
            "and print mean NDCG per strategy; timings go to stderr."
        ),
    )
    p_eval.add_argument("manifest", help="bundle manifest file")
    p_eval.add_argument(
        "--cutoffs", required=True,
        help="comma-separated NDCG cutoffs, e.g. 1,3,5",
    )
    p_eval.add_argument(
        "--per-query", action="store_true",
        help="also print the per-query NDCG table",
    )
    _add_pipeline_flags(p_eval)
    p_eval.set_defaults(func=_cmd_eval)

    p_agg = sub.add_parser(
        "agg",
        help="aggregate crowdsourced judgments to one grade per item",
        description=(
            "Majority-vote a JSON Lines judgments file into item<TAB>grade "
            "lines, optionally filtering unreliable workers first."
        ),
    )
    p_agg.add_argument("judgments", help="JSON Lines judgments file")
    p_agg.add_argument(
        "--filter-threshold", type=float, nargs="?", const=0.412, default=None,
        help="drop workers whose majority-disagreement rate exceeds this "
             "(bare flag: 0.412)",
    )
    p_agg.add_argument(
        "--tie-break", choices=("highest-value", "mean-trust"),
        default="highest-value",
        help="tie handling for split votes (default: highest-value)",
    )
    p_agg.set_defaults(func=_cmd_agg)

    p_alpha = sub.add_parser(
        "alpha",
        help="inter-rater reliability of a judgments file",
        description=(
            "Print the chance-corrected agreement of a JSON Lines judgments "
            "file, using the graded-relevance distance between grades."
        ),
    )
    p_alpha.add_argument("judgments", help="JSON Lines judgments file")
    p_alpha.add_argument(
        "--filter-threshold", type=float, nargs="?", const=0.412, default=None,
        help="apply worker filtering before measuring agreement "
             "(bare flag: 0.412)",
    )
    p_alpha.set_defaults(func=_cmd_alpha)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except (OSError, InputFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
