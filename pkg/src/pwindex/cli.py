"""Command line front end.

    pwindex list-authors --input savedrecs.txt
    pwindex compute --input a.txt --input b.txt --laureates medal.txt --out pwi.csv
    pwindex correlate --input a.txt --scores ptop10.csv --thresholds 1,10,20
    pwindex distribution --input a.txt --out ecdf.csv
    pwindex regress --input a.txt --out-format json

Data goes to ``--out`` (or stdout); the run summary and warnings go to
stderr. Exit codes: 0 ok, 2 input/output problem, 3 unusable file format
or configuration, 4 nothing left to correlate.
"""

from __future__ import annotations

import argparse
import io
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from pwindex import __version__, _kernels
from pwindex.analytics import (
    DEFAULT_THRESHOLDS,
    AnalyticsError,
    cumulative_distribution,
    load_scores,
    regress_rows,
    threshold_sweep,
)
from pwindex.authors import MergeMap, MergeMapError, list_authors, normalize_records, write_author_table
from pwindex.graph import build_graph, write_edge_list
from pwindex.ingest import FormatError, load_files
from pwindex.pwi import (
    DistanceMode,
    LaureateSet,
    compute_pwi,
    relative_variants,
    rows_to_json,
    write_rows_csv,
)

log = logging.getLogger("pwindex")

EXIT_OK = 0
EXIT_IO = 2
EXIT_FORMAT = 3
EXIT_EMPTY_JOIN = 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    inputs: list[Path] = field(default_factory=list)
    format: str = "auto"
    merge_map: Optional[Path] = None
    laureates: Optional[Path] = None
    mode: DistanceMode = DistanceMode.REALIZED
    max_d: Optional[int] = None
    out: Optional[Path] = None
    out_format: str = "csv"
    thresholds: tuple[int, ...] = DEFAULT_THRESHOLDS
    scores: Optional[Path] = None
    edges: Optional[Path] = None
    ingest_report: Optional[Path] = None


def _load(config: RunConfig):
    if not config.inputs:
        raise CliError("no input files given (use --input)", EXIT_IO)
    for p in config.inputs:
        if not p.is_file():
            raise CliError(f"cannot read input file {p}", EXIT_IO)
    merge_map = None
    if config.merge_map is not None:
        try:
            merge_map = MergeMap.read_csv(config.merge_map)
        except OSError as exc:
            raise CliError(f"cannot read merge map: {exc}", EXIT_IO) from exc
        except MergeMapError as exc:
            raise CliError(str(exc), EXIT_FORMAT) from exc
    try:
        records, report = load_files(config.inputs, config.format)
    except OSError as exc:
        raise CliError(f"cannot read input: {exc}", EXIT_IO) from exc
    except (FormatError, UnicodeDecodeError) as exc:
        raise CliError(f"format error: {exc}", EXIT_FORMAT) from exc
    log.info(report.summary())
    if config.ingest_report is not None:
        config.ingest_report.write_text(report.to_json() + "\n", encoding="utf-8")
    records = normalize_records(records, merge_map)
    return records, merge_map


def _laureates(config: RunConfig, merge_map) -> LaureateSet:
    try:
        if config.laureates is None:
            laureates = LaureateSet.default()
        else:
            laureates = LaureateSet.read(config.laureates)
    except OSError as exc:
        raise CliError(f"cannot read laureate list: {exc}", EXIT_IO) from exc
    except ValueError as exc:
        raise CliError(f"laureate list: {exc}", EXIT_FORMAT) from exc
    return laureates.merged(merge_map)


def _pwi_rows(config: RunConfig):
    records, merge_map = _load(config)
    laureates = _laureates(config, merge_map)
    graph = build_graph(records)
    rows = relative_variants(
        compute_pwi(records, laureates, config.mode, config.max_d, graph=graph)
    )
    matched = sum(1 for k in laureates.keys if k in graph.index)
    log.info(
        "records: %d, authors: %d, laureates matched: %d of %d, mode: %s, backend: %s",
        len(records), graph.n_nodes, matched, len(laureates), config.mode.value, _kernels.backend(),
    )
    if laureates.keys and matched == 0:
        log.warning("WARNING: none of the %d laureates occurs in the data; all PWI values are 0",
                    len(laureates))
    if config.edges is not None:
        with open(config.edges, "w", newline="", encoding="utf-8") as fh:
            write_edge_list(graph, fh)
    return rows


def cmd_list_authors(config: RunConfig) -> str:
    records, _ = _load(config)
    rows = list_authors(records)
    if config.out_format == "json":
        import json

        return json.dumps(
            [{"author": r.author, "papers": r.papers, "coauthors": r.coauthors} for r in rows],
            indent=2,
        ) + "\n"
    buf = io.StringIO()
    write_author_table(rows, buf)
    return buf.getvalue()


def cmd_compute(config: RunConfig) -> str:
    rows = _pwi_rows(config)
    if config.out_format == "json":
        return rows_to_json(rows) + "\n"
    buf = io.StringIO()
    write_rows_csv(rows, buf)
    return buf.getvalue()


def cmd_correlate(config: RunConfig) -> str:
    if config.scores is None:
        raise CliError("correlate needs --scores", EXIT_IO)
    rows = _pwi_rows(config)
    try:
        scores = load_scores(config.scores)
    except OSError as exc:
        raise CliError(f"cannot read scores: {exc}", EXIT_IO) from exc
    except AnalyticsError as exc:
        raise CliError(str(exc), EXIT_FORMAT) from exc
    if not any(r.author in scores for r in rows):
        raise CliError("no author in the PWI output has a score", EXIT_EMPTY_JOIN)
    try:
        report = threshold_sweep(rows, scores, config.thresholds)
    except AnalyticsError as exc:
        raise CliError(str(exc), EXIT_FORMAT) from exc
    log.info("%d authors without a score were left out", report.missing_scores)
    if config.out_format == "json":
        return report.to_json() + "\n"
    buf = io.StringIO()
    report.to_csv(buf)
    return buf.getvalue()


def cmd_distribution(config: RunConfig) -> str:
    rows = _pwi_rows(config)
    if not rows:
        raise CliError("no authors in the data", EXIT_EMPTY_JOIN)
    dist = cumulative_distribution(rows)
    if config.out_format == "json":
        return dist.to_json() + "\n"
    buf = io.StringIO()
    dist.to_csv(buf)
    return buf.getvalue()


def cmd_regress(config: RunConfig) -> str:
    rows = _pwi_rows(config)
    try:
        report = regress_rows(rows)
    except AnalyticsError as exc:
        raise CliError(f"regression: {exc}", EXIT_EMPTY_JOIN) from exc
    if config.out_format == "json":
        return report.to_json() + "\n"
    buf = io.StringIO()
    report.to_csv(buf)
    return buf.getvalue()


COMMANDS = {
    "list-authors": cmd_list_authors,
    "compute": cmd_compute,
    "correlate": cmd_correlate,
    "distribution": cmd_distribution,
    "regress": cmd_regress,
}


def _thresholds(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad threshold list {text!r}") from None
    if not values or list(values) != sorted(values):
        raise argparse.ArgumentTypeError("thresholds must be a non-empty ascending list")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pwindex", description="Prize Winner Index")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", action="append", type=Path, default=[],
                        help="WoS export file (repeatable)")
    common.add_argument("--format", choices=["auto", "tab", "plaintext"], default="auto")
    common.add_argument("--merge-map", type=Path, help="CSV of variant,canonical author keys")
    common.add_argument("--out", type=Path, help="output file (default: stdout)")
    common.add_argument("--out-format", choices=["csv", "json"], default="csv")
    common.add_argument("--ingest-report", type=Path, help="write the ingest report as JSON here")
    common.add_argument("-q", "--quiet", action="store_true", help="only print warnings")

    pwi = argparse.ArgumentParser(add_help=False)
    pwi.add_argument("--laureates", type=Path,
                     help="laureate list, one name per line (default: Price Medal recipients)")
    pwi.add_argument("--mode", choices=[m.value for m in DistanceMode], default="realized")
    pwi.add_argument("--max-d", type=int, help="ignore distances above this")
    pwi.add_argument("--edges", type=Path, help="also write the co-author edge list here")

    sub.add_parser("list-authors", parents=[common], help="author keys with paper/co-author counts")
    sub.add_parser("compute", parents=[common, pwi], help="PWI for every author")
    corr = sub.add_parser("correlate", parents=[common, pwi],
                          help="Spearman rho of PWI vs. external scores")
    corr.add_argument("--scores", type=Path, help="CSV author,score")
    corr.add_argument("--thresholds", type=_thresholds, default=DEFAULT_THRESHOLDS,
                      help="minimum paper counts, comma separated (default 1,10,20,30,40,50)")
    sub.add_parser("distribution", parents=[common, pwi], help="ECDF of PWI by laureate status")
    sub.add_parser("regress", parents=[common, pwi], help="OLS of PWI on papers/co-authors/laureate")
    return parser


def _config(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        inputs=list(ns.input),
        format=ns.format,
        merge_map=ns.merge_map,
        laureates=getattr(ns, "laureates", None),
        mode=DistanceMode(getattr(ns, "mode", "realized")),
        max_d=getattr(ns, "max_d", None),
        out=ns.out,
        out_format=ns.out_format,
        thresholds=getattr(ns, "thresholds", DEFAULT_THRESHOLDS),
        scores=getattr(ns, "scores", None),
        edges=getattr(ns, "edges", None),
        ingest_report=ns.ingest_report,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    ns = build_parser().parse_args(argv)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    root = logging.getLogger("pwindex")
    root.handlers[:] = [handler]
    root.setLevel(logging.WARNING if ns.quiet else logging.INFO)
    root.propagate = False

    config = _config(ns)
    if config.max_d is not None and config.max_d < 0:
        print("pwindex: --max-d must be non-negative", file=sys.stderr)
        return EXIT_FORMAT
    try:
        text = COMMANDS[ns.command](config)
        if config.out is None:
            sys.stdout.write(text)
        else:
            config.out.write_text(text, encoding="utf-8")
    except CliError as exc:
        print(f"pwindex: {exc}", file=sys.stderr)
        return exc.code
    except OSError as exc:
        print(f"pwindex: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
