"""Prize Winner Index: co-authorship-distance excellence scores for bibliographic datasets."""

from pwindex.analytics import (
    cumulative_distribution,
    ols_regress,
    spearman,
    threshold_sweep,
)
from pwindex.authors import MergeMap, apply_merge_map, list_authors, normalize_name
from pwindex.graph import UNREACHABLE, build_graph, count_coauthors, distances_from
from pwindex.ingest import (
    IngestReport,
    PaperRecord,
    dedupe_records,
    parse_wos_plaintext,
    parse_wos_tab,
)
from pwindex.pwi import (
    DistanceMode,
    LaureateSet,
    PwiRow,
    compute_pwi,
    paper_distance,
    relative_variants,
    weight,
)

__version__ = "0.1.0"

__all__ = [
    "DistanceMode",
    "IngestReport",
    "LaureateSet",
    "MergeMap",
    "PaperRecord",
    "PwiRow",
    "UNREACHABLE",
    "apply_merge_map",
    "build_graph",
    "compute_pwi",
    "count_coauthors",
    "cumulative_distribution",
    "dedupe_records",
    "distances_from",
    "list_authors",
    "normalize_name",
    "ols_regress",
    "paper_distance",
    "parse_wos_plaintext",
    "parse_wos_tab",
    "relative_variants",
    "spearman",
    "threshold_sweep",
    "weight",
]
