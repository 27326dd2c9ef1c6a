"""Validation statistics on PWI results.

Spearman correlation against an external score with paper-count
thresholds, empirical CDFs split by laureate status, and an OLS regression
of PWI on papers / co-authors / laureate flag.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from pwindex.authors import UnusableNameError, normalize_name
from pwindex.pwi import PwiRow

log = logging.getLogger(__name__)

DEFAULT_THRESHOLDS = (1, 10, 20, 30, 40, 50)


class AnalyticsError(ValueError):
    pass


def average_ranks(values: Sequence[float]) -> np.ndarray:
    """1-based ranks; tied values share the mean of the positions they span."""
    x = np.asarray(values, dtype=np.float64)
    order = np.argsort(x, kind="mergesort")
    xs = x[order]
    ranks = np.empty(x.size, dtype=np.float64)
    # Boundaries of runs of equal values in sorted order.
    edges = np.flatnonzero(np.diff(xs)) + 1
    starts = np.concatenate(([0], edges))
    ends = np.concatenate((edges, [x.size]))
    mean_rank = (starts + ends + 1) / 2.0
    ranks[order] = np.repeat(mean_rank, ends - starts)
    return ranks


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Spearman's rho as the Pearson correlation of average ranks."""
    if len(x) != len(y):
        raise AnalyticsError(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise AnalyticsError("need at least 2 pairs")
    rx, ry = average_ranks(x), average_ranks(y)
    rx -= rx.mean()
    ry -= ry.mean()
    sxx, syy = float(rx @ rx), float(ry @ ry)
    if sxx == 0 or syy == 0:
        raise AnalyticsError("constant input: correlation undefined")
    # One square root of the product keeps rho(x, x) exactly 1.
    rho = float(rx @ ry) / np.sqrt(sxx * syy)
    return float(max(-1.0, min(1.0, rho)))


# --------------------------------------------------------------------------
# correlation sweep


@dataclass(frozen=True)
class CorrelationRow:
    threshold: int
    rho: Optional[float]
    n_authors: int


@dataclass
class CorrelationReport:
    rows: list[CorrelationRow]
    # Authors with PWI output but no external score; excluded everywhere.
    missing_scores: int = 0

    def to_csv(self, stream) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["threshold", "rho", "n_authors"])
        for r in self.rows:
            writer.writerow([r.threshold, "" if r.rho is None else repr(r.rho), r.n_authors])

    def to_json(self) -> str:
        return json.dumps(
            {"rows": [asdict(r) for r in self.rows], "missing_scores": self.missing_scores},
            indent=2,
        )


def load_scores(path: str | Path) -> dict[str, float]:
    """Read an ``author,score`` CSV; names are normalized, header optional.

    Rows that normalize to the same key are summed (with a warning), which
    is what merging two name variants of a per-paper count should do.
    """
    scores: dict[str, float] = {}
    with open(path, newline="", encoding="utf-8-sig") as fh:
        for i, row in enumerate(csv.reader(fh)):
            if not row or not any(c.strip() for c in row):
                continue
            if len(row) != 2:
                raise AnalyticsError(f"{path}:{i + 1}: expected 2 columns")
            name, value = row
            try:
                score = float(value)
            except ValueError:
                if i == 0:
                    continue  # header
                raise AnalyticsError(f"{path}:{i + 1}: bad score {value!r}") from None
            if not np.isfinite(score):
                raise AnalyticsError(f"{path}:{i + 1}: score must be finite")
            try:
                key = normalize_name(name)
            except UnusableNameError:
                log.warning("%s:%d: unusable author name skipped", path, i + 1)
                continue
            if key in scores:
                log.warning("%s: several score rows for %s; summed", path, key)
                scores[key] += score
            else:
                scores[key] = score
    return scores


def threshold_sweep(
    rows: Iterable[PwiRow],
    scores: Mapping[str, float],
    thresholds: Sequence[int] = DEFAULT_THRESHOLDS,
) -> CorrelationReport:
    """Spearman rho between PWI and score among authors with >= t papers."""
    thresholds = list(thresholds)
    if not thresholds:
        raise AnalyticsError("no thresholds given")
    if thresholds != sorted(thresholds):
        raise AnalyticsError("thresholds must be ascending")
    rows = list(rows)
    joined = [(r.n_papers, r.pwi, scores[r.author]) for r in rows if r.author in scores]
    report = CorrelationReport([], missing_scores=len(rows) - len(joined))
    for t in thresholds:
        sel = [(p, s) for n, p, s in joined if n >= t]
        rho: Optional[float] = None
        if len(sel) >= 2:
            try:
                rho = spearman([p for p, _ in sel], [s for _, s in sel])
            except AnalyticsError as exc:
                log.warning("threshold %d: %s", t, exc)
        report.rows.append(CorrelationRow(t, rho, len(sel)))
    return report


# --------------------------------------------------------------------------
# regression


@dataclass
class RegressionReport:
    coefficients: dict[str, float]  # includes "constant"
    betas: dict[str, float]
    semipartial_r2: dict[str, float]
    r2: float
    f_stat: float
    n: int

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)

    def to_csv(self, stream) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["term", "coefficient", "beta", "semipartial_r2"])
        for name, b in self.coefficients.items():
            writer.writerow([
                name,
                repr(b),
                repr(self.betas[name]) if name in self.betas else "",
                repr(self.semipartial_r2[name]) if name in self.semipartial_r2 else "",
            ])
        writer.writerow(["r2", repr(self.r2), "", ""])
        writer.writerow(["f", repr(self.f_stat), "", ""])
        writer.writerow(["n", self.n, "", ""])


def _collinear(X: np.ndarray, names: Sequence[str]) -> list[str]:
    """Columns that do not raise the rank, plus the earlier ones they depend on."""
    tol_rank = np.linalg.matrix_rank
    kept: list[int] = []
    bad: set[int] = set()
    for j in range(X.shape[1]):
        if tol_rank(X[:, kept + [j]]) == len(kept) + 1:
            kept.append(j)
            continue
        bad.add(j)
        coef, *_ = np.linalg.lstsq(X[:, kept], X[:, j], rcond=None)
        scale = np.abs(coef).max() if coef.size else 0.0
        bad.update(kept[i] for i in np.flatnonzero(np.abs(coef) > 1e-9 * max(scale, 1.0)))
    return [names[j] for j in sorted(bad)]


def _fit(X: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, float]:
    """Least squares via QR; returns (coefficients, R^2)."""
    q, r = np.linalg.qr(X)
    b = np.linalg.solve(r, q.T @ y)
    resid = y - X @ b
    sst = float(((y - y.mean()) ** 2).sum())
    if sst == 0.0:
        return b, 0.0
    r2 = 1.0 - float(resid @ resid) / sst
    return b, min(1.0, max(0.0, r2))


def ols_regress(y: Sequence[float], predictors: Mapping[str, Sequence[float]]) -> RegressionReport:
    """Ordinary least squares with an intercept.

    Reports slopes, standardized betas (``b * sd(x) / sd(y)``), semipartial
    R^2 (drop in R^2 when a predictor is left out), overall R^2 and F.
    """
    yv = np.asarray(y, dtype=np.float64)
    names = list(predictors)
    k = len(names)
    n = yv.size
    if n <= k + 1:
        raise AnalyticsError(f"need more than {k + 1} observations, got {n}")
    cols = [np.asarray(predictors[m], dtype=np.float64) for m in names]
    if any(c.shape != yv.shape for c in cols):
        raise AnalyticsError("predictor length differs from y")
    X = np.column_stack([np.ones(n)] + cols)
    if np.linalg.matrix_rank(X) < k + 1:
        raise AnalyticsError("collinear columns: " + ", ".join(_collinear(X, ["constant"] + names)))

    sd_y = float(yv.std(ddof=1))
    if sd_y == 0.0:
        b = np.zeros(k + 1)
        b[0] = yv[0]
        r2 = 0.0
        semipartial = {m: 0.0 for m in names}
    else:
        b, r2 = _fit(X, yv)
        semipartial = {}
        for j, m in enumerate(names, start=1):
            reduced = np.delete(X, j, axis=1)
            _, r2_j = _fit(reduced, yv)
            semipartial[m] = max(0.0, r2 - r2_j)

    betas = {}
    for j, m in enumerate(names, start=1):
        betas[m] = float(b[j]) * float(cols[j - 1].std(ddof=1)) / sd_y if sd_y else 0.0
    if r2 >= 1.0:
        f_stat = float("inf")
    else:
        f_stat = (r2 / k) / ((1.0 - r2) / (n - k - 1))
    coefficients = {"constant": float(b[0])}
    coefficients.update({m: float(b[j]) for j, m in enumerate(names, start=1)})
    return RegressionReport(coefficients, betas, semipartial, r2, f_stat, n)


def regress_rows(rows: Sequence[PwiRow]) -> RegressionReport:
    """PWI on papers, co-authors and laureate flag."""
    return ols_regress(
        [r.pwi for r in rows],
        {
            "papers": [r.n_papers for r in rows],
            "coauthors": [r.n_coauthors for r in rows],
            "laureate": [1.0 if r.is_laureate else 0.0 for r in rows],
        },
    )


# --------------------------------------------------------------------------
# ECDF


@dataclass
class DistributionExport:
    laureates: list[tuple[float, float]] = field(default_factory=list)
    non_laureates: list[tuple[float, float]] = field(default_factory=list)

    def to_csv(self, stream) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["group", "pwi", "cum_prob"])
        for group, series in (("laureate", self.laureates), ("non_laureate", self.non_laureates)):
            for value, prob in series:
                writer.writerow([group, repr(value), repr(prob)])

    def to_json(self) -> str:
        return json.dumps(
            {"laureate": self.laureates, "non_laureate": self.non_laureates}, indent=2
        )


def ecdf(values: Iterable[float]) -> list[tuple[float, float]]:
    """One (value, share of values <= value) point per distinct value."""
    xs = np.sort(np.asarray(list(values), dtype=np.float64))
    if xs.size == 0:
        return []
    last = np.flatnonzero(np.diff(xs)).tolist() + [xs.size - 1]
    return [(float(xs[i]), (i + 1) / xs.size) for i in last]


def cumulative_distribution(rows: Iterable[PwiRow]) -> DistributionExport:
    rows = list(rows)
    if not rows:
        raise AnalyticsError("no rows")
    out = DistributionExport(
        laureates=ecdf(r.pwi for r in rows if r.is_laureate),
        non_laureates=ecdf(r.pwi for r in rows if not r.is_laureate),
    )
    if not out.laureates:
        log.warning("no laureates among the authors: laureate series is empty")
    if not out.non_laureates:
        log.warning("no non-laureate authors: non-laureate series is empty")
    return out
