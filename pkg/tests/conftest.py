from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from pwindex import _kernels
from pwindex.ingest import PaperRecord

DATA = Path(__file__).parent / "data"


@pytest.fixture(params=["numba", "numpy"])
def backend(request, monkeypatch):
    """Run a test once per kernel implementation."""
    monkeypatch.setattr(_kernels, "USE_NUMBA", request.param == "numba")
    return request.param


def make_records(papers, prefix="P"):
    return [
        PaperRecord(record_id=f"{prefix}{i:04d}", raw_authors=list(p), author_keys=list(dict.fromkeys(p)))
        for i, p in enumerate(papers)
    ]


def random_papers(rng: np.random.Generator, max_authors=30, max_papers=40):
    n_authors = int(rng.integers(1, max_authors + 1))
    n_papers = int(rng.integers(1, max_papers + 1))
    names = [f"A{i:02d}" for i in range(n_authors)]
    papers = []
    for _ in range(n_papers):
        size = int(min(n_authors, rng.geometric(0.45)))
        papers.append([names[j] for j in rng.choice(n_authors, size=size, replace=False)])
    return papers


def random_laureates(rng: np.random.Generator, papers, max_laureates=3):
    present = sorted({a for p in papers for a in p})
    k = int(rng.integers(0, min(max_laureates, len(present)) + 1))
    chosen = [present[i] for i in rng.choice(len(present), size=k, replace=False)]
    # Now and then a laureate who never published in the data.
    if k < max_laureates and rng.random() < 0.1:
        chosen.append("NOBODY X")
    return chosen


@pytest.fixture
def worked_records():
    return make_records([["MAHLCK P"], ["BOEKHOUT H", "VAN DER WEIJDEN I", "WALTMAN L"]])


# --------------------------------------------------------------------------
# acceptance summary: one PASS/FAIL line per criterion


_ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call" and report.passed:
        return
    number, title = marker.args
    status = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
    prev = _ACCEPTANCE.get(number)
    if prev is None or prev[1] == "PASS":
        _ACCEPTANCE[number] = (title, status)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, status = _ACCEPTANCE[number]
        terminalreporter.write_line(f"[{status}] criterion {number:2d}: {title}")
