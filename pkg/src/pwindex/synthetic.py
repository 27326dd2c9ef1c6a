"""Synthetic co-authorship corpora for benchmarks and scale tests.

Team sizes are geometric; each author slot is a newcomer with probability
``p_new`` and otherwise an existing author picked in proportion to their
paper count, which gives the heavy-tailed productivity seen in real data.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from pwindex.ingest import PaperRecord


def synthetic_corpus(
    n_papers: int = 20_000,
    n_authors: int = 25_000,
    n_laureates: int = 20,
    seed: int = 0,
    mean_team: float = 3.0,
) -> tuple[list[PaperRecord], list[str]]:
    """Return ``(records, laureate_keys)``; laureates are the most prolific authors.

    ``n_authors`` is a target; the realized count lands close to it.
    """
    rng = np.random.default_rng(seed)
    sizes = rng.geometric(1.0 / mean_team, size=n_papers)
    p_new = min(1.0, n_authors / sizes.sum())
    # Slot list: each past appearance is one lottery ticket.
    tickets: list[int] = []
    next_id = 0
    papers: list[list[int]] = []
    for size in sizes:
        team: list[int] = []
        for _ in range(size):
            if not tickets or rng.random() < p_new:
                a = next_id
                next_id += 1
            else:
                a = tickets[int(rng.integers(len(tickets)))]
            if a not in team:
                team.append(a)
        tickets.extend(team)
        papers.append(team)

    keys = [f"AUTHOR{i:06d} X" for i in range(next_id)]
    records = [
        PaperRecord(
            record_id=f"SYN:{j:07d}",
            raw_authors=[keys[a] for a in team],
            author_keys=[keys[a] for a in team],
            pub_year=2000 + j % 23,
            doc_type="Article",
        )
        for j, team in enumerate(papers)
    ]
    counts = np.bincount(np.array(tickets), minlength=next_id)
    top = np.argsort(-counts, kind="stable")[:n_laureates]
    return records, [keys[i] for i in top]


def write_tab_export(records: list[PaperRecord], path: str | Path) -> None:
    """Write records as a minimal tab-delimited WoS export."""
    lines = ["PT\tAU\tPY\tDT\tUT"]
    for r in records:
        lines.append(f"J\t{'; '.join(r.raw_authors)}\t{r.pub_year or ''}\t{r.doc_type}\t{r.record_id}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
