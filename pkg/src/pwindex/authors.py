"""Author name keys, merge maps and per-author profiles.

Names are reduced to ``"LASTNAME INITIALS"`` keys, e.g. ``"van Raan, Anthony
F.J."`` becomes ``"VAN RAAN AFJ"``. This deliberately conflates homonyms;
splitting them is left to the user, who can also fold spelling variants into
one key with a merge map.
"""

from __future__ import annotations

import csv
import io
import logging
import re
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

from pwindex.ingest import PaperRecord

log = logging.getLogger(__name__)

_GIVEN_SPLIT = re.compile(r"[\s.\-,]+")
_LAST_SUFFIXES = frozenset({"JR", "SR", "II", "III"})
# II/III are left alone in the given-name part, where they can be initials.
_GIVEN_SUFFIXES = frozenset({"JR", "SR"})


class UnusableNameError(ValueError):
    pass


class MergeMapError(ValueError):
    pass


def _ascii_fold(text: str) -> str:
    decomposed = unicodedata.normalize("NFKD", text)
    return "".join(c for c in decomposed if not unicodedata.combining(c))


def _initials(tokens: Sequence[str]) -> str:
    out = []
    for tok in tokens:
        letters = "".join(c for c in tok if c.isalnum())
        if not letters:
            continue
        # An all-caps token is already a run of initials ("AFJ" in "Van Raan, AFJ").
        if letters.isupper():
            out.append(letters)
        elif letters.upper() not in _GIVEN_SUFFIXES:
            out.append(letters[0].upper())
    return "".join(out)


def normalize_name(raw: str) -> str:
    """Reduce a raw author name to its matching key."""
    if raw is None or not raw.strip():
        raise UnusableNameError("blank author name")
    text = _ascii_fold(raw.strip())

    if "," in text:
        last, given = text.split(",", 1)
        initials = _initials(_GIVEN_SPLIT.split(given))
    else:
        parts = text.split()
        if len(parts) > 1 and parts[-1].isupper():
            # Key-shaped input ("WALTMAN L"): the trailing block is kept as is.
            last, initials = " ".join(parts[:-1]), parts[-1].replace(".", "")
        elif len(parts) > 1:
            last, initials = " ".join(parts[:-1]), _initials(_GIVEN_SPLIT.split(parts[-1]))
        else:
            last, initials = text, ""

    last_tokens = [t for t in last.upper().split() if t.rstrip(".") not in _LAST_SUFFIXES]
    last_name = " ".join(last_tokens)
    if not last_name:
        raise UnusableNameError(f"no last name in {raw!r}")
    initials = initials.upper()
    return f"{last_name} {initials}" if initials else last_name


@dataclass
class MergeMap:
    """Variant key -> canonical key, closed under chaining."""

    entries: dict[str, str] = field(default_factory=dict)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]]) -> "MergeMap":
        raw: dict[str, str] = {}
        for variant, canonical in pairs:
            v, c = normalize_name(variant), normalize_name(canonical)
            if v == c:
                continue
            if v in raw and raw[v] != c:
                raise MergeMapError(f"{v!r} mapped to both {raw[v]!r} and {c!r}")
            raw[v] = c
        return cls(_close(raw))

    @classmethod
    def read_csv(cls, path: str | Path) -> "MergeMap":
        text = Path(path).read_text(encoding="utf-8-sig")
        return cls.from_pairs(_read_pairs(text))

    def __len__(self) -> int:
        return len(self.entries)

    def __call__(self, key: str) -> str:
        return self.entries.get(key, key)


def _read_pairs(text: str) -> list[tuple[str, str]]:
    pairs = []
    for i, row in enumerate(csv.reader(io.StringIO(text))):
        if not row or not any(cell.strip() for cell in row):
            continue
        if len(row) != 2:
            raise MergeMapError(f"merge map row {i + 1}: expected 2 columns, got {len(row)}")
        if i == 0 and [c.strip().lower() for c in row] == ["variant", "canonical"]:
            continue
        pairs.append((row[0], row[1]))
    return pairs


def _close(raw: Mapping[str, str]) -> dict[str, str]:
    closed: dict[str, str] = {}
    for start in raw:
        path = [start]
        node = raw[start]
        while node in raw:
            if node in path:
                cycle = path[path.index(node):] + [node]
                raise MergeMapError("cyclic merge map: " + " -> ".join(cycle))
            path.append(node)
            node = raw[node]
        closed[start] = node
    return closed


def apply_merge_map(keys: Iterable[str], merge_map: Optional[MergeMap]) -> list[str]:
    """Map variants to canonical keys and drop repeats, keeping first occurrence."""
    out: list[str] = []
    seen: set[str] = set()
    for key in keys:
        key = merge_map(key) if merge_map is not None else key
        if key not in seen:
            seen.add(key)
            out.append(key)
    return out


def normalize_records(
    records: Iterable[PaperRecord], merge_map: Optional[MergeMap] = None
) -> list[PaperRecord]:
    """Fill ``author_keys`` on each record, in place; returns the records kept.

    Unusable names are dropped with a warning, and so is a record left with
    no usable name at all.
    """
    kept = []
    for rec in records:
        keys = []
        for raw in rec.raw_authors:
            try:
                keys.append(normalize_name(raw))
            except UnusableNameError as exc:
                log.warning("%s: %s", rec.record_id, exc)
        rec.author_keys = apply_merge_map(keys, merge_map)
        if rec.author_keys:
            kept.append(rec)
        else:
            log.warning("%s: no usable author names; record dropped", rec.record_id)
    return kept


@dataclass
class AuthorProfile:
    key: str
    paper_ids: set[str] = field(default_factory=set)
    coauthors: set[str] = field(default_factory=set)


@dataclass(frozen=True)
class AuthorRow:
    author: str
    papers: int
    coauthors: int


def build_profiles(records: Iterable[PaperRecord]) -> dict[str, AuthorProfile]:
    profiles: dict[str, AuthorProfile] = {}
    for rec in records:
        for key in rec.author_keys:
            prof = profiles.get(key)
            if prof is None:
                prof = profiles[key] = AuthorProfile(key)
            prof.paper_ids.add(rec.record_id)
            prof.coauthors.update(k for k in rec.author_keys if k != key)
    return profiles


def list_authors(records: Iterable[PaperRecord]) -> list[AuthorRow]:
    """Paper and distinct co-author counts per key, sorted by key."""
    profiles = build_profiles(records)
    return [
        AuthorRow(k, len(p.paper_ids), len(p.coauthors))
        for k, p in sorted(profiles.items())
    ]


def write_author_table(rows: Iterable[AuthorRow], stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["author", "papers", "coauthors"])
    for row in rows:
        writer.writerow([row.author, row.papers, row.coauthors])
