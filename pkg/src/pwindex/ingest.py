"""Readers for Web of Science export files.

Two export flavours are supported: the tab-delimited table (one record per
line, two-letter tags in the header) and the field-tagged plain text format
(``FN``/``VR`` preamble, one ``TG value`` line per field, ``ER`` closes a
record, ``EF`` closes the file).
"""

from __future__ import annotations

import dataclasses
import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

log = logging.getLogger(__name__)

_YEAR = re.compile(r"^\d{4}$")
_TAG_LINE = re.compile(r"^([A-Z][A-Z0-9]) ?(.*)$")

# Plain-text fields holding one value per line rather than wrapped prose.
_LIST_TAGS = frozenset({"AU", "AF", "BA", "BF", "CA", "GP"})


class FormatError(ValueError):
    """The file is not a usable export (fatal for that file)."""


@dataclass
class PaperRecord:
    record_id: str
    raw_authors: list[str]
    author_keys: list[str] = field(default_factory=list)
    pub_year: Optional[int] = None
    doc_type: str = ""
    source_title: str = ""
    # True when record_id was made up from file name and line number.
    synthetic_id: bool = False


@dataclass
class IngestReport:
    records_read: int = 0
    records_kept: int = 0
    duplicates_dropped: int = 0
    skipped: int = 0
    warnings: list[tuple[str, str]] = field(default_factory=list)

    def warn(self, locator: str, message: str) -> None:
        self.warnings.append((locator, message))
        log.warning("%s: %s", locator, message)

    def merge(self, other: "IngestReport") -> None:
        self.records_read += other.records_read
        self.records_kept += other.records_kept
        self.duplicates_dropped += other.duplicates_dropped
        self.skipped += other.skipped
        self.warnings.extend(other.warnings)

    def to_json(self) -> str:
        data = dataclasses.asdict(self)
        data["warnings"] = [{"where": w, "message": m} for w, m in self.warnings]
        return json.dumps(data, indent=2)

    def summary(self) -> str:
        return (
            f"records read: {self.records_read}, kept: {self.records_kept}, "
            f"duplicates dropped: {self.duplicates_dropped}, skipped: {self.skipped}, "
            f"warnings: {len(self.warnings)}"
        )


def _decode(content: bytes) -> list[str]:
    text = content.decode("utf-8-sig")
    return text.splitlines()


def _split_names(value: str) -> list[str]:
    return [n.strip() for n in value.split(";") if n.strip()]


def _year(value: str) -> Optional[int]:
    value = value.strip()
    return int(value) if _YEAR.match(value) else None


def _make_record(fields: dict[str, str | list[str]], fallback_id: str) -> PaperRecord:
    def names(tag: str) -> list[str]:
        value = fields.get(tag)
        if value is None:
            return []
        if isinstance(value, list):
            out: list[str] = []
            for v in value:
                out.extend(_split_names(v))
            return out
        return _split_names(value)

    def text(tag: str) -> str:
        value = fields.get(tag, "")
        if isinstance(value, list):
            value = " ".join(value)
        return value.strip()

    authors = names("AF") or names("AU")
    ut = text("UT")
    return PaperRecord(
        record_id=ut or fallback_id,
        raw_authors=authors,
        pub_year=_year(text("PY")),
        doc_type=text("DT"),
        source_title=text("SO"),
        synthetic_id=not ut,
    )


def _keep(record: PaperRecord, locator: str, records: list, report: IngestReport) -> None:
    if record.raw_authors:
        records.append(record)
        report.records_kept += 1
    else:
        report.skipped += 1
        report.warn(locator, "record has no author names; dropped")


def parse_wos_tab(content: bytes, name: str = "input") -> tuple[list[PaperRecord], IngestReport]:
    """Parse a tab-delimited WoS export.

    ``name`` is used for warnings and, via its stem, for ids of records
    without a UT field (``<stem>:<line>``).
    """
    stem = Path(name).stem
    lines = _decode(content)
    report = IngestReport()
    records: list[PaperRecord] = []
    if not lines or not lines[0].strip():
        raise FormatError(f"{name}: missing header line")

    header = [h.strip() for h in lines[0].split("\t")]
    while header and not header[-1]:
        header.pop()
    if "AU" not in header:
        raise FormatError(f"{name}: header has no AU column")

    width = len(header)
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        report.records_read += 1
        locator = f"{name}:{lineno}"
        cells = line.split("\t")
        # Exports pad every row with a trailing tab; tolerate empty overflow.
        while len(cells) > width and not cells[-1].strip():
            cells.pop()
        if len(cells) != width:
            report.skipped += 1
            report.warn(locator, f"expected {width} fields, found {len(cells)}; line skipped")
            continue
        record = _make_record(dict(zip(header, cells)), f"{stem}:{lineno}")
        _keep(record, locator, records, report)
    return records, report


def parse_wos_plaintext(content: bytes, name: str = "input") -> tuple[list[PaperRecord], IngestReport]:
    """Parse a field-tagged plain-text WoS export."""
    stem = Path(name).stem
    report = IngestReport()
    records: list[PaperRecord] = []

    current: Optional[dict[str, str | list[str]]] = None
    start = 0
    tag: Optional[str] = None

    def close() -> None:
        nonlocal current
        assert current is not None
        record = _make_record(current, f"{stem}:{start}")
        _keep(record, f"{name}:{start}", records, report)
        current = None

    for lineno, line in enumerate(_decode(content), start=1):
        if not line.strip():
            continue
        if line.startswith("   ") and current is not None and tag is not None:
            value = line.strip()
            prev = current[tag]
            if isinstance(prev, list):
                prev.append(value)
            else:
                current[tag] = f"{prev} {value}"
            continue

        m = _TAG_LINE.match(line)
        if m is None:
            report.warn(f"{name}:{lineno}", "unrecognized line ignored")
            continue
        tag, value = m.group(1), m.group(2).strip()

        if tag == "ER":
            if current is not None:
                close()
            tag = None
            continue
        if tag == "EF":
            break
        if current is None:
            if tag in ("FN", "VR"):
                tag = None
                continue
            current = {}
            start = lineno
            report.records_read += 1
        if tag in _LIST_TAGS:
            current.setdefault(tag, [])
            lst = current[tag]
            assert isinstance(lst, list)
            lst.append(value)
        else:
            current[tag] = value

    if current is not None:
        report.warn(f"{name}:{start}", "final record not terminated by ER; kept")
        close()
    return records, report


def dedupe_records(records: Iterable[PaperRecord]) -> tuple[list[PaperRecord], int]:
    """Keep the first record per id. Synthesized ids live in their own namespace."""
    seen: set[tuple[bool, str]] = set()
    kept: list[PaperRecord] = []
    dropped = 0
    for rec in records:
        key = (rec.synthetic_id, rec.record_id)
        if key in seen:
            dropped += 1
            continue
        seen.add(key)
        kept.append(rec)
    return kept, dropped


def detect_format(content: bytes) -> str:
    """Return ``"plaintext"`` or ``"tab"`` by sniffing the first line."""
    text = content[:4096].decode("utf-8-sig", errors="replace")
    first = text.splitlines()[0] if text else ""
    if first.startswith("FN ") or first.startswith("VR "):
        return "plaintext"
    if "\t" in first:
        return "tab"
    raise FormatError("cannot detect export format from first line")


PARSERS = {"tab": parse_wos_tab, "plaintext": parse_wos_plaintext}


def load_files(paths: Iterable[str | Path], fmt: str = "auto") -> tuple[list[PaperRecord], IngestReport]:
    """Read, parse and dedupe several export files into one record list.

    Raises ``OSError`` for unreadable files and ``FormatError`` for files
    that cannot be parsed at all.
    """
    total = IngestReport()
    combined: list[PaperRecord] = []
    for path in paths:
        path = Path(path)
        content = path.read_bytes()
        flavour = detect_format(content) if fmt == "auto" else fmt
        try:
            parser = PARSERS[flavour]
        except KeyError:
            raise FormatError(f"unknown format {flavour!r}") from None
        recs, report = parser(content, name=str(path))
        combined.extend(recs)
        total.merge(report)
    kept, dropped = dedupe_records(combined)
    total.duplicates_dropped += dropped
    total.records_kept -= dropped
    return kept, total
