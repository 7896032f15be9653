"""Serialization: XML entry documents, internal JSONL, linearized strings.

The XML layout follows the WebNLG entry convention: an ``<entries>`` document
of ``<entry category eid size>`` elements, each with a ``modifiedtripleset``
of ``<mtriple>subject | predicate | object</mtriple>`` children and one
``<lex comment lid>`` child per realization. The writer fixes attribute
order and two-space indentation so output is stable enough for golden files;
the reader inverts the writer exactly.

Literal pipes inside triple fields would corrupt the ``" | "`` separator, so
they are escaped as the two-character sequence ``\\|`` (and backslash as
``\\\\``) inside mtriple text.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable
from xml.etree import ElementTree
from xml.sax.saxutils import escape, quoteattr

from .errors import MalformedEntryError
from .triples import (
    Annotator,
    CorpusEntry,
    Provenance,
    Realization,
    Triple,
    TripleSet,
)

SCHEMA_VERSION = 1

_ANNOTATOR_TAGS = {a.value for a in Annotator}


# --- pipe escaping ----------------------------------------------------------

def escape_field(text: str) -> str:
    return text.replace("\\", "\\\\").replace("|", "\\|")


def unescape_field(text: str) -> str:
    return text.replace("\\\\", "\x00").replace("\\|", "|").replace("\x00", "\\")


def _split_mtriple(text: str, eid: str | None) -> Triple:
    protected = text.replace("\\\\", "\x00").replace("\\|", "\x01")
    parts = protected.split(" | ")
    if len(parts) != 3:
        raise MalformedEntryError(
            f"mtriple does not have three ' | '-separated fields: {text!r}", eid=eid
        )
    restore = lambda s: s.replace("\x01", "|").replace("\x00", "\\")
    return Triple(*(restore(p) for p in parts))


# --- XML --------------------------------------------------------------------

def write_xml(entries: Iterable[CorpusEntry]) -> str:
    """Render entries as an XML document string."""
    lines = ['<?xml version="1.0" encoding="UTF-8"?>', "<entries>"]
    for entry in entries:
        attrs = [
            f"category={quoteattr(entry.category)}",
            f"eid={quoteattr(entry.eid)}",
            f"size={quoteattr(str(len(entry.tripleset.triples)))}",
        ]
        if entry.tripleset.provenance is not Provenance.OTHER:
            attrs.append(f"provenance={quoteattr(entry.tripleset.provenance.value)}")
        if entry.table_id is not None:
            attrs.append(f"table_id={quoteattr(entry.table_id)}")
        if entry.row_index is not None:
            attrs.append(f"row={quoteattr(str(entry.row_index))}")
        if entry.flags:
            attrs.append(f"flags={quoteattr(','.join(entry.flags))}")
        lines.append(f'  <entry {" ".join(attrs)}>')
        lines.append("    <modifiedtripleset>")
        for t in entry.tripleset.triples:
            body = " | ".join(
                escape_field(part) for part in (t.subject, t.predicate, t.object)
            )
            lines.append(f"      <mtriple>{escape(body)}</mtriple>")
        lines.append("    </modifiedtripleset>")
        for i, r in enumerate(entry.realizations, start=1):
            comment = r.comment if r.comment else r.annotator.value
            lines.append(
                f"    <lex comment={quoteattr(comment)} lid={quoteattr(f'Id{i}')}>"
                f"{escape(r.text)}</lex>"
            )
        lines.append("  </entry>")
    lines.append("</entries>")
    return "\n".join(lines) + "\n"


def read_xml(document: str) -> list[CorpusEntry]:
    """Parse an XML entry document; inverse of write_xml.

    Wrapper elements other than <entry> are tolerated, so documents wrapped
    in e.g. <benchmark><entries> parse as well. The size attribute must match
    the triple count.
    """
    try:
        root = ElementTree.fromstring(document)
    except ElementTree.ParseError as exc:
        raise MalformedEntryError(f"invalid XML: {exc}") from exc

    elements = [root] if root.tag == "entry" else root.iter("entry")
    entries = []
    for el in elements:
        eid = el.get("eid")
        if eid is None:
            raise MalformedEntryError("entry element has no eid attribute")
        category = el.get("category")
        size = el.get("size")
        if category is None or size is None:
            raise MalformedEntryError("missing category or size attribute", eid=eid)

        tripleset_el = el.find("modifiedtripleset")
        if tripleset_el is None:
            raise MalformedEntryError("entry has no modifiedtripleset", eid=eid)
        triples = tuple(
            _split_mtriple(mt.text or "", eid)
            for mt in tripleset_el.findall("mtriple")
        )
        try:
            declared = int(size)
        except ValueError:
            raise MalformedEntryError(f"size attribute {size!r} is not an integer", eid=eid)
        if declared != len(triples):
            raise MalformedEntryError(
                f"size attribute says {declared} but entry has {len(triples)} triples",
                eid=eid,
            )

        realizations = []
        for lex in el.findall("lex"):
            comment = lex.get("comment", "")
            if comment in _ANNOTATOR_TAGS:
                annotator, comment = Annotator(comment), ""
            else:
                annotator = Annotator.EXTERNAL_DATASET
            realizations.append(
                Realization(
                    text=(lex.text or "").strip(), annotator=annotator, comment=comment
                )
            )

        provenance = Provenance(el.get("provenance", Provenance.OTHER.value))
        flags_attr = el.get("flags", "")
        row = el.get("row")
        entries.append(
            CorpusEntry(
                tripleset=TripleSet(triples=triples, provenance=provenance),
                realizations=tuple(realizations),
                category=category,
                eid=eid,
                table_id=el.get("table_id"),
                row_index=int(row) if row is not None else None,
                flags=tuple(f for f in flags_attr.split(",") if f),
            )
        )
    return entries


# --- linearization ----------------------------------------------------------

def linearize(ts: TripleSet) -> str:
    """``<H> s <R> p <T> o`` per triple, single-space separated.

    The title predicate is rendered lowercase ``[title]`` in linearized
    strings (the subject token ``[TABLECONTEXT]`` keeps its casing).
    """
    if not ts.triples:
        raise ValueError("cannot linearize an empty tripleset")
    parts = []
    for t in ts.triples:
        predicate = "[title]" if t.predicate == "[TITLE]" else t.predicate
        parts.append(f"<H> {t.subject} <R> {predicate} <T> {t.object}")
    return " ".join(parts)


# --- internal JSONL ---------------------------------------------------------

def entry_to_dict(entry: CorpusEntry) -> dict:
    record = {
        "schema_version": SCHEMA_VERSION,
        "eid": entry.eid,
        "category": entry.category,
        "provenance": entry.tripleset.provenance.value,
        "triples": [[t.subject, t.predicate, t.object] for t in entry.tripleset.triples],
        "realizations": [
            {"text": r.text, "annotator": r.annotator.value, "comment": r.comment}
            for r in entry.realizations
        ],
    }
    if entry.table_id is not None:
        record["table_id"] = entry.table_id
    if entry.row_index is not None:
        record["row_index"] = entry.row_index
    if entry.flags:
        record["flags"] = list(entry.flags)
    return record


def entry_from_dict(record: dict) -> CorpusEntry:
    version = record.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise MalformedEntryError(
            f"unsupported schema version {version}", eid=record.get("eid")
        )
    return CorpusEntry(
        tripleset=TripleSet(
            triples=tuple(Triple(*t) for t in record["triples"]),
            provenance=Provenance(record.get("provenance", "other")),
        ),
        realizations=tuple(
            Realization(
                text=r["text"],
                annotator=Annotator(r.get("annotator", "internal")),
                comment=r.get("comment", ""),
            )
            for r in record["realizations"]
        ),
        category=record["category"],
        eid=record["eid"],
        table_id=record.get("table_id"),
        row_index=record.get("row_index"),
        flags=tuple(record.get("flags", ())),
    )


def write_entries_jsonl(entries: Iterable[CorpusEntry]) -> str:
    return "".join(
        json.dumps(entry_to_dict(e), ensure_ascii=False) + "\n" for e in entries
    )


def read_entries_jsonl(text: str) -> list[CorpusEntry]:
    return [
        entry_from_dict(json.loads(line))
        for line in text.splitlines()
        if line.strip()
    ]


def read_entries_file(path: str | Path) -> list[CorpusEntry]:
    return read_entries_jsonl(Path(path).read_text(encoding="utf-8"))
