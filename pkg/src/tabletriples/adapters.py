"""Converters that bring external sources into the common tripleset format.

Three inputs are supported: dialogue-act meaning representations like
``name[Alimentum], area[city centre]``, WebNLG-style XML entry documents, and
question/SQL pairs aligned back onto table rows. Rejected records come back
as ``Dropped`` / ``Unaligned`` values rather than exceptions; bad syntax is
an error.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import MalformedEntryError, ParseError
from .formats import read_xml
from .tables import Table
from .triples import (
    Annotator,
    CorpusEntry,
    Highlight,
    Provenance,
    Realization,
    Triple,
    TripleSet,
)


@dataclass(frozen=True)
class Dropped:
    reason: str


@dataclass(frozen=True)
class Unaligned:
    reason: str


@dataclass(frozen=True)
class MeaningRepresentation:
    slots: tuple[tuple[str, str], ...]  # (slot name, value) in source order


def parse_mr(text: str) -> MeaningRepresentation:
    """Parse ``name[value], name[value], ...`` with balanced brackets."""
    slots: list[tuple[str, str]] = []
    i = 0
    n = len(text)
    while i < n:
        open_br = text.find("[", i)
        if open_br == -1:
            if text[i:].strip():
                raise ParseError(f"trailing text without a slot: {text[i:]!r}")
            break
        name = text[i:open_br].strip().lstrip(",").strip()
        if not name:
            raise ParseError(f"missing slot name near position {i} in {text!r}")
        depth = 1
        j = open_br + 1
        while j < n and depth:
            if text[j] == "[":
                depth += 1
            elif text[j] == "]":
                depth -= 1
            j += 1
        if depth:
            raise ParseError(f"unbalanced brackets in {text!r}")
        slots.append((name, text[open_br + 1 : j - 1]))
        i = j
    if not slots:
        raise ParseError(f"no slots found in {text!r}")
    return MeaningRepresentation(slots=tuple(slots))


def e2e_to_tripleset(mr: MeaningRepresentation) -> TripleSet | Dropped:
    """Subject = the name slot's value; one triple per remaining slot."""
    subject = next((value for name, value in mr.slots if name == "name"), None)
    if subject is None:
        return Dropped("no name slot")
    triples = tuple(
        Triple(subject=subject, predicate=name, object=value)
        for name, value in mr.slots
        if name != "name"
    )
    if not triples:
        return Dropped("name slot only, nothing to describe")
    return TripleSet(triples=triples, provenance=Provenance.E2E)


def webnlg_ingest(document: str) -> list[CorpusEntry]:
    """Read an XML entry document, keeping category, eid, and all texts."""
    entries = read_xml(document)
    out = []
    for entry in entries:
        if not entry.realizations:
            raise MalformedEntryError("entry has no lex texts", eid=entry.eid)
        out.append(
            CorpusEntry(
                tripleset=TripleSet(
                    triples=entry.tripleset.triples, provenance=Provenance.WEBNLG
                ),
                realizations=tuple(
                    Realization(
                        text=r.text,
                        annotator=Annotator.EXTERNAL_DATASET,
                        comment=r.comment,
                    )
                    for r in entry.realizations
                ),
                category=entry.category,
                eid=entry.eid,
            )
        )
    return out


AGGREGATE_KEYWORDS = (
    "MAX",
    "MIN",
    "COUNT",
    "SUM",
    "AVG",
    "JOIN",
    "INTERSECT",
    "UNION",
    "GROUP BY",
    "ORDER BY",
)

_STRING_LITERAL = re.compile(r"'[^']*'|\"[^\"]*\"")


@dataclass(frozen=True)
class SqlQuery:
    raw: str
    has_aggregate: bool
    select_columns: tuple[str, ...]  # column names as written
    where_conditions: tuple[tuple[str, str], ...]  # (column name, value)

    @property
    def where_columns(self) -> tuple[str, ...]:
        return tuple(col for col, _ in self.where_conditions)


def _strip_literals(raw: str) -> str:
    return _STRING_LITERAL.sub(" ", raw)


def has_aggregate_command(raw: str) -> bool:
    """Keyword scan, case-insensitive, ignoring quoted string literals."""
    bare = _strip_literals(raw)
    for kw in AGGREGATE_KEYWORDS:
        pattern = r"\b" + r"\s+".join(map(re.escape, kw.split())) + r"\b"
        if re.search(pattern, bare, flags=re.IGNORECASE):
            return True
    return False


_SELECT_RE = re.compile(
    r"^\s*select\s+(?P<cols>.*?)\s+from\s+\S+(?:\s+where\s+(?P<where>.*?))?\s*;?\s*$",
    flags=re.IGNORECASE | re.DOTALL,
)


def parse_sql(raw: str) -> SqlQuery:
    """Parse a flat SELECT query; WHERE supports ANDed equality conditions.

    Queries containing aggregate commands are returned unstructured (they are
    rejected by filter_sql before any row alignment needs their clauses).
    """
    has_agg = has_aggregate_command(raw)
    if has_agg:
        return SqlQuery(raw=raw, has_aggregate=True, select_columns=(),
                        where_conditions=())
    m = _SELECT_RE.match(raw)
    if not m:
        raise ParseError(f"not a SELECT query: {raw!r}")
    cols = tuple(c.strip() for c in m.group("cols").split(",") if c.strip())
    conditions: list[tuple[str, str]] = []
    where = m.group("where")
    if where:
        for clause in re.split(r"\s+and\s+", where, flags=re.IGNORECASE):
            if "=" not in clause:
                raise ParseError(f"unsupported WHERE clause: {clause!r}")
            col, _, value = clause.partition("=")
            conditions.append((col.strip(), _unquote(value.strip())))
    return SqlQuery(
        raw=raw,
        has_aggregate=has_agg,
        select_columns=cols,
        where_conditions=tuple(conditions),
    )


def _unquote(value: str) -> str:
    if len(value) >= 2 and value[0] == value[-1] and value[0] in ("'", '"'):
        return value[1:-1]
    return value


def filter_sql(query: SqlQuery) -> bool:
    """True to keep the query; queries with aggregate commands are rejected."""
    return not query.has_aggregate


def align_row(query: SqlQuery, table: Table, answer: str) -> Highlight | Unaligned:
    """Match the query's WHERE conditions and answer back onto one table row.

    The matching row must be unique and the trimmed answer must hit exactly
    one cell of that row; anything else is Unaligned. Highlighted nodes are
    the WHERE columns plus the answer column.
    """
    name_to_index = {h: i for i, h in enumerate(table.headers)}
    condition_cols: list[int] = []
    for col_name, _ in query.where_conditions:
        if col_name not in name_to_index:
            return Unaligned(f"unknown column {col_name!r}")
        condition_cols.append(name_to_index[col_name])

    matches = []
    for row_index, row in enumerate(table.rows):
        if all(
            row[name_to_index[col]].strip() == value.strip()
            for col, value in query.where_conditions
        ):
            matches.append(row_index)
    if not matches:
        return Unaligned("no row matches the WHERE conditions")
    if len(matches) > 1:
        return Unaligned(f"{len(matches)} rows match the WHERE conditions")
    row_index = matches[0]

    row = table.rows[row_index]
    answer_cols = [
        i for i, cell in enumerate(row) if cell.strip() == answer.strip()
    ]
    if not answer_cols:
        return Unaligned("answer matches no cell in the aligned row")
    if len(answer_cols) > 1:
        return Unaligned("answer matches more than one cell in the aligned row")

    nodes = frozenset(condition_cols) | {answer_cols[0]}
    return Highlight(table_id=table.id, row_index=row_index, nodes=nodes)
