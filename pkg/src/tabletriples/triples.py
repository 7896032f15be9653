"""Subtree completion, row instantiation, and triple extraction.

Highlighted nodes are completed to a connected subtree by walking every
highlight up to the lowest common ancestor of the whole set (inclusive).
Cell values are then placed into the tree for one row, and each non-root
node N of the subtree yields the triple (value of parent(N), label of N,
value of N). The subject comes from parent(N) even when the parent is not
part of the subtree.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import EmptyRealizationError, OversizeError
from .tables import ROOT, TITLE, NodeId, OntologyTree, Table

MAX_TRIPLES = 10

ValueAssignment = dict[NodeId, str]


class Provenance(str, Enum):
    WIKITABLEQUESTIONS = "wikitablequestions"
    WIKISQL = "wikisql"
    WEBNLG = "webnlg"
    E2E = "e2e"
    SYNTHETIC = "synthetic"
    OTHER = "other"


class Annotator(str, Enum):
    INTERNAL = "internal"
    MTURK = "mturk"
    AUTO_DECLARATIVE = "auto_declarative"
    EXTERNAL_DATASET = "external_dataset"


@dataclass(frozen=True)
class Highlight:
    table_id: str
    row_index: int
    nodes: frozenset[NodeId]

    def __post_init__(self):
        if not self.nodes:
            raise ValueError("highlight must contain at least one node")


@dataclass(frozen=True)
class Triple:
    subject: str
    predicate: str
    object: str


@dataclass(frozen=True)
class TripleSet:
    triples: tuple[Triple, ...]
    provenance: Provenance = Provenance.OTHER


@dataclass(frozen=True)
class Realization:
    text: str
    annotator: Annotator = Annotator.INTERNAL
    comment: str = ""


@dataclass(frozen=True)
class CorpusEntry:
    tripleset: TripleSet
    realizations: tuple[Realization, ...]
    category: str
    eid: str
    table_id: str | None = None
    row_index: int | None = None
    flags: tuple[str, ...] = ()

    @property
    def size(self) -> int:
        return len(self.tripleset.triples)


def _path_to_root(tree: OntologyTree, node: NodeId) -> list[NodeId]:
    path = [node]
    while path[-1] != ROOT:
        path.append(tree.parent[path[-1]])
    return path


def complete_subtree(tree: OntologyTree, nodes: frozenset[NodeId] | set) -> frozenset[NodeId]:
    """Close a highlight over the paths to its lowest common ancestor.

    Returns the highlight plus every node on the path from each highlighted
    node up to the LCA of the whole set, LCA included. Already-connected
    highlights come back unchanged; sets spanning several root branches gain
    the root, their only connector.
    """
    if not nodes:
        raise ValueError("cannot complete an empty highlight")
    paths = {n: _path_to_root(tree, n) for n in nodes}
    common = set.intersection(*(set(p) for p in paths.values()))
    # LCA = the common ancestor farthest from the root
    lca = max(common, key=lambda n: len(_path_to_root(tree, n)))
    completed: set[NodeId] = set()
    for path in paths.values():
        for step in path:
            completed.add(step)
            if step == lca:
                break
    return frozenset(completed)


def instantiate(tree: OntologyTree, table: Table, row_index: int) -> dict[NodeId, str]:
    """Total node -> value map for one row of the table."""
    if not 0 <= row_index < len(table.rows):
        raise ValueError(f"row {row_index} out of range for table {table.id}")
    row = table.rows[row_index]
    assignment: dict[NodeId, str] = {ROOT: ROOT}
    if tree.has_title:
        assignment[TITLE] = table.title
    for col in tree.column_nodes:
        assignment[col] = row[col]
    return assignment


def extract_triples(
    subtree: frozenset[NodeId] | set,
    assignment: dict[NodeId, str],
    tree: OntologyTree,
    provenance: Provenance = Provenance.OTHER,
) -> TripleSet:
    """One triple per non-root subtree node, in pre-order tree position."""
    ordered = [n for n in tree.preorder() if n in subtree and n != ROOT]
    triples = tuple(
        Triple(
            subject=assignment[tree.parent[n]],
            predicate=tree.label(n),
            object=assignment[n],
        )
        for n in ordered
    )
    if len(triples) > MAX_TRIPLES:
        raise OversizeError(
            f"tripleset has {len(triples)} triples, limit is {MAX_TRIPLES}"
        )
    return TripleSet(triples=triples, provenance=provenance)


def assemble_entry(
    tripleset: TripleSet,
    realizations: list[Realization] | tuple[Realization, ...],
    category: str,
    eid: str,
    table_id: str | None = None,
    row_index: int | None = None,
    flags: tuple[str, ...] = (),
) -> CorpusEntry:
    if not realizations:
        raise EmptyRealizationError(f"entry {eid}: no realizations")
    for r in realizations:
        if not r.text.strip():
            raise EmptyRealizationError(f"entry {eid}: empty realization text")
    if len(tripleset.triples) > MAX_TRIPLES:
        raise OversizeError(
            f"entry {eid}: {len(tripleset.triples)} triples, limit is {MAX_TRIPLES}"
        )
    return CorpusEntry(
        tripleset=tripleset,
        realizations=tuple(realizations),
        category=category,
        eid=eid,
        table_id=table_id,
        row_index=row_index,
        flags=flags,
    )
