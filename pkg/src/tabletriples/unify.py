"""Predicate canonicalization via a hand-maintained mapping table.

Matching is exact and case-sensitive after trimming surrounding whitespace;
spelling/case variants belong in the map itself, not in code. The map must
be chain-free: a canonical value that also appears as a key has to map to
itself, which makes unification idempotent.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import PredicateMapError
from .triples import CorpusEntry, Triple, TripleSet


@dataclass(frozen=True)
class PredicateMap:
    entries: dict[str, str]

    def __post_init__(self):
        bad = []
        for raw, canonical in self.entries.items():
            if not raw or not canonical:
                raise PredicateMapError("empty predicate in mapping table")
            target = self.entries.get(canonical)
            if target is not None and target != canonical:
                bad.append(f"{raw!r} -> {canonical!r} -> {target!r}")
        if bad:
            raise PredicateMapError("mapping chains found: " + "; ".join(bad))

    def canonical(self, predicate: str) -> str | None:
        return self.entries.get(predicate.strip())


def load_predicate_map(path: str | Path) -> PredicateMap:
    """Two-column TSV (raw, canonical); ``#`` starts a comment line."""
    entries: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise PredicateMapError(f"{path}:{lineno}: expected two tab-separated columns")
        raw, canonical = parts[0].strip(), parts[1].strip()
        if raw in entries and entries[raw] != canonical:
            raise PredicateMapError(
                f"{path}:{lineno}: {raw!r} mapped to both {entries[raw]!r} and {canonical!r}"
            )
        entries[raw] = canonical
    return PredicateMap(entries=entries)


def unify_tripleset(
    ts: TripleSet, pmap: PredicateMap, unmapped: set[str] | None = None
) -> TripleSet:
    """Replace each mapped predicate; order, subjects, and objects untouched.

    Predicates without a mapping pass through unchanged and are collected
    into ``unmapped`` when a set is supplied.
    """
    out = []
    for t in ts.triples:
        canonical = pmap.canonical(t.predicate)
        if canonical is None:
            if unmapped is not None:
                unmapped.add(t.predicate)
            out.append(t)
        else:
            out.append(Triple(subject=t.subject, predicate=canonical, object=t.object))
    return TripleSet(triples=tuple(out), provenance=ts.provenance)


def unify_entry(
    entry: CorpusEntry, pmap: PredicateMap, unmapped: set[str] | None = None
) -> CorpusEntry:
    from dataclasses import replace

    return replace(entry, tripleset=unify_tripleset(entry.tripleset, pmap, unmapped))


def unique_predicates(corpus: list[CorpusEntry]) -> tuple[int, list[str]]:
    """Distinct predicate strings over the corpus, counted and sorted."""
    seen = {t.predicate for entry in corpus for t in entry.tripleset.triples}
    return len(seen), sorted(seen)
