"""Command-line pipeline: every stage reads and writes plain files.

Stage boundaries are files on disk (JSONL for tables, components, and
entries; TSV for splits; XML for interchange), so each stage can be run,
inspected, and re-run independently. Stochastic stages take an explicit
--seed and never default it silently; given the same inputs and seed, every
stage is byte-for-byte reproducible. Outputs are written to a temp file and
renamed into place, so a failed run never leaves a half-written artifact.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from . import adapters, formats, splits, stats, tables, unify
from .errors import OversizeError, TableTriplesError
from .sampling import SamplerConfig, sample_for_table
from .tables import Table, build_tree, validate_tree
from .triples import (
    Annotator,
    CorpusEntry,
    Provenance,
    Realization,
    assemble_entry,
    complete_subtree,
    extract_triples,
    instantiate,
)

PROG = "tabletriples"


# --- plumbing ---------------------------------------------------------------

def _atomic_write(path: str | Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read_jsonl(path: str | Path) -> list[dict]:
    records = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            records.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise TableTriplesError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
    return records


def _dump_jsonl(records: list[dict]) -> str:
    return "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in records)


def _load_tables(path: str | Path) -> dict[str, Table]:
    out: dict[str, Table] = {}
    for record in _read_jsonl(path):
        table = tables.table_from_dict(record)
        if table.id in out:
            raise TableTriplesError(f"{path}: duplicate table id {table.id!r}")
        out[table.id] = table
    return out


def _load_annotations(path: str | Path) -> dict[str, tables.OntologyAnnotation]:
    out = {}
    for record in _read_jsonl(path):
        ann = tables.parse_annotation(record)
        out[ann.table_id] = ann
    return out


def _fail(stage: str, exc: BaseException, **extra) -> int:
    report = {"error": type(exc).__name__, "stage": stage, "message": str(exc)}
    report.update(extra)
    print(json.dumps(report, ensure_ascii=False), file=sys.stderr)
    return 1


def _note(message: str) -> None:
    print(message, file=sys.stderr)


def _require(args: argparse.Namespace, *names: str) -> None:
    for name in names:
        if getattr(args, name, None) is None:
            raise TableTriplesError(f"--{name.replace('_', '-')} is required")


def _provenance_for(table: Table) -> Provenance:
    return Provenance(table.source.value)


def _empty_cell_flags(tripleset) -> tuple[str, ...]:
    if any(not t.subject or not t.object for t in tripleset.triples):
        return ("empty_cell",)
    return ()


# --- stages -----------------------------------------------------------------

def cmd_ingest_tables(args) -> int:
    _require(args, "input", "output")
    paths: list[Path] = []
    for item in args.input:
        p = Path(item)
        if p.is_dir():
            paths.extend(sorted(q for q in p.iterdir() if q.suffix.lower() in (".csv", ".tsv")))
        else:
            paths.append(p)
    records = []
    seen = set()
    for path in paths:
        table = tables.load_table(path)
        if table.id in seen:
            raise TableTriplesError(f"{path}: duplicate table id {table.id!r}")
        seen.add(table.id)
        records.append(tables.table_to_dict(table))
    _atomic_write(args.output, _dump_jsonl(records))
    _note(f"ingested {len(records)} tables -> {args.output}")
    return 0


def cmd_validate_ontology(args) -> int:
    _require(args, "tables", "annotations")
    table_map = _load_tables(args.tables)
    ann_map = _load_annotations(args.annotations)
    problems = []
    for table_id, table in table_map.items():
        ann = ann_map.get(table_id)
        if ann is None:
            problems.append({"table_id": table_id, "kind": "annotation-missing",
                             "detail": "no annotation record"})
            continue
        try:
            tree = build_tree(table, ann)
        except TableTriplesError as exc:
            problems.append({"table_id": table_id, "kind": type(exc).__name__,
                             "detail": str(exc)})
            continue
        except ValueError as exc:
            problems.append({"table_id": table_id, "kind": "annotation-mismatch",
                             "detail": str(exc)})
            continue
        report = validate_tree(tree, table)
        for finding in report.findings:
            problems.append({"table_id": table_id, "kind": finding.kind.value,
                             "detail": finding.detail})
    for table_id in ann_map:
        if table_id not in table_map:
            problems.append({"table_id": table_id, "kind": "table-missing",
                             "detail": "annotation references an unknown table"})
    report_doc = {"tables_checked": len(table_map), "problems": problems}
    if args.output:
        _atomic_write(args.output, json.dumps(report_doc, indent=2, ensure_ascii=False) + "\n")
    else:
        print(json.dumps(report_doc, indent=2, ensure_ascii=False))
    if problems:
        _note(f"{len(problems)} ontology problems found")
        return 1
    _note(f"all {len(table_map)} ontologies valid")
    return 0


def cmd_sample(args) -> int:
    _require(args, "tables", "annotations", "seed", "output")
    config = SamplerConfig(
        size_min=args.size_min, size_max=args.size_max,
        p_min=args.p_min, p_max=args.p_max, seed=args.seed,
    )
    table_map = _load_tables(args.tables)
    ann_map = _load_annotations(args.annotations)
    records = []
    for table_id, table in table_map.items():
        ann = ann_map.get(table_id)
        if ann is None:
            raise TableTriplesError(f"table {table_id!r} has no ontology annotation")
        tree = build_tree(table, ann)
        n_rows = len(table.rows)
        if args.max_rows_per_table is not None:
            n_rows = min(n_rows, args.max_rows_per_table)
        for row, component in sample_for_table(tree, table_id, list(range(n_rows)), config):
            records.append({
                "table_id": table_id,
                "row_index": row,
                "node_ids": sorted(component.node_ids, key=tables.node_order_key),
                "p_used": component.p_used,
                "target_size": component.target_size,
            })
    _atomic_write(args.output, _dump_jsonl(records))
    _note(f"sampled {len(records)} components -> {args.output}")
    return 0


def _load_sentences(path: str | Path) -> dict[tuple[str, int], list[dict]]:
    by_row: dict[tuple[str, int], list[dict]] = {}
    for record in _read_jsonl(path):
        key = (str(record["table_id"]), int(record["row_index"]))
        by_row.setdefault(key, []).append(record)
    return by_row


def cmd_extract(args) -> int:
    _require(args, "tables", "annotations", "components", "sentences", "output")
    table_map = _load_tables(args.tables)
    ann_map = _load_annotations(args.annotations)
    sentences = _load_sentences(args.sentences)
    trees: dict[str, tables.OntologyTree] = {}
    entries = []
    skipped_no_sentence = 0
    skipped_oversize = 0
    for record in _read_jsonl(args.components):
        table_id = str(record["table_id"])
        row_index = int(record["row_index"])
        table = table_map.get(table_id)
        if table is None:
            raise TableTriplesError(f"component references unknown table {table_id!r}")
        if table_id not in trees:
            ann = ann_map.get(table_id)
            if ann is None:
                raise TableTriplesError(f"table {table_id!r} has no ontology annotation")
            trees[table_id] = build_tree(table, ann)
        tree = trees[table_id]
        texts = sentences.get((table_id, row_index), [])
        if not texts:
            skipped_no_sentence += 1
            continue
        nodes = frozenset(record["node_ids"])
        subtree = complete_subtree(tree, nodes)
        assignment = instantiate(tree, table, row_index)
        try:
            tripleset = extract_triples(subtree, assignment, tree,
                                        provenance=_provenance_for(table))
        except OversizeError:
            skipped_oversize += 1
            continue
        flags = _empty_cell_flags(tripleset)
        realizations = [
            Realization(
                text=s["text"],
                annotator=Annotator(s.get("annotator", "internal")),
                comment=s.get("comment", ""),
            )
            for s in texts
        ]
        category = texts[0].get("category", args.category)
        entries.append(assemble_entry(
            tripleset, realizations, category, eid=f"Id{len(entries) + 1}",
            table_id=table_id, row_index=row_index, flags=flags,
        ))
    _atomic_write(args.output, formats.write_entries_jsonl(entries))
    _note(
        f"extracted {len(entries)} entries -> {args.output} "
        f"(skipped: {skipped_no_sentence} without sentences, "
        f"{skipped_oversize} oversize)"
    )
    return 0


def cmd_convert_e2e(args) -> int:
    _require(args, "input", "output")
    import csv as _csv

    entries = []
    dropped = 0
    with open(args.input, encoding="utf-8", newline="") as fh:
        reader = _csv.DictReader(fh)
        if reader.fieldnames is None or "mr" not in reader.fieldnames or "ref" not in reader.fieldnames:
            raise TableTriplesError(f"{args.input}: expected CSV columns 'mr' and 'ref'")
        for record in reader:
            mr = adapters.parse_mr(record["mr"])
            converted = adapters.e2e_to_tripleset(mr)
            if isinstance(converted, adapters.Dropped):
                dropped += 1
                continue
            entries.append(assemble_entry(
                converted,
                [Realization(text=record["ref"], annotator=Annotator.EXTERNAL_DATASET)],
                category=args.category,
                eid=f"Id{len(entries) + 1}",
            ))
    _atomic_write(args.output, formats.write_entries_jsonl(entries))
    _note(f"converted {len(entries)} MRs -> {args.output} (dropped {dropped})")
    return 0


def cmd_ingest_webnlg(args) -> int:
    _require(args, "input", "output")
    document = Path(args.input).read_text(encoding="utf-8")
    entries = adapters.webnlg_ingest(document)
    _atomic_write(args.output, formats.write_entries_jsonl(entries))
    _note(f"ingested {len(entries)} entries -> {args.output}")
    return 0


def cmd_align_wikisql(args) -> int:
    _require(args, "input", "tables", "annotations", "output")
    table_map = _load_tables(args.tables)
    ann_map = _load_annotations(args.annotations)
    qa2d = {}
    if args.qa2d:
        qa2d = json.loads(Path(args.qa2d).read_text(encoding="utf-8"))
    trees: dict[str, tables.OntologyTree] = {}
    entries = []
    skipped: dict[str, int] = {}

    def skip(reason: str):
        skipped[reason] = skipped.get(reason, 0) + 1

    for record in _read_jsonl(args.input):
        sentence = record.get("declarative_sentence")
        if not sentence and record.get("question_id") is not None:
            sentence = qa2d.get(str(record["question_id"]))
        if not sentence:
            skip("no declarative sentence")
            continue
        try:
            query = adapters.parse_sql(record["sql"])
        except TableTriplesError:
            skip("unparseable sql")
            continue
        if not adapters.filter_sql(query):
            skip("aggregate command")
            continue
        table = table_map.get(str(record["table_id"]))
        if table is None:
            skip("unknown table")
            continue
        aligned = adapters.align_row(query, table, str(record["answer"]))
        if isinstance(aligned, adapters.Unaligned):
            skip(f"unaligned: {aligned.reason}")
            continue
        if table.id not in trees:
            ann = ann_map.get(table.id)
            if ann is None:
                skip("no ontology annotation")
                continue
            trees[table.id] = build_tree(table, ann)
        tree = trees[table.id]
        subtree = complete_subtree(tree, aligned.nodes)
        assignment = instantiate(tree, table, aligned.row_index)
        try:
            tripleset = extract_triples(subtree, assignment, tree,
                                        provenance=Provenance.WIKISQL)
        except OversizeError:
            skip("oversize tripleset")
            continue
        entries.append(assemble_entry(
            tripleset,
            [Realization(text=sentence, annotator=Annotator.AUTO_DECLARATIVE)],
            category=args.category,
            eid=f"Id{len(entries) + 1}",
            table_id=table.id,
            row_index=aligned.row_index,
            flags=_empty_cell_flags(tripleset),
        ))
    _atomic_write(args.output, formats.write_entries_jsonl(entries))
    summary = ", ".join(f"{v} {k}" for k, v in sorted(skipped.items())) or "none"
    _note(f"aligned {len(entries)} records -> {args.output} (skipped: {summary})")
    return 0


def cmd_unify(args) -> int:
    _require(args, "input", "map", "output")
    pmap = unify.load_predicate_map(args.map)
    entries = formats.read_entries_file(args.input)
    unmapped: set[str] = set()
    unified = [unify.unify_entry(e, pmap, unmapped) for e in entries]
    _atomic_write(args.output, formats.write_entries_jsonl(unified))
    if args.report_unmapped:
        _atomic_write(args.report_unmapped,
                      "".join(p + "\n" for p in sorted(unmapped)))
    _note(f"unified {len(unified)} entries -> {args.output} "
          f"({len(unmapped)} distinct unmapped predicates)")
    return 0


def cmd_split(args) -> int:
    _require(args, "tables", "seed", "output")
    table_map = _load_tables(args.tables)
    signatures = [splits.TableSignature.from_table(t) for t in table_map.values()]
    config = splits.SplitConfig(
        threshold=args.threshold,
        test_seed_fraction=args.test_seed_frac,
        dev_seed_fraction=args.dev_seed_frac,
        seed=args.seed,
    )
    assignment = splits.split(signatures, config)
    lines = [f"{table_id}\t{name.value}\n" for table_id, name in sorted(assignment.items())]
    _atomic_write(args.output, "".join(lines))
    counts = {name.value: 0 for name in splits.SplitName}
    for name in assignment.values():
        counts[name.value] += 1
    _note(f"split {len(assignment)} tables -> {args.output} ({counts})")
    return 0


def cmd_stats(args) -> int:
    _require(args, "input")
    entries: list[CorpusEntry] = []
    for path in args.input:
        entries.extend(formats.read_entries_file(path))
    overall = stats.compute_stats(entries)
    blocks = [stats.format_stats(overall, heading="all")]
    doc: dict = {"all": overall.to_dict()}
    if args.by_partition:
        partitions: dict[str, list[CorpusEntry]] = {}
        for entry in entries:
            partitions.setdefault(entry.tripleset.provenance.value, []).append(entry)
        doc["partitions"] = {}
        for name in sorted(partitions):
            part_stats = stats.compute_stats(partitions[name])
            blocks.append(stats.format_stats(part_stats, heading=name))
            doc["partitions"][name] = part_stats.to_dict()
    print("\n\n".join(blocks))
    if args.json_out:
        _atomic_write(args.json_out, json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
    return 0


def cmd_export_xml(args) -> int:
    _require(args, "input", "output")
    entries = formats.read_entries_file(args.input)
    _atomic_write(args.output, formats.write_xml(entries))
    _note(f"exported {len(entries)} entries -> {args.output}")
    return 0


def cmd_linearize(args) -> int:
    _require(args, "input", "output")
    entries = formats.read_entries_file(args.input)
    lines = [formats.linearize(e.tripleset) + "\n" for e in entries]
    _atomic_write(args.output, "".join(lines))
    _note(f"linearized {len(entries)} triplesets -> {args.output}")
    return 0


# --- argument parsing -------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG,
        description="Build data-to-text corpora from annotated tables and "
                    "external sources.",
    )
    parser.add_argument("--config", help="JSON config file; its values override flags")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest-tables", help="read CSV/TSV tables plus metadata sidecars")
    p.add_argument("--input", nargs="+", help="table files or directories")
    p.add_argument("--output", help="tables JSONL path")
    p.set_defaults(func=cmd_ingest_tables)

    p = sub.add_parser("validate-ontology", help="check annotations build valid trees")
    p.add_argument("--tables", help="tables JSONL")
    p.add_argument("--annotations", help="annotations JSONL")
    p.add_argument("--output", help="report JSON path (default: stdout)")
    p.set_defaults(func=cmd_validate_ontology)

    p = sub.add_parser("sample", help="sample connected components per table row")
    p.add_argument("--tables", help="tables JSONL")
    p.add_argument("--annotations", help="annotations JSONL")
    p.add_argument("--seed", type=int, help="random seed (required)")
    p.add_argument("--size-min", type=int, default=2)
    p.add_argument("--size-max", type=int, default=5)
    p.add_argument("--p-min", type=float, default=0.5)
    p.add_argument("--p-max", type=float, default=0.7)
    p.add_argument("--max-rows-per-table", type=int, default=None)
    p.add_argument("--output", help="components JSONL path")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("extract", help="turn components plus sentences into entries")
    p.add_argument("--tables", help="tables JSONL")
    p.add_argument("--annotations", help="annotations JSONL")
    p.add_argument("--components", help="components JSONL")
    p.add_argument("--sentences", help="sentences JSONL")
    p.add_argument("--category", default="MISC")
    p.add_argument("--output", help="entries JSONL path")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("convert-e2e", help="convert meaning representations from CSV")
    p.add_argument("--input", help="CSV with columns mr, ref")
    p.add_argument("--category", default="MISC")
    p.add_argument("--output", help="entries JSONL path")
    p.set_defaults(func=cmd_convert_e2e)

    p = sub.add_parser("ingest-webnlg", help="ingest an XML entry document")
    p.add_argument("--input", help="XML document")
    p.add_argument("--output", help="entries JSONL path")
    p.set_defaults(func=cmd_ingest_webnlg)

    p = sub.add_parser("align-wikisql", help="align question/SQL records onto table rows")
    p.add_argument("--input", help="JSONL of {question, sql, table_id, answer, ...}")
    p.add_argument("--tables", help="tables JSONL")
    p.add_argument("--annotations", help="annotations JSONL")
    p.add_argument("--qa2d", help="JSON map question_id -> declarative sentence")
    p.add_argument("--category", default="MISC")
    p.add_argument("--output", help="entries JSONL path")
    p.set_defaults(func=cmd_align_wikisql)

    p = sub.add_parser("unify", help="canonicalize predicates with a mapping table")
    p.add_argument("--input", help="entries JSONL")
    p.add_argument("--map", help="two-column TSV (raw, canonical)")
    p.add_argument("--report-unmapped", help="write distinct unmapped predicates here")
    p.add_argument("--output", help="entries JSONL path")
    p.set_defaults(func=cmd_unify)

    p = sub.add_parser("split", help="similarity-controlled train/dev/test split")
    p.add_argument("--tables", help="tables JSONL")
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--test-seed-frac", type=float, default=0.1)
    p.add_argument("--dev-seed-frac", type=float, default=0.1)
    p.add_argument("--seed", type=int, help="random seed (required)")
    p.add_argument("--output", help="TSV (table_id, split) path")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("stats", help="corpus statistics")
    p.add_argument("--input", nargs="+", help="entries JSONL file(s)")
    p.add_argument("--by-partition", action="store_true",
                   help="also report per provenance partition")
    p.add_argument("--json-out", help="also write statistics as JSON")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("export-xml", help="write entries as an XML document")
    p.add_argument("--input", help="entries JSONL")
    p.add_argument("--output", help="XML path")
    p.set_defaults(func=cmd_export_xml)

    p = sub.add_parser("linearize", help="render triplesets as marker strings")
    p.add_argument("--input", help="entries JSONL")
    p.add_argument("--output", help="text path, one tripleset per line")
    p.set_defaults(func=cmd_linearize)

    return parser


def _apply_config(args: argparse.Namespace) -> None:
    if not getattr(args, "config", None):
        return
    config = json.loads(Path(args.config).read_text(encoding="utf-8"))
    if not isinstance(config, dict):
        raise TableTriplesError(f"{args.config}: config must be a JSON object")
    for key, value in config.items():
        setattr(args, key.replace("-", "_"), value)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args)
        return args.func(args)
    except TableTriplesError as exc:
        return _fail(args.command, exc)
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        return _fail(args.command, exc)


if __name__ == "__main__":
    sys.exit(main())
