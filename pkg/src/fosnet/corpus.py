"""Research-paper corpus loading, validation, and indexing.

Input is JSONL with one paper record per line:

    {"id": "p1", "title": "...", "abstract": "...", "year": 2019,
     "authors": [{"id": "a1", "name": "Ada"}, ...],
     "fields": [{"id": "f1", "name": "Topology", "level": 1, "parents": ["f0"]}, ...],
     "focal": true}

``abstract``, author ``name``, field ``name``/``parents``, and ``focal`` are
optional; everything else is required. Author and field ids are trusted
verbatim, with no disambiguation. All indices are keyed and iterated in
sorted id order, so the assembled corpus does not depend on input line
order. Author and field id lists on papers are normalized (sorted, deduped)
at load time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Mapping

from .errors import ConfigError, CorpusError, UnknownAuthorError


@dataclass(frozen=True)
class FieldRef:
    """A field-of-study label in a (possibly multi-parent) hierarchy."""

    id: str
    name: str
    level: int
    parent_ids: tuple[str, ...] = ()


@dataclass(frozen=True)
class Author:
    id: str
    name: str | None = None


@dataclass(frozen=True)
class Paper:
    id: str
    title: str
    year: int
    author_ids: tuple[str, ...]
    field_ids: tuple[str, ...]
    focal: bool = False
    abstract: str | None = None


@dataclass(frozen=True)
class IngestConfig:
    """Knobs for :func:`load_corpus`.

    strict: malformed records abort the load instead of being skipped.
    level: when set, papers are restricted to fields at exactly this level.
    window: inclusive (min_year, max_year); papers outside are dropped.
    """

    strict: bool = False
    level: int | None = None
    window: tuple[int, int] | None = None

    @classmethod
    def from_json(cls, path: str | Path) -> "IngestConfig":
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            raise ConfigError(f"config file {path} must contain a JSON object")
        window = raw.get("window")
        return cls(
            strict=bool(raw.get("strict", False)),
            level=raw.get("level"),
            window=tuple(window) if window else None,
        )


@dataclass(frozen=True)
class IngestStats:
    lines_read: int = 0
    papers_loaded: int = 0
    skipped_malformed: int = 0
    dropped_out_of_window: int = 0
    dropped_by_level_filter: int = 0
    field_conflicts: int = 0


@dataclass(frozen=True)
class Corpus:
    """Validated, cross-indexed paper collection.

    ``fields`` may contain refs that no surviving paper carries (level-0
    ancestors kept after level filtering, so discipline names stay
    resolvable). ``author_papers`` maps each author to their sorted paper
    ids.
    """

    papers: Mapping[str, Paper]
    authors: Mapping[str, Author]
    fields: Mapping[str, FieldRef]
    window: tuple[int, int] | None
    stats: IngestStats
    author_papers: Mapping[str, tuple[str, ...]]

    def field_name(self, field_id: str) -> str:
        ref = self.fields.get(field_id)
        return ref.name if ref is not None else field_id

    def level0_ancestors(self, field_id: str) -> tuple[str, ...]:
        """Level-0 ancestor ids of a field, walking all parent links."""
        ref = self.fields.get(field_id)
        if ref is None:
            return ()
        if ref.level == 0:
            return (field_id,)
        found: set[str] = set()
        stack = list(ref.parent_ids)
        seen: set[str] = set()
        while stack:
            fid = stack.pop()
            if fid in seen:
                continue
            seen.add(fid)
            parent = self.fields.get(fid)
            if parent is None:
                continue
            if parent.level == 0:
                found.add(fid)
            else:
                stack.extend(parent.parent_ids)
        return tuple(sorted(found))

    def focal_field_ids(self) -> frozenset[str]:
        """Fields tagged on at least one focal paper."""
        out: set[str] = set()
        for paper in self.papers.values():
            if paper.focal:
                out.update(paper.field_ids)
        return frozenset(out)

    def attached_levels(self) -> frozenset[int]:
        """Levels of fields actually attached to papers."""
        levels: set[int] = set()
        for paper in self.papers.values():
            for fid in paper.field_ids:
                ref = self.fields.get(fid)
                if ref is not None:
                    levels.add(ref.level)
        return frozenset(levels)


def load_corpus(path: str | Path, config: IngestConfig | None = None) -> Corpus:
    """Parse and validate a JSONL corpus file.

    Malformed lines are counted and skipped, or fatal when ``config.strict``.
    Duplicate paper ids are always fatal. Blank lines are ignored.
    """
    config = config or IngestConfig()
    path = Path(path)
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise CorpusError(f"cannot read corpus file {path}: {exc}") from exc
    records: list[tuple[int, object]] = []
    lines_read = 0
    skipped = 0
    with fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            lines_read += 1
            try:
                records.append((lineno, json.loads(line)))
            except json.JSONDecodeError as exc:
                if config.strict:
                    raise CorpusError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
                skipped += 1
    return _assemble(records, config, lines_read=lines_read, pre_skipped=skipped, source=str(path))


def corpus_from_records(records: Iterable[object], config: IngestConfig | None = None) -> Corpus:
    """Build a corpus directly from already-parsed record dicts."""
    config = config or IngestConfig()
    numbered = list(enumerate(records, 1))
    return _assemble(numbered, config, lines_read=len(numbered), pre_skipped=0, source="<records>")


def dump_corpus(corpus: Corpus, path: str | Path) -> None:
    """Serialize back to JSONL, papers sorted by id and field order normalized.

    Only paper-attached field refs are emitted; ancestor-only refs reload as
    opaque parent ids.
    """
    with open(path, "w", encoding="utf-8") as fh:
        for pid in sorted(corpus.papers):
            paper = corpus.papers[pid]
            record: dict[str, object] = {
                "id": paper.id,
                "title": paper.title,
                "year": paper.year,
                "authors": [
                    {"id": aid, **({"name": corpus.authors[aid].name} if corpus.authors[aid].name else {})}
                    for aid in paper.author_ids
                ],
                "fields": [
                    {
                        "id": fid,
                        "name": corpus.fields[fid].name,
                        "level": corpus.fields[fid].level,
                        "parents": list(corpus.fields[fid].parent_ids),
                    }
                    for fid in paper.field_ids
                ],
                "focal": paper.focal,
            }
            if paper.abstract is not None:
                record["abstract"] = paper.abstract
            fh.write(json.dumps(record, sort_keys=True) + "\n")


def filter_fields(corpus: Corpus, level: int) -> Corpus:
    """Restrict every paper to fields at exactly ``level``.

    Papers left with no fields are dropped and counted. Level-0 ancestors of
    surviving fields are retained in the field index so discipline lookups
    keep working.
    """
    if level < 0:
        raise ConfigError("field level must be >= 0")
    return _filter_level(corpus, level)


def author_publications(
    corpus: Corpus,
    author_id: str,
    *,
    focal_only: bool = False,
    window: tuple[int, int] | None = None,
) -> set[tuple[str, str]]:
    """All (paper_id, field_id) facts for an author within a subset.

    An author "published in" field n within the subset iff the returned set
    contains any pair with that field.
    """
    if author_id not in corpus.authors:
        raise UnknownAuthorError(f"unknown author id {author_id!r}")
    pairs: set[tuple[str, str]] = set()
    for pid in corpus.author_papers.get(author_id, ()):
        paper = corpus.papers[pid]
        if focal_only and not paper.focal:
            continue
        if window is not None and not (window[0] <= paper.year <= window[1]):
            continue
        for fid in paper.field_ids:
            pairs.add((pid, fid))
    return pairs


def _want_str(obj: dict, key: str) -> str | None:
    value = obj.get(key)
    if isinstance(value, str) and value:
        return value
    return None


def _parse_record(obj: object, where: str) -> tuple[Paper, list[FieldRef], dict[str, str | None]]:
    """Validate one raw record; raises CorpusError describing the defect."""
    if not isinstance(obj, dict):
        raise CorpusError(f"{where}: record is not an object")
    pid = _want_str(obj, "id")
    if pid is None:
        raise CorpusError(f"{where}: missing or empty 'id'")
    year = obj.get("year")
    if not isinstance(year, int) or isinstance(year, bool):
        raise CorpusError(f"{where}: missing or non-integer 'year'")
    title = obj.get("title")
    if title is None:
        title = ""
    if not isinstance(title, str):
        raise CorpusError(f"{where}: 'title' must be a string")
    abstract = obj.get("abstract")
    if abstract is not None and not isinstance(abstract, str):
        raise CorpusError(f"{where}: 'abstract' must be a string")
    focal = obj.get("focal", False)
    if not isinstance(focal, bool):
        raise CorpusError(f"{where}: 'focal' must be a boolean")

    raw_authors = obj.get("authors")
    if not isinstance(raw_authors, list) or not raw_authors:
        raise CorpusError(f"{where}: missing or empty 'authors'")
    author_names: dict[str, str | None] = {}
    for entry in raw_authors:
        if not isinstance(entry, dict):
            raise CorpusError(f"{where}: author entry is not an object")
        aid = _want_str(entry, "id")
        if aid is None:
            raise CorpusError(f"{where}: author entry missing 'id'")
        name = entry.get("name")
        if name is not None and not isinstance(name, str):
            raise CorpusError(f"{where}: author 'name' must be a string")
        if aid not in author_names or author_names[aid] is None:
            author_names[aid] = name

    raw_fields = obj.get("fields")
    if not isinstance(raw_fields, list) or not raw_fields:
        raise CorpusError(f"{where}: missing or empty 'fields'")
    refs: list[FieldRef] = []
    for entry in raw_fields:
        if not isinstance(entry, dict):
            raise CorpusError(f"{where}: field entry is not an object")
        fid = _want_str(entry, "id")
        if fid is None:
            raise CorpusError(f"{where}: field entry missing 'id'")
        level = entry.get("level")
        if not isinstance(level, int) or isinstance(level, bool) or level < 0:
            raise CorpusError(f"{where}: field {fid!r} missing non-negative integer 'level'")
        name = entry.get("name")
        if name is None:
            name = fid
        if not isinstance(name, str):
            raise CorpusError(f"{where}: field 'name' must be a string")
        parents = entry.get("parents", [])
        if not isinstance(parents, list) or not all(isinstance(p, str) for p in parents):
            raise CorpusError(f"{where}: field 'parents' must be a list of ids")
        refs.append(FieldRef(id=fid, name=name, level=level, parent_ids=tuple(sorted(set(parents)))))

    paper = Paper(
        id=pid,
        title=title,
        year=year,
        author_ids=tuple(sorted(author_names)),
        field_ids=tuple(sorted({ref.id for ref in refs})),
        focal=focal,
        abstract=abstract,
    )
    return paper, refs, author_names


def _check_parent_cycles(fields: Mapping[str, FieldRef]) -> None:
    state: dict[str, int] = {}  # 1 = in progress, 2 = done

    def visit(fid: str, trail: tuple[str, ...]) -> None:
        mark = state.get(fid)
        if mark == 2:
            return
        if mark == 1:
            raise CorpusError(f"field hierarchy cycle through {fid!r}: {' -> '.join(trail + (fid,))}")
        state[fid] = 1
        ref = fields.get(fid)
        if ref is not None:
            for parent in ref.parent_ids:
                if parent in fields:
                    visit(parent, trail + (fid,))
        state[fid] = 2

    for fid in sorted(fields):
        visit(fid, ())


def _assemble(
    numbered: list[tuple[int, object]],
    config: IngestConfig,
    *,
    lines_read: int,
    pre_skipped: int,
    source: str,
) -> Corpus:
    skipped = pre_skipped
    out_of_window = 0
    by_id: dict[str, tuple[Paper, list[FieldRef], dict[str, str | None]]] = {}
    for lineno, raw in numbered:
        where = f"{source}:{lineno}"
        try:
            paper, refs, names = _parse_record(raw, where)
        except CorpusError:
            if config.strict:
                raise
            skipped += 1
            continue
        if paper.id in by_id:
            raise CorpusError(f"{where}: duplicate paper id {paper.id!r}")
        if config.window is not None and not (config.window[0] <= paper.year <= config.window[1]):
            out_of_window += 1
            continue
        by_id[paper.id] = (paper, refs, names)

    papers: dict[str, Paper] = {}
    field_index: dict[str, FieldRef] = {}
    author_names: dict[str, str | None] = {}
    conflicts = 0
    for pid in sorted(by_id):
        paper, refs, names = by_id[pid]
        papers[pid] = paper
        for aid, name in names.items():
            if author_names.get(aid) is None:
                author_names[aid] = name
            elif aid not in author_names:
                author_names[aid] = name
        for ref in refs:
            existing = field_index.get(ref.id)
            if existing is None:
                field_index[ref.id] = ref
            else:
                if existing.level != ref.level or existing.name != ref.name:
                    conflicts += 1
                if set(ref.parent_ids) - set(existing.parent_ids):
                    field_index[ref.id] = replace(
                        existing, parent_ids=tuple(sorted(set(existing.parent_ids) | set(ref.parent_ids)))
                    )

    _check_parent_cycles(field_index)

    authors = {aid: Author(id=aid, name=author_names[aid]) for aid in sorted(author_names)}
    fields = {fid: field_index[fid] for fid in sorted(field_index)}

    author_papers: dict[str, list[str]] = {aid: [] for aid in authors}
    for pid in sorted(papers):
        for aid in papers[pid].author_ids:
            author_papers[aid].append(pid)

    if config.window is not None:
        window = config.window
    elif papers:
        years = [p.year for p in papers.values()]
        window = (min(years), max(years))
    else:
        window = None

    stats = IngestStats(
        lines_read=lines_read,
        papers_loaded=len(papers),
        skipped_malformed=skipped,
        dropped_out_of_window=out_of_window,
        field_conflicts=conflicts,
    )
    corpus = Corpus(
        papers=papers,
        authors=authors,
        fields=fields,
        window=window,
        stats=stats,
        author_papers={aid: tuple(pids) for aid, pids in author_papers.items()},
    )
    if config.level is not None:
        corpus = _filter_level(corpus, config.level)
    return corpus


def _filter_level(corpus: Corpus, level: int) -> Corpus:
    keep_papers: dict[str, Paper] = {}
    dropped = 0
    for pid in sorted(corpus.papers):
        paper = corpus.papers[pid]
        kept = tuple(
            fid for fid in paper.field_ids
            if fid in corpus.fields and corpus.fields[fid].level == level
        )
        if not kept:
            dropped += 1
            continue
        keep_papers[pid] = replace(paper, field_ids=kept)

    used_fields: set[str] = set()
    for paper in keep_papers.values():
        used_fields.update(paper.field_ids)
    # Retain ancestors so level-0 discipline names stay resolvable.
    closure = set(used_fields)
    stack = list(used_fields)
    while stack:
        fid = stack.pop()
        ref = corpus.fields.get(fid)
        if ref is None:
            continue
        for parent in ref.parent_ids:
            if parent in corpus.fields and parent not in closure:
                closure.add(parent)
                stack.append(parent)

    used_authors: set[str] = set()
    for paper in keep_papers.values():
        used_authors.update(paper.author_ids)

    author_papers: dict[str, list[str]] = {aid: [] for aid in sorted(used_authors)}
    for pid in sorted(keep_papers):
        for aid in keep_papers[pid].author_ids:
            author_papers[aid].append(pid)

    stats = replace(
        corpus.stats,
        papers_loaded=len(keep_papers),
        dropped_by_level_filter=corpus.stats.dropped_by_level_filter + dropped,
    )
    return Corpus(
        papers=keep_papers,
        authors={aid: corpus.authors[aid] for aid in sorted(used_authors)},
        fields={fid: corpus.fields[fid] for fid in sorted(closure)},
        window=corpus.window,
        stats=stats,
        author_papers={aid: tuple(pids) for aid, pids in author_papers.items()},
    )
