"""Corpus loading: graph triples, resource texts, result page, query set.

File formats
------------
graph     tab-separated ``subject<TAB>predicate<TAB>object`` triples, one per
          line; blank lines and lines starting with ``#`` are ignored.
texts     JSON Lines, one object per line with string fields ``id`` and
          ``text``.
serp      tab-separated ``rank<TAB>doc-id<TAB>resources`` where ``resources``
          is a comma-separated list of resource identifiers (possibly empty);
          ranks must be the contiguous range 1..N with no duplicates.
query     one resource identifier per line; the file may be empty.

All files must be UTF-8.  The resource universe is exactly the set of ids in
the texts file; graph endpoints, result-page mentions and query entries must
all resolve inside it.
"""

from __future__ import annotations

import json

from .types import CorpusBundle, InputFormatError, SerpContext

__all__ = ["load_bundle", "assemble_bundle", "build_resource_text", "InputFormatError"]


def _check_resource_id(token: str, path, line_no: int, what: str) -> str:
    if not token:
        raise InputFormatError(path, line_no, f"empty {what}")
    if any(c.isspace() for c in token):
        raise InputFormatError(path, line_no, f"{what} {token!r} contains whitespace")
    return token


def _read_lines(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read().splitlines()
    except UnicodeDecodeError as exc:
        raise InputFormatError(path, 0, f"not valid UTF-8 ({exc.reason})") from exc


def _read_graph_file(path) -> list[tuple[str, str, str]]:
    triples = []
    for line_no, raw in enumerate(_read_lines(path), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = raw.split("\t")
        if len(fields) != 3:
            raise InputFormatError(
                path, line_no, f"expected 3 tab-separated fields, got {len(fields)}"
            )
        subject, predicate, obj = fields
        _check_resource_id(subject, path, line_no, "subject")
        _check_resource_id(obj, path, line_no, "object")
        if not predicate:
            raise InputFormatError(path, line_no, "empty predicate")
        triples.append((subject, predicate, obj))
    return triples


def _read_texts_file(path) -> dict[str, str]:
    texts: dict[str, str] = {}
    for line_no, raw in enumerate(_read_lines(path), start=1):
        if not raw.strip():
            continue
        try:
            record = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise InputFormatError(path, line_no, f"invalid JSON ({exc.msg})") from exc
        if not isinstance(record, dict):
            raise InputFormatError(path, line_no, "expected a JSON object")
        rid = record.get("id")
        text = record.get("text")
        if not isinstance(rid, str) or not isinstance(text, str):
            raise InputFormatError(
                path, line_no, 'expected string fields "id" and "text"'
            )
        _check_resource_id(rid, path, line_no, "resource id")
        if rid in texts:
            raise InputFormatError(path, line_no, f"duplicate resource id {rid!r}")
        texts[rid] = text
    return texts


def _read_serp_file(path) -> list[tuple[str, list[str]]]:
    rows: dict[int, tuple[str, list[str]]] = {}
    for line_no, raw in enumerate(_read_lines(path), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = raw.split("\t")
        if len(fields) != 3:
            raise InputFormatError(
                path, line_no, f"expected 3 tab-separated fields, got {len(fields)}"
            )
        rank_text, doc_id, mention_text = fields
        try:
            rank = int(rank_text)
        except ValueError:
            raise InputFormatError(path, line_no, f"rank {rank_text!r} is not an integer")
        if rank < 1:
            raise InputFormatError(path, line_no, f"rank must be positive, got {rank}")
        if rank in rows:
            raise InputFormatError(path, line_no, f"duplicate rank {rank}")
        if not doc_id:
            raise InputFormatError(path, line_no, "empty document id")
        mentions = []
        if mention_text:
            for token in mention_text.split(","):
                mentions.append(
                    _check_resource_id(token, path, line_no, "resource id")
                )
        rows[rank] = (doc_id, mentions)
    expected = set(range(1, len(rows) + 1))
    if set(rows) != expected:
        missing = sorted(expected - set(rows))
        raise InputFormatError(
            path, 0, f"ranks are not contiguous from 1; missing {missing}"
        )
    return [rows[r] for r in sorted(rows)]


def _read_query_file(path) -> set[str]:
    resources = set()
    for line_no, raw in enumerate(_read_lines(path), start=1):
        line = raw.strip()
        if not line:
            continue
        resources.add(_check_resource_id(line, path, line_no, "resource id"))
    return resources


def assemble_bundle(
    graph_edges,
    resource_texts: dict[str, str],
    serp_docs,
    query_resources,
) -> CorpusBundle:
    """Build a validated bundle from already-parsed primitives.

    ``serp_docs`` is a sequence of ``(doc_id, [resource ids])`` in rank
    order.  Referential integrity against the text table is enforced here.
    """
    known = set(resource_texts)

    def resolve(rid: str, role: str) -> str:
        if rid not in known:
            raise ValueError(f"{role} {rid!r} has no entry in the texts table")
        return rid

    for s, _p, o in graph_edges:
        resolve(s, "graph subject")
        resolve(o, "graph object")
    for rid in query_resources:
        resolve(rid, "query resource")

    resource_ids = tuple(sorted(known))
    index = {rid: i for i, rid in enumerate(resource_ids)}

    occurrences: dict[int, set[int]] = {}
    docs = []
    for rank, (doc_id, mentions) in enumerate(serp_docs, start=1):
        docs.append(doc_id)
        for rid in mentions:
            resolve(rid, "result-page resource")
            occurrences.setdefault(index[rid], set()).add(rank)

    serp = SerpContext(
        docs=tuple(docs),
        occurrences={i: frozenset(r) for i, r in occurrences.items()},
    )
    return CorpusBundle(
        resource_ids=resource_ids,
        graph_edges=tuple(graph_edges),
        resource_texts=dict(resource_texts),
        serp=serp,
        query_resources=frozenset(query_resources),
    )


def load_bundle(graph_path, texts_path, serp_path, query_path) -> CorpusBundle:
    """Load, validate and assemble the four input files into one bundle.

    Raises ``InputFormatError`` for malformed lines (with file and line
    number), ``ValueError`` for dangling resource references, and the usual
    ``OSError`` family if a file is missing.
    """
    graph_edges = _read_graph_file(graph_path)
    resource_texts = _read_texts_file(texts_path)
    serp_docs = _read_serp_file(serp_path)
    query_resources = _read_query_file(query_path)
    return assemble_bundle(graph_edges, resource_texts, serp_docs, query_resources)


def build_resource_text(
    abstract: str,
    page_text: str,
    surface_offsets,
    window: int = 300,
) -> str:
    """Concatenate the abstract with fixed windows around each surface form.

    Each offset contributes the slice of ``page_text`` centred on it:
    ``window // 2`` characters before the offset and the remaining
    ``window - window // 2`` from the offset on, clipped at the text
    bounds.  Offsets are positions in the code-point sequence, so the
    arithmetic is safe for any UTF-8 input.  Empty segments are dropped and
    the rest are joined with single spaces.
    """
    if window <= 0:
        raise ValueError(f"window must be positive, got {window}")
    n = len(page_text)
    segments = [abstract]
    for offset in surface_offsets:
        if not 0 <= offset < n:
            raise ValueError(
                f"surface offset {offset} outside page text of length {n}"
            )
        start = max(0, offset - window // 2)
        end = min(n, offset + (window - window // 2))
        segments.append(page_text[start:end])
    return " ".join(seg for seg in segments if seg)
