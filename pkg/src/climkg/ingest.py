"""Dual-format catalog ingestion and field-wise record merging.

Records arrive from two endpoints (a display-oriented JSON view and a
structured UMM view) or from recorded fixture pages. The merge prefers the
UMM value for every attribute and falls back to the JSON value, recording
per-field provenance.
"""

from __future__ import annotations

import json
import logging
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Optional

from . import SCHEMA_VERSION

log = logging.getLogger(__name__)

AUTH_TOKEN_ENV = "CLIMKG_API_TOKEN"

_DATA_DIR = Path(__file__).parent / "data"


class IngestError(Exception):
    pass


class RetryableFetchError(IngestError):
    """Network failure; carries the page cursor for resumption."""

    def __init__(self, message: str, cursor):
        super().__init__(message)
        self.cursor = cursor


@dataclass
class RawRecordPair:
    concept_id: str
    json_doc: dict = field(default_factory=dict)
    umm_doc: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.concept_id:
            raise IngestError("RawRecordPair requires a non-empty concept_id")
        if not self.json_doc and not self.umm_doc:
            raise IngestError(
                f"record {self.concept_id}: both documents absent"
            )


@dataclass
class HarmonizedRecord:
    concept_id: str
    # attribute name -> (value, provenance in {"UMM", "JSON"})
    fields: dict
    extra: dict = field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION

    def value(self, name, default=None):
        if name in self.fields:
            return self.fields[name][0]
        return default

    def to_json_dict(self) -> dict:
        return {
            "concept_id": self.concept_id,
            "schema_version": self.schema_version,
            "fields": {
                k: {"value": v, "provenance": p}
                for k, (v, p) in sorted(self.fields.items())
            },
            "extra": dict(sorted(self.extra.items())),
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "HarmonizedRecord":
        return cls(
            concept_id=doc["concept_id"],
            fields={
                k: (v["value"], v["provenance"])
                for k, v in doc.get("fields", {}).items()
            },
            extra=doc.get("extra", {}),
            schema_version=doc.get("schema_version", SCHEMA_VERSION),
        )


def load_default_schema() -> list[str]:
    with open(_DATA_DIR / "schema_attributes.json", encoding="utf-8") as fh:
        return json.load(fh)["attributes"]


def is_empty(value) -> bool:
    """Absent, null, or empty string/array/object after whitespace trimming."""
    if value is None:
        return True
    if isinstance(value, str):
        return value.strip() == ""
    if isinstance(value, (list, tuple, dict)):
        return len(value) == 0
    return False


def _clean(value):
    if isinstance(value, str):
        return value.strip()
    return value


def merge_records(pair: RawRecordPair, schema: list[str]) -> HarmonizedRecord:
    """Field-wise merge: UMM value when non-empty, else JSON value.

    Attributes empty in both documents are absent from the output. Keys not
    in the schema are preserved under the `extra` namespace.
    """
    if not pair.json_doc and not pair.umm_doc:
        raise IngestError(f"record {pair.concept_id}: both documents absent")
    fields = {}
    schema_set = set(schema)
    for attr in schema:
        umm_val = pair.umm_doc.get(attr)
        if not is_empty(umm_val):
            fields[attr] = (_clean(umm_val), "UMM")
            continue
        json_val = pair.json_doc.get(attr)
        if not is_empty(json_val):
            fields[attr] = (_clean(json_val), "JSON")
    extra = {}
    for key in sorted(set(pair.umm_doc) | set(pair.json_doc)):
        if key in schema_set:
            continue
        umm_val = pair.umm_doc.get(key)
        val = umm_val if not is_empty(umm_val) else pair.json_doc.get(key)
        if not is_empty(val):
            extra[key] = _clean(val)
    return HarmonizedRecord(concept_id=pair.concept_id, fields=fields, extra=extra)


def harmonize_corpus(
    pairs: Iterable[RawRecordPair], schema: list[str]
) -> list[HarmonizedRecord]:
    """Merge a pair stream; duplicate concept_ids collapse last-wins.

    Output is sorted by concept_id, so it is independent of input order up
    to duplicate resolution.
    """
    by_id: dict[str, HarmonizedRecord] = {}
    for pair in pairs:
        if pair.concept_id in by_id:
            log.warning("duplicate concept_id %s: keeping last", pair.concept_id)
        by_id[pair.concept_id] = merge_records(pair, schema)
    return [by_id[cid] for cid in sorted(by_id)]


# ---------------------------------------------------------------------------
# Fetch: fixture directories and live endpoints
# ---------------------------------------------------------------------------

def _concept_id_of(doc: dict) -> Optional[str]:
    for key in ("concept_id", "concept-id", "id"):
        if key in doc and isinstance(doc[key], str) and doc[key]:
            return doc[key]
    meta = doc.get("meta")
    if isinstance(meta, dict):
        return meta.get("concept-id") or meta.get("concept_id")
    return None


def _page_docs(payload) -> list[dict]:
    if isinstance(payload, list):
        return payload
    if isinstance(payload, dict):
        if "items" in payload:
            return payload["items"]
        feed = payload.get("feed")
        if isinstance(feed, dict) and "entry" in feed:
            return feed["entry"]
    raise IngestError("unrecognized page payload shape")


def _index_docs(docs: Iterable[dict], source: str, page: int) -> dict[str, dict]:
    out = {}
    for doc in docs:
        cid = _concept_id_of(doc)
        if cid is None:
            log.warning("page %d (%s): document without concept id skipped", page, source)
            continue
        out[cid] = doc
    return out


def _pair_up(json_by_id: dict, umm_by_id: dict) -> Iterator[RawRecordPair]:
    for cid in sorted(set(json_by_id) | set(umm_by_id)):
        yield RawRecordPair(
            concept_id=cid,
            json_doc=json_by_id.get(cid, {}),
            umm_doc=umm_by_id.get(cid, {}),
        )


def fetch_fixture_pairs(fixture_dir) -> Iterator[RawRecordPair]:
    """Read recorded pages `{page:05}.json` / `{page:05}.umm.json` from a dir."""
    fixture_dir = Path(fixture_dir)
    json_by_id: dict[str, dict] = {}
    umm_by_id: dict[str, dict] = {}
    pages = sorted(
        int(p.name[:5]) for p in fixture_dir.glob("[0-9][0-9][0-9][0-9][0-9].json")
    )
    for page in pages:
        for suffix, index in ((".json", json_by_id), (".umm.json", umm_by_id)):
            path = fixture_dir / f"{page:05d}{suffix}"
            if not path.exists():
                continue
            try:
                payload = json.loads(path.read_text(encoding="utf-8"))
                index.update(_index_docs(_page_docs(payload), suffix, page))
            except (json.JSONDecodeError, IngestError) as exc:
                log.warning("malformed page %s skipped: %s", path.name, exc)
    yield from _pair_up(json_by_id, umm_by_id)


def _fetch_page(session, url: str, page: int, page_size: int, auth: Optional[str],
                timeout: float, retries: int) -> list[dict]:
    params = {"page_num": page, "page_size": page_size}
    headers = {}
    if auth:
        headers["Authorization"] = f"Bearer {auth}"
    delay = 1.0
    for attempt in range(retries + 1):
        try:
            resp = session.get(url, params=params, headers=headers, timeout=timeout)
            resp.raise_for_status()
            return _page_docs(resp.json())
        except IngestError:
            log.warning("malformed page %d from %s skipped", page, url)
            return []
        except ValueError:
            log.warning("unparseable page %d from %s skipped", page, url)
            return []
        except Exception as exc:
            if attempt == retries:
                raise RetryableFetchError(
                    f"fetch failed at page {page} of {url}: {exc}", cursor=page
                ) from exc
            time.sleep(delay)
            delay *= 2
    return []


def fetch_dual_format(
    source,
    page_size: int = 50,
    auth: Optional[str] = None,
    offline: bool = False,
    timeout: float = 30.0,
    retries: int = 3,
) -> Iterator[RawRecordPair]:
    """Yield record pairs from a fixture directory or a live dual endpoint.

    A directory source reads recorded pages. A URL source is treated as a
    base path; `<base>.json` and `<base>.umm_json` are paginated until an
    empty page. One-sided records are still yielded.
    """
    if page_size <= 0:
        raise IngestError("page_size must be positive")
    source_str = str(source)
    if os.path.isdir(source_str):
        yield from fetch_fixture_pairs(source_str)
        return
    if offline:
        raise IngestError(f"offline mode: fixture directory {source_str} not found")

    import requests

    if auth is None:
        auth = os.environ.get(AUTH_TOKEN_ENV)
    session = requests.Session()
    json_by_id: dict[str, dict] = {}
    umm_by_id: dict[str, dict] = {}
    for url, index in (
        (f"{source_str}.json", json_by_id),
        (f"{source_str}.umm_json", umm_by_id),
    ):
        page = 1
        while True:
            docs = _fetch_page(session, url, page, page_size, auth, timeout, retries)
            if not docs:
                break
            index.update(_index_docs(docs, url, page))
            if len(docs) < page_size:
                break
            page += 1
    yield from _pair_up(json_by_id, umm_by_id)


def write_jsonl(records: Iterable[HarmonizedRecord], path) -> int:
    """Write one sorted-key JSON object per line; returns record count."""
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec.to_json_dict(), sort_keys=True) + "\n")
            count += 1
    return count


def read_jsonl(path) -> Iterator[dict]:
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield json.loads(line)
