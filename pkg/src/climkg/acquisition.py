"""Deterministic acquisition pipeline: link extraction, retrieval,
normalization into canonical tabular form, validation, and summary
analytics.

The action policy is a fixed state machine: no raw artifact -> retrieve,
raw but not normalized -> preprocess, else analyze. NetCDF/HDF payloads
are detected and reported but not normalized.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import math
import os
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional
from urllib.parse import urlparse
from urllib.request import url2pathname

import numpy as np

log = logging.getLogger(__name__)

AUTH_TOKEN_ENV = "CLIMKG_API_TOKEN"

DEFAULT_SIZE_CAP = 256 * 1024 * 1024
DEFAULT_TIMEOUT = 60.0

STATUSES = ("discovered", "retrieved", "preprocessed", "analyzed", "failed")

# link kinds preferred for download, most-direct first
_KIND_PRIORITY = {"data": 0, "download": 0, "GET DATA": 0, "opendap": 1,
                  "unknown": 2, "documentation": 3, "browse": 4}


class AcquisitionError(Exception):
    pass


@dataclass
class AcquisitionState:
    dataset_id: str
    links: list[tuple[str, str]] = field(default_factory=list)  # (url, kind)
    raw_paths: list[str] = field(default_factory=list)
    raw_format: Optional[str] = None
    normalized_path: Optional[str] = None
    status: str = "discovered"
    validation: dict = field(default_factory=dict)
    diagnostics: list[str] = field(default_factory=list)

    @property
    def v(self) -> int:
        checks = self.validation
        return 1 if checks and all(checks.values()) else 0


def extract_links(graph, dataset_id: str) -> list[tuple[str, str]]:
    """All hasLink targets with their kind property, stable order."""
    if dataset_id not in graph.nodes:
        raise AcquisitionError(f"unknown dataset {dataset_id!r}")
    out = []
    for link_id in graph.neighbors(dataset_id, "hasLink", "out"):
        props = graph.nodes[link_id].properties
        url = str(props.get("url", ""))
        if url:
            out.append((url, str(props.get("kind", "unknown"))))
    return out


def decide_action(state: AcquisitionState) -> str:
    """retrieve -> preprocess -> analyze, keyed off present artifacts."""
    if state.status == "failed":
        raise AcquisitionError(
            f"dataset {state.dataset_id} is in a failed state; reset required"
        )
    if not state.raw_paths:
        return "retrieve"
    if state.normalized_path is None:
        return "preprocess"
    return "analyze"


# ---------------------------------------------------------------------------
# Retrieval
# ---------------------------------------------------------------------------

def detect_format(path, url: str = "") -> str:
    """Extension plus magic bytes; NetCDF/HDF are detection-only formats."""
    head = b""
    try:
        with open(path, "rb") as fh:
            head = fh.read(8)
    except OSError:
        pass
    if head.startswith(b"CDF\x01") or head.startswith(b"CDF\x02"):
        return "netcdf"
    if head.startswith(b"\x89HDF"):
        return "hdf"
    suffix = Path(urlparse(url).path or str(path)).suffix.lower()
    if suffix in (".csv", ".tsv"):
        return "csv"
    if suffix == ".json":
        return "json"
    stripped = head.lstrip()
    if stripped.startswith(b"{") or stripped.startswith(b"["):
        return "json"
    return "csv" if head else "unknown"


def _sorted_links(links):
    return sorted(
        enumerate(links),
        key=lambda pair: (_KIND_PRIORITY.get(pair[1][1], 2), pair[0]),
    )


def _fetch_url(url: str, dest: Path, timeout: float, size_cap: int):
    parsed = urlparse(url)
    if parsed.scheme in ("", "file"):
        src = Path(url2pathname(parsed.path) if parsed.scheme == "file" else url)
        data = src.read_bytes()
        if len(data) > size_cap:
            raise AcquisitionError(f"size cap exceeded: {len(data)} bytes")
        dest.write_bytes(data)
        return
    import requests

    headers = {}
    token = os.environ.get(AUTH_TOKEN_ENV)
    if token:
        headers["Authorization"] = f"Bearer {token}"
    with requests.get(url, headers=headers, timeout=timeout, stream=True) as resp:
        resp.raise_for_status()
        size = 0
        with open(dest, "wb") as fh:
            for chunk in resp.iter_content(chunk_size=1 << 16):
                size += len(chunk)
                if size > size_cap:
                    raise AcquisitionError(f"size cap exceeded: > {size_cap} bytes")
                fh.write(chunk)


def retrieve(
    state: AcquisitionState,
    out_dir,
    timeout: float = DEFAULT_TIMEOUT,
    size_cap: int = DEFAULT_SIZE_CAP,
) -> AcquisitionState:
    """Download the first accessible link to a content-addressed path."""
    if not state.links:
        raise AcquisitionError("no links to retrieve")
    raw_dir = Path(out_dir) / state.dataset_id / "raw"
    raw_dir.mkdir(parents=True, exist_ok=True)
    for _idx, (url, kind) in _sorted_links(state.links):
        name = hashlib.sha256(url.encode("utf-8")).hexdigest()[:16]
        suffix = Path(urlparse(url).path).suffix or ".dat"
        dest = raw_dir / f"{name}{suffix}"
        try:
            _fetch_url(url, dest, timeout, size_cap)
        except Exception as exc:
            state.diagnostics.append(f"{url}: {exc}")
            continue
        state.raw_paths.append(str(dest))
        state.raw_format = detect_format(dest, url)
        state.status = "retrieved"
        if state.raw_format in ("netcdf", "hdf"):
            state.diagnostics.append(
                f"{url}: format {state.raw_format} detected; unsupported for normalization"
            )
        return state
    state.status = "failed"
    return state


# ---------------------------------------------------------------------------
# Normalization (transform T)
# ---------------------------------------------------------------------------

def _flatten(obj: dict, prefix: str = "") -> dict:
    out = {}
    for key, value in obj.items():
        name = f"{prefix}.{key}" if prefix else str(key)
        if isinstance(value, dict):
            # one-level dotted flattening only
            for k2, v2 in value.items():
                out[f"{name}.{k2}"] = v2
        else:
            out[name] = value
    return out


def normalize(state: AcquisitionState, out_dir) -> AcquisitionState:
    """Standardize the raw artifact into a canonical UTF-8 CSV table."""
    if not state.raw_paths:
        raise AcquisitionError("no raw artifact to normalize")
    raw_path = Path(state.raw_paths[0])
    fmt = state.raw_format or detect_format(raw_path)
    dest = Path(out_dir) / state.dataset_id / "norm.csv"
    dest.parent.mkdir(parents=True, exist_ok=True)
    try:
        if fmt == "csv":
            rows = _read_csv_rows(raw_path)
        elif fmt == "json":
            rows = _read_json_rows(raw_path)
        else:
            state.status = "failed"
            state.diagnostics.append(f"unsupported format for normalization: {fmt}")
            return state
    except AcquisitionError as exc:
        state.status = "failed"
        state.diagnostics.append(str(exc))
        return state
    header, data = rows
    with open(dest, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(data)
    state.normalized_path = str(dest)
    state.status = "preprocessed"
    return state


def _read_csv_rows(path: Path):
    with open(path, newline="", encoding="utf-8-sig") as fh:
        reader = csv.reader(fh)
        rows = [row for row in reader if row]
    if not rows:
        raise AcquisitionError("empty CSV input")
    header = [cell.strip() for cell in rows[0]]
    data = []
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise AcquisitionError(f"ragged CSV row at line {i}")
        data.append([cell.strip() for cell in row])
    return header, data


def _read_json_rows(path: Path):
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise AcquisitionError(f"invalid JSON: {exc}") from exc
    if isinstance(payload, dict):
        payload = [payload]
    if not isinstance(payload, list) or not all(
        isinstance(item, dict) for item in payload
    ):
        raise AcquisitionError("JSON input is not an array of objects")
    flat = [_flatten(item) for item in payload]
    header = sorted({k for row in flat for k in row})
    if not header:
        raise AcquisitionError("JSON input has no columns")
    data = [
        ["" if row.get(k) is None else str(row.get(k)) for k in header]
        for row in flat
    ]
    return header, data


# ---------------------------------------------------------------------------
# Validation (constraint check V)
# ---------------------------------------------------------------------------

_URL_RE = re.compile(r"^(https?|file)://\S+$|^/\S*$|^[A-Za-z]:\\")


def _link_valid(url: str) -> bool:
    return bool(_URL_RE.match(url)) or Path(url).is_absolute()


def validate(state: AcquisitionState, check_only: bool = False) -> int:
    """Link validity, accessibility, structural consistency. Returns V.

    In check-only mode accessibility is probed without downloading.
    V = 0 is a result, not an error.
    """
    checks = {}
    checks["link_valid"] = any(_link_valid(url) for url, _ in state.links)
    if check_only:
        checks["accessible"] = _probe_links(state.links)
        checks["structure"] = True
    else:
        checks["accessible"] = bool(state.raw_paths)
        checks["structure"] = _structure_ok(state.normalized_path)
    state.validation = checks
    return state.v


def _probe_links(links) -> bool:
    for url, _kind in links:
        parsed = urlparse(url)
        if parsed.scheme in ("", "file"):
            path = url2pathname(parsed.path) if parsed.scheme == "file" else url
            if Path(path).exists():
                return True
            continue
        try:
            import requests

            resp = requests.head(url, timeout=10, allow_redirects=True)
            if resp.status_code < 400:
                return True
        except Exception:
            continue
    return False


def _structure_ok(normalized_path) -> bool:
    if not normalized_path or not Path(normalized_path).exists():
        return False
    try:
        with open(normalized_path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if not header:
                return False
            count = 0
            for row in reader:
                if len(row) != len(header):
                    return False
                count += 1
            return count >= 1
    except (OSError, csv.Error):
        return False


# ---------------------------------------------------------------------------
# Analysis
# ---------------------------------------------------------------------------

_TIME_COLUMN_HINTS = ("time", "date", "year", "month")


def _as_decimal_year(text: str) -> Optional[float]:
    text = text.strip()
    if not text:
        return None
    try:
        return float(text)
    except ValueError:
        pass
    m = re.match(r"^(\d{4})-(\d{2})(?:-(\d{2}))?", text)
    if m:
        year, month = int(m.group(1)), int(m.group(2))
        day = int(m.group(3) or 15)
        return year + (month - 1) / 12.0 + (day - 1) / 365.0
    return None


def analyze(state: AcquisitionState, out_dir) -> dict:
    """Per-numeric-column statistics plus an OLS slope against time.

    Writes summary.json and a plot-ready two-column (time, value) CSV.
    Requires V = 1.
    """
    if state.v != 1:
        raise AcquisitionError("analysis requires validation V = 1")
    norm = Path(state.normalized_path)
    with open(norm, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = list(reader)

    columns = {name: [row[i] for row in rows] for i, name in enumerate(header)}

    time_col = None
    for name in header:
        if any(h in name.lower() for h in _TIME_COLUMN_HINTS):
            values = [_as_decimal_year(v) for v in columns[name]]
            if sum(v is not None for v in values) >= 2:
                time_col = name
                times = values
                break
    if time_col is None:
        for name in header:
            values = [_as_decimal_year(v) for v in columns[name]]
            if sum(v is not None for v in values) >= 2:
                time_col = name
                times = values
                break

    stats = {}
    plot_column = None
    for name in header:
        if name == time_col:
            continue
        numeric = []
        for v in columns[name]:
            try:
                numeric.append(float(v))
            except ValueError:
                numeric.append(math.nan)
        arr = np.array(numeric)
        mask = ~np.isnan(arr)
        if mask.sum() == 0:
            continue
        entry = {
            "count": int(mask.sum()),
            "min": float(arr[mask].min()),
            "max": float(arr[mask].max()),
            "mean": float(arr[mask].mean()),
        }
        if time_col is not None:
            t = np.array([tv if tv is not None else math.nan for tv in times])
            both = mask & ~np.isnan(t)
            if both.sum() >= 2 and np.ptp(t[both]) > 0:
                slope, _intercept = np.polyfit(t[both], arr[both], 1)
                entry["ols_slope_per_year"] = float(slope)
        stats[name] = entry
        if plot_column is None:
            plot_column = name

    out = Path(out_dir) / state.dataset_id
    out.mkdir(parents=True, exist_ok=True)
    summary = {
        "dataset_id": state.dataset_id,
        "time_column": time_col,
        "columns": stats,
    }
    with open(out / "summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=1, sort_keys=True)
        fh.write("\n")

    if time_col is not None and plot_column is not None:
        with open(out / "plot.csv", "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["time", plot_column])
            for tv, v in zip(times, columns[plot_column]):
                if tv is not None:
                    writer.writerow([repr(tv), v])

    state.status = "analyzed"
    return summary


def run_pipeline(
    graph,
    dataset_id: str,
    out_dir,
    check_only: bool = False,
    timeout: float = DEFAULT_TIMEOUT,
    size_cap: int = DEFAULT_SIZE_CAP,
) -> AcquisitionState:
    """Full deterministic pass: retrieve, preprocess, validate, analyze."""
    state = AcquisitionState(
        dataset_id=dataset_id, links=extract_links(graph, dataset_id)
    )
    if check_only:
        validate(state, check_only=True)
        return state
    while state.status not in ("analyzed", "failed"):
        action = decide_action(state)
        if action == "retrieve":
            retrieve(state, out_dir, timeout=timeout, size_cap=size_cap)
        elif action == "preprocess":
            normalize(state, out_dir)
        else:
            if validate(state) == 1:
                analyze(state, out_dir)
            else:
                state.status = "failed"
                state.diagnostics.append("validation failed; analysis skipped")
    return state
