"""Shared fixtures: a 50-record synthetic catalog corpus (5 recorded pages
x 10 records) with one planted NYC tide-gauge dataset, a small model
variable catalog, and session-scoped pipeline outputs built from them.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pytest

from climkg.config import RunConfig
from climkg.pipeline import run_build, run_enrich, run_geo, run_ingest

NYC_CONCEPT_ID = "C1200000500-NYSL"
SEEDED_SLOPE_MM_PER_YEAR = 3.2

# (region name for spatial keywords, [s, w, n, e] or None)
_REGIONS = [
    ("Australia", [-38.0, 114.0, -12.0, 153.0]),
    ("Japan", [31.0, 131.0, 44.0, 144.0]),
    ("Brazil", [-25.0, -65.0, -5.0, -45.0]),
    ("Western Europe", [44.0, 0.0, 53.0, 14.0]),
    ("Central Pacific", [-8.0, -152.0, -2.0, -142.0]),
    ("Global", [-60.0, -170.0, 60.0, 170.0]),
    ("Conterminous United States", [31.0, -115.0, 45.0, -85.0]),
    (None, None),
]

_TOPICS = [
    ("Sea Surface Temperature", "Gridded sea surface temperature fields "
     "from satellite radiometers at 0.25 degree resolution. Daily composites."),
    ("Atmospheric Carbon Dioxide", "Column-averaged carbon dioxide mole "
     "fraction retrievals. Monthly means on a 2 x 2.5 degree grid."),
    ("Soil Moisture", "Surface soil moisture from passive microwave "
     "observations. Weekly aggregates at 25 km spacing."),
    ("Sea Ice Concentration", "Passive microwave sea ice concentration "
     "fields. Daily polar stereographic grids."),
    ("Precipitation Rate", "Merged gauge and satellite precipitation "
     "analysis. 3-hour accumulation at 0.1 degrees."),
    ("Surface Wind Speed", "Scatterometer ocean surface wind speed and "
     "direction. Twice-daily swath retrievals."),
    ("Snow Cover Extent", "Optical snow cover extent mapping. 8-day "
     "maximum extent composites at 500 meters."),
]

_CENTERS = ["NOAA NCEI", "NASA GES DISC", "ESA Climate Office", "JMA"]
_PLATFORMS = ["Aqua", "Terra", "Sentinel-3", "GCOM-W1", "DMSP 5D-3/F17"]


def _tide_gauge_csv(path: Path) -> None:
    rng = np.random.default_rng(42)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["time", "sea_level_mm"])
        for m in range(336):  # monthly, 1993-2020
            t = 1993.0 + m / 12.0
            value = SEEDED_SLOPE_MM_PER_YEAR * (t - 1993.0) + rng.normal(0.0, 4.0)
            writer.writerow([repr(t), f"{value:.3f}"])


def _nyc_record(data_path: Path) -> tuple[dict, dict]:
    json_doc = {
        "concept_id": NYC_CONCEPT_ID,
        "title": "Monthly Mean Sea Level from the Battery Tide Gauge, New York Harbor",
        "summary": "Monthly mean relative sea level measured by the tide "
        "gauge at the Battery in New York Harbor. Supports sea level rise "
        "trend analysis for the New York metropolitan coastline.",
        "data_center": "NOAA NCEI",
        "boxes": ["40.4 -74.3 41.0 -73.6"],
        "time_start": "1993-01-01T00:00:00Z",
        "links": [{"href": str(data_path), "rel": "data"}],
    }
    umm_doc = {
        "concept_id": NYC_CONCEPT_ID,
        "short_name": "NY_BATTERY_MSL",
        "version_id": "2",
        "spatial_keywords": ["New York"],
        "science_keywords": [
            "Earth Science > Oceans > Sea Surface Topography > Sea Level"
        ],
        "platforms": [{"ShortName": "Tide Gauge Network"}],
        "time_end": "2020-12-31T00:00:00Z",
        "processing_level_id": "4",
        "temporal_resolution": "monthly",
        "variables": [{"name": "sea_level", "units": "mm"}],
    }
    return json_doc, umm_doc


def _synthetic_record(i: int) -> tuple[dict, dict]:
    cid = f"C12000001{i:02d}-TEST"
    topic, summary = _TOPICS[i % len(_TOPICS)]
    region, bbox = _REGIONS[i % len(_REGIONS)]
    # records covering the US (or anything US-adjacent) end before 2000 so
    # the planted NYC dataset is the only "after 2000" match near New York
    late = i % 3 == 0 and region in ("Australia", "Japan", "Brazil", "Global")
    json_doc = {
        "concept_id": cid,
        "title": f"{topic} over {region}" if region else topic,
        "summary": summary,
        "data_center": _CENTERS[i % len(_CENTERS)],
        "time_start": "1980-01-01T00:00:00Z",
        "time_end": "2015-06-30T00:00:00Z" if late else "1999-12-31T00:00:00Z",
        "links": [f"https://data.example.org/archive/ds{i:03d}.csv"],
    }
    umm_doc = {
        "concept_id": cid,
        "short_name": f"SYN_DS_{i:03d}",
        "platforms": [_PLATFORMS[i % len(_PLATFORMS)]],
        "science_keywords": [f"Earth Science > {topic}"],
        "processing_level_id": str(2 + i % 3),
    }
    if region:
        umm_doc["spatial_keywords"] = [region]
    if bbox is not None:
        if i % 11 == 7:  # exercise the flat lat/lon polygon path
            s, w, n, e = bbox
            json_doc["polygons"] = [[s, w, s, e, n, e, n, w, s, w]]
        else:
            json_doc["boxes"] = [" ".join(str(v) for v in bbox)]
    if i % 4 == 0:
        umm_doc["variables"] = [
            {"name": f"var_{topic.lower().split()[0]}", "units": "1"}
        ]
    if i % 5 == 2:
        umm_doc["contacts"] = [{"name": f"Curator {i:02d}",
                                "email": f"curator{i:02d}@example.org"}]
    return json_doc, umm_doc


@dataclass
class Corpus:
    dir: Path
    data_csv: Path
    concept_ids: list


def make_corpus(root: Path) -> Corpus:
    root.mkdir(parents=True, exist_ok=True)
    data_csv = root / "battery_tide_gauge.csv"
    _tide_gauge_csv(data_csv)
    records = [_nyc_record(data_csv)] + [_synthetic_record(i) for i in range(49)]
    for page in range(5):
        chunk = records[page * 10 : (page + 1) * 10]
        json_page = {"items": [doc for doc, _ in chunk]}
        umm_page = {"items": [doc for _, doc in chunk]}
        (root / f"{page + 1:05d}.json").write_text(
            json.dumps(json_page, indent=1), encoding="utf-8"
        )
        (root / f"{page + 1:05d}.umm.json").write_text(
            json.dumps(umm_page, indent=1), encoding="utf-8"
        )
    return Corpus(
        dir=root,
        data_csv=data_csv,
        concept_ids=[doc["concept_id"] for doc, _ in records],
    )


CESM_ROWS = [
    ("TS", "Surface temperature (radiative)", "ATM", "K"),
    ("TREFHT", "Reference height temperature", "ATM", "K"),
    ("TREFHTMX", "Reference height temperature maximum", "ATM", "K"),
    ("SST", "Sea surface temperature", "OCN", "K"),
    ("SSH", "Sea surface height", "OCN", "cm"),
    ("SALT", "Salinity", "OCN", "g/kg"),
    ("PRECT", "Total precipitation rate", "ATM", "m/s"),
    ("PRECC", "Convective precipitation rate", "ATM", "m/s"),
    ("H2OSOI", "Volumetric soil water content", "LND", "mm3/mm3"),
    ("QSOIL", "Ground evaporation flux", "LND", "mm/s"),
    ("ICEFRAC", "Fraction of surface area covered by sea ice", "ICE", "1"),
    ("FSNS", "Net solar flux at surface", "ATM", "W/m2"),
    ("U10", "10 meter wind speed", "ATM", "m/s"),
    ("SNOWDP", "Snow depth over land", "LND", "m"),
]


def make_cesm_csv(path: Path) -> Path:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["name", "description", "component", "units"])
        writer.writerows(CESM_ROWS)
    return path


@pytest.fixture(scope="session")
def corpus(tmp_path_factory) -> Corpus:
    return make_corpus(tmp_path_factory.mktemp("corpus"))


@pytest.fixture(scope="session")
def cesm_csv(tmp_path_factory) -> Path:
    return make_cesm_csv(tmp_path_factory.mktemp("cesm") / "variables.csv")


@dataclass
class PipelineRun:
    harmonized: Path
    classified: Path
    enriched: Path
    graph_dir: Path


def run_full_pipeline(corpus: Corpus, cesm_csv: Path, work: Path) -> PipelineRun:
    work.mkdir(parents=True, exist_ok=True)
    config = RunConfig()
    harmonized = work / "harmonized.jsonl"
    classified = work / "classified.jsonl"
    enriched = work / "enriched.jsonl"
    graph_dir = work / "graph"
    run_ingest(corpus.dir, harmonized, offline=True)
    run_geo(harmonized, classified)
    run_enrich(classified, enriched, cesm_csv, config)
    run_build(enriched, graph_dir, cesm_csv, None, config)
    return PipelineRun(harmonized, classified, enriched, graph_dir)


@pytest.fixture(scope="session")
def pipeline_run(corpus, cesm_csv, tmp_path_factory) -> PipelineRun:
    return run_full_pipeline(corpus, cesm_csv, tmp_path_factory.mktemp("pipeline"))


@pytest.fixture(scope="session")
def graph(pipeline_run):
    from climkg.graph_store import load_csv

    return load_csv(pipeline_run.graph_dir)
