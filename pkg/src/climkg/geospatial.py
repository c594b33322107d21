"""Geometry standardization and offline geographic classification.

Bounding boxes, flat coordinate lists, and points are standardized into
polygonal geometries, unified, and classified against an offline world
boundary set through an R-tree index. Classification is candidate
retrieval by bounding-box intersection followed by exact intersection
filtering; spatial scope is assigned from the resulting country/continent
sets. Records without usable geometry come back "unclassified" rather
than failing.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

from shapely import STRtree
from shapely.geometry import (
    GeometryCollection,
    MultiPolygon,
    Polygon,
    box,
    shape,
)
from shapely.ops import unary_union
from shapely.validation import make_valid

log = logging.getLogger(__name__)

_DATA_DIR = Path(__file__).parent / "data"

SCOPES = (
    "ocean",
    "global",
    "continental",
    "country",
    "multinational",
    "regional",
    "unclassified",
)


class GeometryError(ValueError):
    pass


def bbox_to_polygon(b: Sequence[float]):
    """Convert [s, w, n, e] degrees into a Polygon.

    Boxes with w > e cross the antimeridian and are split into a
    MultiPolygon of two boxes. Degenerate (zero-area) boxes are rejected.
    """
    if len(b) != 4:
        raise GeometryError(f"bounding box needs 4 values, got {len(b)}")
    s, w, n, e = (float(x) for x in b)
    if s > n:
        raise GeometryError(f"south {s} exceeds north {n}")
    if not (-90.0 <= s <= 90.0 and -90.0 <= n <= 90.0):
        raise GeometryError(f"latitude out of range: s={s}, n={n}")
    if not (-180.0 <= w <= 180.0 and -180.0 <= e <= 180.0):
        raise GeometryError(f"longitude out of range: w={w}, e={e}")
    if s == n or w == e:
        raise GeometryError(f"degenerate bounding box [s={s}, w={w}, n={n}, e={e}]")
    if w > e:  # antimeridian crossing
        return MultiPolygon([box(w, s, 180.0, n), box(-180.0, s, e, n)])
    return Polygon([(w, s), (e, s), (e, n), (w, n), (w, s)])


def parse_polygon_coords(coords: Sequence[float]) -> Polygon:
    """Parse a flat alternating latitude/longitude list into a Polygon.

    Point k is (lon=coords[2k+1], lat=coords[2k]); ring closure is added
    when the first and last points differ.
    """
    if len(coords) % 2 != 0:
        raise GeometryError(f"odd coordinate count {len(coords)}")
    points = [
        (float(coords[i + 1]), float(coords[i])) for i in range(0, len(coords), 2)
    ]
    if points and points[0] == points[-1]:
        points = points[:-1]
    if len(points) < 3:
        raise GeometryError(f"fewer than 3 vertices at offset {len(coords)}")
    for lon, lat in points:
        if not (-90.0 <= lat <= 90.0):
            raise GeometryError(f"latitude {lat} out of range")
        if not (-180.0 <= lon <= 180.0):
            raise GeometryError(f"longitude {lon} out of range")
    points.append(points[0])
    return Polygon(points)


def unify_shapes(shapes: list):
    """One shape passes through; several are unioned; none yields None."""
    if not shapes:
        return None
    if len(shapes) == 1:
        return shapes[0]
    try:
        return unary_union(shapes)
    except Exception as exc:
        log.warning("union failed (%s); repairing inputs", exc)
        repaired = [make_valid(s) for s in shapes]
        return unary_union(repaired)


def extract_valid_geometry(u):
    """Keep polygonal geometry only.

    Polygons and MultiPolygons pass through; collections are reduced to
    the union of their polygonal members; anything else becomes None.
    """
    if u is None:
        return None
    if isinstance(u, (Polygon, MultiPolygon)):
        if not u.is_valid:
            u = make_valid(u)
            return extract_valid_geometry(u)
        return u if not u.is_empty else None
    if isinstance(u, GeometryCollection):
        polys = [g for g in u.geoms if isinstance(g, (Polygon, MultiPolygon))]
        if not polys:
            return None
        return extract_valid_geometry(unary_union(polys))
    return None


def record_geometry(rec_fields: dict, point_buffer: float = 0.0):
    """Standardize a record's spatial fields into one geometry or None.

    Understands `boxes` (list of "[s w n e]" strings or 4-lists),
    `polygons` (flat lat/lon lists, possibly nested), and `points`
    ("lat lon" strings or 2-lists; buffered into small boxes when
    point_buffer > 0, else skipped).
    """
    shapes = []
    for raw in _as_list(rec_fields.get("boxes")):
        try:
            shapes.append(bbox_to_polygon(_numbers(raw)))
        except GeometryError as exc:
            log.warning("box rejected: %s", exc)
    for raw in _as_list(rec_fields.get("polygons")):
        flat = _numbers(raw)
        try:
            shapes.append(parse_polygon_coords(flat))
        except GeometryError as exc:
            log.warning("polygon rejected: %s", exc)
    if point_buffer > 0.0:
        for raw in _as_list(rec_fields.get("points")):
            nums = _numbers(raw)
            if len(nums) == 2:
                lat, lon = nums
                shapes.append(
                    box(lon - point_buffer, lat - point_buffer,
                        lon + point_buffer, lat + point_buffer)
                )
    return extract_valid_geometry(unify_shapes(shapes))


def _as_list(value) -> list:
    if value is None:
        return []
    if isinstance(value, (list, tuple)):
        # flat numeric list = a single shape, not many
        if value and all(isinstance(v, (int, float)) for v in value):
            return [list(value)]
        return list(value)
    return [value]


def _numbers(raw) -> list[float]:
    if isinstance(raw, str):
        return [float(tok) for tok in raw.replace(",", " ").split()]
    if isinstance(raw, (list, tuple)):
        out = []
        for v in raw:
            if isinstance(v, (list, tuple)):
                out.extend(float(x) for x in v)
            else:
                out.append(float(v))
        return out
    raise GeometryError(f"unparseable coordinate payload: {raw!r}")


# ---------------------------------------------------------------------------
# Boundary set and classification
# ---------------------------------------------------------------------------

@dataclass
class BoundarySet:
    names: list[str]
    continents: dict[str, str]  # name -> continent
    geometries: list  # shapely geometries, aligned with names
    index: STRtree = field(repr=False, default=None)

    def __len__(self):
        return len(self.names)


def build_boundary_index(entries: Iterable[tuple[str, str, object]]) -> BoundarySet:
    """Build an R-tree-backed boundary set from (name, continent, geometry)."""
    names, continents, geometries = [], {}, []
    for name, continent, geom in entries:
        if name in continents:
            raise GeometryError(f"duplicate boundary name {name!r}")
        names.append(name)
        continents[name] = continent
        geometries.append(geom)
    return BoundarySet(
        names=names,
        continents=continents,
        geometries=geometries,
        index=STRtree(geometries) if geometries else None,
    )


def load_boundaries(path=None) -> BoundarySet:
    """Load the boundary GeoJSON (properties: name, continent)."""
    if path is None:
        path = _DATA_DIR / "world_boundaries.geojson"
    with open(path, encoding="utf-8") as fh:
        collection = json.load(fh)
    entries = [
        (
            feat["properties"]["name"],
            feat["properties"]["continent"],
            shape(feat["geometry"]),
        )
        for feat in collection["features"]
    ]
    return build_boundary_index(entries)


def candidate_boundaries(g, bs: BoundarySet) -> list[int]:
    """Indices of boundaries whose bbox intersects bbox(g); superset of truth."""
    if bs.index is None:
        return []
    probe = box(*g.bounds)
    return sorted(int(i) for i in bs.index.query(probe))


@dataclass
class GeoFootprint:
    geometry: object = None
    countries: set = field(default_factory=set)
    continents: set = field(default_factory=set)
    scope: str = "unclassified"

    def to_json_dict(self) -> dict:
        return {
            "countries": sorted(self.countries),
            "continents": sorted(self.continents),
            "scope": self.scope,
            "wkt": self.geometry.wkt if self.geometry is not None else None,
        }


def classify_scope(
    countries: set,
    continents: set,
    intersect_empty: bool,
    multinational: bool = False,
) -> str:
    """Hierarchical scope labels with fixed precedence.

    Precedence: ocean > global > country > regional > continental. With
    `multinational` set, the >=4-countries-one-continent case is labeled
    multinational instead of continental.
    """
    if intersect_empty:
        return "ocean"
    if len(continents) > 1:
        return "global"
    if len(countries) == 1:
        return "country"
    if 2 <= len(countries) <= 3:
        return "regional"
    if len(countries) >= 4:
        return "multinational" if multinational else "continental"
    return "unclassified"


def classify_footprint(
    g, bs: Optional[BoundarySet], multinational: bool = False
) -> GeoFootprint:
    """Candidate retrieval by bbox, exact intersection filter, scope label.

    Grazing contact (shared edge, zero area) counts as intersecting.
    Missing geometry or boundary data yields an unclassified footprint.
    """
    if g is None:
        return GeoFootprint(scope="unclassified")
    if bs is None or len(bs) == 0:
        log.warning("boundary set unavailable; classifying as unclassified")
        return GeoFootprint(geometry=g, scope="unclassified")
    countries = set()
    for idx in candidate_boundaries(g, bs):
        if bs.geometries[idx].intersects(g):
            countries.add(bs.names[idx])
    continents = {bs.continents[name] for name in countries}
    scope = classify_scope(countries, continents, not countries, multinational)
    return GeoFootprint(
        geometry=g, countries=countries, continents=continents, scope=scope
    )
