"""Record enrichment: resolution extraction, n-gram evidence, variable
mapping, and similarity clustering of model variables.

Clustering builds an undirected graph over variables where an edge means
the normalized-description ratio clears tau_d or the raw-name ratio clears
tau_n; connected components (union-find) are the semantic clusters.
"""

from __future__ import annotations

import csv
import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from . import kernels
from .embedding import HashEmbedder

log = logging.getLogger(__name__)

_DATA_DIR = Path(__file__).parent / "data"

COMPONENTS = ("ATM", "OCN", "LND", "ICE", "ROF", "GLC", "WAV")

DEFAULT_TAU_DESC = 0.7
DEFAULT_TAU_NAME = 0.8

# text attributes scanned by the regex fallback, in order
TEXT_FIELDS = ("summary", "abstract", "title", "purpose", "description")

_SENTENCE_SPLIT = re.compile(r"[.;\n]")
_PREFIX_RE = re.compile(
    r"^(?:%s)\s*[:\-]*\s+" % "|".join(c.lower() for c in COMPONENTS)
)


def load_resolution_config(path=None) -> dict:
    if path is None:
        path = _DATA_DIR / "resolution_patterns.json"
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def load_climate_vocabulary(path=None) -> list[str]:
    if path is None:
        path = _DATA_DIR / "climate_vocabulary.txt"
    stems = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip().lower()
            if line and not line.startswith("#"):
                stems.append(line)
    return stems


# ---------------------------------------------------------------------------
# Resolution extraction
# ---------------------------------------------------------------------------

@dataclass
class ResolutionInfo:
    spatial_sentences: list[str] = field(default_factory=list)
    temporal_sentences: list[str] = field(default_factory=list)
    spatial_attribute: Optional[str] = None
    temporal_attribute: Optional[str] = None
    spatial_kind: Optional[str] = None  # "attribute" | "regex" | None
    temporal_kind: Optional[str] = None

    def to_json_dict(self) -> dict:
        return {
            "spatial_sentences": self.spatial_sentences,
            "temporal_sentences": self.temporal_sentences,
            "spatial_attribute": self.spatial_attribute,
            "temporal_attribute": self.temporal_attribute,
            "spatial_kind": self.spatial_kind,
            "temporal_kind": self.temporal_kind,
        }


def _dedupe(items: Iterable[str]) -> list[str]:
    seen = set()
    out = []
    for item in items:
        if item not in seen:
            seen.add(item)
            out.append(item)
    return out


def _record_values(record) -> dict:
    """Flatten a HarmonizedRecord (or plain dict) into attr -> value."""
    if hasattr(record, "fields"):
        values = {k: v for k, (v, _p) in record.fields.items()}
        values.update(record.extra)
        return values
    return dict(record)


def _attribute_sentences(values: dict, attr_names: list[str]):
    for attr in attr_names:
        val = values.get(attr)
        if val is None:
            continue
        text = val if isinstance(val, str) else json.dumps(val)
        text = text.strip()
        if text:
            return attr, [f"{attr}: {text}"]
    return None, []


def _regex_sentences(values: dict, patterns: list[str]) -> list[str]:
    compiled = [re.compile(p, re.IGNORECASE) for p in patterns]
    hits = []
    for name in TEXT_FIELDS:
        text = values.get(name)
        if not isinstance(text, str):
            continue
        for raw in _SENTENCE_SPLIT.split(text):
            sentence = raw.strip()
            if sentence and any(rx.search(sentence) for rx in compiled):
                hits.append(sentence)
    return _dedupe(hits)


def extract_resolution(record, config: Optional[dict] = None) -> ResolutionInfo:
    """Structured attributes first; regex over text fields as fallback.

    Returns whole sentences (maximal spans split on '.', ';', newline),
    never bare numbers.
    """
    if config is None:
        config = load_resolution_config()
    values = _record_values(record)
    info = ResolutionInfo()

    attr, sentences = _attribute_sentences(values, config["spatial_attributes"])
    if attr is not None:
        info.spatial_attribute, info.spatial_kind = attr, "attribute"
        info.spatial_sentences = sentences
    else:
        info.spatial_sentences = _regex_sentences(values, config["spatial_regexes"])
        if info.spatial_sentences:
            info.spatial_kind = "regex"

    attr, sentences = _attribute_sentences(values, config["temporal_attributes"])
    if attr is not None:
        info.temporal_attribute, info.temporal_kind = attr, "attribute"
        info.temporal_sentences = sentences
    else:
        info.temporal_sentences = _regex_sentences(values, config["temporal_regexes"])
        if info.temporal_sentences:
            info.temporal_kind = "regex"
    return info


# ---------------------------------------------------------------------------
# Variable catalog, similarity, clustering
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CesmVariable:
    name: str
    description: str
    component: str
    units: str = ""

    def __post_init__(self):
        if not self.name:
            raise ValueError("variable name must be non-empty")
        if self.component not in COMPONENTS:
            raise ValueError(
                f"unknown component {self.component!r} for {self.name}"
            )


def load_cesm_catalog(path) -> list[CesmVariable]:
    """Read the variable catalog CSV (name,description,component,units)."""
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            out.append(
                CesmVariable(
                    name=row["name"].strip(),
                    description=row.get("description", "").strip(),
                    component=row["component"].strip().upper(),
                    units=row.get("units", "").strip(),
                )
            )
    return out


def normalize_description(text: str) -> str:
    """Lowercase, strip component prefixes, collapse whitespace, trim punctuation."""
    text = text.lower()
    text = _PREFIX_RE.sub("", text)
    text = re.sub(r"\s+", " ", text).strip()
    return text.strip(" .,;:!?-")


def similarity_ratio(a: str, b: str) -> float:
    """Gestalt (Ratcliff/Obershelp) ratio; left string is the first argument."""
    return kernels.gestalt_ratio(a, b)


def _canonical_ratio(a: str, b: str) -> float:
    p, q = sorted((a, b))
    return kernels.gestalt_ratio(p, q)


def pairwise_similar(
    v1: CesmVariable,
    v2: CesmVariable,
    tau_desc: float = DEFAULT_TAU_DESC,
    tau_name: float = DEFAULT_TAU_NAME,
) -> bool:
    """True iff description ratio >= tau_desc OR raw-name ratio >= tau_name.

    Each pair is evaluated in canonical string order, so the relation is
    exactly symmetric.
    """
    d1 = normalize_description(v1.description)
    d2 = normalize_description(v2.description)
    if kernels.gestalt_ratio_upper_bound(d1, d2) >= tau_desc:
        if _canonical_ratio(d1, d2) >= tau_desc:
            return True
    if kernels.gestalt_ratio_upper_bound(v1.name, v2.name) >= tau_name:
        if _canonical_ratio(v1.name, v2.name) >= tau_name:
            return True
    return False


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int):
        px, py = self.find(x), self.find(y)
        if px == py:
            return
        if self.rank[px] < self.rank[py]:
            px, py = py, px
        self.parent[py] = px
        if self.rank[px] == self.rank[py]:
            self.rank[px] += 1


@dataclass
class VariableCluster:
    cluster_id: int
    members: frozenset
    representative: str


def cluster_variables(
    variables: list[CesmVariable],
    tau_desc: float = DEFAULT_TAU_DESC,
    tau_name: float = DEFAULT_TAU_NAME,
) -> list[VariableCluster]:
    """Partition variables into connected components of the similarity graph.

    Deterministic: clusters are ordered (and numbered) by their
    lexicographically smallest member.
    """
    names = [v.name for v in variables]
    if len(set(names)) != len(names):
        raise ValueError("variable names must be unique")
    n = len(variables)
    descs = [normalize_description(v.description) for v in variables]
    uf = UnionFind(n)
    desc_m = kernels.pairwise_ratio_matrix(descs)
    name_m = kernels.pairwise_ratio_matrix(names)
    for i in range(n):
        for j in range(i + 1, n):
            if desc_m[i, j] >= tau_desc or name_m[i, j] >= tau_name:
                uf.union(i, j)
    groups: dict[int, set[str]] = {}
    for i in range(n):
        groups.setdefault(uf.find(i), set()).add(names[i])
    clusters = sorted(groups.values(), key=min)
    return [
        VariableCluster(cluster_id=k, members=frozenset(g), representative=min(g))
        for k, g in enumerate(clusters)
    ]


def cluster_lookup(clusters: list[VariableCluster]) -> dict[str, int]:
    return {name: c.cluster_id for c in clusters for name in c.members}


# ---------------------------------------------------------------------------
# Prediction evaluation
# ---------------------------------------------------------------------------

@dataclass
class PredictionEval:
    exact_accuracy: float
    group_accuracy: float
    error_reduction: float
    unmatched: int


def evaluate_predictions(
    pred: dict, truth: dict, clusters: list[VariableCluster]
) -> PredictionEval:
    """Exact and similarity-group accuracies plus error-rate reduction.

    Names outside every cluster count as their own singleton group.
    """
    missing = sorted(set(pred) ^ set(truth))
    if missing:
        raise ValueError(f"pred/truth key mismatch: {missing[:10]}")
    if not pred:
        return PredictionEval(1.0, 1.0, 0.0, 0)
    lookup = cluster_lookup(clusters)
    group_of = lambda name: lookup.get(name, name)
    n = len(pred)
    exact = sum(1 for k in pred if pred[k] == truth[k]) / n
    unmatched = sum(1 for k in pred if group_of(pred[k]) != group_of(truth[k]))
    group = (n - unmatched) / n
    reduction = (group - exact) / (1.0 - exact) if exact < 1.0 else 0.0
    return PredictionEval(exact, group, reduction, unmatched)


# ---------------------------------------------------------------------------
# n-gram evidence
# ---------------------------------------------------------------------------

def generate_ngrams(text: str, n_min: int = 2, n_max: int = 9) -> list[str]:
    """All contiguous word windows of n_min..n_max words, document order."""
    if n_min > n_max:
        raise ValueError("n_min must not exceed n_max")
    words = text.split()
    out = []
    for n in range(n_min, n_max + 1):
        out.extend(
            " ".join(words[i : i + n]) for i in range(len(words) - n + 1)
        )
    return out


def filter_climate_tokens(
    ngrams: list[str], vocabulary: list[str], cap: int = 20
) -> list[str]:
    """Keep n-grams containing a vocabulary stem, first-seen order, capped."""
    if not vocabulary:
        raise ValueError("vocabulary must be non-empty")
    stems = tuple(s.lower() for s in vocabulary)
    out = []
    seen = set()
    for gram in ngrams:
        if gram in seen:
            continue
        words = gram.lower().split()
        if any(w.startswith(stems) for w in words):
            seen.add(gram)
            out.append(gram)
            if len(out) >= cap:
                break
    return out


# ---------------------------------------------------------------------------
# Variable classification (pluggable)
# ---------------------------------------------------------------------------

class NearestNeighborClassifier:
    """Baseline: cosine nearest neighbor over variable-description embeddings.

    Ties are broken by lexicographic variable name.
    """

    def __init__(self, catalog: list[CesmVariable], embedder=None):
        if not catalog:
            raise ValueError("empty variable catalog")
        self.embedder = embedder or HashEmbedder()
        order = sorted(range(len(catalog)), key=lambda i: catalog[i].name)
        self.catalog = [catalog[i] for i in order]
        self.matrix = np.array(
            [self.embedder.embed_text(v.description) for v in self.catalog]
        )

    def classify(self, text: str) -> tuple[str, float]:
        query = self.embedder.embed_text(text)
        scores = kernels.cosine_scores(self.matrix, query)
        best = int(np.argmax(scores))  # first max = lexicographically smallest name
        return self.catalog[best].name, float(scores[best])


class PluggableClassifier:
    """External subprocess classifier with baseline fallback."""

    def __init__(self, command: str, catalog: list[CesmVariable], embedder=None):
        from .plugin import LinePlugin

        self._plugin = LinePlugin(command)
        self._baseline = NearestNeighborClassifier(catalog, embedder)
        self._names = {v.name for v in catalog}

    def classify(self, text: str) -> tuple[str, float]:
        from .plugin import PluginError

        try:
            reply = self._plugin.call({"text": text})
            name = reply["name"]
            confidence = float(reply["confidence"])
            if name not in self._names or not (0.0 <= confidence <= 1.0):
                raise PluginError(f"protocol violation: {reply!r}")
            return name, confidence
        except (PluginError, KeyError, TypeError, ValueError) as exc:
            log.warning("classifier plug-in failed (%s); using baseline", exc)
            return self._baseline.classify(text)


def get_classifier(catalog: list[CesmVariable], provider: str = "builtin", embedder=None):
    if provider == "builtin":
        return NearestNeighborClassifier(catalog, embedder)
    if provider.startswith("subprocess:"):
        return PluggableClassifier(provider.split(":", 1)[1], catalog, embedder)
    raise ValueError(f"unknown classifier provider: {provider!r}")
