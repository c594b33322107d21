"""Closed vocabularies for the property graph: node labels, workflow
labels, edge types with their permitted endpoints, embedding flags, and
per-label natural keys.
"""

from __future__ import annotations

# label -> embedding-enabled by default
NODE_LABELS = {
    "Dataset": False,
    "DataCategory": True,
    "DataFormat": False,
    "CoordinateSystem": False,
    "Location": True,
    "Station": False,
    "Organization": False,
    "Platform": False,
    "Consortium": False,
    "TemporalExtent": False,
    "Variable": True,
    "CESMVariable": False,  # config flag embed_cesm_variable flips this
    "Component": False,
    "Contact": False,
    "Project": False,
    "Link": False,
    "SpatialResolution": True,
    "TemporalResolution": True,
    "ScienceKeyword": True,
    "ProcessingLevel": False,
}

WORKFLOW_LABELS = (
    "SurrogateModelingWorkflow",
    "HybridMLPhysicsWorkflow",
    "EquationDiscoveryWorkflow",
    "ParameterizationBenchmark",
    "UncertaintyQuantification",
    "ParameterInferenceWorkflow",
    "SubseasonalForecastingWorkflow",
    "TransferLearningWorkflow",
)

ALL_LABELS = tuple(NODE_LABELS) + WORKFLOW_LABELS

# edge type -> (start label, end label)
EDGE_TYPES = {
    "hasDataCategory": ("Dataset", "DataCategory"),
    "hasDataFormat": ("Dataset", "DataFormat"),
    "usesCoordinateSystem": ("Dataset", "CoordinateSystem"),
    "hasLocation": ("Dataset", "Location"),
    "hasStation": ("Dataset", "Station"),
    "hasOrganization": ("Dataset", "Organization"),
    "hasPlatform": ("Dataset", "Platform"),
    "hasConsortium": ("Dataset", "Consortium"),
    "hasTemporalExtent": ("Dataset", "TemporalExtent"),
    "hasVariable": ("Dataset", "Variable"),
    "hasCESMVariable": ("Dataset", "CESMVariable"),
    "hasSpatialResolution": ("Dataset", "SpatialResolution"),
    "hasTemporalResolution": ("Dataset", "TemporalResolution"),
    "hasProcessingLevel": ("Dataset", "ProcessingLevel"),
    "hasLink": ("Dataset", "Link"),
    "hasProject": ("Dataset", "Project"),
    "hasScienceKeyword": ("Dataset", "ScienceKeyword"),
    "hasContact": ("Dataset", "Contact"),
    "belongsToComponent": ("CESMVariable", "Component"),
    "describesVariable": ("ScienceKeyword", "CESMVariable"),
    "operatesAtLocation": ("Platform", "Location"),
    "worksForOrganization": ("Contact", "Organization"),
    "belongsToConsortium": ("Organization", "Consortium"),
    "similarCESMVariables": ("CESMVariable", "CESMVariable"),
}


def embedding_enabled_labels(embed_cesm_variable: bool = False) -> frozenset:
    labels = {lbl for lbl, flag in NODE_LABELS.items() if flag}
    labels.update(WORKFLOW_LABELS)
    if embed_cesm_variable:
        labels.add("CESMVariable")
    return frozenset(labels)


def edge_schema_legal(start_label: str, edge_type: str, end_label: str) -> bool:
    expected = EDGE_TYPES.get(edge_type)
    return expected is not None and expected == (start_label, end_label)
