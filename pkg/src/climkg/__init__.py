"""Climate metadata knowledge-graph toolkit.

Harmonizes dual-format catalog records, enriches them with geospatial
scope and variable semantics, materializes a property graph with
deterministic IDs, and serves discovery/acquisition workflows.
"""

__version__ = "0.1.0"

# Bump only when the harmonized attribute schema or the node natural-key
# definitions change; node ids are stable within one schema_version.
SCHEMA_VERSION = "1.0"
