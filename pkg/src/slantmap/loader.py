"""Map-spec ingestion: JSON documents (schema slantmap/1) or catalog ids."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .catalog import CatalogError, load_catalog
from .charts import ChartError, ChartManifold
from .expressions import ExpressionSyntaxError
from .maps import MapDefinitionError, MapSpec

SCHEMA_ID = "slantmap/1"

DEFAULT_POINTS = 50
DEFAULT_DIRS = 6
DEFAULT_SEED = 42
DEFAULT_RANK_TOL = 1e-8
DEFAULT_CHECK_TOL = 1e-8
DEFAULT_ANGLE_TOL = 1e-6


class MapSpecError(ValueError):
    """Schema violation; the message carries the JSON pointer of the culprit."""

    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer}: {message}")
        self.pointer = pointer


@dataclass
class AnalysisSettings:
    points: int = DEFAULT_POINTS
    dirs: int = DEFAULT_DIRS
    seed: int = DEFAULT_SEED
    rank_tol: float = DEFAULT_RANK_TOL
    check_tol: float = DEFAULT_CHECK_TOL
    angle_tol: float = DEFAULT_ANGLE_TOL


@dataclass
class LoadedMap:
    spec: MapSpec
    settings: AnalysisSettings
    origin: str       # "catalog:<id>" or file path
    digest: Optional[str] = None  # sha256 of the file bytes


def _expect(condition: bool, pointer: str, message: str) -> None:
    if not condition:
        raise MapSpecError(pointer, message)


def _chart_from_json(doc: dict, pointer: str) -> ChartManifold:
    _expect(isinstance(doc, dict), pointer, "must be an object")
    _expect("dim" in doc, pointer + "/dim", "missing")
    dim = doc["dim"]
    _expect(isinstance(dim, int) and dim >= 1, pointer + "/dim",
            "must be a positive integer")
    metric = doc.get("metric")
    if metric is not None:
        _expect(isinstance(metric, list) and len(metric) == dim
                and all(isinstance(r, list) and len(r) == dim for r in metric),
                pointer + "/metric", f"must be a {dim}x{dim} array of strings")
    j = doc.get("J")
    if j is not None:
        _expect(isinstance(j, list) and len(j) == dim
                and all(isinstance(r, list) and len(r) == dim for r in j),
                pointer + "/J", f"must be a {dim}x{dim} array of strings")
    try:
        return ChartManifold.from_strings(dim, metric, j)
    except (ChartError, ExpressionSyntaxError) as exc:
        raise MapSpecError(pointer, str(exc))


def _settings_from_json(doc: dict) -> AnalysisSettings:
    settings = AnalysisSettings()
    sampling = doc.get("sampling", {})
    _expect(isinstance(sampling, dict), "/sampling", "must be an object")
    for key, attr in (("points", "points"), ("dirs", "dirs"), ("seed", "seed")):
        if key in sampling:
            value = sampling[key]
            _expect(isinstance(value, int) and value > 0 or (key == "seed" and isinstance(value, int)),
                    f"/sampling/{key}", "must be a positive integer")
            setattr(settings, attr, value)
    tolerances = doc.get("tolerances", {})
    _expect(isinstance(tolerances, dict), "/tolerances", "must be an object")
    for key, attr in (("rank", "rank_tol"), ("check", "check_tol"),
                      ("angle", "angle_tol")):
        if key in tolerances:
            value = tolerances[key]
            _expect(isinstance(value, (int, float)) and value > 0,
                    f"/tolerances/{key}", "must be a positive number")
            setattr(settings, attr, float(value))
    return settings


def map_spec_from_json(doc: dict, name: str = "") -> LoadedMap:
    _expect(isinstance(doc, dict), "", "document must be a JSON object")
    schema = doc.get("schema", SCHEMA_ID)
    _expect(schema == SCHEMA_ID, "/schema", f"unsupported schema {schema!r}")
    _expect("source" in doc, "/source", "missing")
    _expect("target" in doc, "/target", "missing")
    _expect("components" in doc, "/components", "missing")
    source = _chart_from_json(doc["source"], "/source")
    target = _chart_from_json(doc["target"], "/target")
    components = doc["components"]
    _expect(isinstance(components, list) and
            all(isinstance(c, str) for c in components),
            "/components", "must be an array of expression strings")
    _expect(len(components) == target.dim, "/components",
            f"expected {target.dim} components for the target dimension, "
            f"got {len(components)}")
    box = None
    domain = doc.get("domain")
    if domain is not None:
        _expect(isinstance(domain, dict) and "box" in domain, "/domain",
                "must be an object with a 'box' array")
        box = domain["box"]
        _expect(isinstance(box, list) and len(box) == source.dim and
                all(isinstance(b, list) and len(b) == 2 for b in box),
                "/domain/box", "must list [lo, hi] per source coordinate")
    try:
        spec = MapSpec.create(source, target, components, box, name=name)
    except (MapDefinitionError, ExpressionSyntaxError) as exc:
        raise MapSpecError("/components", str(exc))
    return LoadedMap(spec, _settings_from_json(doc), origin=name or "inline")


def load_map_spec(identifier: str) -> LoadedMap:
    """Resolve 'catalog:<id>' or a JSON file path into a validated map."""
    if identifier.startswith("catalog:"):
        cid = identifier[len("catalog:"):]
        try:
            spec = load_catalog(cid)
        except CatalogError as exc:
            raise MapSpecError("/map", str(exc.args[0]))
        return LoadedMap(spec, AnalysisSettings(), origin=f"catalog:{cid}")
    path = Path(identifier)
    if not path.is_file():
        raise MapSpecError("/map", f"no such file: {identifier}")
    raw = path.read_bytes()
    try:
        doc = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MapSpecError("/map", f"invalid JSON: {exc}")
    loaded = map_spec_from_json(doc, name=str(path))
    loaded.digest = hashlib.sha256(raw).hexdigest()
    loaded.origin = str(path)
    return loaded
