"""Data loading utilities."""

import copy
import logging
import os

import yaml

from knotres.errors import ManifestError

logger = logging.getLogger(__name__)

PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

DEFAULT_SETTINGS = {
    "output": {"format": "json"},
    "orbit": {"depth": 2, "budget": 10000},
    "alexander": {"delete_vertex": None},
    "batch": {"workers": 4},
    "logging": {"level": "WARNING", "file": None},
}


def get_data_dir():
    """Get the bundled data directory: $KNOTRES_DATA, then ./data, then the repo's data/."""
    env_dir = os.environ.get("KNOTRES_DATA")
    if env_dir:
        if os.path.isdir(env_dir):
            logger.debug(f"Using data directory from KNOTRES_DATA: {env_dir}")
            return env_dir
        logger.warning(f"KNOTRES_DATA points to a missing directory: {env_dir}")

    potential_paths = [
        os.path.join(os.getcwd(), "data"),
        os.path.join(PROJECT_ROOT, "data"),
    ]
    for path in potential_paths:
        if os.path.isdir(os.path.join(path, "diagrams")):
            logger.debug(f"Found data directory at: {path}")
            return path

    # Fall back on the repo location even if it has not been set up yet
    return potential_paths[-1]


def _merge(base, override):
    merged = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def get_settings_path():
    return os.environ.get("KNOTRES_CONFIG") or os.path.join(PROJECT_ROOT, "config", "settings.yaml")


def load_settings(path=None):
    """Settings from config/settings.yaml (or $KNOTRES_CONFIG) merged over the built-in defaults."""
    path = path or get_settings_path()
    if not os.path.exists(path):
        logger.debug(f"No settings file at {path}; using defaults")
        return copy.deepcopy(DEFAULT_SETTINGS)
    try:
        with open(path) as f:
            loaded = yaml.safe_load(f) or {}
    except (OSError, yaml.YAMLError) as e:
        logger.error(f"Error reading settings {path}: {e}")
        return copy.deepcopy(DEFAULT_SETTINGS)
    return _merge(DEFAULT_SETTINGS, loaded)


def resolve_path(path, *base_dirs):
    """Locate an input file: as given, then under each base dir (full relative path, then file name)."""
    if os.path.isabs(path) or os.path.exists(path):
        return path
    for base_dir in base_dirs:
        for candidate in (os.path.join(base_dir, path), os.path.join(base_dir, os.path.basename(path))):
            if os.path.exists(candidate):
                logger.debug(f"Resolved {path} to {candidate}")
                return candidate
    return path


def get_input_dirs():
    """Directories searched for relative input paths."""
    data_dir = get_data_dir()
    return [data_dir, os.path.join(data_dir, "diagrams"), os.path.join(data_dir, "edge_lists"),
            os.path.join(data_dir, "tangles")]


def read_text(path):
    with open(path) as f:
        return f.read()


def load_manifest(path=None):
    """Manifest entries in file order: [{"id", "name", "file", "category", "expected_fp"}, ...].

    The manifest is YAML keyed by diagram id; `file` is relative to the manifest's directory.
    """
    path = path or os.path.join(get_data_dir(), "manifest.yaml")
    try:
        with open(path) as f:
            raw = yaml.safe_load(f) or {}
    except OSError as e:
        raise ManifestError(f"cannot read manifest {path}: {e}")
    except yaml.YAMLError as e:
        raise ManifestError(f"manifest {path} is not valid YAML: {e}")
    if not isinstance(raw, dict):
        raise ManifestError(f"manifest {path} must map diagram ids to entries")

    base_dir = os.path.dirname(os.path.abspath(path))
    entries = []
    for diagram_id, entry in raw.items():
        if not isinstance(entry, dict) or "file" not in entry:
            raise ManifestError(f"manifest entry {diagram_id!r} needs a 'file'")
        entries.append({
            "id": str(diagram_id),
            "name": str(entry.get("name", diagram_id)),
            "file": os.path.join(base_dir, entry["file"]),
            "category": entry.get("category"),
            "expected_fp": None if entry.get("expected_fp") is None else str(entry["expected_fp"]),
        })
    logger.info(f"Loaded {len(entries)} manifest entries from {path}")
    return entries


def load_tangle(path):
    """Tangle spec `{pivot: int, crossings: [int, ...]}` from a YAML file."""
    try:
        with open(path) as f:
            spec = yaml.safe_load(f) or {}
    except (OSError, yaml.YAMLError) as e:
        raise ManifestError(f"cannot read tangle file {path}: {e}")
    if "pivot" not in spec or "crossings" not in spec:
        raise ManifestError(f"tangle file {path} needs 'pivot' and 'crossings'")
    return spec