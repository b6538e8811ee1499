"""On-disk group cache: a readable JSON document.

Reloading reproduces the enumerated group permutation-for-permutation;
matrices and word lengths are recomputed deterministically from the stored
roots and permutations.  A schema version mismatch raises CacheError and
callers regenerate.
"""

from __future__ import annotations

import json
import os
import time
from pathlib import Path

import numpy as np

from . import __version__
from .errors import CacheError
from .groups import Group, enumerate_group, group_from_perm_stack
from .roots import GroupType, RootSystem

SCHEMA_VERSION = 1


def default_cache_dir() -> Path:
    env = os.environ.get("CCL_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "ccl"


def cache_path_for(t: GroupType, directory: Path | None = None) -> Path:
    d = directory or default_cache_dir()
    name = str(t).replace("(", "_").replace(")", "")
    return d / f"{name}.json"


def save_group(g: Group, path: Path) -> None:
    rs = g.root_system
    doc = {
        "schema_version": SCHEMA_VERSION,
        "group": str(rs.group_type),
        "roots": [[float(x) for x in row] for row in rs.all_roots],
        "permutations": [list(el.perm) for el in g.elements],
        "counts_by_fixed_dim": list(g.counts_by_fixed_dim),
        "metadata": {
            "tool_version": __version__,
            "created_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
            "order": g.order,
        },
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(doc, sort_keys=True))
    tmp.replace(path)


def load_group(rs: RootSystem, path: Path) -> Group:
    """Rebuild the Group from a cache file; validates it against ``rs``."""
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CacheError(f"cannot read cache {path}: {exc}") from exc
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise CacheError(
            f"cache schema {doc.get('schema_version')} != {SCHEMA_VERSION}")
    if doc.get("group") != str(rs.group_type):
        raise CacheError("cache was written for a different group")
    roots = np.array(doc["roots"], dtype=float)
    if roots.shape != rs.all_roots.shape or np.abs(roots - rs.all_roots).max() > 0:
        raise CacheError("cached roots do not match the constructed root system")

    try:
        g = group_from_perm_stack(rs, np.array(doc["permutations"], dtype=np.int32))
    except Exception as exc:
        raise CacheError(f"cached permutations are not a valid group: {exc}") from exc
    if list(g.counts_by_fixed_dim) != doc["counts_by_fixed_dim"]:
        raise CacheError("cached fixed-dimension counts are inconsistent")
    return g


def load_or_enumerate(rs: RootSystem, path: Path | None = None) -> Group:
    """Use a valid cache when present; otherwise enumerate in memory."""
    p = path or cache_path_for(rs.group_type)
    if p.exists():
        try:
            return load_group(rs, p)
        except CacheError:
            pass
    return enumerate_group(rs)
