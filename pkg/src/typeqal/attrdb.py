"""Attribute database: which operations a named type supports.

The base similarity between two non-generic types is the Jaccard index of
their attribute sets, with attributes common to every object excluded.
The database is a JSON snapshot generated by runtime introspection (see
the separate ``gen-attrdb`` tool); a snapshot is bundled with the package
so scoring works out of the box.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping

SUPPORTED_VERSIONS = (1,)


class SchemaError(ValueError):
    """The attribute-database file does not match the expected schema."""


@dataclass(frozen=True)
class AttributeDatabase:
    """Immutable map from canonical type name to its attribute set.

    ``strict_names`` controls qualified-name matching: by default,
    ``pathlib.Path`` and ``Path`` count as the same name (predictions vary
    in import qualification); in strict mode only full names match.
    """

    version: int
    object_baseline: frozenset[str]
    types: Mapping[str, frozenset[str]]
    strict_names: bool = False

    def lookup(self, name: str) -> frozenset[str] | None:
        found = self.types.get(name)
        if found is None and not self.strict_names and "." in name:
            found = self.types.get(name.rsplit(".", 1)[-1])
        return found


def _names_equal(a: str, b: str, strict: bool) -> bool:
    if a == b:
        return True
    if strict:
        return False
    return a.rsplit(".", 1)[-1] == b.rsplit(".", 1)[-1]


def load_attrdb(path: str | Path, strict_names: bool = False) -> AttributeDatabase:
    """Load and validate an attribute-database JSON file.

    Raises OSError for unreadable paths and :class:`SchemaError` for
    content problems (bad version, missing fields, non-string attributes).
    The object baseline is subtracted from every type's set on load, so
    stored sets are always disjoint from the baseline afterwards.
    """
    with open(path, "r", encoding="utf-8") as handle:
        try:
            raw = json.load(handle)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise SchemaError("top level must be a JSON object")
    for key in ("version", "object_baseline", "types"):
        if key not in raw:
            raise SchemaError(f"missing required field {key!r}")
    version = raw["version"]
    if version not in SUPPORTED_VERSIONS:
        raise SchemaError(
            f"unsupported version {version!r}; supported: {list(SUPPORTED_VERSIONS)}"
        )
    baseline = _string_set(raw["object_baseline"], "object_baseline")
    if not isinstance(raw["types"], dict):
        raise SchemaError("'types' must be an object")
    types: dict[str, frozenset[str]] = {}
    for name, attrs in raw["types"].items():
        if not isinstance(name, str) or not name:
            raise SchemaError(f"bad type name {name!r}")
        types[name] = _string_set(attrs, f"types[{name!r}]") - baseline
    return AttributeDatabase(
        version=version,
        object_baseline=baseline,
        types=types,
        strict_names=strict_names,
    )


def _string_set(value, where: str) -> frozenset[str]:
    if not isinstance(value, list) or any(not isinstance(v, str) for v in value):
        raise SchemaError(f"{where} must be a list of strings")
    return frozenset(value)


def default_db_path() -> Path:
    """Path of the attribute-database snapshot bundled with the package."""
    return Path(str(resources.files("typeqal").joinpath("data/attrdb.json")))


def load_default_db(strict_names: bool = False) -> AttributeDatabase:
    return load_attrdb(default_db_path(), strict_names=strict_names)


def base_similarity(db: AttributeDatabase, a: str, b: str) -> float:
    """Similarity of two non-generic type names, in [0, 1].

    Equal names (after qualification matching) score 1; this covers
    user-defined classes and opaque names the database does not know.
    Two known names score the Jaccard index of their attribute sets, and
    an unknown name against anything else scores 0.
    """
    if _names_equal(a, b, db.strict_names):
        return 1.0
    set_a = db.lookup(a)
    set_b = db.lookup(b)
    if set_a is None or set_b is None:
        return 0.0
    if set_a == set_b:
        return 1.0
    combined = set_a | set_b
    return len(set_a & set_b) / len(combined)
