"""Generate the attribute database consumed by typeqal.

Every type's attribute set is the interpreter's own directory listing of
the class object, minus the attributes shared by every object.  Builtin
container and abstract-collection names are introspected through their
``typing`` alias objects so that, for example, ``Sequence`` and ``list``
expose commensurable surfaces; plain scalars use the class directly.

Output is deterministic for a fixed interpreter: keys and attribute lists
are sorted, so regeneration on the same version is byte-identical.
"""

from __future__ import annotations

import importlib
import json
import typing
from dataclasses import dataclass, field
from pathlib import Path

SCHEMA_VERSION = 1

BUILTIN_CLASSES: dict[str, type] = {
    "int": int, "float": float, "complex": complex, "bool": bool,
    "str": str, "bytes": bytes, "bytearray": bytearray,
    "memoryview": memoryview, "range": range, "slice": slice,
    "object": object, "None": type(None),
}

# Builtin containers are keyed by their lowered spelling but introspected
# through the typing alias, keeping their surface commensurable with the
# abstract-collection aliases below.
ALIASED_BUILTINS: dict[str, object] = {
    "list": typing.List, "dict": typing.Dict, "set": typing.Set,
    "frozenset": typing.FrozenSet, "tuple": typing.Tuple, "type": typing.Type,
}

# Bare name -> (typing alias, fully qualified runtime name); each entry is
# registered under both spellings.
ABC_ALIASES: dict[str, tuple[object, str]] = {
    "Iterable": (typing.Iterable, "collections.abc.Iterable"),
    "Iterator": (typing.Iterator, "collections.abc.Iterator"),
    "Reversible": (typing.Reversible, "collections.abc.Reversible"),
    "Generator": (typing.Generator, "collections.abc.Generator"),
    "Sequence": (typing.Sequence, "collections.abc.Sequence"),
    "MutableSequence": (typing.MutableSequence, "collections.abc.MutableSequence"),
    "Mapping": (typing.Mapping, "collections.abc.Mapping"),
    "MutableMapping": (typing.MutableMapping, "collections.abc.MutableMapping"),
    "AbstractSet": (typing.AbstractSet, "collections.abc.Set"),
    "MutableSet": (typing.MutableSet, "collections.abc.MutableSet"),
    "Collection": (typing.Collection, "collections.abc.Collection"),
    "Container": (typing.Container, "collections.abc.Container"),
    "Sized": (typing.Sized, "collections.abc.Sized"),
    "Hashable": (typing.Hashable, "collections.abc.Hashable"),
    "Callable": (typing.Callable, "collections.abc.Callable"),
    "Awaitable": (typing.Awaitable, "collections.abc.Awaitable"),
    "Coroutine": (typing.Coroutine, "collections.abc.Coroutine"),
    "AsyncIterable": (typing.AsyncIterable, "collections.abc.AsyncIterable"),
    "AsyncIterator": (typing.AsyncIterator, "collections.abc.AsyncIterator"),
    "AsyncGenerator": (typing.AsyncGenerator, "collections.abc.AsyncGenerator"),
    "KeysView": (typing.KeysView, "collections.abc.KeysView"),
    "ValuesView": (typing.ValuesView, "collections.abc.ValuesView"),
    "ItemsView": (typing.ItemsView, "collections.abc.ItemsView"),
    "MappingView": (typing.MappingView, "collections.abc.MappingView"),
    "ByteString": (typing.ByteString, "collections.abc.ByteString"),
    "ContextManager": (typing.ContextManager, "contextlib.AbstractContextManager"),
    "AsyncContextManager": (typing.AsyncContextManager,
                            "contextlib.AbstractAsyncContextManager"),
}


@dataclass
class GeneratorConfig:
    output: Path
    extra_types: list[str] = field(default_factory=list)
    include_dunder: bool = True


@dataclass
class GenerationResult:
    document: dict
    warnings: list[str] = field(default_factory=list)


def attribute_listing(obj: object, baseline: frozenset[str],
                      include_dunder: bool) -> list[str]:
    names = set(dir(obj)) - baseline
    if not include_dunder:
        names = {n for n in names
                 if not (n.startswith("__") and n.endswith("__"))}
    return sorted(names)


def resolve_dotted(name: str) -> object:
    parts = name.split(".")
    for split in range(len(parts) - 1, 0, -1):
        module_name = ".".join(parts[:split])
        try:
            obj = importlib.import_module(module_name)
        except ImportError:
            continue
        for attr in parts[split:]:
            obj = getattr(obj, attr)
        return obj
    raise ImportError(f"no importable module prefix in {name!r}")


def build_document(config: GeneratorConfig) -> GenerationResult:
    baseline = frozenset(dir(object))
    listing = lambda obj: attribute_listing(obj, baseline, config.include_dunder)
    types: dict[str, list[str]] = {}
    for name, cls in BUILTIN_CLASSES.items():
        types[name] = listing(cls)
    for name, alias in ALIASED_BUILTINS.items():
        types[name] = listing(alias)
    for name, (alias, qualified) in ABC_ALIASES.items():
        attrs = listing(alias)
        types[name] = attrs
        types[qualified] = attrs
    types["Any"] = []
    warnings: list[str] = []
    for extra in config.extra_types:
        try:
            obj = resolve_dotted(extra)
        except (ImportError, AttributeError) as exc:
            warnings.append(f"{extra}: {exc}")
            continue
        attrs = listing(obj)
        types[extra] = attrs
        types[extra.rsplit(".", 1)[-1]] = attrs
    document = {
        "version": SCHEMA_VERSION,
        "object_baseline": sorted(baseline),
        "types": types,
    }
    return GenerationResult(document=document, warnings=warnings)


def generate_attrdb(config: GeneratorConfig) -> GenerationResult:
    """Build the database and write it to ``config.output``."""
    result = build_document(config)
    config.output.parent.mkdir(parents=True, exist_ok=True)
    with open(config.output, "w", encoding="utf-8") as handle:
        json.dump(result.document, handle, indent=2, sort_keys=True)
        handle.write("\n")
    return result
