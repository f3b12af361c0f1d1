"""Canonical trees for Python type-annotation expressions.

An annotation string such as ``"dict[str, list[int]] | None"`` is parsed
into a small immutable tree (:class:`TypeNode`) with three node kinds:

* ``LEAF`` -- a plain name (``int``, ``pathlib.Path``, ``Any``, ``None``),
* ``GENERIC`` -- a subscripted name with ordered arguments (``list[int]``),
* ``UNION`` -- an unordered set of alternatives (``int | None``).

Parsing always normalizes: ``typing`` aliases are lowered to their builtin
spellings, ``Optional[X]`` desugars to ``X | None``, nested unions are
flattened and deduplicated, and a bare ``...`` generic argument is dropped.
Normalized trees render to a canonical string that re-parses to an equal
tree.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass, field
from enum import Enum


class Kind(Enum):
    LEAF = "leaf"
    GENERIC = "generic"
    UNION = "union"


class ParseError(ValueError):
    """Raised for text that is not a supported type-annotation expression."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


# typing-module spellings that lower to builtin names.
_ALIASES = {
    "List": "list",
    "Dict": "dict",
    "Tuple": "tuple",
    "Set": "set",
    "FrozenSet": "frozenset",
    "Type": "type",
    "Text": "str",
    "NoneType": "None",
}

_STRIP_PREFIXES = ("typing.", "typing_extensions.", "builtins.")

_ELLIPSIS_NAME = "..."


@dataclass(frozen=True)
class TypeNode:
    """One node of a type tree.

    ``name`` is set for LEAF and GENERIC nodes, ``args`` for GENERIC nodes
    (ordered), ``members`` for UNION nodes (unordered, structurally
    deduplicated).  Instances are hashable and compare structurally; union
    member order can never affect equality because members live in a
    frozenset.
    """

    kind: Kind
    name: str = ""
    args: tuple["TypeNode", ...] = ()
    members: frozenset["TypeNode"] = field(default_factory=frozenset)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"TypeNode({render(self)!r})"


def leaf(name: str) -> TypeNode:
    return TypeNode(Kind.LEAF, name=name)


def generic(name: str, args: tuple[TypeNode, ...] | list[TypeNode]) -> TypeNode:
    return TypeNode(Kind.GENERIC, name=name, args=tuple(args))


def union(members) -> TypeNode:
    return TypeNode(Kind.UNION, members=frozenset(members))


def _normalize_name(name: str) -> str:
    for prefix in _STRIP_PREFIXES:
        if name.startswith(prefix):
            name = name[len(prefix):]
            break
    return _ALIASES.get(name, name)


def parse_type(text: str) -> TypeNode:
    """Parse an annotation string into a normalized :class:`TypeNode`.

    Accepts anything that is valid inside a PEP 484/585/604 annotation:
    qualified names, subscripted generics, ``Union``/``Optional``/``|``,
    quoted forward references, ``Callable[[...], R]``, ``Literal[...]``,
    and tuple ellipsis.  Raises :class:`ParseError` (with a byte offset)
    for anything else.
    """
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"invalid annotation syntax: {exc.msg}", exc.offset or 0) from None
    return normalize_type(_convert(tree.body, literal=False))


def _dotted_name(node: ast.expr) -> str | None:
    if isinstance(node, ast.Name):
        return node.id
    if isinstance(node, ast.Attribute):
        base = _dotted_name(node.value)
        if base is None:
            return None
        return f"{base}.{node.attr}"
    return None


def _convert(node: ast.expr, literal: bool) -> TypeNode:
    """Lower one AST expression to a raw (possibly denormalized) TypeNode."""
    if isinstance(node, ast.BinOp) and isinstance(node.op, ast.BitOr):
        return union((_convert(node.left, literal), _convert(node.right, literal)))

    if isinstance(node, (ast.Name, ast.Attribute)):
        name = _dotted_name(node)
        if name is None:
            raise ParseError("unsupported name expression", node.col_offset)
        return leaf(name)

    if isinstance(node, ast.Constant):
        value = node.value
        if value is None:
            return leaf("None")
        if value is Ellipsis:
            return leaf(_ELLIPSIS_NAME)
        if isinstance(value, str) and not literal:
            # Quoted forward reference: parse the string contents.
            try:
                inner = ast.parse(value, mode="eval")
            except SyntaxError as exc:
                offset = node.col_offset + max((exc.offset or 1) - 1, 0)
                raise ParseError("invalid forward reference", offset) from None
            return _convert(inner.body, literal=False)
        if literal and isinstance(value, (str, bytes, int, float, bool)):
            return leaf(repr(value))
        raise ParseError(f"unsupported constant {value!r}", node.col_offset)

    if literal and isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        operand = _convert(node.operand, literal=True)
        return leaf(f"-{operand.name}")

    if isinstance(node, ast.Subscript):
        name = _dotted_name(node.value)
        if name is None:
            raise ParseError("unsupported generic base", node.col_offset)
        short = name.rsplit(".", 1)[-1]
        elts = node.slice.elts if isinstance(node.slice, ast.Tuple) else [node.slice]
        if short == "Literal":
            args = tuple(_convert(e, literal=True) for e in elts)
            return generic(name, args)
        if short == "Callable" and elts and isinstance(elts[0], ast.List):
            # Callable[[P1, P2], R] -> flatten the parameter list.
            params = [_convert(e, literal) for e in elts[0].elts]
            rest = [_convert(e, literal) for e in elts[1:]]
            return generic(name, tuple(params + rest))
        return generic(name, tuple(_convert(e, literal) for e in elts))

    raise ParseError(
        f"unsupported annotation element {type(node).__name__}", node.col_offset
    )


def normalize_type(node: TypeNode) -> TypeNode:
    """Return the canonical form of ``node``.

    Idempotent and total over any TypeNode.  Lowers alias names, desugars
    ``Optional``/``Union`` generics, flattens and deduplicates unions,
    collapses single-member unions, and drops ``...`` generic arguments
    (a zero-argument generic collapses to a leaf).
    """
    if node.kind is Kind.LEAF:
        return leaf(_normalize_name(node.name))

    if node.kind is Kind.GENERIC:
        name = _normalize_name(node.name)
        short = name.rsplit(".", 1)[-1]
        if short == "Optional":
            return normalize_type(union(tuple(node.args) + (leaf("None"),)))
        if short == "Union":
            return normalize_type(union(node.args))
        args = tuple(
            normalize_type(a)
            for a in node.args
            if not (a.kind is Kind.LEAF and a.name == _ELLIPSIS_NAME)
        )
        if not args:
            return leaf(name)
        return generic(name, args)

    # Union: normalize members, splice nested unions, dedup, collapse.
    flat: set[TypeNode] = set()
    for member in node.members:
        norm = normalize_type(member)
        if norm.kind is Kind.UNION:
            flat.update(norm.members)
        else:
            flat.add(norm)
    if len(flat) == 1:
        return next(iter(flat))
    return union(flat)


def depth(node: TypeNode) -> int:
    """Nesting depth of a type tree; 1 for any non-generic type.

    Unions are transparent: they describe alternatives, not an extra
    constructor level, so a union's depth is the max over its members.
    """
    if node.kind is Kind.LEAF:
        return 1
    if node.kind is Kind.GENERIC:
        if not node.args:
            return 1
        return 1 + max(depth(a) for a in node.args)
    return max(depth(m) for m in node.members)


def render(node: TypeNode) -> str:
    """Deterministic canonical rendering; union members sorted by text."""
    if node.kind is Kind.LEAF:
        return node.name
    if node.kind is Kind.GENERIC:
        inner = ", ".join(render(a) for a in node.args)
        return f"{node.name}[{inner}]"
    return " | ".join(sorted(render(m) for m in node.members))
