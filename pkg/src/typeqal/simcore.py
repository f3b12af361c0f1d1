"""Recursive semantic similarity between two type trees.

The score of two non-union types averages the base similarity of their
root names with the ordered comparison of their argument lists; when only
one side carries arguments the root score is halved rather than zeroed,
crediting a root-only annotation as half right.  Unions are compared as
sets: an optimal one-to-one matching between members maximizes the summed
pairwise similarity, normalized by the larger member count.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .attrdb import AttributeDatabase, base_similarity
from .typeexpr import Kind, TypeNode, render


def as_set(node: TypeNode) -> tuple[TypeNode, ...]:
    """Member set of a node: its members for a union, itself otherwise."""
    if node.kind is Kind.UNION:
        return tuple(node.members)
    return (node,)


def type_similarity(db: AttributeDatabase, a: TypeNode, b: TypeNode) -> float:
    """Similarity of two normalized type trees, in [0, 1]."""
    if a.kind is Kind.UNION or b.kind is Kind.UNION:
        return set_compare(db, as_set(a), as_set(b))
    score = base_similarity(db, a.name, b.name)
    if a.args and b.args:
        return 0.5 * (score + list_compare(db, a.args, b.args))
    if a.args or b.args:
        return score / 2
    return score


def list_compare(
    db: AttributeDatabase,
    xs: Sequence[TypeNode],
    ys: Sequence[TypeNode],
) -> float:
    """Ordered comparison of generic argument lists.

    Aligned positions are compared pairwise; the sum is divided by the
    longer length, so missing or surplus arguments dilute the score.
    Two empty lists are vacuously identical (score 1).
    """
    if not xs and not ys:
        return 1.0
    shared = min(len(xs), len(ys))
    total = sum(type_similarity(db, xs[i], ys[i]) for i in range(shared))
    return total / max(len(xs), len(ys))


def set_compare(
    db: AttributeDatabase,
    a: Iterable[TypeNode],
    b: Iterable[TypeNode],
) -> float:
    """Unordered comparison of union member sets via optimal matching.

    Builds the full pairwise similarity matrix and solves the rectangular
    assignment problem for the matching that maximizes the summed
    similarity, normalized by the larger set.  Inputs are canonically
    ordered first so the computation is bit-identical under argument swap.
    """
    xs = sorted(a, key=render)
    ys = sorted(b, key=render)
    if not xs or not ys:
        raise ValueError("set_compare requires non-empty member sets")
    if (len(ys), [render(n) for n in ys]) < (len(xs), [render(n) for n in xs]):
        xs, ys = ys, xs
    matrix = np.array(
        [[type_similarity(db, x, y) for y in ys] for x in xs], dtype=float
    )
    rows, cols = linear_sum_assignment(matrix, maximize=True)
    # fsum: the total is the correctly rounded sum, independent of the
    # particular optimal matching the solver happened to return.
    total = math.fsum(matrix[i, j] for i, j in zip(rows, cols))
    return total / max(len(xs), len(ys))


def exact_match(a: TypeNode, b: TypeNode) -> bool:
    """True iff the canonical renderings coincide."""
    return render(a) == render(b)
