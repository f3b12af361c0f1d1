"""Shared helpers for the test suite: random type generation and a
brute-force assignment oracle independent of the production matcher."""

from __future__ import annotations

import math
import random
from itertools import permutations

from typeqal.typeexpr import TypeNode, generic, leaf, normalize_type, union

# Names the bundled database knows about.
DB_NAMES = ["int", "float", "str", "bytes", "list", "dict", "set", "tuple",
            "Sequence", "Iterable", "Mapping", "frozenset", "None"]

# Names whose base similarity can only be 0 or 1 (identity or nothing),
# so every similarity in a tree built from them is a dyadic rational and
# float arithmetic over them is exact.
OPAQUE_NAMES = ["Any", "None", "Alpha", "Beta", "pkg.Gamma", "np.ndarray",
                "pathlib.Path", "Delta", "other.Alpha"]

CONTAINERS = ["list", "dict", "tuple", "set", "Wrapper", "pkg.Box"]


def random_type(rng: random.Random, max_depth: int = 3,
                pool: list[str] | None = None, allow_union: bool = True) -> TypeNode:
    """A random normalized TypeNode drawn from the given name pool."""
    names = pool if pool is not None else DB_NAMES + OPAQUE_NAMES
    roll = rng.random()
    if max_depth <= 1 or roll < 0.45:
        return normalize_type(leaf(rng.choice(names)))
    if roll < 0.8 or not allow_union:
        n_args = rng.randint(1, 3)
        args = [random_type(rng, max_depth - 1, pool, allow_union)
                for _ in range(n_args)]
        return normalize_type(generic(rng.choice(CONTAINERS), args))
    n_members = rng.randint(2, 4)
    members = [random_type(rng, max_depth - 1, pool, allow_union=False)
               for _ in range(n_members)]
    return normalize_type(union(members))


def random_union(rng: random.Random, max_members: int,
                 pool: list[str] | None = None) -> tuple[TypeNode, ...]:
    """A random member tuple (1..max_members distinct normalized nodes)."""
    members: set[TypeNode] = set()
    target = rng.randint(1, max_members)
    while len(members) < target:
        members.add(random_type(rng, max_depth=2, pool=pool, allow_union=False))
    return tuple(members)


def dyadic_member(rng: random.Random, max_depth: int = 3) -> TypeNode:
    """A random non-union node whose pairwise similarities are all dyadic
    rationals: opaque names give base similarities of 0 or 1, and argument
    counts of 1, 2 or 4 keep every division a power of two.  Sums of such
    values are exact in binary floats, which lets the assignment oracle be
    compared with strict equality."""
    if max_depth <= 1 or rng.random() < 0.5:
        return normalize_type(leaf(rng.choice(OPAQUE_NAMES)))
    n_args = rng.choice((1, 2, 4))
    args = [dyadic_member(rng, max_depth - 1) for _ in range(n_args)]
    return normalize_type(generic(rng.choice(CONTAINERS), args))


def dyadic_union(rng: random.Random, max_members: int) -> tuple[TypeNode, ...]:
    members: set[TypeNode] = set()
    target = rng.randint(1, max_members)
    while len(members) < target:
        members.add(dyadic_member(rng))
    return tuple(members)


def assignment_oracle(matrix: list[list[float]]) -> float:
    """Maximum total of any injective row->column assignment, by exhaustive
    enumeration.  Only sensible for small matrices (<= 6x6 here)."""
    rows = len(matrix)
    cols = len(matrix[0])
    if rows > cols:
        matrix = [[matrix[i][j] for i in range(rows)] for j in range(cols)]
        rows, cols = cols, rows
    return max(
        math.fsum(matrix[i][perm[i]] for i in range(rows))
        for perm in permutations(range(cols), rows)
    )
