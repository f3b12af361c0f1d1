"""Score candidate repositories for benchmark suitability.

Hard filters first (size, file count, annotation coverage), then a linear
quality score over coverage, popularity and annotation complexity used to
rank the survivors.  All metadata is supplied locally as JSON; there is no
crawling here.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path


class MetadataError(ValueError):
    """A metadata record is malformed or incomplete."""


@dataclass(frozen=True)
class RepoMetadata:
    name: str
    tokens: int
    python_files: int
    typed_function_ratio: float
    stars: int
    downloads: int
    mean_annotation_depth: float
    distinct_type_count: int


@dataclass(frozen=True)
class FilterLimits:
    max_tokens: int = 1_500_000
    min_files: int = 30
    min_typed_ratio: float = 0.5


@dataclass(frozen=True)
class CurationWeights:
    alpha: float = 1 / 3
    beta: float = 1 / 3
    gamma: float = 1 / 3

    def __post_init__(self):
        if min(self.alpha, self.beta, self.gamma) < 0:
            raise ValueError("weights must be nonnegative")
        if self.alpha + self.beta + self.gamma <= 0:
            raise ValueError("at least one weight must be positive")


def filter_candidate(meta: RepoMetadata,
                     limits: FilterLimits = FilterLimits()) -> tuple[bool, list[str]]:
    """Hard suitability filters; boundaries are inclusive."""
    reasons = []
    if meta.tokens > limits.max_tokens:
        reasons.append(f"token-limit: {meta.tokens} > {limits.max_tokens}")
    if meta.python_files < limits.min_files:
        reasons.append(f"file-count: {meta.python_files} < {limits.min_files}")
    if meta.typed_function_ratio < limits.min_typed_ratio:
        reasons.append(f"coverage: {meta.typed_function_ratio} < {limits.min_typed_ratio}")
    return not reasons, reasons


def quality_score(meta: RepoMetadata,
                  weights: CurationWeights = CurationWeights()) -> float:
    """Weighted sum of coverage, popularity and complexity components.

    Popularity is log-scaled (a million stars+downloads saturates at 1);
    complexity averages depth excess over the trivial depth of 1 with the
    variety of distinct annotations (100 distinct types saturates at 1).
    Monotone nondecreasing in every raw field.
    """
    coverage = meta.typed_function_ratio
    popularity = min(1.0, math.log10(1 + meta.stars + meta.downloads) / 6.0)
    depth_excess = min(1.0, max(0.0, meta.mean_annotation_depth - 1.0))
    variety = min(1.0, meta.distinct_type_count / 100.0)
    complexity = (depth_excess + variety) / 2.0
    return (weights.alpha * coverage
            + weights.beta * popularity
            + weights.gamma * complexity)


def rank_candidates(
    metas: list[RepoMetadata],
    weights: CurationWeights = CurationWeights(),
    limits: FilterLimits = FilterLimits(),
) -> list[tuple[RepoMetadata, float]]:
    """Filter, score, and order by descending score with name tie-break."""
    kept = [(m, quality_score(m, weights)) for m in metas
            if filter_candidate(m, limits)[0]]
    return sorted(kept, key=lambda pair: (-pair[1], pair[0].name))


_REQUIRED_FIELDS = {
    "name": str,
    "tokens": (int,),
    "python_files": (int,),
    "typed_function_ratio": (int, float),
    "stars": (int,),
    "downloads": (int,),
    "mean_annotation_depth": (int, float),
    "distinct_type_count": (int,),
}


def load_metadata(path: str | Path) -> list[RepoMetadata]:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            raw = json.load(handle)
        except json.JSONDecodeError as exc:
            raise MetadataError(f"not valid JSON: {exc}") from None
    if not isinstance(raw, list):
        raise MetadataError("metadata must be a JSON array of records")
    records = []
    for index, entry in enumerate(raw):
        if not isinstance(entry, dict):
            raise MetadataError(f"record {index} is not an object")
        kwargs = {}
        for name, kinds in _REQUIRED_FIELDS.items():
            if name not in entry:
                raise MetadataError(f"record {index} missing field {name!r}")
            value = entry[name]
            if name == "name":
                if not isinstance(value, str) or not value:
                    raise MetadataError(f"record {index}: bad name {value!r}")
            elif not isinstance(value, tuple(kinds)) or isinstance(value, bool):
                raise MetadataError(f"record {index}: field {name!r} has "
                                    f"bad value {value!r}")
            kwargs[name] = value
        meta = RepoMetadata(**kwargs)
        if not 0.0 <= meta.typed_function_ratio <= 1.0:
            raise MetadataError(f"record {index}: typed_function_ratio out of range")
        if min(meta.tokens, meta.python_files, meta.stars, meta.downloads,
               meta.distinct_type_count) < 0:
            raise MetadataError(f"record {index}: negative count")
        records.append(meta)
    return records


def write_ranked_csv(path: str | Path,
                     ranked: list[tuple[RepoMetadata, float]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["rank", "name", "score", "typed_function_ratio",
                         "tokens", "python_files", "stars", "downloads",
                         "mean_annotation_depth", "distinct_type_count"])
        for position, (meta, score) in enumerate(ranked, start=1):
            writer.writerow([
                position, meta.name, f"{score:.6f}", meta.typed_function_ratio,
                meta.tokens, meta.python_files, meta.stars, meta.downloads,
                meta.mean_annotation_depth, meta.distinct_type_count,
            ])
