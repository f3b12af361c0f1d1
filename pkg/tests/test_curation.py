import json
import random

import pytest

from typeqal.curation import (
    CurationWeights,
    FilterLimits,
    MetadataError,
    RepoMetadata,
    filter_candidate,
    load_metadata,
    quality_score,
    rank_candidates,
)


def meta(**overrides) -> RepoMetadata:
    base = dict(name="repo", tokens=100_000, python_files=50,
                typed_function_ratio=0.8, stars=1000, downloads=50_000,
                mean_annotation_depth=1.4, distinct_type_count=40)
    base.update(overrides)
    return RepoMetadata(**base)


# ---------------------------------------------------------------------------
# Filters
# ---------------------------------------------------------------------------

def test_token_limit_violation():
    ok, reasons = filter_candidate(meta(tokens=2_000_000))
    assert not ok
    assert any("token-limit" in r for r in reasons)


def test_boundaries_inclusive():
    ok, reasons = filter_candidate(meta(tokens=1_500_000, python_files=30,
                                        typed_function_ratio=0.5))
    assert ok and reasons == []


def test_coverage_violation():
    ok, reasons = filter_candidate(meta(typed_function_ratio=0.49))
    assert not ok
    assert any("coverage" in r for r in reasons)


def test_file_count_violation():
    ok, reasons = filter_candidate(meta(python_files=29))
    assert not ok
    assert any("file-count" in r for r in reasons)


def test_multiple_violations_all_reported():
    ok, reasons = filter_candidate(meta(tokens=9_999_999, python_files=1,
                                        typed_function_ratio=0.0))
    assert not ok and len(reasons) == 3


def test_filters_independent_of_weights():
    strict = FilterLimits(max_tokens=10, min_files=1, min_typed_ratio=0.0)
    ok, _ = filter_candidate(meta(tokens=11), strict)
    assert not ok


# ---------------------------------------------------------------------------
# Quality score
# ---------------------------------------------------------------------------

def test_single_term_weights():
    assert quality_score(meta(typed_function_ratio=0.8),
                         CurationWeights(1, 0, 0)) == pytest.approx(0.8)


def test_all_components_zero():
    zero = meta(typed_function_ratio=0.0, stars=0, downloads=0,
                mean_annotation_depth=1.0, distinct_type_count=0)
    assert quality_score(zero) == 0.0


def test_popularity_saturates():
    a = quality_score(meta(stars=10**7, downloads=0), CurationWeights(0, 1, 0))
    b = quality_score(meta(stars=10**9, downloads=0), CurationWeights(0, 1, 0))
    assert a == b == 1.0


def test_weights_validation():
    with pytest.raises(ValueError):
        CurationWeights(0, 0, 0)
    with pytest.raises(ValueError):
        CurationWeights(-1, 1, 1)


def random_meta(rng: random.Random) -> RepoMetadata:
    return RepoMetadata(
        name=f"r{rng.randrange(10**6)}",
        tokens=rng.randrange(0, 3_000_000),
        python_files=rng.randrange(0, 500),
        typed_function_ratio=rng.random(),
        stars=rng.randrange(0, 200_000),
        downloads=rng.randrange(0, 10**8),
        mean_annotation_depth=1 + rng.random() * 3,
        distinct_type_count=rng.randrange(0, 400),
    )


BUMPS = {
    "stars": 1000,
    "downloads": 100_000,
    "typed_function_ratio": 0.05,
    "mean_annotation_depth": 0.3,
    "distinct_type_count": 25,
    "tokens": 100_000,
    "python_files": 10,
}


def test_score_monotone_in_every_raw_field():
    rng = random.Random(123456)
    weights = CurationWeights(0.5, 0.3, 0.2)
    for _ in range(1000):
        base = random_meta(rng)
        field, bump = rng.choice(sorted(BUMPS.items()))
        raised = RepoMetadata(**{
            **base.__dict__, field: getattr(base, field) + bump,
        })
        low = quality_score(base, weights)
        high = quality_score(raised, weights)
        assert high >= low - 1e-12, field
        assert 0.0 <= low <= weights.alpha + weights.beta + weights.gamma


# ---------------------------------------------------------------------------
# Ranking and metadata ingestion
# ---------------------------------------------------------------------------

def test_rank_excludes_filtered_and_orders_by_score():
    metas = [
        meta(name="big", tokens=2_000_000),
        meta(name="good", typed_function_ratio=0.9),
        meta(name="ok", typed_function_ratio=0.6),
    ]
    ranked = rank_candidates(metas)
    assert [m.name for m, _ in ranked] == ["good", "ok"]


def test_rank_ties_broken_by_name():
    metas = [meta(name="zeta"), meta(name="alpha")]
    ranked = rank_candidates(metas)
    assert [m.name for m, _ in ranked] == ["alpha", "zeta"]


def test_load_metadata_roundtrip(tmp_path):
    path = tmp_path / "meta.json"
    path.write_text(json.dumps([meta().__dict__]), encoding="utf-8")
    records = load_metadata(path)
    assert records == [meta()]


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("stars"),
    lambda d: d.update(stars="many"),
    lambda d: d.update(typed_function_ratio=1.5),
    lambda d: d.update(tokens=-1),
    lambda d: d.update(name=""),
])
def test_load_metadata_rejects_bad_records(tmp_path, mutate):
    record = dict(meta().__dict__)
    mutate(record)
    path = tmp_path / "meta.json"
    path.write_text(json.dumps([record]), encoding="utf-8")
    with pytest.raises(MetadataError):
        load_metadata(path)


def test_load_metadata_rejects_non_array(tmp_path):
    path = tmp_path / "meta.json"
    path.write_text("{}", encoding="utf-8")
    with pytest.raises(MetadataError):
        load_metadata(path)
