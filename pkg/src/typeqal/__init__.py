"""typeqal: quality metrics for Python type annotations.

Three capabilities, each usable as a library or through the ``typeqal``
command line:

* semantic similarity between predicted and ground-truth annotations
  (:mod:`typeqal.typeexpr`, :mod:`typeqal.attrdb`, :mod:`typeqal.simcore`,
  :mod:`typeqal.harvest`),
* faithful annotation removal for building evaluation inputs
  (:mod:`typeqal.stripper`),
* repository-level consistency scoring through an external static checker
  (:mod:`typeqal.checker`), plus candidate-repository curation
  (:mod:`typeqal.curation`).
"""

from .attrdb import (
    AttributeDatabase,
    SchemaError,
    base_similarity,
    default_db_path,
    load_attrdb,
    load_default_db,
)
from .checker import (
    CheckerCrashed,
    CheckerNotFound,
    CheckReport,
    Diagnostic,
    apply_stubs,
    run_typecheck,
)
from .curation import (
    CurationWeights,
    FilterLimits,
    RepoMetadata,
    filter_candidate,
    quality_score,
    rank_candidates,
)
from .harvest import (
    CaseKey,
    CaseRecord,
    RepoMetrics,
    evaluate,
    extract_stubs,
    harvest_truth,
    parse_stub_dir,
)
from .simcore import exact_match, list_compare, set_compare, type_similarity
from .stripper import StrippedFile, StripEdit, StripSummary, strip_file, strip_repo
from .typeexpr import (
    Kind,
    ParseError,
    TypeNode,
    depth,
    normalize_type,
    parse_type,
    render,
)

__version__ = "0.1.0"

__all__ = [
    "AttributeDatabase", "SchemaError", "base_similarity", "default_db_path",
    "load_attrdb", "load_default_db",
    "CheckerCrashed", "CheckerNotFound", "CheckReport", "Diagnostic",
    "apply_stubs", "run_typecheck",
    "CurationWeights", "FilterLimits", "RepoMetadata", "filter_candidate",
    "quality_score", "rank_candidates",
    "CaseKey", "CaseRecord", "RepoMetrics", "evaluate", "extract_stubs",
    "harvest_truth", "parse_stub_dir",
    "exact_match", "list_compare", "set_compare", "type_similarity",
    "StrippedFile", "StripEdit", "StripSummary", "strip_file", "strip_repo",
    "Kind", "ParseError", "TypeNode", "depth", "normalize_type", "parse_type",
    "render",
    "__version__",
]
