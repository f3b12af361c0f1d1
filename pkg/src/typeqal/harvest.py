"""Extract annotation cases from sources and stubs, align them, score them.

A *case* is one annotation slot with a ground-truth type: a function
parameter, a function return, or a module/class-level variable.  Cases are
keyed by (module path, qualified symbol, slot) on both the truth side
(``.py`` files of the original repository) and the prediction side
(``.pyi`` stub files mirroring the module tree), so the two sides align by
construction.  Local variables inside function bodies are never cases.
"""

from __future__ import annotations

import ast
import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple

from .attrdb import AttributeDatabase
from .simcore import exact_match, type_similarity
from .typeexpr import ParseError, TypeNode, depth, parse_type, render

MAX_DEPTH_BUCKET = 5


class CaseKey(NamedTuple):
    module: str   # relative path, '/'-separated, no extension
    symbol: str   # dotted class/function path, '#k' suffix for redefinitions
    slot: str     # "param:<name>", "return", or "variable"


@dataclass
class CaseRecord:
    key: CaseKey
    truth: TypeNode
    prediction: TypeNode | None
    sim: float
    missing: bool
    depth: int
    rare: bool
    exact: bool


@dataclass
class RepoMetrics:
    typesim_overall: float
    typesim_wo_missing: float
    missing_rate: float
    typesim_rare: float
    exact_by_depth: dict[int, float]
    typesim_by_depth: dict[int, float]
    case_count: int
    function_count: int

    def to_json(self) -> dict:
        return {
            "typesim_overall": self.typesim_overall,
            "typesim_wo_missing": self.typesim_wo_missing,
            "missing_rate": self.missing_rate,
            "typesim_rare": self.typesim_rare,
            "exact_by_depth": {str(k): v for k, v in sorted(self.exact_by_depth.items())},
            "typesim_by_depth": {str(k): v for k, v in sorted(self.typesim_by_depth.items())},
            "case_count": self.case_count,
            "function_count": self.function_count,
        }


@dataclass
class HarvestResult:
    cases: list[tuple[CaseKey, TypeNode]] = field(default_factory=list)
    function_count: int = 0
    warnings: list[str] = field(default_factory=list)
    failures: list[dict[str, str]] = field(default_factory=list)


# ---------------------------------------------------------------------------
# Shared module walker
# ---------------------------------------------------------------------------

class _SlotVisit(NamedTuple):
    symbol: str
    slot: str
    annotation: str | None


def _walk_module(tree: ast.Module) -> tuple[list[_SlotVisit], int]:
    """All annotation slots of a module, plus its function count.

    The same walker drives truth harvesting, stub parsing and stub
    extraction, so the three always agree on symbols and ordinals.
    """
    slots: list[_SlotVisit] = []
    functions = 0

    def visit_body(body: list[ast.stmt], prefix: str, seen: dict[str, int]) -> None:
        nonlocal functions
        for stmt in body:
            if isinstance(stmt, (ast.FunctionDef, ast.AsyncFunctionDef)):
                functions += 1
                symbol = _qualify(prefix, stmt.name, seen)
                slots.extend(_function_slots(stmt, symbol))
            elif isinstance(stmt, ast.ClassDef):
                symbol = _qualify(prefix, stmt.name, seen)
                visit_body(stmt.body, symbol + ".", {})
            elif isinstance(stmt, ast.AnnAssign) and isinstance(stmt.target, ast.Name):
                symbol = _qualify(prefix, stmt.target.id, seen)
                slots.append(_SlotVisit(symbol, "variable", ast.unparse(stmt.annotation)))
            elif isinstance(stmt, (ast.If, ast.Try)):
                visit_body(stmt.body, prefix, seen)
                visit_body(stmt.orelse, prefix, seen)
                for handler in getattr(stmt, "handlers", ()):
                    visit_body(handler.body, prefix, seen)
                visit_body(getattr(stmt, "finalbody", []), prefix, seen)

    visit_body(tree.body, "", {})
    return slots, functions


def _qualify(prefix: str, name: str, seen: dict[str, int]) -> str:
    count = seen.get(name, 0)
    seen[name] = count + 1
    if count == 0:
        return prefix + name
    # Redefinition (typically @overload): ordinal suffix keeps keys unique
    # and deterministic on both the truth and the stub side.
    return f"{prefix}{name}#{count}"


def _function_slots(node: ast.FunctionDef | ast.AsyncFunctionDef,
                    symbol: str) -> list[_SlotVisit]:
    out: list[_SlotVisit] = []
    args = node.args
    positional = list(args.posonlyargs) + list(args.args)
    skip_first = bool(positional) and positional[0].arg in ("self", "cls")
    params = positional[1:] if skip_first else positional
    params += list(args.kwonlyargs)
    for extra in (args.vararg, args.kwarg):
        if extra is not None:
            params.append(extra)
    for param in params:
        ann = ast.unparse(param.annotation) if param.annotation is not None else None
        out.append(_SlotVisit(symbol, f"param:{param.arg}", ann))
    returns = ast.unparse(node.returns) if node.returns is not None else None
    out.append(_SlotVisit(symbol, "return", returns))
    return out


def _iter_modules(root: Path, suffix: str) -> Iterable[tuple[str, Path]]:
    for item in sorted(root.rglob(f"*{suffix}")):
        if item.is_file():
            module = item.relative_to(root).as_posix()[: -len(suffix)]
            yield module, item


# ---------------------------------------------------------------------------
# Truth and prediction ingestion
# ---------------------------------------------------------------------------

def harvest_truth(repo: str | Path) -> HarvestResult:
    """Collect ground-truth cases: every annotated parameter (excluding
    self/cls), return, and module/class-level variable in the repository."""
    result = HarvestResult()
    for module, path in _iter_modules(Path(repo), ".py"):
        try:
            tree = ast.parse(path.read_bytes())
        except (SyntaxError, ValueError) as exc:
            result.failures.append({"path": f"{module}.py", "error": str(exc)})
            continue
        slots, functions = _walk_module(tree)
        result.function_count += functions
        for visit in slots:
            if visit.annotation is None:
                continue
            try:
                node = parse_type(visit.annotation)
            except ParseError as exc:
                result.warnings.append(
                    f"{module}.py: unparseable annotation on "
                    f"{visit.symbol} ({visit.slot}): {exc}")
                continue
            result.cases.append((CaseKey(module, visit.symbol, visit.slot), node))
    return result


def parse_stub_dir(stub_dir: str | Path) -> tuple[dict[CaseKey, TypeNode], list[str]]:
    """Predictions from a directory of ``.pyi`` files mirroring module paths.

    Duplicate definitions: last one wins, with a warning.  A stub file that
    fails to parse contributes nothing (its keys stay missing).
    """
    predictions: dict[CaseKey, TypeNode] = {}
    warnings: list[str] = []
    for module, path in _iter_modules(Path(stub_dir), ".pyi"):
        try:
            tree = ast.parse(path.read_bytes())
        except (SyntaxError, ValueError) as exc:
            warnings.append(f"{module}.pyi: skipped, does not parse: {exc}")
            continue
        slots, _ = _walk_module(tree)
        for visit in slots:
            if visit.annotation is None:
                continue
            key = CaseKey(module, visit.symbol, visit.slot)
            try:
                node = parse_type(visit.annotation)
            except ParseError as exc:
                warnings.append(
                    f"{module}.pyi: unparseable annotation on "
                    f"{visit.symbol} ({visit.slot}): {exc}")
                continue
            if key in predictions:
                warnings.append(f"{module}.pyi: duplicate prediction for "
                                f"{visit.symbol} ({visit.slot}); last wins")
            predictions[key] = node
    return predictions, warnings


# ---------------------------------------------------------------------------
# Stub extraction (the repository's own annotations as .pyi files)
# ---------------------------------------------------------------------------

def extract_stubs(repo: str | Path, out_dir: str | Path) -> int:
    """Write a stub tree whose annotations are the repository's own.

    Harvesting the output reproduces the truth cases exactly, which makes
    this the reference "perfect prediction" for self-evaluation tests.
    Returns the number of stub files written.
    """
    out = Path(out_dir)
    written = 0
    for module, path in _iter_modules(Path(repo), ".py"):
        try:
            tree = ast.parse(path.read_bytes())
        except (SyntaxError, ValueError):
            continue
        lines = _stub_lines(tree.body, indent="")
        target = out / f"{module}.pyi"
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text("\n".join(lines) + ("\n" if lines else ""),
                          encoding="utf-8")
        written += 1
    return written


def _stub_lines(body: list[ast.stmt], indent: str) -> list[str]:
    lines: list[str] = []
    for stmt in body:
        if isinstance(stmt, (ast.FunctionDef, ast.AsyncFunctionDef)):
            prefix = "async def" if isinstance(stmt, ast.AsyncFunctionDef) else "def"
            returns = f" -> {ast.unparse(stmt.returns)}" if stmt.returns else ""
            lines.append(f"{indent}{prefix} {stmt.name}"
                         f"({_stub_params(stmt.args)}){returns}: ...")
        elif isinstance(stmt, ast.ClassDef):
            inner = _stub_lines(stmt.body, indent + "    ")
            lines.append(f"{indent}class {stmt.name}:")
            lines.extend(inner if inner else [f"{indent}    ..."])
        elif isinstance(stmt, ast.AnnAssign) and isinstance(stmt.target, ast.Name):
            lines.append(f"{indent}{stmt.target.id}: {ast.unparse(stmt.annotation)}")
        elif isinstance(stmt, (ast.If, ast.Try)):
            for sub in (stmt.body, stmt.orelse, getattr(stmt, "finalbody", [])):
                lines.extend(_stub_lines(sub, indent))
            for handler in getattr(stmt, "handlers", ()):
                lines.extend(_stub_lines(handler.body, indent))
    return lines


def _stub_params(args: ast.arguments) -> str:
    def one(param: ast.arg, default: ast.expr | None, star: str = "") -> str:
        text = star + param.arg
        if param.annotation is not None:
            text += f": {ast.unparse(param.annotation)}"
        if default is not None:
            text += " = ..." if param.annotation is not None else "=..."
        return text

    pieces: list[str] = []
    positional = list(args.posonlyargs) + list(args.args)
    defaults = [None] * (len(positional) - len(args.defaults)) + list(args.defaults)
    for param, default in zip(positional, defaults):
        pieces.append(one(param, default))
        if args.posonlyargs and param is args.posonlyargs[-1]:
            pieces.append("/")
    if args.vararg is not None:
        pieces.append(one(args.vararg, None, star="*"))
    elif args.kwonlyargs:
        pieces.append("*")
    for param, default in zip(args.kwonlyargs, args.kw_defaults):
        pieces.append(one(param, default))
    if args.kwarg is not None:
        pieces.append(one(args.kwarg, None, star="**"))
    return ", ".join(pieces)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def evaluate(
    truth: list[tuple[CaseKey, TypeNode]],
    predictions: dict[CaseKey, TypeNode],
    db: AttributeDatabase,
    rare_threshold: int = 1,
    function_count: int = 0,
) -> tuple[list[CaseRecord], RepoMetrics]:
    """Score every truth case against the prediction map.

    A case with no prediction is *missing*: it contributes 0 to the overall
    mean and is excluded from the without-missing mean, so
    ``overall = (1 - missing_rate) * wo_missing`` holds by construction.
    Rare cases are those whose truth rendering occurs at most
    ``rare_threshold`` times in the repository.
    """
    frequency: dict[str, int] = {}
    for _, node in truth:
        text = render(node)
        frequency[text] = frequency.get(text, 0) + 1

    records: list[CaseRecord] = []
    for key, node in truth:
        prediction = predictions.get(key)
        if prediction is None:
            sim, missing, exact = 0.0, True, False
        else:
            sim = type_similarity(db, node, prediction)
            missing = False
            exact = exact_match(node, prediction)
        records.append(CaseRecord(
            key=key,
            truth=node,
            prediction=prediction,
            sim=sim,
            missing=missing,
            depth=depth(node),
            rare=frequency[render(node)] <= rare_threshold,
            exact=exact,
        ))

    total = len(records)
    matched = [r for r in records if not r.missing]
    rare_records = [r for r in records if r.rare]
    missing_rate = (total - len(matched)) / total if total else 0.0
    wo_missing = _mean([r.sim for r in matched])
    overall = _mean([r.sim for r in records])
    depth_buckets: dict[int, list[CaseRecord]] = {}
    for record in records:
        bucket = min(record.depth, MAX_DEPTH_BUCKET)
        depth_buckets.setdefault(bucket, []).append(record)
    metrics = RepoMetrics(
        typesim_overall=overall,
        typesim_wo_missing=wo_missing,
        missing_rate=missing_rate,
        typesim_rare=_mean([r.sim for r in rare_records]),
        exact_by_depth={k: _mean([float(r.exact) for r in v])
                        for k, v in sorted(depth_buckets.items())},
        typesim_by_depth={k: _mean([r.sim for r in v])
                          for k, v in sorted(depth_buckets.items())},
        case_count=total,
        function_count=function_count,
    )
    return records, metrics


def _mean(values: list[float]) -> float:
    return sum(values) / len(values) if values else 0.0


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

def report_json(repo: str, metrics: RepoMetrics, records: list[CaseRecord],
                warnings: list[str] | None = None) -> dict:
    cases = [{
        "module": r.key.module,
        "symbol": r.key.symbol,
        "slot": r.key.slot,
        "truth": render(r.truth),
        "prediction": None if r.prediction is None else render(r.prediction),
        "sim": r.sim,
        "missing": r.missing,
        "depth": r.depth,
        "rare": r.rare,
        "exact": r.exact,
    } for r in sorted(records, key=lambda r: r.key)]
    doc = {"repo": repo, "metrics": metrics.to_json(), "cases": cases}
    if warnings:
        doc["warnings"] = list(warnings)
    return doc


def write_report(path: str | Path, doc: dict) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(doc, handle, indent=2, sort_keys=True)
        handle.write("\n")


def write_cases_csv(path: str | Path, records: list[CaseRecord]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["module", "symbol", "slot", "truth", "prediction",
                         "sim", "missing", "depth", "rare", "exact"])
        for r in sorted(records, key=lambda r: r.key):
            writer.writerow([
                r.key.module, r.key.symbol, r.key.slot, render(r.truth),
                "" if r.prediction is None else render(r.prediction),
                f"{r.sim:.6f}", int(r.missing), r.depth, int(r.rare),
                int(r.exact),
            ])
