"""Remove type annotations from Python sources, preserving all other bytes.

Edits are byte spans computed against the parsed tree, never a re-printed
AST, so comments, whitespace and string formatting survive untouched.
Four kinds of annotation are removed:

* parameter annotations      ``def f(x: int)``      -> ``def f(x)``
* return annotations         ``def f() -> str:``    -> ``def f():``
* variable annotations       ``x: int = 5``         -> ``x = 5``
* docstring type hints       ``name (int): desc``   -> ``name: desc``

A bare declaration (``x: int`` with no value) has no annotation-free
equivalent, so the whole statement is removed; when that would leave a
block empty, the last such statement becomes ``pass`` to keep the module
importable.
"""

from __future__ import annotations

import ast
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path


class Reason(Enum):
    PARAM = "param-annotation"
    RETURN = "return-annotation"
    VARIABLE = "variable-annotation"
    DOCSTRING = "docstring-type-hint"


class StripError(RuntimeError):
    """Internal invariant violation: an edit produced unparseable output."""


@dataclass(frozen=True)
class StripEdit:
    path: str
    start: int
    end: int
    replacement: bytes
    reason: Reason


@dataclass
class StrippedFile:
    original: bytes
    edits: list[StripEdit]
    result: bytes


@dataclass
class StripSummary:
    files: int = 0
    edits: int = 0
    edits_by_reason: dict[str, int] = field(default_factory=dict)
    failures: list[dict[str, str]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "files": self.files,
            "edits": self.edits,
            "edits_by_reason": dict(sorted(self.edits_by_reason.items())),
            "failures": sorted(self.failures, key=lambda f: f["path"]),
        }


def strip_file(source: str | bytes, path: str = "") -> StrippedFile:
    """Strip all annotations from one source text.

    Raises SyntaxError (with location) if the source does not parse; the
    result is guaranteed to parse again.
    """
    data = source.encode("utf-8") if isinstance(source, str) else source
    tree = ast.parse(data)
    stripper = _Stripper(data, path)
    stripper.process_module(tree)
    result = _apply_edits(data, stripper.edits)
    try:
        ast.parse(result)
    except SyntaxError as exc:  # pragma: no cover - guarded by tests
        raise StripError(f"stripping {path or '<source>'} produced invalid "
                         f"output: {exc}") from exc
    return StrippedFile(original=data, edits=stripper.edits, result=result)


def strip_repo(src: str | Path, dst: str | Path, workers: int = 1) -> StripSummary:
    """Mirror ``src`` into ``dst`` with every ``.py`` file stripped.

    Non-Python files are copied byte for byte.  Files that fail to parse
    are copied unchanged and recorded as failures; processing continues.
    """
    src = Path(src)
    dst = Path(dst)
    if not src.is_dir():
        raise NotADirectoryError(f"source directory not found: {src}")
    dst.mkdir(parents=True, exist_ok=True)

    py_files: list[Path] = []
    for item in sorted(src.rglob("*")):
        rel = item.relative_to(src)
        if item.is_dir():
            (dst / rel).mkdir(parents=True, exist_ok=True)
        elif item.suffix == ".py":
            py_files.append(rel)
        else:
            (dst / rel).parent.mkdir(parents=True, exist_ok=True)
            (dst / rel).write_bytes(item.read_bytes())

    def process(rel: Path) -> tuple[Path, list[StripEdit], str | None]:
        try:
            raw = (src / rel).read_bytes()
        except OSError as exc:
            return rel, [], str(exc)
        try:
            stripped = strip_file(raw, path=rel.as_posix())
        except (SyntaxError, ValueError) as exc:
            (dst / rel).parent.mkdir(parents=True, exist_ok=True)
            (dst / rel).write_bytes(raw)
            return rel, [], str(exc)
        (dst / rel).parent.mkdir(parents=True, exist_ok=True)
        (dst / rel).write_bytes(stripped.result)
        return rel, stripped.edits, None

    if workers > 1 and len(py_files) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(process, py_files))
    else:
        outcomes = [process(rel) for rel in py_files]

    summary = StripSummary()
    for rel, edits, error in sorted(outcomes, key=lambda o: o[0]):
        summary.files += 1
        if error is not None:
            summary.failures.append({"path": rel.as_posix(), "error": error})
            continue
        summary.edits += len(edits)
        for edit in edits:
            key = edit.reason.value
            summary.edits_by_reason[key] = summary.edits_by_reason.get(key, 0) + 1
    return summary


# ---------------------------------------------------------------------------
# Edit computation
# ---------------------------------------------------------------------------

_STMT_LIST_FIELDS = ("body", "orelse", "finalbody")

# Google-style parameter line: "    name (int): description".
_GOOGLE_PARAM = re.compile(
    rb"^(?P<head>[ \t]*\*{0,2}[A-Za-z_]\w*)[ \t]*\([^()\n]+\)[ \t]*:(?P<rest>.*)$"
)
_GOOGLE_HEADER = re.compile(
    rb"^[ \t]*(Args|Arguments|Parameters|Params|Keyword Args|Keyword Arguments|"
    rb"Attributes|Other Parameters)[ \t]*:[ \t]*$"
)
# NumPy-style field line: "name : int" (spaces around the colon required,
# which keeps already-stripped Google lines "name: desc" untouched).
_NUMPY_FIELD = re.compile(
    rb"^(?P<head>[ \t]*\*{0,2}[A-Za-z_][\w.]*)[ \t]+:([ \t]+\S.*|[ \t]*)$"
)
_NUMPY_UNDERLINE = re.compile(rb"^[ \t]*-{3,}[ \t]*$")
_NUMPY_SECTIONS = {
    b"Parameters", b"Other Parameters", b"Returns", b"Yields", b"Receives",
    b"Raises", b"Warns", b"Attributes",
}


class _Stripper:
    def __init__(self, source: bytes, path: str):
        self.source = source
        self.path = path
        self.edits: list[StripEdit] = []
        self.line_starts = [0]
        for line in source.split(b"\n")[:-1]:
            self.line_starts.append(self.line_starts[-1] + len(line) + 1)

    # -- byte geometry ------------------------------------------------------

    def pos(self, lineno: int, col: int) -> int:
        return self.line_starts[lineno - 1] + col

    def node_start(self, node: ast.AST) -> int:
        return self.pos(node.lineno, node.col_offset)

    def node_end(self, node: ast.AST) -> int:
        return self.pos(node.end_lineno, node.end_col_offset)

    def line_span(self, lineno: int) -> tuple[int, int]:
        start = self.line_starts[lineno - 1]
        if lineno < len(self.line_starts):
            return start, self.line_starts[lineno] - 1
        return start, len(self.source)

    def add(self, start: int, end: int, reason: Reason, replacement: bytes = b"") -> None:
        self.edits.append(StripEdit(self.path, start, end, replacement, reason))

    # -- walking ------------------------------------------------------------

    def process_module(self, tree: ast.Module) -> None:
        self._docstring(tree)
        self._process_body(tree.body, allow_empty=True)

    def _process_body(self, body: list[ast.stmt], allow_empty: bool) -> None:
        bare = [s for s in body
                if isinstance(s, ast.AnnAssign) and s.value is None]
        keep_one = not allow_empty and len(bare) == len(body) and bare
        for stmt in body:
            if isinstance(stmt, ast.AnnAssign):
                if stmt.value is None:
                    if keep_one and stmt is bare[-1]:
                        self.add(self.node_start(stmt), self.node_end(stmt),
                                 Reason.VARIABLE, b"pass")
                    else:
                        self._remove_statement(stmt)
                else:
                    ann_end = self.node_end(stmt.annotation)
                    self.add(self._annotation_colon(self.node_end(stmt.target),
                                                    self.node_start(stmt.annotation)),
                             ann_end, Reason.VARIABLE)
            elif isinstance(stmt, (ast.FunctionDef, ast.AsyncFunctionDef)):
                self._strip_signature(stmt)
                self._docstring(stmt)
                self._process_body(stmt.body, allow_empty=False)
            elif isinstance(stmt, ast.ClassDef):
                self._docstring(stmt)
                self._process_body(stmt.body, allow_empty=False)
            else:
                for name in _STMT_LIST_FIELDS:
                    inner = getattr(stmt, name, None)
                    if inner:
                        self._process_body(inner, allow_empty=False)
                for handler in getattr(stmt, "handlers", ()) or ():
                    self._process_body(handler.body, allow_empty=False)
                for case in getattr(stmt, "cases", ()) or ():
                    self._process_body(case.body, allow_empty=False)

    # -- signatures ---------------------------------------------------------

    def _strip_signature(self, node: ast.FunctionDef | ast.AsyncFunctionDef) -> None:
        args = node.args
        params = list(args.posonlyargs) + list(args.args) + list(args.kwonlyargs)
        for extra in (args.vararg, args.kwarg):
            if extra is not None:
                params.append(extra)
        for param in params:
            if param.annotation is None:
                continue
            name_end = self.pos(param.lineno, param.col_offset) + len(param.arg.encode("utf-8"))
            start = self._annotation_colon(name_end, self.node_start(param.annotation))
            self.add(start, self.node_end(param.annotation), Reason.PARAM)
        if node.returns is not None:
            ann_start = self.node_start(node.returns)
            window = self.source[self.node_start(node):ann_start]
            arrow = window.rfind(b"->")
            if arrow < 0:  # pragma: no cover - grammar guarantees an arrow
                raise StripError(f"no arrow before return annotation in {self.path}")
            start = self.node_start(node) + arrow
            while start > 0 and self.source[start - 1:start] in (b" ", b"\t"):
                start -= 1
            self.add(start, self.node_end(node.returns), Reason.RETURN)

    def _annotation_colon(self, after: int, ann_start: int) -> int:
        """Byte offset where removal of ``: annotation`` begins."""
        gap = self.source[after:ann_start]
        colon = gap.find(b":")
        start = after + colon
        while start > after and self.source[start - 1:start] in (b" ", b"\t"):
            start -= 1
        return start

    def _remove_statement(self, stmt: ast.stmt) -> None:
        start = self.node_start(stmt)
        end = self.node_end(stmt)
        first_start, _ = self.line_span(stmt.lineno)
        last_start, last_end = self.line_span(stmt.end_lineno)
        prefix = self.source[first_start:start]
        suffix = self.source[end:last_end]
        if not prefix.strip() and (not suffix.strip() or suffix.lstrip().startswith(b"#")):
            # Statement owns its line(s): drop them, trailing newline included.
            self.add(first_start, min(last_end + 1, len(self.source)), Reason.VARIABLE)
            return
        # Shares a line: consume the adjacent semicolon instead.
        trailing = re.match(rb"[ \t]*;[ \t]*", suffix)
        if trailing:
            self.add(start, end + trailing.end(), Reason.VARIABLE)
            return
        leading = re.search(rb";[ \t]*$", prefix)
        if leading:
            self.add(first_start + leading.start(), end, Reason.VARIABLE)
            return
        self.add(start, end, Reason.VARIABLE, b"pass")

    # -- docstrings ---------------------------------------------------------

    def _docstring(self, node) -> None:
        body = getattr(node, "body", None)
        if not body or not isinstance(body[0], ast.Expr):
            return
        const = body[0].value
        if not isinstance(const, ast.Constant) or not isinstance(const.value, str):
            return
        start = self.node_start(const)
        end = self.node_end(const)
        segment = self.source[start:end]
        if b"\n" not in segment:
            return
        lines = segment.split(b"\n")
        google_active = False
        numpy_active = False
        offset = start
        spans = []
        for index, line in enumerate(lines):
            spans.append((offset, offset + len(line)))
            offset += len(line) + 1
        for index in range(1, len(lines) - 1):
            line = lines[index]
            stripped = line.strip()
            if _GOOGLE_HEADER.match(line):
                google_active = True
                numpy_active = False
                continue
            if _NUMPY_UNDERLINE.match(line) and index >= 2:
                numpy_active = lines[index - 1].strip() in _NUMPY_SECTIONS
                google_active = False
                continue
            if not stripped:
                google_active = False
                continue
            new_line = None
            if google_active:
                match = _GOOGLE_PARAM.match(line)
                if match:
                    new_line = match.group("head") + b":" + match.group("rest")
            elif numpy_active:
                match = _NUMPY_FIELD.match(line)
                if match:
                    new_line = match.group("head")
            if new_line is not None and new_line != line:
                span_start, span_end = spans[index]
                self.add(span_start, span_end, Reason.DOCSTRING, new_line)


def _apply_edits(source: bytes, edits: list[StripEdit]) -> bytes:
    ordered = sorted(edits, key=lambda e: (e.start, e.end))
    pieces = []
    cursor = 0
    for edit in ordered:
        if edit.start < cursor:
            raise StripError(f"overlapping edits at byte {edit.start}")
        pieces.append(source[cursor:edit.start])
        pieces.append(edit.replacement)
        cursor = edit.end
    pieces.append(source[cursor:])
    return b"".join(pieces)
