"""Repository-level consistency score via an external static type checker.

Predicted stubs are merged into a copy of the repository (each ``.pyi``
beside its ``.py``, which is how checkers resolve stubs), the configured
checker runs over the merged tree, and its diagnostics are counted against
a whitelist of consistency-relevant error codes.  The default whitelist is
``attr-defined``, ``assignment``, ``arg-type``, ``union-attr`` and
``index``; the reference checker is mypy (pinned to 1.11.1 in the
published experiments), but any tool emitting the same line format works.
"""

from __future__ import annotations

import json
import re
import shlex
import shutil
import subprocess
import time
from dataclasses import dataclass, field
from pathlib import Path

DEFAULT_WHITELIST = frozenset(
    {"attr-defined", "assignment", "arg-type", "union-attr", "index"}
)
DEFAULT_COMMAND = "mypy {tree}"
DEFAULT_TIMEOUT = 900.0  # seconds; slow repositories are reported N/A

_DIAGNOSTIC = re.compile(r"^(.+?):(\d+): error: (.*) \[([a-z0-9-]+)\]$")


class CheckerNotFound(RuntimeError):
    """The configured checker executable does not exist."""


class CheckerCrashed(RuntimeError):
    """The checker exited abnormally without any parseable diagnostics."""

    def __init__(self, message: str, output: str):
        super().__init__(message)
        self.output = output


@dataclass(frozen=True)
class Diagnostic:
    path: str
    line: int
    severity: str
    message: str
    code: str


@dataclass
class CheckReport:
    diagnostics: list[Diagnostic]
    counted: int | None          # None when the run timed out (N/A)
    returncode: int | None
    command: list[str]
    duration: float
    whitelist: tuple[str, ...]
    unmatched: list[str] = field(default_factory=list)
    status: str = "ok"           # "ok" | "timeout"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "counted": self.counted,
            "returncode": self.returncode,
            "command": self.command,
            "duration_seconds": round(self.duration, 3),
            "whitelist": sorted(self.whitelist),
            "diagnostics": [{
                "path": d.path, "line": d.line, "severity": d.severity,
                "message": d.message, "code": d.code,
            } for d in self.diagnostics],
            "unmatched_lines": self.unmatched,
        }


@dataclass
class ApplyResult:
    copied: int
    warnings: list[str] = field(default_factory=list)


def apply_stubs(repo: str | Path, stubs: str | Path, out: str | Path) -> ApplyResult:
    """Copy the repository to ``out`` with each prediction stub beside its
    module.  Stubs with no matching ``.py`` are warned about and skipped;
    a stub already present in the repository is overwritten with a warning.
    """
    repo = Path(repo)
    stubs = Path(stubs)
    out = Path(out)
    if not repo.is_dir():
        raise NotADirectoryError(f"repository not found: {repo}")
    shutil.copytree(repo, out, dirs_exist_ok=True)
    result = ApplyResult(copied=0)
    for stub in sorted(stubs.rglob("*.pyi")):
        rel = stub.relative_to(stubs)
        module_py = repo / rel.with_suffix(".py")
        if not module_py.is_file():
            result.warnings.append(
                f"stub {rel.as_posix()} has no matching module; not copied")
            continue
        target = out / rel
        if (repo / rel).exists():
            result.warnings.append(
                f"stub {rel.as_posix()} overwrites one shipped with the repo")
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_bytes(stub.read_bytes())
        result.copied += 1
    return result


def run_typecheck(
    tree: str | Path,
    command: str = DEFAULT_COMMAND,
    whitelist: frozenset[str] | set[str] = DEFAULT_WHITELIST,
    timeout: float = DEFAULT_TIMEOUT,
) -> CheckReport:
    """Run the checker command over ``tree`` and count whitelisted errors.

    ``command`` is a shell-style template with a ``{tree}`` placeholder.
    A nonzero exit with parseable diagnostics is a normal result (errors
    found is not tool failure).  Raises :class:`CheckerNotFound` if the
    executable is missing and :class:`CheckerCrashed` when the checker
    exits abnormally without producing any parseable diagnostic.
    """
    argv = [part.replace("{tree}", str(tree)) for part in shlex.split(command)]
    started = time.monotonic()
    try:
        proc = subprocess.run(argv, capture_output=True, text=True,
                              timeout=timeout)
    except FileNotFoundError:
        raise CheckerNotFound(f"checker executable not found: {argv[0]!r}") from None
    except subprocess.TimeoutExpired:
        return CheckReport(
            diagnostics=[], counted=None, returncode=None, command=argv,
            duration=time.monotonic() - started, whitelist=tuple(sorted(whitelist)),
            status="timeout",
        )
    duration = time.monotonic() - started
    diagnostics: list[Diagnostic] = []
    unmatched: list[str] = []
    for line in proc.stdout.splitlines():
        match = _DIAGNOSTIC.match(line)
        if match:
            diagnostics.append(Diagnostic(
                path=match.group(1), line=int(match.group(2)),
                severity="error", message=match.group(3).rstrip(),
                code=match.group(4),
            ))
        elif line.strip():
            unmatched.append(line)
    if proc.returncode not in (0, 1) and not diagnostics:
        raise CheckerCrashed(
            f"checker exited with {proc.returncode} and no parseable output",
            output=proc.stdout + proc.stderr,
        )
    counted = sum(1 for d in diagnostics if d.code in whitelist)
    return CheckReport(
        diagnostics=diagnostics, counted=counted, returncode=proc.returncode,
        command=argv, duration=duration, whitelist=tuple(sorted(whitelist)),
        unmatched=unmatched,
    )


def write_report(path: str | Path, report: CheckReport) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(report.to_json(), handle, indent=2, sort_keys=True)
        handle.write("\n")
