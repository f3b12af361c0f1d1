import random
import shutil
import sys
import textwrap
from pathlib import Path

import pytest

from typeqal.checker import (
    DEFAULT_WHITELIST,
    CheckerCrashed,
    CheckerNotFound,
    apply_stubs,
    run_typecheck,
)

FIXTURES = Path(__file__).parent / "fixtures"

MYPY_AVAILABLE = shutil.which("mypy") is not None

# mypy-shaped output: the five whitelisted codes plus one that is not.
CANNED_OUTPUT = """\
app.py:3: error: Argument 1 to "greet" has incompatible type "list[int]"; expected "str"  [arg-type]
app.py:4: error: Incompatible types in assignment (expression has type "str", variable has type "int")  [assignment]
app.py:5: error: "str" has no attribute "missing_method"  [attr-defined]
app.py:6: error: Item "None" of "Optional[int]" has no attribute "bit_length"  [union-attr]
app.py:7: error: Unsupported target for indexed assignment ("str")  [index]
app.py:8: error: Name "undefined_name" is not defined  [name-defined]
app.py:9: note: this is a note line, not an error
Found 6 errors in 1 file (checked 2 source files)
"""


def make_fake_checker(tmp_path, body: str, name: str = "fake_checker.py") -> str:
    script = tmp_path / name
    script.write_text(body, encoding="utf-8")
    return f"{sys.executable} {script} {{tree}}"


@pytest.fixture
def canned_checker(tmp_path):
    body = textwrap.dedent(f"""\
        import sys
        sys.stdout.write({CANNED_OUTPUT!r})
        sys.exit(1)
        """)
    return make_fake_checker(tmp_path, body)


# ---------------------------------------------------------------------------
# Stub application
# ---------------------------------------------------------------------------

def test_apply_stubs_places_pyi_beside_py(tmp_path):
    repo = tmp_path / "repo"
    (repo / "pkg").mkdir(parents=True)
    (repo / "a.py").write_text("x = 1\n")
    (repo / "pkg" / "b.py").write_text("y = 2\n")
    stubs = tmp_path / "stubs"
    (stubs / "pkg").mkdir(parents=True)
    (stubs / "a.pyi").write_text("x: int\n")
    (stubs / "pkg" / "b.pyi").write_text("y: int\n")
    out = tmp_path / "out"
    result = apply_stubs(repo, stubs, out)
    assert result.copied == 2
    assert result.warnings == []
    assert (out / "a.py").is_file() and (out / "a.pyi").is_file()
    assert (out / "pkg" / "b.pyi").read_text() == "y: int\n"


def test_apply_stubs_warns_on_unmatched_stub(tmp_path):
    repo = tmp_path / "repo"
    repo.mkdir()
    (repo / "a.py").write_text("x = 1\n")
    stubs = tmp_path / "stubs"
    stubs.mkdir()
    (stubs / "ghost.pyi").write_text("z: int\n")
    out = tmp_path / "out"
    result = apply_stubs(repo, stubs, out)
    assert result.copied == 0
    assert any("ghost.pyi" in w for w in result.warnings)
    assert not (out / "ghost.pyi").exists()


def test_apply_stubs_overwrites_existing_stub_with_warning(tmp_path):
    repo = tmp_path / "repo"
    repo.mkdir()
    (repo / "a.py").write_text("x = 1\n")
    (repo / "a.pyi").write_text("x: str\n")
    stubs = tmp_path / "stubs"
    stubs.mkdir()
    (stubs / "a.pyi").write_text("x: int\n")
    out = tmp_path / "out"
    result = apply_stubs(repo, stubs, out)
    assert result.copied == 1
    assert any("overwrites" in w for w in result.warnings)
    assert (out / "a.pyi").read_text() == "x: int\n"


# ---------------------------------------------------------------------------
# Diagnostic parsing and counting
# ---------------------------------------------------------------------------

def test_counts_whitelisted_codes_only(tmp_path, canned_checker):
    report = run_typecheck(tmp_path, command=canned_checker)
    assert report.counted == 5
    assert len(report.diagnostics) == 6
    assert report.returncode == 1
    codes = sorted(d.code for d in report.diagnostics)
    assert codes == ["arg-type", "assignment", "attr-defined",
                     "index", "name-defined", "union-attr"]


def test_note_and_summary_lines_preserved_not_counted(tmp_path, canned_checker):
    report = run_typecheck(tmp_path, command=canned_checker)
    assert any("note" in line for line in report.unmatched)
    assert any(line.startswith("Found 6 errors") for line in report.unmatched)


def test_whitelist_monotonicity(tmp_path, canned_checker):
    all_codes = ["arg-type", "assignment", "attr-defined", "index",
                 "name-defined", "union-attr"]
    rng = random.Random(11)
    for _ in range(30):
        smaller = set(rng.sample(all_codes, rng.randint(0, len(all_codes))))
        larger = smaller | set(rng.sample(all_codes, rng.randint(0, len(all_codes))))
        low = run_typecheck(tmp_path, command=canned_checker, whitelist=smaller)
        high = run_typecheck(tmp_path, command=canned_checker, whitelist=larger)
        assert low.counted <= high.counted


def test_determinism(tmp_path, canned_checker):
    first = run_typecheck(tmp_path, command=canned_checker)
    second = run_typecheck(tmp_path, command=canned_checker)
    assert first.counted == second.counted
    assert [d.code for d in first.diagnostics] == [d.code for d in second.diagnostics]


def test_non_whitelisted_only_counts_zero(tmp_path):
    body = textwrap.dedent("""\
        import sys
        print('m.py:1: error: Name "zzz" is not defined  [name-defined]')
        sys.exit(1)
        """)
    report = run_typecheck(tmp_path, command=make_fake_checker(tmp_path, body))
    assert report.counted == 0
    assert len(report.diagnostics) == 1


def test_checker_not_found(tmp_path):
    with pytest.raises(CheckerNotFound):
        run_typecheck(tmp_path, command="definitely-not-a-real-checker {tree}")


def test_checker_crash_without_parseable_output(tmp_path):
    body = textwrap.dedent("""\
        import sys
        print("catastrophic internal failure")
        sys.exit(2)
        """)
    with pytest.raises(CheckerCrashed) as err:
        run_typecheck(tmp_path, command=make_fake_checker(tmp_path, body))
    assert "catastrophic" in err.value.output


def test_blocker_exit_with_parseable_output_is_success(tmp_path):
    # Exit code 2 with diagnostics (a syntax blocker) is a normal result.
    body = textwrap.dedent("""\
        import sys
        print("m.py:1: error: invalid syntax  [syntax]")
        sys.exit(2)
        """)
    report = run_typecheck(tmp_path, command=make_fake_checker(tmp_path, body))
    assert report.counted == 0
    assert len(report.diagnostics) == 1


def test_timeout_reports_na(tmp_path):
    body = "import time\ntime.sleep(30)\n"
    report = run_typecheck(tmp_path, command=make_fake_checker(tmp_path, body),
                           timeout=0.3)
    assert report.status == "timeout"
    assert report.counted is None


def test_clean_output_counts_zero(tmp_path):
    report = run_typecheck(tmp_path, command=make_fake_checker(
        tmp_path, "print('Success: no issues found in 2 source files')\n"))
    assert report.counted == 0
    assert report.diagnostics == []
    assert report.returncode == 0


# ---------------------------------------------------------------------------
# Against the real pinned checker, when present
# ---------------------------------------------------------------------------

@pytest.mark.skipif(not MYPY_AVAILABLE,
                    reason="external checker (mypy) is not installed")
def test_seeded_fixture_counts_five_with_real_checker(tmp_path):
    out = tmp_path / "merged"
    apply_stubs(FIXTURES / "check_seeded" / "repo",
                FIXTURES / "check_seeded" / "stubs", out)
    report = run_typecheck(out)
    by_code = {}
    for diag in report.diagnostics:
        by_code[diag.code] = by_code.get(diag.code, 0) + 1
    for code in sorted(DEFAULT_WHITELIST):
        assert by_code.get(code) == 1, (code, by_code)
    assert report.counted == 5


@pytest.mark.skipif(not MYPY_AVAILABLE,
                    reason="external checker (mypy) is not installed")
def test_clean_fixture_counts_zero_with_real_checker(tmp_path):
    out = tmp_path / "merged"
    apply_stubs(FIXTURES / "check_clean" / "repo",
                FIXTURES / "check_clean" / "stubs", out)
    report = run_typecheck(out)
    assert report.counted == 0
