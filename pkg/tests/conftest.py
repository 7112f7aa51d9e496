"""Shared fixtures plus a terminal summary listing acceptance checks."""

from __future__ import annotations

import subprocess
from pathlib import Path

import pytest

DATA_DIR = Path(__file__).parent / "data"
NATIVE_DIR = Path(__file__).parent / "native"

# nodeid -> {label, outcome}; populated at collection, filled during the run
_acceptance: "dict[str, dict]" = {}


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


def _compile(source: Path, out: Path) -> Path:
    subprocess.run(
        ["cc", "-shared", "-fPIC", "-O2", "-o", str(out), str(source)],
        check=True,
        capture_output=True,
    )
    return out


@pytest.fixture(scope="session")
def solver_lib(tmp_path_factory) -> Path:
    build = tmp_path_factory.mktemp("native")
    return _compile(NATIVE_DIR / "minisolver.c", build / "minisolver.so")


@pytest.fixture(scope="session")
def stub_libs(tmp_path_factory) -> "dict[str, Path]":
    build = tmp_path_factory.mktemp("stubs")
    return {
        "missing_solve": _compile(
            NATIVE_DIR / "stub_missing_solve.c", build / "stub_missing_solve.so"
        ),
        "empty": _compile(NATIVE_DIR / "stub_empty.c", build / "stub_empty.so"),
    }


def pytest_collection_modifyitems(items):
    for item in items:
        if item.nodeid.split("::")[0].endswith("test_acceptance.py"):
            doc = item.function.__doc__ or item.name
            _acceptance[item.nodeid] = {
                "label": doc.strip().splitlines()[0],
                "outcome": "not run",
            }


def pytest_runtest_logreport(report):
    entry = _acceptance.get(report.nodeid)
    if entry is None:
        return
    if report.when == "call":
        entry["outcome"] = report.outcome
    elif report.when == "setup" and report.outcome != "passed":
        entry["outcome"] = report.outcome


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for entry in _acceptance.values():
        status = "PASS" if entry["outcome"] == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {entry['label']}")
