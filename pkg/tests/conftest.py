import json
from importlib import resources
from pathlib import Path

import pytest

from meros_verify import (
    parse_model,
    parse_runtime_snapshot,
    parse_source_snapshot,
    parse_trace,
)


# verdict lines collected by the acceptance tests, echoed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def fixture_path(*parts: str) -> Path:
    root = resources.files("meros_verify") / "fixtures"
    return Path(str(root.joinpath(*parts)))


def fixture_text(*parts: str) -> str:
    return fixture_path(*parts).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def model_text():
    return fixture_text("heros_model.json")


@pytest.fixture(scope="session")
def model(model_text):
    return parse_model(model_text)


@pytest.fixture(scope="session")
def model_doc(model_text):
    return json.loads(model_text)


@pytest.fixture(scope="session")
def snapshot_text():
    return fixture_text("heros_runtime.json")


@pytest.fixture(scope="session")
def snapshot(snapshot_text):
    return parse_runtime_snapshot(snapshot_text)


@pytest.fixture(scope="session")
def snapshot_doc(snapshot_text):
    return json.loads(snapshot_text)


@pytest.fixture(scope="session")
def sources_text():
    return fixture_text("heros_sources.json")


@pytest.fixture(scope="session")
def source_snapshot(sources_text):
    return parse_source_snapshot(sources_text)


@pytest.fixture(scope="session")
def sources_doc(sources_text):
    return json.loads(sources_text)


@pytest.fixture(scope="session")
def full_trace():
    return parse_trace(fixture_text("traces", "full_mission.jsonl"))


def load_trace(name: str):
    return parse_trace(fixture_text("traces", f"{name}.jsonl"))
