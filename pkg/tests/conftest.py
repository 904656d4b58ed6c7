from __future__ import annotations

from pathlib import Path

import pytest

from sessionrecon.phase1 import CandidateSession
from sessionrecon.topology import WebTopology, load_topology

FIXTURES = Path(__file__).parent / "fixtures"
TABLE1_PAGES = ["P1", "P20", "P23", "P13", "P34"]


@pytest.fixture(scope="session")
def table1_topology() -> WebTopology:
    with open(FIXTURES / "table1_topology.txt", encoding="utf-8") as fh:
        return load_topology(fh)


@pytest.fixture(scope="session")
def table1_session(table1_topology) -> CandidateSession:
    ids = [table1_topology.page_id(u) for u in TABLE1_PAGES]
    return CandidateSession("u1", tuple((p, 10 * i) for i, p in enumerate(ids)))


@pytest.fixture(scope="session")
def P(table1_topology):
    """URL -> PageId lookup for the worked-example graph."""
    return table1_topology.page_id


def chain_session(topology: WebTopology, urls, step: int = 10, user: str = "u") -> CandidateSession:
    return CandidateSession(user, tuple((topology.page_id(u), step * i) for i, u in enumerate(urls)))


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
