"""Split a user's request stream into candidate sessions.

A candidate session is a run of requests in which consecutive kept entries
are less than ``page_stay_delta`` apart and the whole run spans at most
``session_duration_cap`` seconds. A page requested twice inside one run is a
browser-cache hit: the repeat is dropped and does not open a new session.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

from .errors import ContractViolation
from .log_ingest import UserRequestSequence
from .topology import PageId

DEFAULT_PAGE_STAY = 600
DEFAULT_SESSION_CAP = 1800


@dataclass(frozen=True)
class Thresholds:
    page_stay_delta: int = DEFAULT_PAGE_STAY
    session_duration_cap: int = DEFAULT_SESSION_CAP

    def __post_init__(self) -> None:
        if self.page_stay_delta <= 0 or self.session_duration_cap <= 0:
            raise ContractViolation("thresholds must be strictly positive")
        if self.page_stay_delta > self.session_duration_cap:
            raise ContractViolation("page_stay_delta must not exceed session_duration_cap")


@dataclass(frozen=True)
class CandidateSession:
    user: str
    entries: Tuple[Tuple[PageId, int], ...]

    def __post_init__(self) -> None:
        if not self.entries:
            raise ContractViolation("candidate session must be non-empty")
        pages = [p for p, _ in self.entries]
        if len(set(pages)) != len(pages):
            raise ContractViolation("candidate session repeats a page")

    @property
    def pages(self) -> Tuple[PageId, ...]:
        return tuple(p for p, _ in self.entries)

    @property
    def times(self) -> Tuple[int, ...]:
        return tuple(t for _, t in self.entries)

    def __len__(self) -> int:
        return len(self.entries)


def conforms(session: CandidateSession, th: Thresholds) -> bool:
    """True iff ``session`` satisfies every threshold invariant."""
    times = session.times
    pages = session.pages
    return (
        len(pages) == len(set(pages))
        and all(b - a < th.page_stay_delta for a, b in zip(times, times[1:]))
        and times[-1] - times[0] <= th.session_duration_cap
    )


def build_candidate_sessions(seq: UserRequestSequence, th: Thresholds) -> List[CandidateSession]:
    if not seq.is_time_sorted():
        raise ContractViolation(f"requests of user {seq.user!r} are not time-sorted")

    sessions: List[CandidateSession] = []
    entries: List[Tuple[PageId, int]] = []
    seen: set = set()

    def close() -> None:
        if entries:
            sessions.append(CandidateSession(seq.user, tuple(entries)))

    for req in seq.requests:
        if entries:
            start = entries[0][1]
            last = entries[-1][1]
            # gaps are measured from the last kept entry; dropped repeats leave no trace
            if req.time - last >= th.page_stay_delta or req.time - start > th.session_duration_cap:
                close()
                entries = []
                seen = set()
            elif req.page in seen:
                continue
        entries.append((req.page, req.time))
        seen.add(req.page)
    close()
    return sessions
