"""Comparison reconstructors and a single dispatch point for all methods."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import List, Tuple

from .log_ingest import UserRequestSequence
from .mpvs import csra_phase2
from .phase1 import CandidateSession, Thresholds, build_candidate_sessions
from .topology import PageId, WebTopology


class Method(str, enum.Enum):
    CSRA = "csra"
    TIME_ORIENTED = "time_oriented"
    NAVIGATION_ORIENTED = "navigation_oriented"


@dataclass(frozen=True)
class ReconstructedSession:
    user: str
    pages: Tuple[PageId, ...]
    method: Method

    def __post_init__(self) -> None:
        if not self.pages:
            raise ValueError("reconstructed session must be non-empty")


def time_oriented(seq: UserRequestSequence, th: Thresholds) -> List[ReconstructedSession]:
    return [
        ReconstructedSession(seq.user, cs.pages, Method.TIME_ORIENTED)
        for cs in build_candidate_sessions(seq, th)
    ]


def _stack_walk(session: CandidateSession, topology: WebTopology) -> List[List[PageId]]:
    out: List[List[PageId]] = []
    current: List[PageId] = []
    stack: List[PageId] = []
    for page in session.pages:
        if not stack or topology.has_link(stack[-1], page):
            stack.append(page)
            current.append(page)
            continue
        # Back up to the nearest open page that links here; each page we
        # step back onto is recorded as a (synthetic) request.
        depth = len(stack) - 1
        while depth >= 0 and not topology.has_link(stack[depth], page):
            depth -= 1
        if depth < 0:
            out.append(current)
            current = [page]
            stack = [page]
            continue
        current.extend(reversed(stack[depth:-1]))
        del stack[depth + 1 :]
        stack.append(page)
        current.append(page)
    if current:
        out.append(current)
    return out


def navigation_oriented(
    seq: UserRequestSequence, topology: WebTopology, th: Thresholds
) -> List[ReconstructedSession]:
    """Time split, then a referrer-free navigation stack inside each candidate.

    When a request does not follow a link from the page on top of the stack
    the walk backs up to the nearest earlier page that links to it, inserting
    those backward steps. If no open page links to it, the session closes and
    a new one starts at that request.
    """
    result = []
    for cs in build_candidate_sessions(seq, th):
        for pages in _stack_walk(cs, topology):
            result.append(ReconstructedSession(seq.user, tuple(pages), Method.NAVIGATION_ORIENTED))
    return result


def csra(seq: UserRequestSequence, topology: WebTopology, th: Thresholds) -> List[ReconstructedSession]:
    candidates = build_candidate_sessions(seq, th)
    found = csra_phase2(candidates, topology, th.page_stay_delta)
    return [ReconstructedSession(seq.user, pages, Method.CSRA) for pages in found.page_lists()]


def reconstruct(
    seq: UserRequestSequence, topology: WebTopology, th: Thresholds, method: Method | str
) -> List[ReconstructedSession]:
    method = Method(method)
    if method is Method.CSRA:
        return csra(seq, topology, th)
    if method is Method.TIME_ORIENTED:
        return time_oriented(seq, th)
    return navigation_oriented(seq, topology, th)
