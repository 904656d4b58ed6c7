"""All maximal link-valid paths inside a candidate session.

Pages of a candidate session are offered left to right. Each page either
extends every open sequence whose last page links to it within the page-stay
limit, or, when nothing could be extended, starts a new singleton sequence.

Bookkeeping per sequence:

* ``degree`` starts at the out-degree of the last page and drops by one per
  extension. A sequence whose degree reaches zero has used every outgoing
  link and leaves the open pool.
* ``maximal`` is true until the sequence is extended once.

Sequences born with degree zero go straight to the finished pool. When the
session is exhausted the still-maximal open sequences are finished too.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Tuple

from .phase1 import CandidateSession
from .topology import PageId, WebTopology

Entry = Tuple[PageId, int]


@dataclass(eq=False)
class NavSequence:
    pages: List[Entry]
    degree: int
    maximal: bool = True

    @property
    def page_ids(self) -> Tuple[PageId, ...]:
        return tuple(p for p, _ in self.pages)

    @property
    def last(self) -> Entry:
        return self.pages[-1]

    def snapshot(self) -> Tuple[Tuple[PageId, ...], int, bool]:
        """``(pages, degree, maximal)`` triple, frozen for comparison."""
        return self.page_ids, self.degree, self.maximal


@dataclass
class SessionPools:
    temp: List[NavSequence] = field(default_factory=list)
    final: List[NavSequence] = field(default_factory=list)
    flag: bool = False

    def route(self, seq: NavSequence) -> None:
        (self.final if seq.degree == 0 else self.temp).append(seq)


@dataclass(frozen=True)
class TraceStep:
    """Pool contents around one page, as ``(pages, degree, maximal)`` triples.

    ``extended`` holds the parents after their degree was decremented;
    ``final_after`` is the finished pool after the page (before the closing sweep).
    """

    page: PageId
    temp_before: Tuple[Tuple[Tuple[PageId, ...], int, bool], ...]
    extended: Tuple[Tuple[Tuple[PageId, ...], int, bool], ...]
    created: Tuple[Tuple[Tuple[PageId, ...], int, bool], ...]
    final_after: Tuple[Tuple[Tuple[PageId, ...], int, bool], ...]


def new_seq_initialize(page: Entry, topology: WebTopology, pools: SessionPools) -> NavSequence:
    seq = NavSequence([page], topology.out_degree(page[0]), True)
    pools.route(seq)
    return seq


def new_seq_extend(
    seq: NavSequence,
    page: Entry,
    topology: WebTopology,
    delta: int,
    pools: SessionPools,
) -> Optional[NavSequence]:
    """Try to append ``page`` to ``seq``; returns the new sequence or None."""
    last_page, last_time = seq.last
    if not (topology.has_link(last_page, page[0]) and page[1] - last_time < delta):
        return None
    pools.flag = True
    seq.degree -= 1
    seq.maximal = False
    new = NavSequence(seq.pages + [page], topology.out_degree(page[0]), True)
    pools.route(new)
    if seq.degree == 0:
        pools.temp.remove(seq)
    return new


def mpvs_process_session(
    session: CandidateSession,
    topology: WebTopology,
    delta: int,
    trace: Optional[List[TraceStep]] = None,
) -> List[NavSequence]:
    """Finished (maximal) sequences of one candidate session.

    When ``trace`` is a list, one :class:`TraceStep` per page is appended to it.
    """
    pools = SessionPools()
    for page in session.entries:
        pools.flag = False
        before = tuple(pools.temp)
        if trace is not None:
            temp_before = tuple(s.snapshot() for s in before)
        extended: List[NavSequence] = []
        created: List[NavSequence] = []
        # snapshot: sequences born from this page are not offered the same page
        for seq in before:
            new = new_seq_extend(seq, page, topology, delta, pools)
            if new is not None:
                extended.append(seq)
                created.append(new)
        if not pools.flag:
            created.append(new_seq_initialize(page, topology, pools))
        if trace is not None:
            trace.append(
                TraceStep(
                    page=page[0],
                    temp_before=temp_before,
                    extended=tuple(s.snapshot() for s in extended),
                    created=tuple(s.snapshot() for s in created),
                    final_after=tuple(s.snapshot() for s in pools.final),
                )
            )
    for seq in pools.temp:
        if seq.maximal:
            pools.final.append(seq)
    return pools.final


@dataclass
class MaximalSessionSet:
    """Union of finished sequences over many candidate sessions.

    Members are unique by page list and sorted by it.
    """

    sequences: List[NavSequence] = field(default_factory=list)

    def page_lists(self) -> List[Tuple[PageId, ...]]:
        return [s.page_ids for s in self.sequences]

    def __len__(self) -> int:
        return len(self.sequences)

    def __iter__(self):
        return iter(self.sequences)


def csra_phase2(
    sessions: Iterable[CandidateSession], topology: WebTopology, delta: int
) -> MaximalSessionSet:
    merged = {}
    for session in sessions:
        for seq in mpvs_process_session(session, topology, delta):
            merged.setdefault(seq.page_ids, seq)
    return MaximalSessionSet([merged[k] for k in sorted(merged)])
