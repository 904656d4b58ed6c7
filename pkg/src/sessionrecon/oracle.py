"""Exhaustive reference for maximal paths in a vertex sequence.

Used by tests and by the ``oracle-check`` command to cross-check Phase 2.
Deliberately naive: every index subset of the session is examined.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, FrozenSet, Iterator, List, Set, Tuple

from .errors import ContractViolation, OracleRefusal
from .mpvs import csra_phase2
from .phase1 import CandidateSession
from .rng import SplitMix64
from .topology import PageId, WebTopology, topology_from_ids

Path = Tuple[PageId, ...]


@dataclass(frozen=True)
class OracleLimits:
    max_session_length: int = 16

    def __post_init__(self) -> None:
        if self.max_session_length < 1:
            raise ContractViolation("max_session_length must be >= 1")


def feasible_paths(session: CandidateSession, topology: WebTopology, delta: int) -> Set[Path]:
    """Every index-increasing subsequence that is linked and time-feasible."""
    entries = session.entries
    edges = topology.edges
    found: Set[Path] = set()
    for size in range(1, len(entries) + 1):
        for combo in combinations(entries, size):
            if all(
                (a[0], b[0]) in edges and b[1] - a[1] < delta
                for a, b in zip(combo, combo[1:])
            ):
                found.add(tuple(p for p, _ in combo))
    return found


def _proper_substrings(path: Path) -> Iterator[Path]:
    n = len(path)
    for length in range(1, n):
        for start in range(n - length + 1):
            yield path[start : start + length]


def brute_force_maximal(
    session: CandidateSession,
    topology: WebTopology,
    delta: int,
    limits: OracleLimits = OracleLimits(),
) -> Set[Path]:
    if len(session) > limits.max_session_length:
        raise OracleRefusal(
            f"session length {len(session)} exceeds oracle limit {limits.max_session_length}"
        )
    candidates = feasible_paths(session, topology, delta)
    covered = {sub for path in candidates for sub in _proper_substrings(path)}
    return candidates - covered


@dataclass(frozen=True)
class Instance:
    topology: WebTopology
    session: CandidateSession
    delta: int
    edge_probability: float

    def describe(self) -> str:
        edges = " ".join(f"{a}->{b}" for a, b in sorted(self.topology.edges))
        entries = " ".join(f"{p}@{t}" for p, t in self.session.entries)
        return (
            f"pages={self.topology.page_count} p={self.edge_probability} delta={self.delta}\n"
            f"edges: {edges}\n"
            f"session: {entries}"
        )


EDGE_PROBABILITIES = (0.2, 0.4, 0.6)


def random_instance(
    rng: SplitMix64,
    max_pages: int = 12,
    infeasible_fraction: float = 0.2,
) -> Instance:
    """Random graph + session with delta cutting ~``infeasible_fraction`` of linked pairs.

    Self-loops are drawn like any other edge; they count toward out-degree but
    can never be followed inside a session.
    """
    k = rng.randint(1, max_pages)
    n = rng.randint(k, max_pages)
    p = rng.choice(EDGE_PROBABILITIES)
    edges = [(a, b) for a in range(n) for b in range(n) if rng.random() < p]
    topology = topology_from_ids(n, edges)

    order = list(range(n))
    rng.shuffle(order)
    pages = order[:k]
    t = 0
    entries = []
    for page in pages:
        t += rng.randint(1, 100)
        entries.append((page, t))

    gaps = sorted(
        b[1] - a[1]
        for i, a in enumerate(entries)
        for b in entries[i + 1 :]
        if (a[0], b[0]) in topology.edges
    )
    if gaps:
        cut = round(len(gaps) * (1.0 - infeasible_fraction))
        delta = gaps[cut] if cut < len(gaps) else gaps[-1] + 1
    else:
        delta = 100
    return Instance(topology, CandidateSession("u", tuple(entries)), delta, p)


Solver = Callable[[CandidateSession, WebTopology, int], FrozenSet[Path]]


def csra_solver(session: CandidateSession, topology: WebTopology, delta: int) -> FrozenSet[Path]:
    return frozenset(csra_phase2([session], topology, delta).page_lists())


@dataclass
class Mismatch:
    index: int
    instance: Instance
    expected: FrozenSet[Path]
    actual: FrozenSet[Path]

    def report(self) -> str:
        return (
            f"instance {self.index}\n{self.instance.describe()}\n"
            f"oracle: {sorted(self.expected)}\n"
            f"csra:   {sorted(self.actual)}"
        )


def oracle_check(
    instances: int,
    seed: int,
    max_pages: int = 12,
    solver: Solver = csra_solver,
    stop_at_first: bool = True,
) -> List[Mismatch]:
    """Compare ``solver`` with :func:`brute_force_maximal` on seeded random instances."""
    rng = SplitMix64(seed)
    limits = OracleLimits(max(max_pages, 1))
    mismatches: List[Mismatch] = []
    for i in range(instances):
        inst = random_instance(rng, max_pages)
        expected = frozenset(brute_force_maximal(inst.session, inst.topology, inst.delta, limits))
        actual = frozenset(solver(inst.session, inst.topology, inst.delta))
        if expected != actual:
            mismatches.append(Mismatch(i, inst, expected, actual))
            if stop_at_first:
                break
    return mismatches


def iter_instances(count: int, seed: int, max_pages: int = 12) -> Iterator[Instance]:
    rng = SplitMix64(seed)
    for _ in range(count):
        yield random_instance(rng, max_pages)


__all__ = [
    "Instance",
    "Mismatch",
    "OracleLimits",
    "brute_force_maximal",
    "csra_solver",
    "feasible_paths",
    "iter_instances",
    "oracle_check",
    "random_instance",
]
