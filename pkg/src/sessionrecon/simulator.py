"""Synthetic site graphs and agent traffic with known true navigation paths.

All randomness comes from one :class:`~sessionrecon.rng.SplitMix64` stream
seeded with ``SimConfig.seed`` and consumed in this order:

1. topology: for page ``i = 0..n-1``: out-degree ``k = floor(u * (2m + 1))``
   (``u = random()``, ``m = edges_per_page``, capped at ``n - 1``), then ``k``
   targets via ``sample`` over the other pages in id order;
2. users in index order; per user one start offset ``randint(0, gap - 1)``;
3. per session: length ``randint(*path_length)``, start page
   ``randint(0, n - 1)``, then per step a think time, a fork coin
   (``random() < branch_probability``), a path/fork-point ``choice`` and a
   successor ``choice``.

An agent keeps a set of true paths. Each step it either extends the tail of
a path (the one it touched last when possible) or forks a new path off an
earlier page of an existing path, as if opening a link in a new tab. Only
pages requested less than ``page_stay_delta`` ago can be continued, so every
true path is time-feasible. A session stops early when no move is possible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, TextIO, Tuple

from .errors import ContractViolation
from .log_ingest import PageRequest
from .phase1 import DEFAULT_PAGE_STAY, DEFAULT_SESSION_CAP
from .rng import SplitMix64
from .topology import PageId, WebTopology, topology_from_ids


@dataclass(frozen=True)
class SimConfig:
    page_count: int = 100
    edges_per_page: float = 3.0
    user_count: int = 50
    sessions_per_user: int = 40
    path_length: Tuple[int, int] = (3, 7)
    branch_probability: float = 0.4
    think_time: Tuple[int, int] = (30, 300)  # [lo, hi) seconds
    inter_session_gap: int = 3600
    seed: int = 0
    page_stay_delta: int = DEFAULT_PAGE_STAY
    session_duration_cap: int = DEFAULT_SESSION_CAP

    def __post_init__(self) -> None:
        if self.page_count < 1:
            raise ContractViolation("page_count must be >= 1")
        if self.edges_per_page <= 0:
            raise ContractViolation("edges_per_page must be positive")
        if self.user_count < 0 or self.sessions_per_user < 0:
            raise ContractViolation("user_count and sessions_per_user must be >= 0")
        lo, hi = self.path_length
        if not 1 <= lo <= hi:
            raise ContractViolation(f"bad path_length range {self.path_length}")
        if not 0.0 <= self.branch_probability <= 1.0:
            raise ContractViolation("branch_probability must lie in [0, 1]")
        tlo, thi = self.think_time
        if not 0 <= tlo < thi:
            raise ContractViolation(f"bad think_time range {self.think_time}")
        if thi > self.page_stay_delta:
            raise ContractViolation("think times must stay below page_stay_delta")
        if self.inter_session_gap <= self.session_duration_cap:
            raise ContractViolation("inter_session_gap must exceed session_duration_cap")
        if (hi - 1) * (thi - 1) > self.session_duration_cap:
            raise ContractViolation("longest possible session exceeds session_duration_cap")


@dataclass(frozen=True)
class TruthPath:
    user: str
    session_index: int
    pages: Tuple[PageId, ...]
    times: Tuple[int, ...] = field(default=(), compare=False)


@dataclass
class GroundTruth:
    paths: List[TruthPath] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.paths)

    def by_user(self) -> Dict[str, List[TruthPath]]:
        out: Dict[str, List[TruthPath]] = {}
        for p in self.paths:
            out.setdefault(p.user, []).append(p)
        return out

    def sessions(self) -> Dict[Tuple[str, int], List[TruthPath]]:
        out: Dict[Tuple[str, int], List[TruthPath]] = {}
        for p in self.paths:
            out.setdefault((p.user, p.session_index), []).append(p)
        return out


def user_key(index: int) -> str:
    return f"u{index:04d}"


def _generate_topology(cfg: SimConfig, rng: SplitMix64) -> WebTopology:
    n = cfg.page_count
    edges = []
    for i in range(n):
        k = min(int(rng.random() * (2 * cfg.edges_per_page + 1)), n - 1)
        others = [j for j in range(n) if j != i]
        for j in rng.sample(others, k):
            edges.append((i, j))
    return topology_from_ids(n, edges)


def generate_topology(cfg: SimConfig) -> WebTopology:
    """Random site graph without self-loops; identical for identical seeds."""
    return _generate_topology(cfg, SplitMix64(cfg.seed))


def _simulate_session(
    cfg: SimConfig,
    topology: WebTopology,
    rng: SplitMix64,
    start_time: int,
) -> Tuple[List[Tuple[PageId, int]], List[List[Tuple[PageId, int]]]]:
    length = rng.randint(*cfg.path_length)
    start = rng.randint(0, topology.page_count - 1)
    t = start_time
    requests = [(start, t)]
    paths = [[(start, t)]]
    visited = {start}
    active = 0

    def fresh(page: PageId) -> List[PageId]:
        return [q for q in topology.successors(page) if q not in visited]

    while len(requests) < length:
        t_next = t + rng.randint(cfg.think_time[0], cfg.think_time[1] - 1)
        fork = rng.random() < cfg.branch_probability
        horizon = t_next - cfg.page_stay_delta

        tails = [
            i for i, path in enumerate(paths)
            if path[-1][1] > horizon and fresh(path[-1][0])
        ]
        forks = [
            (i, pos)
            for i, path in enumerate(paths)
            for pos in range(len(path) - 1)
            if path[pos][1] > horizon and fresh(path[pos][0])
        ]

        if fork and forks:
            i, pos = rng.choice(forks)
            nxt = rng.choice(fresh(paths[i][pos][0]))
            paths.append(paths[i][: pos + 1] + [(nxt, t_next)])
            active = len(paths) - 1
        elif tails:
            i = active if active in tails else rng.choice(tails)
            nxt = rng.choice(fresh(paths[i][-1][0]))
            paths[i].append((nxt, t_next))
            active = i
        else:
            break
        visited.add(nxt)
        requests.append((nxt, t_next))
        t = t_next
    return requests, paths


def simulate_logs(cfg: SimConfig) -> Tuple[List[PageRequest], GroundTruth]:
    """Merged, time-sorted request log plus every true path walked.

    The topology is the one :func:`generate_topology` returns for ``cfg``.
    """
    rng = SplitMix64(cfg.seed)
    topology = _generate_topology(cfg, rng)
    log: List[PageRequest] = []
    truth = GroundTruth()
    for u in range(cfg.user_count):
        user = user_key(u)
        t = rng.randint(0, cfg.inter_session_gap - 1)
        for s in range(cfg.sessions_per_user):
            requests, paths = _simulate_session(cfg, topology, rng, t)
            log.extend(PageRequest(user, page, time) for page, time in requests)
            for path in paths:
                truth.paths.append(
                    TruthPath(user, s, tuple(p for p, _ in path), tuple(tt for _, tt in path))
                )
            t = requests[-1][1] + cfg.inter_session_gap
    log.sort(key=lambda r: r.time)
    return log, truth


def write_truth(truth: GroundTruth, topology: WebTopology, out: TextIO) -> None:
    for p in truth.paths:
        urls = ",".join(topology.urls[q] for q in p.pages)
        out.write(f"{p.user}\t{p.session_index}\t{urls}\n")


def read_truth(source: Iterable[str], topology: WebTopology) -> GroundTruth:
    """Parse a truth file. Raises ``ValueError`` on malformed lines or unknown URLs."""
    truth = GroundTruth()
    for lineno, raw in enumerate(source, start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3 or not parts[1].isdigit() or not parts[2]:
            raise ValueError(f"truth line {lineno}: expected user<TAB>session<TAB>urls")
        pages = []
        for url in parts[2].split(","):
            pid = topology.get(url)
            if pid is None:
                raise ValueError(f"truth line {lineno}: unknown url {url}")
            pages.append(pid)
        truth.paths.append(TruthPath(parts[0], int(parts[1]), tuple(pages)))
    return truth
