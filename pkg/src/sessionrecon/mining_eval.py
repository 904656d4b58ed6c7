"""Frequent navigation patterns, next-page prediction and method comparison."""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .baselines import Method, reconstruct
from .errors import ContractViolation
from .log_ingest import PageRequest, group_by_user
from .phase1 import Thresholds
from .simulator import GroundTruth
from .topology import PageId, WebTopology

Pages = Tuple[PageId, ...]

METRICS = ("session_recall", "session_precision", "next_page_accuracy")
BASELINES = (Method.TIME_ORIENTED, Method.NAVIGATION_ORIENTED)


@dataclass(frozen=True)
class FrequentPattern:
    pages: Pages
    support: int


def mine_frequent(sessions: Iterable[Sequence[PageId]], min_support: int) -> List[FrequentPattern]:
    """Contiguous patterns contained in at least ``min_support`` sessions.

    Level-wise: a length-k window is only counted when both of its
    length-(k-1) sub-windows were frequent. Each session counts a pattern once.
    Sorted by length desc, support desc, then pages.
    """
    if min_support < 1:
        raise ContractViolation("min_support must be >= 1")
    sessions = [tuple(s) for s in sessions]
    found: Dict[Pages, int] = {}

    counts: Dict[Pages, int] = {}
    for s in sessions:
        for p in set(s):
            counts[(p,)] = counts.get((p,), 0) + 1
    level = {k: v for k, v in counts.items() if v >= min_support}
    k = 1
    while level:
        found.update(level)
        k += 1
        counts = {}
        for s in sessions:
            windows = set()
            for i in range(len(s) - k + 1):
                w = s[i : i + k]
                if w[:-1] in level and w[1:] in level:
                    windows.add(w)
            for w in windows:
                counts[w] = counts.get(w, 0) + 1
        level = {w: c for w, c in counts.items() if c >= min_support}

    ordered = sorted(found.items(), key=lambda kv: (-len(kv[0]), -kv[1], kv[0]))
    return [FrequentPattern(pages, support) for pages, support in ordered]


class PatternTable:
    """Patterns indexed by everything-but-their-last-page, for prediction."""

    def __init__(self, patterns: Iterable[FrequentPattern]) -> None:
        self._next: Dict[Pages, Tuple[int, PageId]] = {}
        self._longest = 0
        for pat in patterns:
            if len(pat.pages) < 2:
                continue
            head, last = pat.pages[:-1], pat.pages[-1]
            key = (-pat.support, last)
            best = self._next.get(head)
            if best is None or key < best:
                self._next[head] = key
            self._longest = max(self._longest, len(head))

    def predict(self, prefix: Sequence[PageId]) -> Optional[PageId]:
        prefix = tuple(prefix)
        for n in range(min(len(prefix), self._longest), 0, -1):
            hit = self._next.get(prefix[-n:])
            if hit is not None:
                return hit[1]
        return None


def predict_next(patterns: Iterable[FrequentPattern], prefix: Sequence[PageId]) -> Optional[PageId]:
    """Longest matching suffix wins; then highest support; then smallest page id."""
    return PatternTable(patterns).predict(prefix)


def is_test_user(user: str) -> bool:
    return zlib.crc32(user.encode("utf-8")) % 5 == 0


def relative_improvement(new: float, old: float) -> float:
    if old == 0:
        return 0.0 if new == 0 else math.inf
    return (new - old) / old


@dataclass(frozen=True)
class MethodMetrics:
    session_recall: float
    session_precision: float
    next_page_accuracy: float
    sessions: int = 0
    queries: int = 0

    def get(self, metric: str) -> float:
        return getattr(self, metric)


@dataclass
class EvalReport:
    metrics: Dict[Method, MethodMetrics]
    truth_paths: int = 0
    # improvements[baseline][metric] = (relative, absolute) gain of csra
    improvements: Dict[Method, Dict[str, Tuple[float, float]]] = field(default_factory=dict)

    def compare(self, method: Method, baseline: Method) -> Dict[str, Tuple[float, float]]:
        a, b = self.metrics[method], self.metrics[baseline]
        return {
            m: (relative_improvement(a.get(m), b.get(m)), a.get(m) - b.get(m)) for m in METRICS
        }


def _fmt(value: float) -> str:
    if math.isinf(value):
        return "inf"
    return f"{value:.6f}"


def format_report(report: EvalReport) -> str:
    lines = [f"truth_paths = {report.truth_paths}"]
    for method, mm in report.metrics.items():
        for metric in METRICS:
            lines.append(f"{method.value}.{metric} = {_fmt(mm.get(metric))}")
        lines.append(f"{method.value}.sessions = {mm.sessions}")
        lines.append(f"{method.value}.queries = {mm.queries}")
    for baseline, gains in report.improvements.items():
        for metric, (rel, delta) in gains.items():
            lines.append(f"csra_vs_{baseline.value}.{metric}.relative = {_fmt(rel)}")
            lines.append(f"csra_vs_{baseline.value}.{metric}.absolute = {_fmt(delta)}")
    return "\n".join(lines) + "\n"


def format_records(report: EvalReport) -> str:
    lines = []
    for method, mm in report.metrics.items():
        for metric in METRICS:
            lines.append(f"{method.value}\t{metric}\t{_fmt(mm.get(metric))}")
    for baseline, gains in report.improvements.items():
        for metric, (rel, delta) in gains.items():
            lines.append(f"{baseline.value}\tcsra_relative_gain.{metric}\t{_fmt(rel)}")
            lines.append(f"{baseline.value}\tcsra_absolute_gain.{metric}\t{_fmt(delta)}")
    return "\n".join(lines) + "\n"


def _score(
    reconstructed: Dict[str, List[Pages]],
    truth: GroundTruth,
    min_support: int,
) -> MethodMetrics:
    truth_by_user = {u: {p.pages for p in paths} for u, paths in truth.by_user().items()}

    rebuilt = {u: set(v) for u, v in reconstructed.items()}
    recalled = sum(1 for p in truth.paths if p.pages in rebuilt.get(p.user, ()))
    total_sessions = sum(len(v) for v in reconstructed.values())
    precise = sum(
        1
        for user, sessions in reconstructed.items()
        for s in sessions
        if s in truth_by_user.get(user, ())
    )

    train = [s for user, sessions in reconstructed.items() if not is_test_user(user) for s in sessions]
    table = PatternTable(mine_frequent(train, min_support))
    queries = hits = 0
    for path in truth.paths:
        if not is_test_user(path.user):
            continue
        for k in range(1, len(path.pages)):
            queries += 1
            if table.predict(path.pages[:k]) == path.pages[k]:
                hits += 1

    return MethodMetrics(
        session_recall=recalled / len(truth.paths),
        session_precision=precise / total_sessions if total_sessions else 0.0,
        next_page_accuracy=hits / queries if queries else 0.0,
        sessions=total_sessions,
        queries=queries,
    )


def evaluate(
    log: Sequence[PageRequest],
    truth: GroundTruth,
    topology: WebTopology,
    th: Thresholds,
    min_support: int,
    baselines: Sequence[Method] = BASELINES,
) -> EvalReport:
    """Reconstruct ``log`` with csra and each baseline; score against ``truth``.

    Recall and precision are exact page-list matches per user. Next-page
    accuracy mines patterns from the reconstructions of training users and
    queries every proper prefix of the test users' true paths; users with
    ``crc32(key) % 5 == 0`` are test users. Listing csra among ``baselines``
    yields a self-comparison.
    """
    if not truth.paths:
        raise ContractViolation("ground truth is empty")
    users = group_by_user(log)
    methods = [Method.CSRA] + [Method(b) for b in baselines if Method(b) is not Method.CSRA]
    metrics: Dict[Method, MethodMetrics] = {}
    for method in methods:
        per_user = {
            seq.user: [s.pages for s in reconstruct(seq, topology, th, method)] for seq in users
        }
        metrics[method] = _score(per_user, truth, min_support)
    report = EvalReport(metrics, truth_paths=len(truth.paths))
    for baseline in baselines:
        baseline = Method(baseline)
        report.improvements[baseline] = report.compare(Method.CSRA, baseline)
    return report
