"""Directed web-site graph: pages interned to dense ids, edges as links.

File format is a plain edge list, one ``<from-url> <to-url>`` pair per line.
Blank lines and ``#`` comments are ignored. A comment of the form
``#!page <url>`` declares a page without edges so that isolated pages and
id order survive a save/load round trip.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Sequence, TextIO, Tuple

from .errors import ContractViolation, TopologyParseError

PageId = int

PAGE_DIRECTIVE = "#!page"


@dataclass(frozen=True)
class WebTopology:
    """Immutable page graph. ``urls[i]`` is the URL of page id ``i``."""

    urls: Tuple[str, ...]
    out_neighbors: Tuple[Tuple[PageId, ...], ...]
    edges: FrozenSet[Tuple[PageId, PageId]] = field(compare=False, repr=False)
    _index: Dict[str, PageId] = field(compare=False, repr=False)

    @classmethod
    def from_edges(
        cls, edges: Iterable[Tuple[str, str]], pages: Iterable[str] = ()
    ) -> "WebTopology":
        """Build from URL pairs; ``pages`` are interned first, in order."""
        builder = _Builder()
        for url in pages:
            builder.intern(url)
        for src, dst in edges:
            builder.add_edge(src, dst)
        return builder.build()

    @property
    def page_count(self) -> int:
        return len(self.urls)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def _check(self, page: PageId) -> None:
        if not (isinstance(page, int) and 0 <= page < len(self.urls)):
            raise ContractViolation(f"invalid page id {page!r} (page_count={len(self.urls)})")

    def has_link(self, src: PageId, dst: PageId) -> bool:
        self._check(src)
        self._check(dst)
        return (src, dst) in self.edges

    def out_degree(self, page: PageId) -> int:
        self._check(page)
        return len(self.out_neighbors[page])

    def successors(self, page: PageId) -> Tuple[PageId, ...]:
        self._check(page)
        return self.out_neighbors[page]

    def page_id(self, url: str) -> PageId:
        """Id of ``url``; ``KeyError`` if the page is unknown."""
        return self._index[url]

    def get(self, url: str) -> PageId | None:
        return self._index.get(url)

    def url(self, page: PageId) -> str:
        self._check(page)
        return self.urls[page]

    def __contains__(self, url: object) -> bool:
        return url in self._index

    def iter_edges(self) -> Iterable[Tuple[PageId, PageId]]:
        """Edges grouped by source id, each group in insertion order."""
        for src, succ in enumerate(self.out_neighbors):
            for dst in succ:
                yield src, dst


class _Builder:
    def __init__(self) -> None:
        self.urls: List[str] = []
        self.index: Dict[str, PageId] = {}
        self.succ: List[List[PageId]] = []
        self.edges: set = set()

    def intern(self, url: str) -> PageId:
        pid = self.index.get(url)
        if pid is None:
            pid = len(self.urls)
            self.index[url] = pid
            self.urls.append(url)
            self.succ.append([])
        return pid

    def add_edge(self, src: str, dst: str) -> None:
        a = self.intern(src)
        b = self.intern(dst)
        if (a, b) not in self.edges:
            self.edges.add((a, b))
            self.succ[a].append(b)

    def build(self) -> WebTopology:
        return WebTopology(
            urls=tuple(self.urls),
            out_neighbors=tuple(tuple(s) for s in self.succ),
            edges=frozenset(self.edges),
            _index=dict(self.index),
        )


def load_topology(source: TextIO | Iterable[str]) -> WebTopology:
    builder = _Builder()
    for lineno, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line.split()
            if parts[0] == PAGE_DIRECTIVE:
                if len(parts) != 2:
                    raise TopologyParseError(lineno, f"expected '{PAGE_DIRECTIVE} <url>'")
                builder.intern(parts[1])
            continue
        parts = line.split()
        if len(parts) != 2:
            raise TopologyParseError(lineno, f"expected 2 tokens, got {len(parts)}")
        builder.add_edge(parts[0], parts[1])
    return builder.build()


def topology_from_text(text: str) -> WebTopology:
    return load_topology(text.splitlines())


def save_topology(topology: WebTopology, out: TextIO) -> None:
    """Write every page declaration (id order) then every edge."""
    for url in topology.urls:
        out.write(f"{PAGE_DIRECTIVE} {url}\n")
    for src, dst in topology.iter_edges():
        out.write(f"{topology.urls[src]} {topology.urls[dst]}\n")


def dumps_topology(topology: WebTopology) -> str:
    buf = io.StringIO()
    save_topology(topology, buf)
    return buf.getvalue()


def topology_from_ids(page_count: int, edges: Sequence[Tuple[PageId, PageId]], prefix: str = "/p") -> WebTopology:
    """Topology over pages ``{prefix}0 .. {prefix}{n-1}`` with id i at position i."""
    return WebTopology.from_edges(
        ((f"{prefix}{a}", f"{prefix}{b}") for a, b in edges),
        pages=(f"{prefix}{i}" for i in range(page_count)),
    )
