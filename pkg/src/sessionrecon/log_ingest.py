"""Parse server logs into per-user, time-ordered request sequences.

Two input formats are understood:

* ``csv``: header-free ``user,url,epoch_seconds`` rows.
* ``clf``: Common Log Format,
  ``host ident authuser [date] "METHOD url PROTO" status bytes``.
  The user key is the raw host field; only successful (2xx/3xx) GETs count.

Lines that cannot be used are reported as :class:`Diagnostic` records and
skipped, never fatal.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from datetime import datetime
from typing import Dict, Iterable, List, TextIO, Tuple

from .errors import ContractViolation, LogFormatError
from .topology import PageId, WebTopology

FORMATS = ("csv", "clf")

_CLF_RE = re.compile(
    r'^(?P<host>\S+) (?P<ident>\S+) (?P<authuser>\S+) '
    r'\[(?P<date>[^\]]+)\] '
    r'"(?P<request>[^"]*)" (?P<status>\d{3}) (?P<bytes>\S+)'
)
_CLF_DATE = "%d/%b/%Y:%H:%M:%S %z"


@dataclass(frozen=True)
class PageRequest:
    user: str
    page: PageId
    time: int

    def __post_init__(self) -> None:
        if self.time < 0:
            raise ContractViolation(f"negative timestamp {self.time}")


@dataclass(frozen=True)
class Diagnostic:
    line: int
    reason: str

    def format(self) -> str:
        return f"{self.line}\t{self.reason}"


@dataclass
class UserRequestSequence:
    user: str
    requests: List[PageRequest]

    def __len__(self) -> int:
        return len(self.requests)

    def is_time_sorted(self) -> bool:
        return all(a.time <= b.time for a, b in zip(self.requests, self.requests[1:]))


def _parse_epoch(token: str) -> int | None:
    token = token.strip()
    if not token.isdigit():
        return None
    return int(token)


def _parse_csv(
    source: Iterable[str], topology: WebTopology
) -> Tuple[List[PageRequest], List[Diagnostic]]:
    requests: List[PageRequest] = []
    diags: List[Diagnostic] = []
    for lineno, row in enumerate(csv.reader(source), start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 3:
            diags.append(Diagnostic(lineno, f"expected 3 fields, got {len(row)}"))
            continue
        user, url, ts = (cell.strip() for cell in row)
        time = _parse_epoch(ts)
        if time is None:
            diags.append(Diagnostic(lineno, f"bad timestamp {ts!r}"))
            continue
        page = topology.get(url)
        if page is None:
            diags.append(Diagnostic(lineno, f"unknown url {url}"))
            continue
        requests.append(PageRequest(user, page, time))
    return requests, diags


def _parse_clf(
    source: Iterable[str], topology: WebTopology
) -> Tuple[List[PageRequest], List[Diagnostic]]:
    requests: List[PageRequest] = []
    diags: List[Diagnostic] = []
    for lineno, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line:
            continue
        m = _CLF_RE.match(line)
        if m is None:
            diags.append(Diagnostic(lineno, "not a CLF line"))
            continue
        parts = m.group("request").split()
        if len(parts) < 2:
            diags.append(Diagnostic(lineno, "malformed request field"))
            continue
        method, url = parts[0], parts[1]
        if method != "GET":
            diags.append(Diagnostic(lineno, f"method {method} skipped"))
            continue
        status = int(m.group("status"))
        if not 200 <= status < 400:
            diags.append(Diagnostic(lineno, f"status {status} skipped"))
            continue
        try:
            time = int(datetime.strptime(m.group("date"), _CLF_DATE).timestamp())
        except ValueError:
            diags.append(Diagnostic(lineno, f"bad date {m.group('date')!r}"))
            continue
        if time < 0:
            diags.append(Diagnostic(lineno, "timestamp before epoch"))
            continue
        page = topology.get(url)
        if page is None:
            diags.append(Diagnostic(lineno, f"unknown url {url}"))
            continue
        requests.append(PageRequest(m.group("host"), page, time))
    return requests, diags


def parse_log(
    source: TextIO | Iterable[str], fmt: str, topology: WebTopology
) -> Tuple[List[PageRequest], List[Diagnostic]]:
    """Parse ``source`` in format ``fmt`` ("csv" or "clf") against ``topology``.

    Returns accepted requests in log order and one diagnostic per skipped line.
    """
    if fmt == "csv":
        return _parse_csv(source, topology)
    if fmt == "clf":
        return _parse_clf(source, topology)
    raise LogFormatError(f"unsupported log format {fmt!r}; expected one of {FORMATS}")


def group_by_user(requests: Iterable[PageRequest]) -> List[UserRequestSequence]:
    """One sequence per user in first-appearance order, stably sorted by time."""
    buckets: Dict[str, List[PageRequest]] = {}
    for req in requests:
        buckets.setdefault(req.user, []).append(req)
    return [
        UserRequestSequence(user, sorted(reqs, key=lambda r: r.time))
        for user, reqs in buckets.items()
    ]


def write_csv_log(requests: Iterable[PageRequest], topology: WebTopology, out: TextIO) -> None:
    for req in requests:
        out.write(f"{req.user},{topology.urls[req.page]},{req.time}\n")
