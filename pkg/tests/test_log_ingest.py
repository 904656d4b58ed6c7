from __future__ import annotations

import random
from datetime import datetime, timezone

import pytest

from sessionrecon.errors import ContractViolation, LogFormatError
from sessionrecon.log_ingest import PageRequest, group_by_user, parse_log
from sessionrecon.topology import topology_from_text

TOPO = topology_from_text("/a /b\n/b /c\n")
A, B, C = (TOPO.page_id(u) for u in ("/a", "/b", "/c"))


def test_csv_row():
    reqs, diags = parse_log(["u1,/a,100\n"], "csv", TOPO)
    assert reqs == [PageRequest("u1", A, 100)]
    assert diags == []


def test_csv_unknown_url_is_diagnosed():
    reqs, diags = parse_log(["u1,/nope,100"], "csv", TOPO)
    assert reqs == []
    assert len(diags) == 1
    assert diags[0].line == 1
    assert "unknown url" in diags[0].reason


@pytest.mark.parametrize(
    "row, reason",
    [("u1,/a,abc", "bad timestamp"), ("u1,/a,-5", "bad timestamp"), ("u1,/a", "expected 3 fields")],
)
def test_csv_bad_rows(row, reason):
    reqs, diags = parse_log(["u0,/b,1", row, "u2,/c,3"], "csv", TOPO)
    assert [r.user for r in reqs] == ["u0", "u2"]
    assert diags[0].line == 2
    assert reason in diags[0].reason
    assert diags[0].format().startswith("2\t")


def _clf(host, method, url, status, when="10/Oct/2000:13:55:36 +0000"):
    return f'{host} - frank [{when}] "{method} {url} HTTP/1.0" {status} 2326'


def test_clf_get():
    reqs, diags = parse_log([_clf("10.0.0.1", "GET", "/b", 200)], "clf", TOPO)
    expected = int(datetime(2000, 10, 10, 13, 55, 36, tzinfo=timezone.utc).timestamp())
    assert reqs == [PageRequest("10.0.0.1", B, expected)]
    assert diags == []


def test_clf_timezone_offset():
    reqs, _ = parse_log([_clf("h", "GET", "/a", 200, "10/Oct/2000:13:55:36 -0700")], "clf", TOPO)
    assert reqs[0].time == int(datetime(2000, 10, 10, 20, 55, 36, tzinfo=timezone.utc).timestamp())


@pytest.mark.parametrize(
    "line, reason",
    [
        (_clf("h", "POST", "/a", 200), "method POST"),
        (_clf("h", "GET", "/a", 404), "status 404"),
        (_clf("h", "GET", "/a", 500), "status 500"),
        (_clf("h", "GET", "/zzz", 200), "unknown url"),
        ("garbage line", "not a CLF line"),
    ],
)
def test_clf_skips(line, reason):
    reqs, diags = parse_log([line], "clf", TOPO)
    assert reqs == []
    assert reason in diags[0].reason


def test_clf_redirect_counts():
    reqs, _ = parse_log([_clf("h", "GET", "/a", 304)], "clf", TOPO)
    assert len(reqs) == 1


def test_unknown_format():
    with pytest.raises(LogFormatError):
        parse_log([], "json", TOPO)


def test_negative_time_rejected():
    with pytest.raises(ContractViolation):
        PageRequest("u", A, -1)


def test_parse_is_deterministic():
    lines = ["u1,/a,5", "u2,/b,3", "bad", "u1,/c,9"]
    assert parse_log(lines, "csv", TOPO) == parse_log(list(lines), "csv", TOPO)


def test_group_small():
    seqs = group_by_user([PageRequest("u1", A, 1), PageRequest("u2", B, 2), PageRequest("u1", C, 3)])
    assert [s.user for s in seqs] == ["u1", "u2"]
    assert [(r.page, r.time) for r in seqs[0].requests] == [(A, 1), (C, 3)]
    assert [(r.page, r.time) for r in seqs[1].requests] == [(B, 2)]


def test_group_empty():
    assert group_by_user([]) == []


def test_group_stable_ties():
    seqs = group_by_user([PageRequest("u", B, 5), PageRequest("u", A, 5), PageRequest("u", C, 1)])
    assert [r.page for r in seqs[0].requests] == [C, B, A]


def _sort_then_scan(records):
    """Reference grouping: decorate, one global sort, then split runs."""
    first_seen = {}
    for r in records:
        first_seen.setdefault(r.user, len(first_seen))
    decorated = sorted(
        (first_seen[r.user], r.time, i, r) for i, r in enumerate(records)
    )
    out = []
    for rank, _, _, r in decorated:
        if not out or out[-1][0] != rank:
            out.append((rank, []))
        out[-1][1].append(r)
    return [(rs[0].user, rs) for _, rs in out]


def test_group_matches_sort_then_scan():
    rnd = random.Random(1234)
    records = [
        PageRequest(f"user{rnd.randrange(10)}", rnd.choice([A, B, C]), rnd.randrange(0, 500))
        for _ in range(1000)
    ]
    rnd.shuffle(records)
    seqs = group_by_user(records)
    assert len(seqs) == 10
    assert sum(len(s) for s in seqs) == 1000
    assert all(s.is_time_sorted() for s in seqs)
    assert [(s.user, s.requests) for s in seqs] == _sort_then_scan(records)
