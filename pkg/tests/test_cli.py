from __future__ import annotations

import subprocess
import sys

import pytest

from conftest import FIXTURES
from sessionrecon.cli import RunConfig, cmd_oracle_check, main
from sessionrecon.log_ingest import parse_log
from sessionrecon.topology import load_topology

TOPO = str(FIXTURES / "table1_topology.txt")
LOG = str(FIXTURES / "table1_log.csv")


def _sessionize(tmp_path, *extra, log=LOG, topo=TOPO):
    out = tmp_path / "sessions.tsv"
    code = main(["sessionize", "--log", log, "--topology", topo, "--out", str(out), *extra])
    return code, out


def test_sessionize_csra(tmp_path):
    code, out = _sessionize(tmp_path)
    assert code == 0
    assert out.read_text() == "u1\tP1,P13,P34\nu1\tP1,P20,P23\n"


def test_sessionize_time(tmp_path):
    code, out = _sessionize(tmp_path, "--algorithm", "time")
    assert code == 0
    assert out.read_text() == "u1\tP1,P20,P23,P13,P34\n"


def test_sessionize_nav(tmp_path):
    code, out = _sessionize(tmp_path, "--algorithm", "nav")
    assert out.read_text() == "u1\tP1,P20,P23,P20,P1,P13,P34\n"


def test_sessionize_empty_log(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    code, out = _sessionize(tmp_path, log=str(empty))
    assert code == 0 and out.read_text() == ""


def test_sessionize_diagnostics_on_stderr(tmp_path, capsys):
    log = tmp_path / "log.csv"
    log.write_text("u1,P1,0\nu1,/missing,5\nu1,P20,x\nu1,P20,10\n")
    code, out = _sessionize(tmp_path, log=str(log))
    assert code == 0
    assert out.read_text() == "u1\tP1,P20\n"
    err = capsys.readouterr().err.splitlines()
    assert err[0].startswith("2\tunknown url") and err[1].startswith("3\tbad timestamp")


def test_sessionize_clf(tmp_path):
    log = tmp_path / "access.log"
    lines = [
        f'1.2.3.4 - - [10/Oct/2000:13:55:{s:02d} +0000] "GET {u} HTTP/1.0" 200 10'
        for s, u in zip(range(0, 50, 10), ["P1", "P20", "P23", "P13", "P34"])
    ]
    log.write_text("\n".join(lines) + "\n")
    code, out = _sessionize(tmp_path, "--format", "clf", log=str(log))
    assert code == 0
    assert out.read_text() == "1.2.3.4\tP1,P13,P34\n1.2.3.4\tP1,P20,P23\n"


def test_sessionize_bad_topology(tmp_path):
    bad = tmp_path / "topo.txt"
    bad.write_text("A B C\n")
    code, _ = _sessionize(tmp_path, topo=str(bad))
    assert code == 2


def test_sessionize_missing_file(tmp_path):
    code, _ = _sessionize(tmp_path, log=str(tmp_path / "nope.csv"))
    assert code == 2


def test_sessionize_bad_thresholds(tmp_path):
    code, _ = _sessionize(tmp_path, "--page-stay", "0")
    assert code == 1
    code, _ = _sessionize(tmp_path, "--page-stay", "900", "--session-cap", "600")
    assert code == 1


def _simulate(out, *extra):
    return main(["simulate", "--out", str(out), *extra])


def test_simulate_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert _simulate(a, "--seed", "7", "--users", "8") == 0
    assert _simulate(b, "--seed", "7", "--users", "8") == 0
    for name in ("topology.txt", "log.csv", "truth.tsv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_simulate_zero_users(tmp_path):
    assert _simulate(tmp_path / "s", "--users", "0") == 0
    assert (tmp_path / "s" / "log.csv").read_text() == ""


def test_simulate_invalid_config(tmp_path):
    assert _simulate(tmp_path / "s", "--branch-prob", "2") == 1


def test_simulate_round_trip(tmp_path):
    out = tmp_path / "s"
    assert _simulate(out) == 0
    with open(out / "topology.txt") as fh:
        topo = load_topology(fh)
    with open(out / "log.csv") as fh:
        reqs, diags = parse_log(fh, "csv", topo)
    assert diags == [] and len(reqs) > 0


def _evaluate(sim, out, *extra, truth=None):
    return main([
        "evaluate", "--log", str(sim / "log.csv"), "--topology", str(sim / "topology.txt"),
        "--truth", str(truth or sim / "truth.tsv"), "--out", str(out), *extra,
    ])


def _report(path):
    return dict(line.split(" = ") for line in path.read_text().splitlines())


def test_evaluate_linear(tmp_path):
    sim = tmp_path / "sim"
    _simulate(sim, "--branch-prob", "0", "--users", "20", "--sessions", "5")
    assert _evaluate(sim, tmp_path / "ev") == 0
    assert _report(tmp_path / "ev" / "report.txt")["csra.session_recall"] == "1.000000"


def test_evaluate_self_comparison(tmp_path):
    sim = tmp_path / "sim"
    _simulate(sim, "--users", "10", "--sessions", "5")
    assert _evaluate(sim, tmp_path / "ev", "--baseline", "csra") == 0
    rep = _report(tmp_path / "ev" / "report.txt")
    gains = {k: v for k, v in rep.items() if k.startswith("csra_vs_csra")}
    assert gains and set(gains.values()) == {"0.000000"}


def test_evaluate_branching_has_all_methods(tmp_path):
    sim = tmp_path / "sim"
    _simulate(sim, "--users", "15", "--sessions", "8")
    assert _evaluate(sim, tmp_path / "ev") == 0
    rows = [line.split("\t") for line in (tmp_path / "ev" / "metrics.tsv").read_text().splitlines()]
    assert all(len(r) == 3 for r in rows)
    for method in ("csra", "time_oriented", "navigation_oriented"):
        for metric in ("session_recall", "session_precision", "next_page_accuracy"):
            assert [method, metric] in [r[:2] for r in rows]


def test_evaluate_mismatched_pair(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    _simulate(a, "--seed", "1", "--users", "5")
    _simulate(b, "--seed", "2", "--users", "5")
    assert _evaluate(a, tmp_path / "ev", truth=b / "truth.tsv") == 1


def test_evaluate_empty_truth(tmp_path):
    sim = tmp_path / "sim"
    _simulate(sim, "--users", "3")
    empty = tmp_path / "t.tsv"
    empty.write_text("")
    assert _evaluate(sim, tmp_path / "ev", truth=empty) == 1


def test_oracle_check_cli(capsys):
    assert main(["oracle-check", "--instances", "0"]) == 0
    assert main(["oracle-check", "--instances", "50", "--seed", "3"]) == 0


def test_oracle_check_reports_counterexample(capsys):
    def broken(session, topology, delta):
        return frozenset({session.pages})

    code = cmd_oracle_check(RunConfig("oracle-check", instances=100, seed=0), solver=broken)
    assert code == 1
    out = capsys.readouterr().out
    assert "edges:" in out and "session:" in out and "oracle:" in out and "csra:" in out


def test_module_entry_point(tmp_path):
    out = tmp_path / "s.tsv"
    proc = subprocess.run(
        [sys.executable, "-m", "sessionrecon", "sessionize", "--log", LOG, "--topology", TOPO,
         "--out", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert out.read_text().count("\n") == 2


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["sessionize", "--log", LOG])
    assert exc.value.code == 2
