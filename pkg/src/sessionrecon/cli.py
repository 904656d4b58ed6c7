"""Command-line entry point.

Subcommands::

    sessionrecon sessionize   --log LOG --topology TOPO --out FILE [--algorithm csra|time|nav]
    sessionrecon simulate     --out DIR [--seed N] [simulator knobs]
    sessionrecon evaluate     --log LOG --topology TOPO --truth TRUTH --out DIR
    sessionrecon oracle-check [--instances N] [--max-pages N] [--seed N]

Exit codes: 0 success, 1 validation failure or mismatch, 2 I/O or parse failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from .baselines import Method, reconstruct
from .errors import ContractViolation, TopologyParseError
from .log_ingest import FORMATS, PageRequest, group_by_user, parse_log, write_csv_log
from .mining_eval import evaluate, format_records, format_report
from .oracle import Solver, csra_solver, oracle_check
from .phase1 import DEFAULT_PAGE_STAY, DEFAULT_SESSION_CAP, Thresholds
from .simulator import GroundTruth, SimConfig, generate_topology, read_truth, simulate_logs, write_truth
from .topology import WebTopology, load_topology, save_topology

log = logging.getLogger("sessionrecon")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2

ALGORITHMS = {
    "csra": Method.CSRA,
    "time": Method.TIME_ORIENTED,
    "nav": Method.NAVIGATION_ORIENTED,
}

TOPOLOGY_FILE = "topology.txt"
LOG_FILE = "log.csv"
TRUTH_FILE = "truth.tsv"
REPORT_FILE = "report.txt"
RECORDS_FILE = "metrics.tsv"


class CliError(Exception):
    def __init__(self, message: str, code: int) -> None:
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    subcommand: str
    log: Optional[str] = None
    topology: Optional[str] = None
    truth: Optional[str] = None
    out: Optional[str] = None
    algorithm: str = "csra"
    page_stay_delta: int = DEFAULT_PAGE_STAY
    session_duration_cap: int = DEFAULT_SESSION_CAP
    min_support: int = 2
    seed: int = 0
    format: str = "csv"
    instances: int = 1000
    max_pages: int = 12
    sim: Optional[SimConfig] = None
    baselines: List[str] = field(default_factory=lambda: ["time", "nav"])

    @property
    def thresholds(self) -> Thresholds:
        try:
            return Thresholds(self.page_stay_delta, self.session_duration_cap)
        except ContractViolation as exc:
            raise CliError(str(exc), EXIT_INVALID) from exc


def _require(cfg: RunConfig, *names: str) -> None:
    for name in names:
        path = getattr(cfg, name)
        if path is None:
            raise CliError(f"--{name} is required for {cfg.subcommand}", EXIT_INVALID)
        if not os.path.isfile(path):
            raise CliError(f"{name} file not found: {path}", EXIT_IO)


def _load_topology(path: str) -> WebTopology:
    try:
        with open(path, encoding="utf-8") as fh:
            return load_topology(fh)
    except TopologyParseError as exc:
        raise CliError(f"{path}: {exc}", EXIT_IO) from exc
    except OSError as exc:
        raise CliError(str(exc), EXIT_IO) from exc


def _load_log(path: str, fmt: str, topology: WebTopology) -> List[PageRequest]:
    try:
        with open(path, encoding="utf-8") as fh:
            requests, diags = parse_log(fh, fmt, topology)
    except OSError as exc:
        raise CliError(str(exc), EXIT_IO) from exc
    for d in diags:
        print(d.format(), file=sys.stderr)
    return requests


def _write(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(str(exc), EXIT_IO) from exc


def cmd_sessionize(cfg: RunConfig) -> int:
    _require(cfg, "log", "topology")
    if cfg.out is None:
        raise CliError("--out is required", EXIT_INVALID)
    th = cfg.thresholds
    topology = _load_topology(cfg.topology)
    requests = _load_log(cfg.log, cfg.format, topology)
    method = ALGORITHMS[cfg.algorithm]
    rows = []
    for seq in group_by_user(requests):
        for s in reconstruct(seq, topology, th, method):
            rows.append((seq.user, tuple(topology.urls[p] for p in s.pages)))
    rows.sort()
    _write(cfg.out, "".join(f"{user}\t{','.join(urls)}\n" for user, urls in rows))
    log.info("wrote %d sessions to %s", len(rows), cfg.out)
    return EXIT_OK


def cmd_simulate(cfg: RunConfig) -> int:
    if cfg.out is None:
        raise CliError("--out is required", EXIT_INVALID)
    sim = cfg.sim or SimConfig(seed=cfg.seed)
    topology = generate_topology(sim)
    requests, truth = simulate_logs(sim)
    try:
        os.makedirs(cfg.out, exist_ok=True)
        with open(os.path.join(cfg.out, TOPOLOGY_FILE), "w", encoding="utf-8", newline="\n") as fh:
            save_topology(topology, fh)
        with open(os.path.join(cfg.out, LOG_FILE), "w", encoding="utf-8", newline="\n") as fh:
            write_csv_log(requests, topology, fh)
        with open(os.path.join(cfg.out, TRUTH_FILE), "w", encoding="utf-8", newline="\n") as fh:
            write_truth(truth, topology, fh)
    except OSError as exc:
        raise CliError(str(exc), EXIT_IO) from exc
    log.info("simulated %d requests, %d true paths", len(requests), len(truth))
    return EXIT_OK


def _check_pairing(requests: Sequence[PageRequest], truth: GroundTruth) -> None:
    seen = {}
    for r in requests:
        seen.setdefault(r.user, set()).add(r.page)
    for path in truth.paths:
        pages = seen.get(path.user)
        if pages is None:
            raise CliError(f"truth user {path.user} has no requests in the log", EXIT_INVALID)
        if not set(path.pages) <= pages:
            raise CliError(
                f"truth path of {path.user} session {path.session_index} not in the log",
                EXIT_INVALID,
            )


def cmd_evaluate(cfg: RunConfig) -> int:
    _require(cfg, "log", "topology", "truth")
    if cfg.out is None:
        raise CliError("--out is required", EXIT_INVALID)
    th = cfg.thresholds
    topology = _load_topology(cfg.topology)
    requests = _load_log(cfg.log, cfg.format, topology)
    try:
        with open(cfg.truth, encoding="utf-8") as fh:
            truth = read_truth(fh, topology)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_INVALID) from exc
    if not truth.paths:
        raise CliError("truth file is empty", EXIT_INVALID)
    _check_pairing(requests, truth)
    report = evaluate(
        requests, truth, topology, th, cfg.min_support,
        baselines=[ALGORITHMS[b] for b in cfg.baselines],
    )
    try:
        os.makedirs(cfg.out, exist_ok=True)
    except OSError as exc:
        raise CliError(str(exc), EXIT_IO) from exc
    _write(os.path.join(cfg.out, REPORT_FILE), format_report(report))
    _write(os.path.join(cfg.out, RECORDS_FILE), format_records(report))
    return EXIT_OK


def cmd_oracle_check(cfg: RunConfig, solver: Solver = csra_solver) -> int:
    if cfg.instances < 0 or cfg.max_pages < 1:
        raise CliError("--instances must be >= 0 and --max-pages >= 1", EXIT_INVALID)
    mismatches = oracle_check(cfg.instances, cfg.seed, cfg.max_pages, solver=solver)
    if mismatches:
        for m in mismatches:
            print(m.report())
        return EXIT_INVALID
    print(f"{cfg.instances} instances agree")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sessionrecon", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def thresholds(p: argparse.ArgumentParser) -> None:
        p.add_argument("--page-stay", type=int, default=DEFAULT_PAGE_STAY, dest="page_stay_delta",
                       help="max seconds between consecutive pages (default %(default)s)")
        p.add_argument("--session-cap", type=int, default=DEFAULT_SESSION_CAP,
                       dest="session_duration_cap",
                       help="max session duration in seconds (default %(default)s)")

    p = sub.add_parser("sessionize", help="reconstruct sessions from a log")
    p.add_argument("--log", required=True)
    p.add_argument("--topology", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--algorithm", choices=sorted(ALGORITHMS), default="csra")
    p.add_argument("--format", choices=FORMATS, default="csv")
    thresholds(p)

    d = SimConfig()
    p = sub.add_parser("simulate", help="generate a topology, log and ground truth")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pages", type=int, default=d.page_count)
    p.add_argument("--edges-per-page", type=float, default=d.edges_per_page)
    p.add_argument("--users", type=int, default=d.user_count)
    p.add_argument("--sessions", type=int, default=d.sessions_per_user)
    p.add_argument("--min-length", type=int, default=d.path_length[0])
    p.add_argument("--max-length", type=int, default=d.path_length[1])
    p.add_argument("--branch-prob", type=float, default=d.branch_probability)
    p.add_argument("--think-min", type=int, default=d.think_time[0])
    p.add_argument("--think-max", type=int, default=d.think_time[1])
    p.add_argument("--session-gap", type=int, default=d.inter_session_gap)
    thresholds(p)

    p = sub.add_parser("evaluate", help="compare reconstruction methods against ground truth")
    p.add_argument("--log", required=True)
    p.add_argument("--topology", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--format", choices=FORMATS, default="csv")
    p.add_argument("--min-support", type=int, default=2)
    p.add_argument("--baseline", action="append", choices=sorted(ALGORITHMS), dest="baselines",
                   help="method to compare csra against (repeatable; default time and nav)")
    thresholds(p)

    p = sub.add_parser("oracle-check", help="cross-check csra against brute force")
    p.add_argument("--instances", type=int, default=1000)
    p.add_argument("--max-pages", type=int, default=12)
    p.add_argument("--seed", type=int, default=0)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(subcommand=ns.subcommand)
    for name in ("log", "topology", "truth", "out", "algorithm", "page_stay_delta",
                 "session_duration_cap", "min_support", "seed", "format", "instances", "max_pages"):
        if hasattr(ns, name):
            setattr(cfg, name, getattr(ns, name))
    if getattr(ns, "baselines", None):
        cfg.baselines = ns.baselines
    if ns.subcommand == "simulate":
        try:
            cfg.sim = SimConfig(
                page_count=ns.pages,
                edges_per_page=ns.edges_per_page,
                user_count=ns.users,
                sessions_per_user=ns.sessions,
                path_length=(ns.min_length, ns.max_length),
                branch_probability=ns.branch_prob,
                think_time=(ns.think_min, ns.think_max),
                inter_session_gap=ns.session_gap,
                seed=ns.seed,
                page_stay_delta=ns.page_stay_delta,
                session_duration_cap=ns.session_duration_cap,
            )
        except ContractViolation as exc:
            raise CliError(str(exc), EXIT_INVALID) from exc
    return cfg


COMMANDS = {
    "sessionize": cmd_sessionize,
    "simulate": cmd_simulate,
    "evaluate": cmd_evaluate,
    "oracle-check": cmd_oracle_check,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if ns.verbose else logging.WARNING,
        format="%(levelname)s %(message)s",
    )
    try:
        cfg = config_from_args(ns)
        return COMMANDS[cfg.subcommand](cfg)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
