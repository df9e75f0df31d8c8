"""``refmon`` command line.

Exit codes: 0 conformant, 1 policy findings (or violations), 2 input errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Callable, TextIO

from .config import ConfigError, Configuration, Mode, build_representations, load_config, validate
from .domain import DomainError, Verdict, l3, parse_port, render_actions, render_event
from .monitor import MonitorState
from .observer import UnspecifiedEventError, check_invariants, enumerate_verdicts, follow, trace
from .relations import sorted_values

EXIT_OK, EXIT_FINDINGS, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _load(opts) -> Configuration:
    try:
        return load_config(opts.config)
    except OSError as exc:
        raise InputError(f"cannot read config: {exc}") from exc
    except ConfigError as exc:
        raise InputError(f"invalid config {opts.config}:\n{exc}") from exc


def _load_checked(opts):
    cfg = _load(opts)
    report = validate(cfg, opts.mode)
    if not report.ok:
        lines = "\n".join(v.line() for v in report.violations)
        raise InputError(f"config {opts.config} fails {report.mode.value} validation:\n{lines}")
    return cfg, build_representations(cfg)


def _read_events(opts, err: TextIO) -> tuple[list, int]:
    """Parsed level-3 events and the count of malformed lines."""
    source = opts.events or "-"
    try:
        if source == "-":
            lines = sys.stdin.read().splitlines()
        else:
            lines = Path(source).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise InputError(f"cannot read events: {exc}") from exc
    events, bad = [], 0
    for lineno, raw in enumerate(lines, start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        try:
            events.append(_parse_event(text.split()))
        except DomainError as exc:
            bad += 1
            print(f"{source}:{lineno}: {exc}", file=err)
    return events, bad


def _parse_event(tokens: list[str]):
    if len(tokens) != 3:
        raise DomainError(f"expected '<src> <dst> <port>', got {' '.join(tokens)!r}")
    src, dst, port = tokens
    return l3(src, dst, parse_port(port))


def _write_journal(path: str | None, events) -> None:
    if path:
        Path(path).write_text("".join(render_event(e, 3) + "\n" for e in sorted_values(events)), encoding="utf-8")


def cmd_validate(opts, out: TextIO, err: TextIO) -> int:
    report = validate(_load(opts), opts.mode)
    for line in report.lines():
        print(line, file=out)
    return EXIT_OK if report.ok else EXIT_FINDINGS


def cmd_classify(opts, out: TextIO, err: TextIO) -> int:
    cfg, reps = _load_checked(opts)
    events, bad = _read_events(opts, err)
    state = MonitorState(reps, cfg.policy)
    counts = {v: 0 for v in Verdict}
    for event in events:
        record = state.observe(event)
        counts[record.verdict] += 1
        print(f"{record.verdict.value}\t{render_event(event, 3)}\t{render_actions(record.actions)}", file=out)
    print(
        f"pass={counts[Verdict.PASS]} fail={counts[Verdict.FAIL]}"
        f" conflict={counts[Verdict.CONFLICT]} unspecified={counts[Verdict.UNSPECIFIED]}",
        file=out,
    )
    _write_journal(opts.fail_out, state.fail[3])
    _write_journal(opts.conflict_out, state.conflict[3])
    if bad:
        return EXIT_INPUT
    return EXIT_FINDINGS if counts[Verdict.FAIL] or counts[Verdict.CONFLICT] else EXIT_OK


def cmd_trace(opts, out: TextIO, err: TextIO) -> int:
    cfg, reps = _load_checked(opts)
    try:
        event = _parse_event(opts.event)
    except DomainError as exc:
        raise InputError(str(exc)) from exc
    try:
        record = trace(reps, cfg.policy, event)
    except UnspecifiedEventError as exc:
        print(str(exc), file=err)
        return EXIT_FINDINGS
    for line in record.lines():
        print(line, file=out)
    return EXIT_OK


def cmd_table(opts, out: TextIO, err: TextIO) -> int:
    cfg, reps = _load_checked(opts)
    for event, verdict in enumerate_verdicts(reps, cfg.policy, cfg.known, opts.level, opts.mode):
        print(f"{render_event(event, opts.level)}\t{verdict.value}", file=out)
    return EXIT_OK


def cmd_check(
    opts,
    out: TextIO,
    err: TextIO,
    hook: Callable[[MonitorState], None] | None = None,
) -> int:
    """Replay the event log, then report every violated invariant.

    ``hook`` runs on the state between replay and checking; tests use it
    to inject corrupted journals.
    """
    cfg, reps = _load_checked(opts)
    events, bad = ([], 0) if opts.events is None else _read_events(opts, err)
    state = MonitorState(reps, cfg.policy)
    for event in events:
        follow(state, event)
    if hook is not None:
        hook(state)
    violations = check_invariants(state, reps, cfg.policy)
    for v in violations:
        print(v.line(), file=out)
    if bad:
        return EXIT_INPUT
    return EXIT_FINDINGS if violations else EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "classify": cmd_classify,
    "trace": cmd_trace,
    "table": cmd_table,
    "check": cmd_check,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="refmon",
        description="Check network events against a user/service access policy.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="configuration file")
        p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.RELAXED.value)
        if name in ("classify", "check"):
            p.add_argument("--events", help="event log path, or - for stdin")
        if name == "classify":
            p.add_argument("--fail-out", help="file receiving the FAIL journal")
            p.add_argument("--conflict-out", help="file receiving the CONFLICT journal")
        if name == "table":
            p.add_argument("--level", type=int, choices=range(4), default=3)
        if name == "trace":
            p.add_argument("event", nargs=3, metavar=("SRC", "DST", "PORT"))
    return parser


def main(argv: list[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    opts = build_parser().parse_args(argv)
    try:
        return COMMANDS[opts.command](opts, out, err)
    except InputError as exc:
        print(f"refmon: {exc}", file=err)
        return EXIT_INPUT


def run() -> None:
    sys.exit(main())
