import io
import subprocess
import sys

import pytest

from refmon.cli import cmd_check, build_parser, main
from refmon.config import build_representations, render_config
from refmon.monitor import MonitorState
from refmon.generate import random_events, strict_config
from refmon.domain import render_event
from refmon.relations import sorted_values


def run(argv, stdin=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main([str(a) for a in argv], out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_validate_relaxed(f1_path):
    code, out, _ = run(["validate", "--config", f1_path, "--mode", "relaxed"])
    assert code == 0
    assert out.splitlines()[0] == "mode=relaxed violations=0"


def test_validate_strict(f1_path):
    code, out, _ = run(["validate", "--config", f1_path, "--mode", "strict"])
    assert code == 1
    assert any(line.startswith("COVER-DOM\t2\t") for line in out.splitlines())


def test_validate_missing_file(tmp_path):
    code, _, err = run(["validate", "--config", tmp_path / "nope.conf"])
    assert code == 2 and "cannot read config" in err


def test_validate_unparsable(tmp_path):
    bad = tmp_path / "bad.conf"
    bad.write_text("user\n")
    code, _, err = run(["validate", "--config", bad])
    assert code == 2 and "line 1" in err


def test_classify_paper_log(f1_path, events_path, tmp_path):
    fail_out, conflict_out = tmp_path / "fail.txt", tmp_path / "conflict.txt"
    code, out, _ = run([
        "classify", "--config", f1_path, "--events", events_path,
        "--fail-out", fail_out, "--conflict-out", conflict_out,
    ])
    assert code == 1
    assert out.splitlines() == [
        "CONFLICT\t10.0.0.1>10.0.0.2:80\talice->intranet,james->intranet",
        "PASS\t10.0.0.1>10.0.0.2:993\talice->mail,james->mail",
        "UNSPECIFIED\t10.0.0.1>10.0.0.3:80\t-",
        "pass=1 fail=0 conflict=1 unspecified=1",
    ]
    assert fail_out.read_text() == ""
    assert conflict_out.read_text() == "10.0.0.1>10.0.0.2:80\n"


def test_classify_empty_log(f1_path, monkeypatch):
    code, out, _ = run(["classify", "--config", f1_path, "--events", "-"], stdin="", monkeypatch=monkeypatch)
    assert code == 0
    assert out == "pass=0 fail=0 conflict=0 unspecified=0\n"


def test_classify_f2_fail_file(f2_path, tmp_path, monkeypatch):
    fail_out = tmp_path / "fail.txt"
    code, out, _ = run(
        ["classify", "--config", f2_path, "--fail-out", fail_out],
        stdin="10.0.0.1 10.0.0.2 80\n", monkeypatch=monkeypatch,
    )
    assert code == 1
    assert out.splitlines()[0] == "FAIL\t10.0.0.1>10.0.0.2:80\talice->intranet"
    assert fail_out.read_text() == "10.0.0.1>10.0.0.2:80\n"


def test_classify_malformed_lines_continue(f1_path, monkeypatch):
    log = "10.0.0.1 10.0.0.2 993\nnot an event\n10.0.0.1 10.0.0.2 99999\n10.0.0.1 10.0.0.2 993\n"
    code, out, err = run(["classify", "--config", f1_path], stdin=log, monkeypatch=monkeypatch)
    assert code == 2
    assert out.splitlines()[-1] == "pass=2 fail=0 conflict=0 unspecified=0"
    assert "-:2:" in err and "-:3:" in err


def test_summary_counts_match_lines(f1_path, tmp_path):
    log = tmp_path / "log"
    log.write_text("10.0.0.1 10.0.0.2 80\n" * 3 + "10.0.0.2 10.0.0.1 80\n" + "10.0.0.1 10.0.0.2 993\n")
    code, out, _ = run(["classify", "--config", f1_path, "--events", log])
    lines = out.splitlines()
    counts = {k: sum(line.startswith(k + "\t") for line in lines[:-1]) for k in ("PASS", "FAIL", "CONFLICT", "UNSPECIFIED")}
    assert lines[-1] == "pass={PASS} fail={FAIL} conflict={CONFLICT} unspecified={UNSPECIFIED}".format(**counts)


def test_strict_mode_rejects_incomplete_config(f1_path, events_path):
    code, _, err = run(["classify", "--config", f1_path, "--mode", "strict", "--events", events_path])
    assert code == 2 and "strict validation" in err


@pytest.mark.parametrize(
    "conf, event, code, statuses",
    [
        ("f1.conf", ["10.0.0.1", "10.0.0.2", "993"], 0, ["PASS"] * 4),
        ("f2.conf", ["10.0.0.1", "10.0.0.2", "80"], 0, ["FAIL"] * 4),
        ("f1.conf", ["10.0.0.1", "10.0.0.3", "80"], 1, []),
    ],
)
def test_trace(conf, event, code, statuses, f1_path):
    got, out, err = run(["trace", "--config", f1_path.parent / conf, *event])
    assert got == code
    assert [line.split("\t")[2] for line in out.splitlines()] == statuses
    if code:
        assert "outside monitored sub-network" in err
    else:
        assert [line.split("\t")[0] for line in out.splitlines()] == ["L3", "L2", "L1", "L0"]


def test_trace_bad_address(f1_path):
    code, _, _ = run(["trace", "--config", f1_path, "10.0.0.1", "10.0.0.x", "80"])
    assert code == 2


def test_table(f1_path, tmp_path):
    code, out, _ = run(["table", "--config", f1_path, "--level", "0"])
    assert code == 0
    assert out.splitlines() == [
        "alice->intranet\tFAIL", "alice->mail\tPASS", "james->intranet\tPASS", "james->mail\tPASS",
    ]
    code, out, _ = run(["table", "--config", f1_path, "--level", "3", "--mode", "relaxed"])
    assert out.splitlines() == ["10.0.0.1>10.0.0.2:80\tCONFLICT", "10.0.0.1>10.0.0.2:993\tPASS"]
    empty = tmp_path / "empty.conf"
    empty.write_text("")
    assert run(["table", "--config", empty]) == (0, "", "")


def test_check_paper_log(f1_path, events_path):
    assert run(["check", "--config", f1_path, "--events", events_path]) == (0, "", "")


@pytest.mark.parametrize("seed", range(5))
def test_check_random_strict_config(seed, tmp_path):
    cfg = strict_config(seed)
    conf, log = tmp_path / "c.conf", tmp_path / "e.log"
    conf.write_text(render_config(cfg))
    log.write_text("".join(render_event(e, 3).replace(">", " ").replace(":", " ") + "\n"
                           for e in random_events(seed, cfg, 50)))
    code, out, _ = run(["check", "--config", conf, "--mode", "strict", "--events", log])
    assert (code, out) == (0, "")


def test_check_with_corrupted_journal(f1_path, events_path):
    opts = build_parser().parse_args(["check", "--config", str(f1_path), "--events", str(events_path)])

    def corrupt(state):
        event = next(iter(state.conflict[3]))
        state.fail[3].add(event)

    out = io.StringIO()
    assert cmd_check(opts, out, io.StringIO(), hook=corrupt) == 1
    assert "J-DISJOINT\t3\t" in out.getvalue()


def test_persisted_journals_match_state(tmp_path):
    cfg = strict_config(3)
    conf = tmp_path / "c.conf"
    conf.write_text(render_config(cfg))
    events = random_events(3, cfg, 50)
    log = tmp_path / "e.log"
    log.write_text("".join(render_event(e, 3).replace(">", " ").replace(":", " ") + "\n" for e in events))
    fail_out, conflict_out = tmp_path / "fail.txt", tmp_path / "conflict.txt"
    run(["classify", "--config", conf, "--events", log, "--fail-out", fail_out, "--conflict-out", conflict_out])

    state = MonitorState(build_representations(cfg), cfg.policy)
    for event in events:
        state.observe(event)
    for path, journal in ((fail_out, state.fail[3]), (conflict_out, state.conflict[3])):
        assert path.read_text().splitlines() == [render_event(e, 3) for e in sorted_values(journal)]
    assert conflict_out.read_text()


def test_module_entry_point(f1_path, events_path):
    proc = subprocess.run(
        [sys.executable, "-m", "refmon", "classify", "--config", str(f1_path), "--events", str(events_path)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 1
    assert proc.stdout.splitlines()[-1] == "pass=1 fail=0 conflict=1 unspecified=1"
