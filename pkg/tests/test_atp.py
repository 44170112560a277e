import os
import stat
import subprocess
import time

import pytest

from dholc.atp import (
    GAVE_UP, PROCESS_ERROR, THEOREM, TIMEOUT, COUNTERSATISFIABLE,
    ProverVerdict, default_prover_command, prove,
)


def make_stub(tmp_path, name: str, script: str) -> str:
    path = tmp_path / name
    path.write_text("#!/bin/sh\n" + script)
    path.chmod(path.stat().st_mode | stat.S_IEXEC)
    return str(path)


def make_problem(tmp_path) -> str:
    p = tmp_path / "problem.p"
    p.write_text("thf(c, conjecture, $true).\n")
    return str(p)


def test_theorem_verdict(tmp_path):
    stub = make_stub(tmp_path, "prover", 'echo "% SZS status Theorem for $1"\n')
    v = prove(make_problem(tmp_path), stub + " {file}", 5)
    assert v.kind == THEOREM


def test_unsatisfiable_maps_to_theorem(tmp_path):
    stub = make_stub(tmp_path, "prover", 'echo "% SZS status Unsatisfiable"\n')
    v = prove(make_problem(tmp_path), stub + " {file}", 5)
    assert v.kind == THEOREM


def test_countersatisfiable(tmp_path):
    stub = make_stub(tmp_path, "prover", 'echo "% SZS status CounterSatisfiable"\n')
    v = prove(make_problem(tmp_path), stub + " {file}", 5)
    assert v.kind == COUNTERSATISFIABLE


def test_gaveup_on_unknown_status(tmp_path):
    stub = make_stub(tmp_path, "prover", 'echo "% SZS status GaveUp"\n')
    v = prove(make_problem(tmp_path), stub + " {file}", 5)
    assert v.kind == GAVE_UP


def test_verdict_robust_to_chatter(tmp_path):
    script = (
        'echo "reading problem..."\n'
        'echo "# some SZS-unrelated banter"\n'
        'echo "% SZS status Theorem for $1"\n'
        'echo "% SZS output start Proof"\n'
        'echo "% SZS output end Proof"\n'
    )
    stub = make_stub(tmp_path, "prover", script)
    v = prove(make_problem(tmp_path), stub + " {file}", 5)
    assert v.kind == THEOREM
    assert "banter" in v.output


def test_missing_szs_line_is_process_error(tmp_path):
    stub = make_stub(tmp_path, "prover", 'echo "segfault imminent"\n')
    v = prove(make_problem(tmp_path), stub + " {file}", 5)
    assert v.kind == PROCESS_ERROR


def test_spawn_failure(tmp_path):
    v = prove(make_problem(tmp_path), "/nonexistent/prover {file}", 5)
    assert v.kind == PROCESS_ERROR


def test_missing_file(tmp_path):
    v = prove(str(tmp_path / "nope.p"), "echo {file}", 5)
    assert v.kind == PROCESS_ERROR


def test_timeout_placeholder_passed(tmp_path):
    stub = make_stub(
        tmp_path, "prover", 'echo "got timeout $2"\necho "% SZS status Timeout"\n'
    )
    v = prove(make_problem(tmp_path), stub + " {file} {timeout}", 7)
    assert v.kind == TIMEOUT
    assert "got timeout 7" in v.output


def _procs_mentioning(psutil, marker: str):
    out = []
    for p in psutil.process_iter(["cmdline"]):
        try:
            if p.info["cmdline"] and any(marker in arg for arg in p.info["cmdline"]):
                out.append(p)
        except (psutil.NoSuchProcess, psutil.AccessDenied):
            pass
    return out


def test_timeout_kills_and_reaps(tmp_path):
    psutil = pytest.importorskip("psutil")
    # the stub (and its sleeping child) keep the stub path in their
    # process-group cmdlines; both must be gone after the kill
    stub = make_stub(tmp_path, "prover-marker-timeout", "sleep 60\nsleep 60\n")
    start = time.monotonic()
    v = prove(make_problem(tmp_path), stub + " {file}", 0.3)
    elapsed = time.monotonic() - start
    assert v.kind == TIMEOUT
    assert elapsed < 10
    deadline = time.monotonic() + 5
    alive = [None]
    while time.monotonic() < deadline:
        alive = _procs_mentioning(psutil, "prover-marker-timeout")
        if not alive:
            break
        time.sleep(0.1)
    assert not alive


def test_no_orphans_after_normal_exit(tmp_path):
    psutil = pytest.importorskip("psutil")
    stub = make_stub(
        tmp_path, "prover-marker-clean", 'echo "% SZS status Theorem"\n'
    )
    v = prove(make_problem(tmp_path), stub + " {file}", 5)
    assert v.kind == THEOREM
    time.sleep(0.2)
    assert not _procs_mentioning(psutil, "prover-marker-clean")


def test_default_prover_command(monkeypatch):
    monkeypatch.delenv("DHOLC_PROVER", raising=False)
    assert default_prover_command() is None
    monkeypatch.setenv("DHOLC_PROVER", "eprover --auto {file}")
    assert default_prover_command() == "eprover --auto {file}"
