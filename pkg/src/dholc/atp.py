"""External prover harness: spawn, enforce timeout, parse SZS verdicts.

The prover is configured purely by a command template containing
`{file}` and optionally `{timeout}`. Any THF-speaking system works; the
harness only reads `SZS status <S>` lines from the transcript and kills
the whole process group at timeout plus a small grace period.
"""

from __future__ import annotations

import os
import re
import shlex
import signal
import subprocess
import time
from dataclasses import dataclass

THEOREM = "theorem"
COUNTERSATISFIABLE = "countersatisfiable"
TIMEOUT = "timeout"
GAVE_UP = "gaveup"
PROCESS_ERROR = "process-error"

PROVER_ENV_VAR = "DHOLC_PROVER"

_SZS_RE = re.compile(r"SZS\s+status\s+([A-Za-z]+)")

_STATUS_MAP = {
    "Theorem": THEOREM,
    "Unsatisfiable": THEOREM,
    "CounterSatisfiable": COUNTERSATISFIABLE,
    "Satisfiable": COUNTERSATISFIABLE,
    "Timeout": TIMEOUT,
    "ResourceOut": TIMEOUT,
}

GRACE_SECONDS = 2.0


@dataclass(frozen=True)
class ProverVerdict:
    kind: str  # theorem | countersatisfiable | timeout | gaveup | process-error
    wall_time: float
    message: str = ""
    output: str = ""


def prove(problem_file: str, prover_command: str, timeout: float) -> ProverVerdict:
    """Run the prover on one problem file and classify its verdict."""
    if not os.path.exists(problem_file):
        return ProverVerdict(PROCESS_ERROR, 0.0, f"no such file: {problem_file}")
    cmd = prover_command.replace("{file}", problem_file).replace(
        "{timeout}", str(int(timeout))
    )
    argv = shlex.split(cmd)
    start = time.monotonic()
    try:
        proc = subprocess.Popen(
            argv,
            stdout=subprocess.PIPE,
            stderr=subprocess.STDOUT,
            text=True,
            start_new_session=True,
        )
    except OSError as e:
        return ProverVerdict(PROCESS_ERROR, 0.0, f"cannot spawn prover: {e}")
    try:
        out, _ = proc.communicate(timeout=timeout + GRACE_SECONDS)
    except subprocess.TimeoutExpired:
        _kill_group(proc)
        out_rest = proc.communicate()[0] or ""
        elapsed = time.monotonic() - start
        return ProverVerdict(TIMEOUT, elapsed, "killed at timeout", out_rest)
    elapsed = time.monotonic() - start
    out = out or ""
    m = _SZS_RE.search(out)
    if m is None:
        return ProverVerdict(
            PROCESS_ERROR, elapsed, "no SZS status line in prover output", out
        )
    status = m.group(1)
    return ProverVerdict(_STATUS_MAP.get(status, GAVE_UP), elapsed, status, out)


def _kill_group(proc: subprocess.Popen) -> None:
    try:
        os.killpg(os.getpgid(proc.pid), signal.SIGKILL)
    except (ProcessLookupError, PermissionError):
        try:
            proc.kill()
        except ProcessLookupError:
            pass
    try:
        proc.wait(timeout=5)
    except subprocess.TimeoutExpired:
        pass


def default_prover_command() -> str | None:
    return os.environ.get(PROVER_ENV_VAR) or None
