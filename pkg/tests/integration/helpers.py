# Copyright 2026 gaussian-moments contributors
# See LICENSE file for licensing details.
import json
import logging
import os
import subprocess
from typing import List, Sequence, Tuple

logger = logging.getLogger("helpers")

TIMEOUT = 1800


def run_cli(command: Sequence[str], args: Sequence[str], out_dir) -> Tuple[int, str, str]:
    """Run the tool with its outputs under ``out_dir``; return status, stdout and stderr."""
    env = {k: v for k, v in os.environ.items() if not k.startswith("GAUSSIAN_MOMENTS_")}
    argv = [*command, "--output-dir", str(out_dir), *args]
    logger.info(f"running {' '.join(argv)}")
    proc = subprocess.run(argv, capture_output=True, text=True, env=env, timeout=TIMEOUT)
    return proc.returncode, proc.stdout, proc.stderr


def run_json(command: Sequence[str], args: Sequence[str], out_dir):
    status, out, err = run_cli(command, ["--output", "json", *args], out_dir)
    assert status == 0, err
    return json.loads(out)


def result_lines(stdout: str) -> List[str]:
    return [line for line in stdout.splitlines() if line.startswith(("PASS", "FAIL"))]
