# Copyright 2026 gaussian-moments contributors
# See LICENSE file for licensing details.

import logging
import os
import shutil
import sys
from pathlib import Path

from pytest import fixture

logger = logging.getLogger("conftest")


@fixture(scope="module")
def gaussian_moments():
    """Command prefix running the command-line tool under test."""
    if command := os.getenv("GAUSSIAN_MOMENTS_BIN"):
        logger.info("using gaussian-moments from env")
        return [command]
    if command := shutil.which("gaussian-moments"):
        logger.info(f"using installed gaussian-moments at {command}")
        return [command]
    logger.info("running src/cli.py from ./")
    return [sys.executable, str(Path("src") / "cli.py")]


@fixture
def out_dir(tmp_path):
    return tmp_path / "out"
