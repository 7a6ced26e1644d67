import pytest

from config_models import RunConfig


@pytest.fixture
def config(tmp_path):
    """Default configuration writing into a temporary directory, environment ignored."""
    return RunConfig.load(environ={}, overrides={"output_dir": str(tmp_path / "out")})


@pytest.fixture
def out_args(tmp_path):
    """Global flags keeping command-line runs inside the temporary directory."""
    return ["--output", "json", "--output-dir", str(tmp_path / "out")]
