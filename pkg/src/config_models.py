# Copyright 2026 gaussian-moments contributors
# See LICENSE file for licensing details.

"""Pydantic model for the run configuration of the command-line tools.

Values come from, in increasing priority: the model defaults, an optional YAML file,
``GAUSSIAN_MOMENTS_*`` environment variables and command-line flags.
"""

import contextlib
import logging
import os
import typing

import mpmath
import yaml
from pydantic import BaseModel, Field, field_validator

logger = logging.getLogger(__name__)

ENV_PREFIX = "GAUSSIAN_MOMENTS_"
SUBCOMMANDS = (
    "symbol",
    "gauss",
    "lvalue",
    "zeta",
    "mainterm",
    "moment",
    "ratios",
    "mds",
    "verify",
    "report",
    "factor",
    "character",
)
OUTPUT_FORMATS = ("json", "csv", "text")
WEIGHTS = ("exp_decay", "exp_both", "bump")
PROFILES = ("quick", "acceptance")


def parse_complex(value: typing.Any) -> complex:
    """Accept numbers and strings such as ``0.25``, ``0.1+0.2j`` or ``0.1+0.2i``."""
    if isinstance(value, (int, float, complex)):
        return complex(value)
    if isinstance(value, str):
        text = value.strip().replace(" ", "").replace("i", "j")
        try:
            return complex(text)
        except ValueError:
            raise ValueError(f"Invalid complex number: {value!r}") from None
    raise ValueError(f"Invalid complex number: {value!r}")


class RunConfig(BaseModel):
    """Configuration shared by every subcommand."""

    subcommand: typing.Optional[str] = Field(None, description="Subcommand being run")
    precision_digits: int = Field(
        15,
        alias="precision-digits",
        description="Decimal digits of mpmath working precision",
    )
    threads: int = Field(1, description="Worker processes for family sums")
    seed: int = Field(20260101, description="Seed of every randomised property choice")
    output_format: str = Field("text", alias="output-format", description="json, csv or text")
    output_dir: str = Field(
        "gaussian-moments-out",
        alias="output-dir",
        description="Directory receiving reports and the run manifest",
    )
    log_level: str = Field("INFO", alias="log-level")
    max_norm: int = Field(10**6, alias="max-norm", description="Cap on element norms")
    max_x: float = Field(10**4, alias="max-x", description="Cap on the family size X")
    force: bool = Field(False, description="Run beyond the X cap")
    alpha: complex = Field(complex(0.1), description="Shift in the numerator L-value")
    beta: complex = Field(complex(0.3), description="Shift in the denominator L-value")
    weight: str = Field("exp_both", description="Weight function id")
    x_grid: typing.List[float] = Field(
        [1000.0, 2000.0, 4000.0, 8000.0], alias="x-grid", description="X values of a report"
    )
    fit_bound: float = Field(
        0.75, alias="fit-bound", description="Largest accepted fitted residual exponent"
    )
    drop_even_prime: bool = Field(False, alias="drop-even-prime")
    first_moment_variant: str = Field("consistent", alias="first-moment-variant")
    profile: str = Field("quick", description="Size profile of the verification suites")

    model_config = {"populate_by_name": True, "arbitrary_types_allowed": True}

    @field_validator("subcommand")
    @classmethod
    def validate_subcommand(cls, v: typing.Optional[str]) -> typing.Optional[str]:
        """Check the subcommand name."""
        if v is not None and v not in SUBCOMMANDS:
            raise ValueError(f"Invalid subcommand: {v}. Must be one of {', '.join(SUBCOMMANDS)}")
        return v

    @field_validator("precision_digits")
    @classmethod
    def validate_precision(cls, v: int) -> int:
        """Require at least double precision."""
        if v < 15:
            raise ValueError(f"precision-digits must be at least 15, got {v}")
        return v

    @field_validator("threads")
    @classmethod
    def validate_threads(cls, v: int) -> int:
        """Require a positive thread count."""
        if v < 1:
            raise ValueError(f"threads must be at least 1, got {v}")
        return v

    @field_validator("seed")
    @classmethod
    def validate_seed(cls, v: int) -> int:
        """Require a 64-bit unsigned seed."""
        if not 0 <= v < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {v}")
        return v

    @field_validator("output_format")
    @classmethod
    def validate_output_format(cls, v: str) -> str:
        """Check the output format."""
        if v not in OUTPUT_FORMATS:
            raise ValueError(f"Invalid output format: {v}. Must be json, csv or text")
        return v

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Check and upper-case the log level."""
        level = v.upper()
        if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"Invalid log level: {v}")
        return level

    @field_validator("max_norm", "max_x", "fit_bound")
    @classmethod
    def validate_positive(cls, v: float) -> float:
        """Require positive caps and bounds."""
        if v <= 0:
            raise ValueError(f"caps and bounds must be positive, got {v}")
        return v

    @field_validator("alpha", "beta", mode="before")
    @classmethod
    def validate_shift(cls, v: typing.Any) -> complex:
        """Parse a shift from a number or a string such as 0.1+0.2i."""
        return parse_complex(v)

    @field_validator("weight")
    @classmethod
    def validate_weight(cls, v: str) -> str:
        """Check the weight id."""
        if v not in WEIGHTS:
            raise ValueError(f"Invalid weight: {v}. Must be one of {', '.join(WEIGHTS)}")
        return v

    @field_validator("x_grid", mode="before")
    @classmethod
    def validate_x_grid(cls, v: typing.Any) -> typing.List[float]:
        """Parse a comma-separated or list grid; values must be positive and increasing."""
        if isinstance(v, str):
            v = [item for item in v.split(",") if item.strip()]
        grid = [float(x) for x in v]
        if not grid:
            raise ValueError("x-grid cannot be empty")
        if any(x <= 0 for x in grid):
            raise ValueError(f"x-grid values must be positive: {grid}")
        if sorted(grid) != grid:
            raise ValueError(f"x-grid must be increasing: {grid}")
        return grid

    @field_validator("first_moment_variant")
    @classmethod
    def validate_variant(cls, v: str) -> str:
        """Check the first-moment variant."""
        if v not in ("consistent", "printed"):
            raise ValueError(f"Invalid first-moment variant: {v}. Must be consistent or printed")
        return v

    @field_validator("profile")
    @classmethod
    def validate_profile(cls, v: str) -> str:
        """Check the profile name."""
        if v not in PROFILES:
            raise ValueError(f"Invalid profile: {v}. Must be quick or acceptance")
        return v

    @classmethod
    def load(
        cls,
        config_file: typing.Optional[str] = None,
        environ: typing.Optional[typing.Mapping[str, str]] = None,
        overrides: typing.Optional[typing.Dict[str, typing.Any]] = None,
    ) -> "RunConfig":
        """Merge defaults, the YAML file, the environment and explicit overrides."""
        values: typing.Dict[str, typing.Any] = {}
        if config_file:
            with open(config_file) as f:
                loaded = yaml.safe_load(f) or {}
            if not isinstance(loaded, dict):
                raise ValueError(f"{config_file} must hold a mapping, got {type(loaded).__name__}")
            values.update({key.replace("-", "_"): value for key, value in loaded.items()})
            logger.debug(f"loaded configuration from {config_file}")
        environ = os.environ if environ is None else environ
        for name in cls.model_fields:
            key = ENV_PREFIX + name.upper()
            if key in environ:
                values[name] = environ[key]
        values.update({k: v for k, v in (overrides or {}).items() if v is not None})
        return cls.model_validate(values)

    def to_yaml(self) -> str:
        """The resolved configuration as YAML, shifts written as strings."""
        data = self.model_dump(by_alias=True)
        data["alpha"] = str(self.alpha)
        data["beta"] = str(self.beta)
        return yaml.safe_dump(data, default_flow_style=False, sort_keys=True)


@contextlib.contextmanager
def working_precision(digits: int) -> typing.Iterator[None]:
    """Set mpmath's decimal precision for the duration of a block."""
    previous = mpmath.mp.dps
    mpmath.mp.dps = digits
    try:
        yield
    finally:
        mpmath.mp.dps = previous
