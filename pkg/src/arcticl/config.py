"""Global configuration for arcticl."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Any


class ArcticError(Exception):
    """Base class for every error raised by arcticl."""


class ConfigError(ArcticError):
    """Raised when configuration or command-line input is inconsistent."""


def _default_output_dir() -> Path:
    return Path(os.environ.get("ARCTICL_HOME", Path.home() / ".arcticl")) / "out"


def _env_number(name: str, kind: type[int] | type[float]) -> int | float | None:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return None
    try:
        return kind(raw)
    except ValueError as e:
        raise ConfigError(f"{name} must be a {kind.__name__}, got {raw!r}") from e


def parse_alpha(text: str) -> Fraction | float:
    """Parse α from the command line.

    Ratios such as ``1/3`` stay exact; decimals become floats so the exact
    paths know to flag their results.
    """
    try:
        if "/" in text:
            value: Fraction | float = Fraction(text)
        else:
            value = float(text)
    except (ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"invalid alpha: {text!r}") from e
    if not 0 <= value <= 1:
        raise ConfigError(f"alpha must lie in [0, 1], got {text}")
    return value


@dataclass
class ArcticConfig:
    output_dir: Path = field(default_factory=_default_output_dir)

    # Resource guard on the Aztec order for probs / sample
    max_lattice: int = 1024

    # Fluid-mask threshold is eps_const * N^(-2/3)
    eps_const: float = 1.0
    seed: int | None = None
    curve_samples: int = 2000
    log_level: str = "WARNING"

    def ensure_dirs(self) -> None:
        """Create the output directory."""
        self.output_dir.mkdir(parents=True, exist_ok=True)

    def with_overrides(self, **overrides: Any) -> ArcticConfig:
        """Return a copy with every non-None override applied."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    @classmethod
    def from_env(cls) -> ArcticConfig:
        """Load config from environment variables."""
        config = cls()
        if out := os.environ.get("ARCTICL_OUTPUT_DIR"):
            config.output_dir = Path(out)
        if (cap := _env_number("ARCTICL_MAX_N", int)) is not None:
            config.max_lattice = int(cap)
        if (eps := _env_number("ARCTICL_EPS_CONST", float)) is not None:
            config.eps_const = float(eps)
        if (seed := _env_number("ARCTICL_SEED", int)) is not None:
            config.seed = int(seed)
        if (samples := _env_number("ARCTICL_CURVE_SAMPLES", int)) is not None:
            config.curve_samples = int(samples)
        if level := os.environ.get("ARCTICL_LOG_LEVEL"):
            config.log_level = level.upper()
        if config.max_lattice < 1:
            raise ConfigError("ARCTICL_MAX_N must be positive")
        if config.eps_const <= 0:
            raise ConfigError("ARCTICL_EPS_CONST must be positive")
        return config


@dataclass
class RunConfig:
    """Everything one subcommand invocation depends on."""

    command: str
    alpha: Fraction | float
    N: int | None = None
    r: int | None = None
    s: int | None = None
    R: float | None = None
    Q: float | None = None
    seed: int | None = None
    samples: int = 1
    fmt: str = "csv"
    eps_const: float = 1.0
    n_curve: int = 2000

    @property
    def is_lattice(self) -> bool:
        return self.N is not None

    def validate(self) -> None:
        """Require exactly one of lattice (N, r, s) or scaled (R, Q) geometry."""
        lattice = (self.N, self.r, self.s)
        scaled = (self.R, self.Q)
        has_lattice = any(v is not None for v in lattice)
        has_scaled = any(v is not None for v in scaled)
        if has_lattice and has_scaled:
            raise ConfigError("give either --N/--r/--s or --R/--Q, not both")
        if not has_lattice and not has_scaled:
            raise ConfigError("a geometry is required: --N/--r/--s or --R/--Q")
        if has_lattice and any(v is None for v in lattice):
            raise ConfigError("lattice geometry needs all of --N, --r and --s")
        if has_scaled and self.R is None:
            raise ConfigError("scaled geometry needs --R")
        if self.samples < 1:
            raise ConfigError("--samples must be at least 1")
        if self.eps_const <= 0:
            raise ConfigError("--eps-const must be positive")

    def scaled(self) -> tuple[float, float]:
        """(R, Q) for this run, derived from the lattice sizes when needed."""
        if self.R is not None:
            return float(self.R), float(self.Q or 0.0)
        assert self.N is not None and self.r is not None and self.s is not None
        if self.s == 0:
            raise ConfigError("scaled geometry needs s >= 1")
        return self.r / self.s, (self.N - self.r - self.s) / self.s

    def slug(self) -> str:
        """Deterministic file-name stem for this run."""
        if self.is_lattice:
            geom = f"N{self.N}-r{self.r}-s{self.s}"
        else:
            geom = f"R{self.R:g}-Q{(self.Q or 0.0):g}"
        return f"{self.command}-a{float(self.alpha):g}-{geom}"

    def echo(self) -> dict[str, Any]:
        """JSON-ready echo of the configuration for output metadata."""
        out: dict[str, Any] = {
            "command": self.command,
            "alpha": str(self.alpha),
            "alpha_exact": isinstance(self.alpha, Fraction),
        }
        if self.is_lattice:
            out.update(N=self.N, r=self.r, s=self.s)
        else:
            out.update(R=self.R, Q=self.Q or 0.0)
        if self.seed is not None:
            out["seed"] = self.seed
        if self.command == "sample":
            out["samples"] = self.samples
        if self.command in ("probs", "sample"):
            out["eps_const"] = self.eps_const
        if self.command == "curve":
            out["n_curve"] = self.n_curve
        return out
