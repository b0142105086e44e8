"""
Configuration management for diophantine exponent computations.

Loads configuration from environment variables with sensible defaults.
Command-line flags override these values.

Usage:
    ```python
    from diophantine_exponents.config import get_exponent_config, load_env

    # Load .env file (optional, done automatically on import)
    load_env()

    # Get config, overriding the seed
    config = get_exponent_config(seed=7)
    sampler = config.sampler()
    ```
"""

import os
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any

from diophantine_exponents.common.utils import RationalSampler


def load_env(env_path: str | Path | None = None) -> bool:
    """
    Load environment variables from .env and .env.config files.

    Files loaded (in order):
    1. .env.config - Shared defaults
    2. .env - Local overrides

    Args:
        env_path: Path to .env file. If None, searches in current dir and parent dirs.

    Returns:
        True if any .env file was found and loaded, False otherwise.
    """
    from dotenv import load_dotenv

    if env_path:
        return load_dotenv(env_path)

    current = Path.cwd()
    for _ in range(5):  # Max 5 levels up
        loaded = False
        config_file = current / ".env.config"
        if config_file.exists():
            load_dotenv(config_file)
            loaded = True
        env_file = current / ".env"
        if env_file.exists():
            load_dotenv(env_file, override=True)
            loaded = True
        if loaded:
            return True
        current = current.parent
    return False


def _get_bool(key: str, default: bool = False) -> bool:
    """Get boolean from environment variable."""
    value = os.environ.get(key, "").lower()
    if value in ("true", "1", "yes", "on"):
        return True
    if value in ("false", "0", "no", "off"):
        return False
    return default


def _get_int(key: str, default: int) -> int:
    """Get integer from environment variable."""
    value = os.environ.get(key)
    if value is None:
        return default
    try:
        return int(value)
    except ValueError:
        return default


def _get_float(key: str, default: float) -> float:
    """Get float from environment variable."""
    value = os.environ.get(key)
    if value is None:
        return default
    try:
        return float(value)
    except ValueError:
        return default


@dataclass
class ExponentConfig:
    """Defaults for sampling, enumeration and reporting."""

    # Generic-point sampling
    seed: int = 20240601
    sample_height: int = 10
    initial_samples: int = 5
    stabilize_rounds: int = 3

    # Enumeration
    threads: int = 1
    box_guard: float = 1e9

    # Dani traces
    rank_tol: float = 1e-9
    mp_dps: int = 60

    # Reporting
    strict: bool = False  # Escalate flags to exit code 3
    log_level: str = "WARNING"
    log_levels: str = ""  # "module=LEVEL,..." below the package root

    def sampler(self, seed: int | None = None) -> RationalSampler:
        return RationalSampler(self.seed if seed is None else seed, self.sample_height)

    def family_options(self) -> dict[str, Any]:
        """Sampling options passed to every manifold family."""
        return {"initial_samples": self.initial_samples, "stabilize_rounds": self.stabilize_rounds}

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_env(cls) -> "ExponentConfig":
        """Load config from environment variables."""
        return cls(
            seed=_get_int("DIOPHANTINE_SEED", 20240601),
            sample_height=_get_int("DIOPHANTINE_SAMPLE_HEIGHT", 10),
            initial_samples=_get_int("DIOPHANTINE_INITIAL_SAMPLES", 5),
            stabilize_rounds=_get_int("DIOPHANTINE_STABILIZE_ROUNDS", 3),
            threads=_get_int("DIOPHANTINE_THREADS", 1),
            box_guard=_get_float("DIOPHANTINE_BOX_GUARD", 1e9),
            rank_tol=_get_float("DIOPHANTINE_RANK_TOL", 1e-9),
            mp_dps=_get_int("DIOPHANTINE_MP_DPS", 60),
            strict=_get_bool("DIOPHANTINE_STRICT", False),
            log_level=os.environ.get("DIOPHANTINE_LOG_LEVEL", "WARNING").upper(),
            log_levels=os.environ.get("DIOPHANTINE_LOG_LEVELS", ""),
        )


def get_exponent_config(**overrides: Any) -> ExponentConfig:
    """
    Get configuration from the environment with optional overrides.

    None-valued overrides are ignored, so parsed CLI flags can be passed through.

    Example:
        ```python
        config = get_exponent_config(seed=7, threads=4)
        ```
    """
    config = ExponentConfig.from_env()
    for key, value in overrides.items():
        if value is None:
            continue
        if not hasattr(config, key):
            raise AttributeError(f"Unknown config option '{key}'")
        setattr(config, key, value)
    return config


# Auto-load .env on import
load_env()
