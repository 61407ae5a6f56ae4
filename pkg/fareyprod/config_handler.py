import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

import toml
from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator
from sympy import isprime

from .exceptions import ConfigError

logger = logging.getLogger(__name__)

CONFIG_FILE = Path.home() / ".fareyprodrc"
PROJECT_CONFIG = "config.toml"

DEFAULTS: Dict[str, Any] = {
    "threads": None,  # None means os.cpu_count()
    "n_max_ceiling": 20_000_000,
    "oracle_ceiling": 5000,
    "jump_threshold_factor": 4.0,
}

# Environment overrides, highest precedence
ENV_KEYS = {
    "threads": "FAREY_THREADS",
    "n_max_ceiling": "FAREY_N_MAX_CEILING",
    "oracle_ceiling": "FAREY_ORACLE_CEILING",
    "jump_threshold_factor": "FAREY_JUMP_FACTOR",
}

_CASTS = {
    "threads": int,
    "n_max_ceiling": int,
    "oracle_ceiling": int,
    "jump_threshold_factor": float,
}


def _load_toml_defaults(path: Path) -> Dict[str, Any]:
    try:
        data = toml.load(path)
    except (OSError, toml.TomlDecodeError) as e:
        logger.warning("Config read failed for %s: %s", path, e)
        return {}
    return dict(data.get("defaults", {}))


def read_config() -> Dict[str, Any]:
    """Read config: built-in defaults < ./config.toml < ~/.fareyprodrc < environment"""
    load_dotenv(override=False)
    config: Dict[str, Any] = {"defaults": dict(DEFAULTS)}

    project_path = Path(PROJECT_CONFIG)
    if project_path.exists():
        config["defaults"].update(_load_toml_defaults(project_path))
    if CONFIG_FILE.exists():
        config["defaults"].update(_load_toml_defaults(CONFIG_FILE))

    for key, env_name in ENV_KEYS.items():
        raw = os.environ.get(env_name)
        if raw is None or raw == "":
            continue
        try:
            config["defaults"][key] = _CASTS[key](raw)
        except ValueError:
            logger.warning("Ignoring %s=%r: not a valid %s", env_name, raw, _CASTS[key].__name__)

    if not config["defaults"].get("threads"):
        config["defaults"]["threads"] = os.cpu_count() or 1
    return config


def write_config(config: Dict[str, Any]) -> None:
    try:
        CONFIG_FILE.write_text(toml.dumps(config))
    except OSError as e:
        raise ConfigError(f"Config write failed: {str(e)}") from e


def get_default(key: str) -> Any:
    return read_config()["defaults"].get(key)


def update_defaults(**kwargs: Any) -> None:
    """Validate and persist new defaults to the user config file"""
    updates: Dict[str, Any] = {}
    for key, value in kwargs.items():
        if value is None:
            continue
        if key not in DEFAULTS:
            raise ConfigError(f"Unknown setting: '{key}'. Available: {', '.join(DEFAULTS)}")
        try:
            cast = _CASTS[key](value)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Invalid value for {key}: {value!r}") from e
        if cast <= 0:
            raise ConfigError(f"{key} must be positive, got {value!r}")
        updates[key] = cast

    stored: Dict[str, Any] = {}
    if CONFIG_FILE.exists():
        stored = _load_toml_defaults(CONFIG_FILE)
    write_config({"defaults": {**stored, **updates}})


Command = Literal["sieve", "ordg", "ordf", "table", "remainder", "scan", "jumps"]
Method = Literal["inversion", "direct", "oracle"]
Kind = Literal["mikolas", "inf", "p0", "p1", "p2"]
ScanMode = Literal["integers", "psq", "properties"]

_PRIME_COMMANDS = {"table", "jumps"}
_P_ADIC_KINDS = {"p0", "p1", "p2"}


class RunConfig(BaseModel):
    """Validated parameters of one CLI invocation"""

    command: Command
    n_max: Optional[int] = Field(default=None, ge=1)
    prime: Optional[int] = None
    base: Optional[int] = None
    methods: List[Method] = Field(default_factory=lambda: ["inversion"])
    kind: Optional[Kind] = None
    max_power: Optional[int] = Field(default=None, ge=1)
    scan: Optional[ScanMode] = None
    p_max: Optional[int] = Field(default=None, ge=3)
    output_path: Optional[str] = None
    format: Literal["csv", "tsv"] = "csv"
    threads: int = Field(default=1, ge=1)
    oracle_ceiling: int = Field(default=5000, ge=1)
    n_max_ceiling: int = Field(default=20_000_000, ge=1)

    @field_validator("prime")
    @classmethod
    def _prime_is_prime(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and not isprime(value):
            raise ValueError(f"{value} is not prime")
        return value

    @field_validator("base")
    @classmethod
    def _base_at_least_two(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and value < 2:
            raise ValueError("base must be at least 2")
        return value

    @field_validator("methods")
    @classmethod
    def _methods_distinct(cls, value: List[str]) -> List[str]:
        if not value:
            raise ValueError("at least one method is required")
        if len(set(value)) != len(value):
            raise ValueError("methods must be distinct")
        return value

    @model_validator(mode="after")
    def _check_requirements(self) -> "RunConfig":
        needs_prime = (
            self.command in _PRIME_COMMANDS
            or (self.command == "remainder" and self.kind in _P_ADIC_KINDS)
            or (self.command == "scan" and self.scan == "properties")
        )
        if needs_prime and self.prime is None:
            raise ValueError(f"command '{self.command}' requires -p/--prime")
        if self.command in ("ordg", "ordf"):
            if self.prime is None and self.base is None:
                raise ValueError(f"command '{self.command}' requires -p/--prime or -b/--base")
            if self.prime is not None and self.base is not None:
                raise ValueError("give either -p/--prime or -b/--base, not both")
            if self.base is not None and self.methods != ["inversion"]:
                raise ValueError("-b/--base supports only --method inversion")
        if self.command == "table":
            if self.max_power is None:
                raise ValueError("command 'table' requires --max-power")
            if self.prime is not None:
                needed = self.prime**self.max_power - 1
                if self.n_max is None:
                    self.n_max = needed
                elif needed > self.n_max:
                    raise ValueError(f"table needs n_max >= {needed} (p^r - 1), got {self.n_max}")
        elif self.n_max is None and not (self.command == "scan" and self.scan == "psq"):
            raise ValueError(f"command '{self.command}' requires --n-max")
        if self.command == "remainder" and self.kind is None:
            raise ValueError("command 'remainder' requires --kind")
        if self.command == "scan":
            if self.scan is None:
                raise ValueError("command 'scan' requires one of --integers, --psq, --properties")
            if self.scan == "psq" and self.p_max is None:
                raise ValueError("scan --psq requires --p-max")
        if (self.n_max or 0) > self.n_max_ceiling:
            raise ValueError(
                f"n_max={self.n_max} exceeds the configured ceiling {self.n_max_ceiling} "
                "(set n_max_ceiling / FAREY_N_MAX_CEILING)"
            )
        if "oracle" in self.methods and (self.n_max or 0) > self.oracle_ceiling:
            raise ValueError(
                f"--method oracle requires n_max <= {self.oracle_ceiling} (got {self.n_max})"
            )
        return self


def build_run_config(**kwargs: Any) -> RunConfig:
    """Build a RunConfig, re-raising validation failures as ConfigError"""
    try:
        return RunConfig(**kwargs)
    except ValidationError as e:
        messages = "; ".join(err["msg"] for err in e.errors())
        raise ConfigError(messages) from e
