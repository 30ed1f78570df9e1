"""
Configuration Management - linsess settings from YAML and the environment
=========================================================================

Sections:
- checker: reference-checker fuel, open-context warning
- reduction: step limit, redex policy, seed
- safety: unfolding budget, worker threads
- output: JSON reports, name normalization, traces

Values are read in order: dataclass defaults, config.yaml, LINSESS_* variables.
CLI flags are applied on top by main.py.
"""

import os
import yaml
from pathlib import Path
from typing import Any, Dict, Optional
from dataclasses import dataclass, field, asdict

from .exceptions import ConfigError


POLICIES = ("leftmost", "random")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass
class CheckerConfig:
    """
    Type checker configuration.

    Controls the brute-force reference checker's derivation budget and
    whether open-context checks warn about the safety guarantee.
    """
    reference_fuel: int = 20000
    warn_non_unrestricted_context: bool = True

    def validate(self) -> None:
        """Validate checker configuration parameters."""
        if self.reference_fuel < 1:
            raise ConfigError(f"reference_fuel must be positive, got {self.reference_fuel}")


@dataclass
class ReductionConfig:
    """
    Reduction engine configuration.

    Attributes:
        max_steps: Step limit for a single run
        policy: Redex scheduling, "leftmost" or "random"
        seed: Seed for the random policy
    """
    max_steps: int = 1000
    policy: str = "leftmost"
    seed: int = 0

    def validate(self) -> None:
        """Validate reduction configuration parameters."""
        if self.max_steps < 0:
            raise ConfigError(f"max_steps cannot be negative, got {self.max_steps}")
        if self.policy not in POLICIES:
            raise ConfigError(f"Invalid reduction policy: {self.policy}")


@dataclass
class SafetyConfig:
    """
    Safety analyzer configuration.

    The unfold budget bounds how many times each replication is unfolded
    while enumerating canonical forms; workers > 1 checks forms on a
    thread pool.
    """
    unfold_budget: int = 1
    workers: int = 1

    def validate(self) -> None:
        """Validate safety configuration parameters."""
        if self.unfold_budget < 0:
            raise ConfigError(f"unfold_budget cannot be negative, got {self.unfold_budget}")
        if self.workers < 1:
            raise ConfigError(f"workers must be at least 1, got {self.workers}")


@dataclass
class OutputConfig:
    """Report rendering options."""
    json: bool = False
    normalize_names: bool = True
    trace: bool = False

    def validate(self) -> None:
        """Nothing to check beyond the field types."""
        return None


@dataclass
class Config:
    """
    Main configuration container.

    Aggregates all configuration sections into a single object
    and provides methods for loading, saving, and validating.
    """
    debug: bool = False
    log_level: str = "WARNING"
    log_dir: str = ""

    checker: CheckerConfig = field(default_factory=CheckerConfig)
    reduction: ReductionConfig = field(default_factory=ReductionConfig)
    safety: SafetyConfig = field(default_factory=SafetyConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    def validate(self) -> None:
        """
        Validate all configuration sections.

        Raises:
            ConfigError: If any configuration section is invalid
        """
        if self.log_level.upper() not in LOG_LEVELS:
            raise ConfigError(f"Invalid log level: {self.log_level}")
        self.checker.validate()
        self.reduction.validate()
        self.safety.validate()
        self.output.validate()

    def to_dict(self) -> Dict[str, Any]:
        """Convert configuration to dictionary."""
        return {
            "debug": self.debug,
            "log_level": self.log_level,
            "log_dir": self.log_dir,
            "checker": asdict(self.checker),
            "reduction": asdict(self.reduction),
            "safety": asdict(self.safety),
            "output": asdict(self.output),
        }


SECTIONS = ("checker", "reduction", "safety", "output")


def get_default_config_dir() -> Path:
    """$LINSESS_CONFIG_DIR, else $XDG_CONFIG_HOME/linsess, else ~/.config/linsess."""
    if "LINSESS_CONFIG_DIR" in os.environ:
        return Path(os.environ["LINSESS_CONFIG_DIR"])

    if "XDG_CONFIG_HOME" in os.environ:
        return Path(os.environ["XDG_CONFIG_HOME"]) / "linsess"

    return Path.home() / ".config" / "linsess"


def load_config(config_path: Optional[str] = None, load_env: bool = True) -> Config:
    """
    Defaults, then config.yaml (config_path, else the default config
    directory when the file exists), then LINSESS_* overrides, validated.

    Raises:
        ConfigError: Missing explicit file, malformed YAML or invalid values
    """
    config = Config()

    if config_path:
        yaml_path = Path(config_path)
        if not yaml_path.exists():
            raise ConfigError("Config file not found", {"path": str(yaml_path)})
    else:
        yaml_path = get_default_config_dir() / "config.yaml"

    if yaml_path.exists():
        try:
            with open(yaml_path, "r", encoding="utf-8") as f:
                yaml_config = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ConfigError(f"Failed to parse config file: {e}", {"path": str(yaml_path)})
        except IOError as e:
            raise ConfigError(f"Failed to read config file: {e}", {"path": str(yaml_path)})

        if not isinstance(yaml_config, dict):
            raise ConfigError("Config file must contain a mapping", {"path": str(yaml_path)})
        _apply_yaml_config(config, yaml_config)

    if load_env:
        _apply_env_overrides(config)

    config.validate()

    return config


def _apply_yaml_config(config: Config, yaml_config: Dict[str, Any]) -> None:
    """
    Apply YAML configuration values to Config object.

    Unknown keys are ignored, as in every other section loader.

    Args:
        config: Config object to update
        yaml_config: Dictionary of configuration values from YAML
    """
    for key in ("debug", "log_level", "log_dir"):
        if key in yaml_config:
            setattr(config, key, yaml_config[key])

    for section in SECTIONS:
        values = yaml_config.get(section) or {}
        section_obj = getattr(config, section)
        for key, value in values.items():
            if hasattr(section_obj, key):
                setattr(section_obj, key, value)


def _apply_env_overrides(config: Config) -> None:
    """
    Apply environment variable overrides to Config object.

    Environment variables follow the pattern: LINSESS_SECTION_KEY
    For example: LINSESS_REDUCTION_MAX_STEPS, LINSESS_SAFETY_UNFOLD_BUDGET

    Args:
        config: Config object to update
    """
    env_mappings = {
        "LINSESS_DEBUG": (None, "debug", bool),
        "LINSESS_LOG_LEVEL": (None, "log_level", str),
        "LINSESS_LOG_DIR": (None, "log_dir", str),
        "LINSESS_CHECKER_REFERENCE_FUEL": ("checker", "reference_fuel", int),
        "LINSESS_REDUCTION_MAX_STEPS": ("reduction", "max_steps", int),
        "LINSESS_REDUCTION_POLICY": ("reduction", "policy", str),
        "LINSESS_REDUCTION_SEED": ("reduction", "seed", int),
        "LINSESS_SAFETY_UNFOLD_BUDGET": ("safety", "unfold_budget", int),
        "LINSESS_SAFETY_WORKERS": ("safety", "workers", int),
        "LINSESS_OUTPUT_JSON": ("output", "json", bool),
    }

    for env_var, (section, key, converter) in env_mappings.items():
        value = os.environ.get(env_var)
        if value is None:
            continue

        target = getattr(config, section) if section else config

        if converter is bool:
            converted = value.lower() in ("true", "1", "yes", "on")
        else:
            try:
                converted = converter(value)
            except ValueError:
                raise ConfigError(f"Invalid value for {env_var}: {value!r}")

        setattr(target, key, converted)


def save_config(config: Config, config_path: Optional[str] = None) -> None:
    """
    Save configuration to YAML file.

    Args:
        config: Config object to save
        config_path: Path to save configuration (optional)

    Raises:
        ConfigError: If configuration cannot be saved
    """
    yaml_path = Path(config_path) if config_path else get_default_config_dir() / "config.yaml"
    yaml_path.parent.mkdir(parents=True, exist_ok=True)

    try:
        with open(yaml_path, "w", encoding="utf-8") as f:
            yaml.dump(config.to_dict(), f, default_flow_style=False, sort_keys=False)
    except IOError as e:
        raise ConfigError(f"Failed to save config file: {e}", {"path": str(yaml_path)})
