import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

import yaml
from dotenv import load_dotenv

from src.utils.console import warn
from src.utils.errors import ConfigError

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parents[2] / "config" / "default.yaml"
ORDER_ENV_VAR = "QVANISH_ORDER"
OUTPUT_FORMATS = ("text", "json", "csv")


@dataclass(frozen=True)
class RunConfig:
    order: int = 1000
    format: str = "text"
    enumeration_cap: int = 1_000_000
    workers: int = 1
    min_class_samples: int = 10
    violation_preview: int = 3
    progress: bool = True

    def __post_init__(self):
        for name in ("order", "enumeration_cap", "workers", "min_class_samples", "violation_preview"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ConfigError(f"{name} must be an integer >= 1, got {value!r}")
        if self.format not in OUTPUT_FORMATS:
            raise ConfigError(f"format must be one of {', '.join(OUTPUT_FORMATS)}, got {self.format!r}")
        if not isinstance(self.progress, bool):
            raise ConfigError(f"progress must be true or false, got {self.progress!r}")

    def with_overrides(self, **overrides) -> "RunConfig":
        """Return a copy with every non-None override applied."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


def _read_yaml(path: Path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
    except FileNotFoundError:
        warn(f"configuration file not found at {path}, using built-in defaults")
        return {}
    except yaml.YAMLError as e:
        raise ConfigError(f"cannot parse configuration file {path}: {e}")
    if not isinstance(data, dict):
        raise ConfigError(f"configuration file {path} must contain a mapping")
    return data


def load_config(path: Optional[str] = None) -> RunConfig:
    """
    Build the run configuration from the YAML file, then apply the environment.

    QVANISH_ORDER (possibly set through a .env file) overrides run_params.order.
    """
    load_dotenv()
    data = _read_yaml(Path(path) if path else DEFAULT_CONFIG_PATH)

    run_params = data.get("run_params") or {}
    verify_params = data.get("verify_params") or {}
    scan_params = data.get("scan_params") or {}
    defaults = RunConfig()

    order = run_params.get("order", defaults.order)
    env_order = os.getenv(ORDER_ENV_VAR)
    if env_order is not None and env_order.strip():
        try:
            order = int(env_order)
        except ValueError:
            raise ConfigError(f"{ORDER_ENV_VAR} must be an integer, got {env_order!r}")

    return RunConfig(
        order=order,
        format=run_params.get("format", defaults.format),
        enumeration_cap=run_params.get("enumeration_cap", defaults.enumeration_cap),
        workers=run_params.get("workers", defaults.workers),
        min_class_samples=verify_params.get("min_class_samples", defaults.min_class_samples),
        violation_preview=verify_params.get("violation_preview", defaults.violation_preview),
        progress=scan_params.get("progress", defaults.progress),
    )
