import json
import logging
import os
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv

from src.errors import KnotObsError

logger = logging.getLogger(__name__)

PROJECT_ROOT = Path(__file__).resolve().parent.parent
DEFAULT_CONFIG_PATH = PROJECT_ROOT / "config" / "general.json"

OUTPUT_FORMATS = ("text", "csv", "json")

ENV_OVERRIDES = {
    "KNOTOBS_SEARCH_BOUND": "search_bound",
    "KNOTOBS_RESOLUTION": "profile_resolution",
    "KNOTOBS_PRECISION": "numeric_precision",
    "KNOTOBS_FORMAT": "output_format",
    "KNOTOBS_MATRIX_DIR": "matrix_dir",
}


class ConfigurationError(KnotObsError):
    """Raised when settings are missing or invalid"""
    pass


@dataclass(frozen=True)
class Settings:
    search_bound: int = 2
    profile_resolution: int = 12
    numeric_precision: int = 30
    output_format: str = "text"
    max_search_rank: int = 8
    matrix_dir: Optional[Path] = None

    def validate(self) -> "Settings":
        for name in ("search_bound", "profile_resolution", "numeric_precision", "max_search_rank"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
                raise ConfigurationError(f"{name} must be a positive integer, got {value!r}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigurationError(
                f"output_format must be one of {', '.join(OUTPUT_FORMATS)}, got {self.output_format!r}")
        return self


def _coerce(name: str, value: Any) -> Any:
    if name == "matrix_dir":
        return Path(value) if value else None
    if name == "output_format":
        return str(value).lower()
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ConfigurationError(f"{name} must be an integer, got {value!r}")


def load_settings(path: Optional[Path] = None, overrides: Optional[Dict[str, Any]] = None) -> Settings:
    """
    Defaults from config/general.json, then KNOTOBS_* environment variables (a .env file is
    honoured), then explicit overrides such as command-line flags.
    """
    path = Path(path) if path else DEFAULT_CONFIG_PATH
    values: Dict[str, Any] = {}
    known = {f.name for f in fields(Settings)}

    try:
        with open(path, "r") as f:
            data = json.load(f)
        unknown = sorted(set(data) - known)
        if unknown:
            logger.warning(f"Ignoring unknown settings in {path}: {', '.join(unknown)}")
        values.update({k: _coerce(k, v) for k, v in data.items() if k in known})
    except FileNotFoundError:
        logger.debug(f"No settings file at {path}, using defaults")
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"{path} contains invalid JSON: {e}")

    load_dotenv()
    for env_var, name in ENV_OVERRIDES.items():
        value = os.getenv(env_var)
        if value:
            values[name] = _coerce(name, value)

    for name, value in (overrides or {}).items():
        if value is not None:
            if name not in known:
                raise ConfigurationError(f"Unknown setting {name!r}")
            values[name] = _coerce(name, value)

    return replace(Settings(), **values).validate()
