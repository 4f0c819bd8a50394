from __future__ import annotations

import os
from functools import lru_cache
from pathlib import Path
from typing import Any

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError

from utils.errors import InputError, validation_details

REPO_ROOT = Path(__file__).resolve().parents[1]
DEFAULT_SETTINGS_PATH = REPO_ROOT / "config" / "settings.yaml"

_ENV_KEYS = {
    "precision": "BTMONO_PRECISION",
    "extension_bound": "BTMONO_EXTENSION_BOUND",
    "element_budget": "BTMONO_ELEMENT_BUDGET",
    "degree_cap": "BTMONO_DEGREE_CAP",
    "match_min_terms": "BTMONO_MATCH_MIN_TERMS",
    "open_slopes": "BTMONO_OPEN_SLOPES",
    "search_budget": "BTMONO_SEARCH_BUDGET",
}


class Settings(BaseModel):
    precision: int = Field(64, ge=1, le=4096)
    extension_bound: int = Field(8, ge=1, le=32)
    element_budget: int = Field(10_000_000, ge=1)
    degree_cap: int = Field(4, ge=1, le=64)
    match_min_terms: int = Field(8, ge=1)
    open_slopes: bool = False
    search_budget: int = Field(200_000, ge=1)

    def override(self, **fields: Any) -> "Settings":
        clean = {k: v for k, v in fields.items() if v is not None}
        try:
            return Settings(**{**self.model_dump(), **clean})
        except ValidationError as exc:
            raise InputError("invalid_settings", "Settings override rejected", details=validation_details(exc)) from exc


def settings_path() -> Path:
    return Path(os.getenv("BTMONO_SETTINGS", str(DEFAULT_SETTINGS_PATH))).expanduser()


def _read_yaml(path: Path) -> dict[str, Any]:
    if not path.exists():
        return {}
    data = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    if not isinstance(data, dict):
        raise InputError("invalid_settings", f"{path} must hold a mapping")
    return data.get("defaults", data)


def load_settings(path: Path | None = None) -> Settings:
    load_dotenv()
    data = _read_yaml(path or settings_path())
    for key, env in _ENV_KEYS.items():
        raw = os.getenv(env)
        if raw not in (None, ""):
            data[key] = raw
    try:
        return Settings(**data)
    except ValidationError as exc:
        raise InputError("invalid_settings", "Settings file or environment rejected", details=validation_details(exc)) from exc


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return load_settings()
