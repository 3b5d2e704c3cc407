"""Run configuration assembled from the environment (and .env) plus CLI flags."""
import logging
import os
from dataclasses import dataclass, field
from typing import Optional

from algebra_service import DEFAULT_PAIR_BUDGET

from .errors import ConfigError

DEFAULT_SEED = 0
DEFAULT_RETRIES = 5
DEFAULT_WORKERS = 1
DEFAULT_LOG_LEVEL = "WARNING"
MAX_SEED = 2 ** 64 - 1


@dataclass(frozen=True)
class PipelineSettings:
    gb_budget: int = DEFAULT_PAIR_BUDGET
    retries: int = DEFAULT_RETRIES
    workers: int = DEFAULT_WORKERS


@dataclass(frozen=True)
class RunConfig:
    command: str
    model: Optional[str] = None
    model_file: Optional[str] = None
    method: str = "interpolate"
    seed: int = DEFAULT_SEED
    output_format: str = "text"
    allow_heavy: bool = False
    scaled: bool = False
    timings: bool = False
    settings: PipelineSettings = field(default_factory=PipelineSettings)


def _int_from_env(env, key, default, minimum=0, maximum=None):
    raw = env.get(key)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw.strip())
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {raw!r}") from None
    if value < minimum or (maximum is not None and value > maximum):
        raise ConfigError(f"{key}={value} is out of range")
    return value


def settings_from_env(env=os.environ):
    return PipelineSettings(
        gb_budget=_int_from_env(env, "MLE_ELIM_GB_BUDGET", DEFAULT_PAIR_BUDGET, minimum=1),
        retries=_int_from_env(env, "MLE_ELIM_RETRIES", DEFAULT_RETRIES),
        workers=_int_from_env(env, "MLE_ELIM_WORKERS", DEFAULT_WORKERS, minimum=1),
    )


def seed_from_env(env=os.environ):
    return _int_from_env(env, "MLE_ELIM_SEED", DEFAULT_SEED, maximum=MAX_SEED)


def log_level_from_env(env=os.environ):
    name = env.get("MLE_ELIM_LOG_LEVEL", DEFAULT_LOG_LEVEL).strip().upper()
    level = logging.getLevelName(name)
    if not isinstance(level, int):
        raise ConfigError(f"MLE_ELIM_LOG_LEVEL: unknown level {name!r}")
    return level
