# app/config.py - Environment-driven settings
"""
Runtime settings read from the environment (and an optional .env file):
- IGUSA_BUDGET              enumeration budget for the counting oracle
- IGUSA_LOG_LEVEL           level passed to logging.basicConfig
- IGUSA_MAX_EXPLICIT_TERMS  cap on explicit cone-series terms
"""
import logging
import os
from dataclasses import dataclass

from dotenv import load_dotenv

load_dotenv()

DEFAULT_BUDGET = 10 ** 8
DEFAULT_MAX_EXPLICIT_TERMS = 64


@dataclass(frozen=True)
class Settings:
    budget: int = DEFAULT_BUDGET
    log_level: str = "WARNING"
    max_explicit_terms: int = DEFAULT_MAX_EXPLICIT_TERMS


def _int_from_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw.replace("_", ""))
    except ValueError:
        logging.warning(f"⚠️  Ignoring non-integer {name}={raw!r}, using {default}")
        return default
    if value <= 0:
        logging.warning(f"⚠️  Ignoring non-positive {name}={raw!r}, using {default}")
        return default
    return value


def load_settings() -> Settings:
    """
    Read settings at call time so tests can monkeypatch the environment.

    Returns:
        Settings with environment overrides applied
    """
    return Settings(
        budget=_int_from_env("IGUSA_BUDGET", DEFAULT_BUDGET),
        log_level=os.getenv("IGUSA_LOG_LEVEL", "WARNING").upper(),
        max_explicit_terms=_int_from_env("IGUSA_MAX_EXPLICIT_TERMS", DEFAULT_MAX_EXPLICIT_TERMS),
    )
