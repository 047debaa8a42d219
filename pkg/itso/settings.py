"""
Runtime settings
Reads an optional .env file and ITSO_* environment variables
"""

import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from dotenv import find_dotenv, load_dotenv

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning(f"Ignoring {name}={raw!r}: not an integer, using {default}")
        return default


def _env_flag(name: str, default: bool) -> bool:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    return raw.strip().lower() not in {"0", "false", "no", "off"}


@dataclass(frozen=True)
class Settings:
    """Process-wide defaults, overridden by CLI flags"""

    seed: int = 0
    output_dir: Path = Path("results")
    workers: int = 1
    timeout_ms: int = 10000
    log_level: str = "WARNING"
    progress: bool = True


def load_settings(env_file: Optional[str] = None) -> Settings:
    """
    Build Settings from the environment

    Args:
        env_file: Explicit .env path; when omitted the nearest .env at or
            above the working directory is used

    Returns:
        Settings with every field resolved
    """
    load_dotenv(env_file or find_dotenv(usecwd=True), override=False)

    defaults = Settings()
    settings = Settings(
        seed=_env_int("ITSO_SEED", defaults.seed),
        output_dir=Path(os.getenv("ITSO_OUTPUT_DIR") or defaults.output_dir),
        workers=max(1, _env_int("ITSO_WORKERS", defaults.workers)),
        timeout_ms=_env_int("ITSO_TIMEOUT_MS", defaults.timeout_ms),
        log_level=(os.getenv("ITSO_LOG_LEVEL") or defaults.log_level).upper(),
        progress=_env_flag("ITSO_PROGRESS", defaults.progress),
    )
    return settings


def configure_logging(level: str) -> None:
    """Configure root logging for an entry point (library code never calls this)"""
    logging.basicConfig(level=getattr(logging, level.upper(), logging.WARNING), format=LOG_FORMAT)
