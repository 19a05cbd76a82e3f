"""
运行时配置 - 从环境变量 / .env 读取

Variables:
    GRAPH_WIENER_LOG_LEVEL   logging level name (default INFO)
    GRAPH_WIENER_WORKERS     worker threads for experiment trials (default 1)
    GRAPH_WIENER_PROGRESS    show tqdm progress bars, 0/1 (default 1)
"""
import logging
import os
import sys
from dataclasses import dataclass

from dotenv import load_dotenv

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


@dataclass(frozen=True)
class Settings:
    log_level: str = "INFO"
    workers: int = 1
    progress: bool = True


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw)
    except ValueError:
        logging.getLogger(__name__).warning(f"Ignoring non-integer {name}={raw!r}")
        return default


def load_settings() -> Settings:
    """Load `.env` (if present) and read the GRAPH_WIENER_* variables."""
    load_dotenv()
    progress_raw = os.getenv("GRAPH_WIENER_PROGRESS", "1").strip().lower()
    return Settings(
        log_level=os.getenv("GRAPH_WIENER_LOG_LEVEL", "INFO").upper(),
        workers=max(1, _env_int("GRAPH_WIENER_WORKERS", 1)),
        progress=progress_raw not in ("0", "false", "no", "off"),
    )


def setup_logging(level: str = "INFO") -> None:
    """Log lines go to stderr; stdout is reserved for results."""
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format=LOG_FORMAT,
        stream=sys.stderr,
        force=True,
    )
