import logging
import os
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from typing import Any, Optional

from dotenv import load_dotenv

load_dotenv()


class Config:
    BASE_DIR = os.path.abspath(
        os.path.join(os.path.abspath(os.path.dirname(__file__)), "..")
    )
    OUTPUT_DIR = os.environ.get("MCENTRALITY_OUTPUT_DIR", default=".")
    DATABASE_URL = os.environ.get(
        "MCENTRALITY_DATABASE_URL",
        default="sqlite:///" + os.path.join(BASE_DIR, "config", "experiments.db"),
    )
    WORKERS = int(os.environ.get("MCENTRALITY_WORKERS", default="1"))

    # Logger config
    LOG_LEVEL = os.environ.get("MCENTRALITY_LOG_LEVEL", default="INFO")
    LOG_FILE = os.environ.get("MCENTRALITY_LOG_FILE")
    LOG_FORMAT = "%(asctime)s - %(levelname)s - %(name)s - %(message)s"


def configure_logging(level: Optional[str] = None, log_file: Optional[str] = None) -> None:
    handlers: list[logging.Handler] = [logging.StreamHandler()]
    log_file = log_file or Config.LOG_FILE
    if log_file:
        os.makedirs(os.path.dirname(os.path.abspath(log_file)), exist_ok=True)
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=(level or Config.LOG_LEVEL).upper(),
        format=Config.LOG_FORMAT,
        handlers=handlers,
        force=True,
    )


def load_experiment_file(path: str) -> dict[str, Any]:
    """Read a TOML experiment file: a ``[common]`` table plus one table per command."""
    with open(path, "rb") as fh:
        return tomllib.load(fh)
