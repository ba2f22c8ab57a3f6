import os
import logging
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Base paths
BASE_DIR = Path(__file__).resolve().parent.parent
OUTPUT_DIR = os.getenv('GNS_OUTPUT_DIR', os.path.join(BASE_DIR, 'output', 'reports'))
LOG_DIR = os.getenv('GNS_LOG_DIR', 'logs')
LOG_LEVEL = os.getenv('GNS_LOG_LEVEL', 'INFO').upper()


def _env_number(name: str, default: str, cast):
    raw = os.getenv(name, default)
    try:
        return cast(raw)
    except ValueError:
        raise ValueError(f"Invalid value for environment variable {name}: {raw!r}")


# Numerical defaults
NULL_TOLERANCE = _env_number('GNS_NULL_TOL', '1e-10', float)
CHECK_TOLERANCE = _env_number('GNS_CHECK_TOL', '1e-10', float)
DEFAULT_SEED = _env_number('GNS_SEED', '0', int)
DEFAULT_SAMPLES = _env_number('GNS_SAMPLES', '1000', int)
MAX_WORKERS = _env_number('GNS_MAX_WORKERS', '1', int)

# Create CONFIG dictionary for app configuration
CONFIG = {
    "output_dir": OUTPUT_DIR,
    "log_dir": LOG_DIR,
    "log_level": LOG_LEVEL,
    "null_tolerance": NULL_TOLERANCE,
    "check_tolerance": CHECK_TOLERANCE,
    "seed": DEFAULT_SEED,
    "samples": DEFAULT_SAMPLES,
    "max_workers": MAX_WORKERS,
}


# Logging configuration
def setup_logging(level=None):
    """Set the level of the package logger and return it."""
    logger = logging.getLogger("gns_entropy")
    logger.setLevel(level or LOG_LEVEL)
    for handler in logger.handlers:
        handler.setLevel(level or LOG_LEVEL)
    return logger
