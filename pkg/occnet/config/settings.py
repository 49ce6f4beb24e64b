"""
Environment settings.
Values come from the process environment or a .env file in the working directory.
"""

import os

from dotenv import load_dotenv

from occnet.errors import ConfigError

# Load .env only once here
load_dotenv()


def _int_setting(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError as e:
        raise ConfigError(f"{name} must be an integer, got '{raw}'") from e


LOG_LEVEL = os.getenv("OCCNET_LOG_LEVEL", "INFO")
JOBS = _int_setting("OCCNET_JOBS", 1)
OUTPUT_DIR = os.getenv("OCCNET_OUTPUT_DIR", "output")
GATEWAY_PORT = _int_setting("OCCNET_GATEWAY_PORT", 5060)  # Default report gateway port
BOOTSTRAP_B = _int_setting("OCCNET_BOOTSTRAP_B", 1000)
