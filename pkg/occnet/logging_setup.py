"""
Console logging setup shared by the CLI and the report gateway.
"""

import logging
from typing import Optional

LOG_FORMAT = "[%(levelname)s] %(asctime)s - %(message)s"


def configure_logging(level: Optional[str] = None) -> None:
    """
    Configure root logging once for an entry point.

    Args:
        level (str, optional): Level name, e.g. "INFO" or "DEBUG". Defaults to
            the OCCNET_LOG_LEVEL setting.
    """
    from occnet.config.settings import LOG_LEVEL

    name = (level or LOG_LEVEL).upper()
    numeric = getattr(logging, name, None)
    if not isinstance(numeric, int):
        numeric = logging.INFO
    logging.basicConfig(level=numeric, format=LOG_FORMAT, force=True)
