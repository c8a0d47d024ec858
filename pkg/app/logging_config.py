"""Shared logging setup for the API and the command-line front end."""

import logging.config

from app.settings import LOG_LEVEL

_LOGGING_CONFIG = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "json": {
            "format": '{"time": "%(asctime)s", "level": "%(levelname)s", "logger": "%(name)s", "message": "%(message)s"}',
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
            "formatter": "json",
        },
    },
    "root": {"level": LOG_LEVEL, "handlers": ["console"]},
}


def configure_logging() -> None:
    """Install the one-line JSON formatter on stderr."""
    logging.config.dictConfig(_LOGGING_CONFIG)
