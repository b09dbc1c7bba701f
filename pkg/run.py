#!/usr/bin/env python3
"""
Run script for knotres.
Sets up the project path and logging, then hands the command line to knotres.cli.
"""

import logging
import os
import sys

PROJECT_ROOT = os.path.abspath(os.path.dirname(__file__))
sys.path.insert(0, PROJECT_ROOT)

from knotres.cli import main  # noqa: E402
from knotres.utils.data_loader import load_settings  # noqa: E402


def setup_logging(settings):
    """Log to stderr, plus a log file when settings.logging.file is set; stdout carries results."""
    handlers = [logging.StreamHandler(sys.stderr)]
    log_file = settings["logging"].get("file")
    if log_file:
        handlers.append(logging.FileHandler(log_file))

    level = settings["logging"].get("level") or "WARNING"
    if "--verbose" in sys.argv:
        sys.argv.remove("--verbose")
        level = "INFO"

    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
    )


if __name__ == "__main__":
    setup_logging(load_settings())
    sys.exit(main())
