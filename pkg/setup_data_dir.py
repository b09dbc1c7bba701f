#!/usr/bin/env python3
"""
Setup script for the data directory.
Regenerates the bundled torus diagrams and checks every manifest entry still parses and validates.
"""

import logging
import os
import sys

from knotres.diagram import parse_pd, to_pd_text, torus_diagram, validate
from knotres.errors import KnotresError
from knotres.utils.data_loader import get_data_dir, load_manifest, read_text

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

TORUS_DIAGRAMS = {"3a1": 3, "5a2": 5, "7a7": 7, "9a41": 9}


def ensure_dir_structure(data_dir):
    """Create necessary directory structure for data."""
    for subdir in ["diagrams", "edge_lists", "tangles"]:
        subdir_path = os.path.join(data_dir, subdir)
        if not os.path.exists(subdir_path):
            os.makedirs(subdir_path)
            logger.info(f"Created subdirectory: {subdir_path}")


def write_torus_diagrams(data_dir):
    """Write the standard positive (2, n) torus diagrams."""
    for name, n in TORUS_DIAGRAMS.items():
        path = os.path.join(data_dir, "diagrams", f"{name}.pd")
        text = f"% (2,{n}) torus knot, standard positive diagram\n{to_pd_text(torus_diagram(n))}\n"
        with open(path, "w") as f:
            f.write(text)
        logger.info(f"Wrote {path}")


def verify_manifest(data_dir):
    """Parse and validate every manifest entry; returns the number of failures."""
    failures = 0
    for entry in load_manifest(os.path.join(data_dir, "manifest.yaml")):
        try:
            report = validate(parse_pd(read_text(entry["file"])))
        except (OSError, KnotresError) as e:
            logger.error(f"Error loading {entry['name']}: {e}")
            failures += 1
            continue
        if report.accepted:
            logger.info(f"{entry['name']}: accepted")
        else:
            logger.error(f"{entry['name']}: rejected ({', '.join(report.failures())})")
            failures += 1
    return failures


def main():
    data_dir = get_data_dir()
    logger.info(f"Setting up data directory {data_dir}")
    ensure_dir_structure(data_dir)
    if "--regenerate" in sys.argv:
        write_torus_diagrams(data_dir)
    failures = verify_manifest(data_dir)
    if failures:
        logger.warning(f"{failures} bundled diagrams failed verification")
        return 1
    logger.info("Data directory setup complete")
    return 0


if __name__ == "__main__":
    sys.exit(main())
