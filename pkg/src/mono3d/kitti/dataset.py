# src/mono3d/kitti/dataset.py
"""
Directory-level loading of KITTI-style label, detection and calibration files.

Files are keyed by image id (the file stem, e.g. `000123`). Results are
returned in sorted image-id order so downstream processing is deterministic.
"""

import logging
from pathlib import Path
from typing import Dict, List

from ..core.camera import ProjectionMatrix
from ..exceptions import KittiFormatError
from .calibration import parse_calib_file
from .labels import ObjectLabel, parse_label_file

logger = logging.getLogger(__name__)


def _read_text(path: Path) -> str:
    return path.read_text(encoding="utf-8", errors="replace")


def read_label_file(path: Path) -> List[ObjectLabel]:
    try:
        return parse_label_file(_read_text(path))
    except KittiFormatError as e:
        raise e.with_path(str(path))


def read_label_dir(directory: Path) -> Dict[str, List[ObjectLabel]]:
    """All `*.txt` label/detection files in a directory, keyed by image id."""
    directory = Path(directory)
    labels = {path.stem: read_label_file(path) for path in sorted(directory.glob("*.txt"))}
    logger.debug(f"Read {len(labels)} label file(s) from {directory}")
    return labels


def read_calib_file(path: Path) -> ProjectionMatrix:
    try:
        return parse_calib_file(_read_text(path))
    except KittiFormatError as e:
        raise e.with_path(str(path))


def read_calib_dir(directory: Path) -> Dict[str, ProjectionMatrix]:
    """Projection matrices of all `*.txt` calibration files, keyed by image id."""
    directory = Path(directory)
    calibs = {path.stem: read_calib_file(path) for path in sorted(directory.glob("*.txt"))}
    logger.debug(f"Read {len(calibs)} calibration file(s) from {directory}")
    return calibs
