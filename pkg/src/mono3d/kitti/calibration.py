# src/mono3d/kitti/calibration.py
"""
KITTI calibration files.

Each line is `KEY: v0 v1 ...`; only the left color camera matrix P2
(12 row-major values) is consumed. Serialization writes shortest
round-trip float representations so parse(serialize(P)) is bit-exact.
"""

import logging
import math
from typing import Dict, List

from ..core.camera import ProjectionMatrix
from ..exceptions import GeometryError, MissingKey, NumericParseError, RecordValueError

logger = logging.getLogger(__name__)

CALIB_KEY = "P2"


def parse_calib_entries(text: str) -> Dict[str, List[float]]:
    """All `KEY: floats` entries of a calibration file, keyed by name."""
    entries: Dict[str, List[float]] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or ":" not in line:
            continue
        key, _, rest = line.partition(":")
        values = []
        for index, token in enumerate(rest.split()):
            try:
                value = float(token)
            except ValueError:
                raise NumericParseError(
                    f"cannot parse {token!r} as a number", line=line_no, field=f"{key.strip()}[{index}]"
                ) from None
            if not math.isfinite(value):
                raise NumericParseError(f"non-finite value {token!r}", line=line_no, field=f"{key.strip()}[{index}]")
            values.append(value)
        entries[key.strip()] = values
    return entries


def parse_calib_file(text: str, key: str = CALIB_KEY) -> ProjectionMatrix:
    """Canonically normalized projection matrix of the `key` entry (P2 by default)."""
    entries = parse_calib_entries(text)
    if key not in entries:
        raise MissingKey(f"calibration has no {key} entry", field=key)
    values = entries[key]
    if len(values) != 12:
        raise RecordValueError(f"{key} needs 12 values, got {len(values)}", field=key)
    try:
        return ProjectionMatrix(values)
    except GeometryError as e:
        raise RecordValueError(str(e), field=key) from None


def format_calib(P: ProjectionMatrix, key: str = CALIB_KEY) -> str:
    """Single `KEY: ...` line with round-trip float formatting."""
    return f"{key}: " + " ".join(repr(v) for v in P.to_list()) + "\n"
