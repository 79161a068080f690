"""
KITTI-format input and output: labels, detections, calibration,
difficulty assignment and the JSON-lines prediction schema.
"""

from .labels import (
    DONTCARE,
    ObjectLabel,
    format_label_file,
    format_label_line,
    parse_label_file,
    parse_label_line,
)
from .difficulty import DIFFICULTY_THRESHOLDS, EVALUATED_DIFFICULTIES, Difficulty, assign_difficulty
from .calibration import format_calib, parse_calib_entries, parse_calib_file
from .writer import detection_to_label, write_detections
from .predictions import PredictionRecord, parse_prediction_lines
from .dataset import read_calib_dir, read_calib_file, read_label_dir, read_label_file
