# src/mono3d/cli/main.py
"""
Command-line interface for the mono3d toolkit.

    mono3d recover    --pred preds/ --calib-dir calib/ --out dets/
    mono3d eval       --gt-dir label_2/ --det-dir dets/ [--calib-dir calib/] [--out report/]
    mono3d simulate   [--n 100000] [--seed 0] [--out sim/]
    mono3d check-grad [--n 1000] [--seed 0]
    mono3d parse      --gt-dir label_2/ [--det-dir dets/]

Exit codes: 0 success, 1 a check or metric assertion failed, 2 input error,
3 no admissible ground truth for the requested evaluation.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv
from pydantic import ValidationError

from ..eval.average_precision import DEFAULT_CATEGORY, DEFAULT_IOU_THRESHOLD
from ..eval.statistics import DEFAULT_DISTANCE_BINS
from ..exceptions import (
    EmptyGroundTruth,
    EvaluationError,
    KittiFormatError,
    LossError,
    Mono3DError,
    SimulationError,
)
from ..kitti.difficulty import EVALUATED_DIFFICULTIES
from ..scoring.confidence import ScoreMode
from .commands import COMMANDS
from .config import LOG_LEVELS, Command, RunConfig, log_level_from_env, parse_bins

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_EMPTY_GROUND_TRUTH = 3


def setup_parser() -> argparse.ArgumentParser:
    """Sets up the command-line argument parser."""
    parser = argparse.ArgumentParser(prog="mono3d", description="Monocular 3D detection geometry and evaluation toolkit")
    parser.add_argument("command", choices=[c.value for c in Command], help="Command to run")

    # Inputs and outputs
    parser.add_argument("--gt-dir", type=Path, help="Directory of KITTI ground-truth label files")
    parser.add_argument("--det-dir", type=Path, help="Directory of KITTI detection files")
    parser.add_argument("--calib-dir", type=Path, help="Directory of KITTI calibration files")
    parser.add_argument("--pred", type=Path, help="JSON-lines prediction file or directory of *.jsonl files")
    parser.add_argument("--out", type=Path, help="Output directory")

    # Evaluation
    parser.add_argument("--iou", type=float, default=DEFAULT_IOU_THRESHOLD, help=f"IoU threshold (default: {DEFAULT_IOU_THRESHOLD})")
    parser.add_argument("--difficulty", choices=[d.label for d in EVALUATED_DIFFICULTIES], default="moderate", help="Difficulty for error statistics (default: moderate)")
    parser.add_argument("--score-mode", choices=[m.value for m in ScoreMode], default=ScoreMode.RAW.value, help="Ranking key (default: raw)")
    parser.add_argument("--category", default=DEFAULT_CATEGORY, help=f"Evaluated category (default: {DEFAULT_CATEGORY})")
    parser.add_argument("--bins", type=parse_bins, default=DEFAULT_DISTANCE_BINS, help="Distance bin edges in meters (default: 0,20,40)")

    # Simulation / gradient checks
    parser.add_argument("--seed", type=int, default=0, help="Random seed (default: 0)")
    parser.add_argument("--n", type=int, help="Sample or trial count")
    parser.add_argument("--threads", type=int, help="Worker threads (default: $MONO3D_THREADS or 1)")

    # Logging
    parser.add_argument("--log-level", choices=LOG_LEVELS, default=None, help="Logging level (default: $MONO3D_LOG_LEVEL or INFO)")
    parser.add_argument("--log-file", help="Also write the log to this file")

    return parser


def setup_logging(level: str, log_file: Optional[str] = None) -> None:
    """Root logger on stderr (stdout carries the JSON result), plus an optional file."""
    logging.basicConfig(level=getattr(logging, level), format=LOG_FORMAT, stream=sys.stderr, force=True)
    if log_file:
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logging.getLogger().addHandler(file_handler)


def error_payload(error: Exception) -> str:
    """Machine-readable failure description printed on stdout."""
    location = error.location if isinstance(error, KittiFormatError) else None
    return json.dumps(
        {
            "status": "error",
            "error": type(error).__name__,
            "message": str(error),
            "location": location,
        },
        sort_keys=True,
    )


def exit_code_for(error: Exception) -> int:
    """Check and metric failures map to 1; bad input (files, paths, values) to 2."""
    if isinstance(error, EmptyGroundTruth):
        return EXIT_EMPTY_GROUND_TRUTH
    if isinstance(error, (EvaluationError, SimulationError, LossError)):
        return EXIT_FAILED
    return EXIT_INPUT_ERROR


def main(args: Optional[List[str]] = None) -> int:
    """Main entry point for the CLI."""
    load_dotenv()
    parser = setup_parser()
    parsed_args = parser.parse_args(args)
    setup_logging(parsed_args.log_level or log_level_from_env(), parsed_args.log_file)

    try:
        config = RunConfig.from_args(parsed_args)
        result = COMMANDS[config.command](config)
    except (Mono3DError, OSError, ValueError, ValidationError) as e:
        logger.error(f"{parsed_args.command} failed: {e}")
        print(error_payload(e))
        return exit_code_for(e)
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        return EXIT_FAILED

    print(result.to_json())
    logger.info(f"{config.command.value} finished: {'ok' if result.passed else 'checks failed'}")
    return EXIT_OK if result.passed else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
