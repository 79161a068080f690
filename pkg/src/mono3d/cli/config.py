# src/mono3d/cli/config.py
"""
Run configuration for the `mono3d` command line.

Environment (a `.env` file in the working directory is honoured):
    MONO3D_THREADS    worker threads for per-image evaluation and recovery (default 1)
    MONO3D_LOG_LEVEL  default log level (default INFO)
"""

import argparse
import logging
import os
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Optional, Tuple

from ..eval.average_precision import DEFAULT_CATEGORY, DEFAULT_IOU_THRESHOLD
from ..eval.statistics import DEFAULT_DISTANCE_BINS, bin_ranges
from ..kitti.difficulty import Difficulty
from ..scoring.confidence import ScoreMode

logger = logging.getLogger(__name__)

THREADS_ENV = "MONO3D_THREADS"
LOG_LEVEL_ENV = "MONO3D_LOG_LEVEL"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")
DEFAULT_LOG_LEVEL = "INFO"


class Command(str, Enum):
    RECOVER = "recover"
    EVAL = "eval"
    SIMULATE = "simulate"
    CHECK_GRAD = "check-grad"
    PARSE = "parse"


def threads_from_env() -> int:
    """Positive thread count from MONO3D_THREADS; malformed values fall back to 1."""
    raw = os.environ.get(THREADS_ENV)
    if raw is None or not raw.strip():
        return 1
    try:
        threads = int(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer {THREADS_ENV}={raw!r}")
        return 1
    if threads < 1:
        logger.warning(f"Ignoring non-positive {THREADS_ENV}={threads}")
        return 1
    return threads


def log_level_from_env() -> str:
    level = os.environ.get(LOG_LEVEL_ENV, DEFAULT_LOG_LEVEL).strip().upper()
    return level if level in LOG_LEVELS else DEFAULT_LOG_LEVEL


def parse_bins(text: str) -> Tuple[float, ...]:
    """`"0,20,40"` -> (0.0, 20.0, 40.0), validated as bin edges."""
    try:
        edges = tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bins must be comma-separated numbers, got {text!r}") from None
    try:
        bin_ranges(edges)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None
    return edges


# Paths each command cannot run without.
_REQUIRED_PATHS = {
    Command.RECOVER: ("pred", "calib_dir", "out"),
    Command.EVAL: ("gt_dir", "det_dir"),
    Command.SIMULATE: (),
    Command.CHECK_GRAD: (),
    Command.PARSE: (),
}


@dataclass
class RunConfig:
    """Configuration of one CLI run."""
    command: Command
    # Inputs and outputs
    gt_dir: Optional[Path] = None
    det_dir: Optional[Path] = None
    calib_dir: Optional[Path] = None
    pred: Optional[Path] = None
    out: Optional[Path] = None

    # Evaluation
    iou_thresh: float = DEFAULT_IOU_THRESHOLD
    difficulty: Difficulty = Difficulty.MODERATE
    score_mode: ScoreMode = ScoreMode.RAW
    category: str = DEFAULT_CATEGORY
    bins: Tuple[float, ...] = field(default=DEFAULT_DISTANCE_BINS)

    # Simulation / gradient checks
    seed: int = 0
    n: Optional[int] = None

    threads: int = 1

    def __post_init__(self):
        self.command = Command(self.command)
        self.score_mode = ScoreMode(self.score_mode)
        if not 0.0 < self.iou_thresh <= 1.0:
            raise ValueError(f"iou threshold must lie in (0, 1], got {self.iou_thresh}")
        if self.difficulty is Difficulty.IGNORED:
            raise ValueError("difficulty must be easy, moderate or hard")
        bin_ranges(self.bins)
        if self.n is not None and self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if self.threads < 1:
            raise ValueError(f"threads must be positive, got {self.threads}")
        missing = [name for name in _REQUIRED_PATHS[self.command] if getattr(self, name) is None]
        if missing:
            flags = ", ".join("--" + name.replace("_", "-") for name in missing)
            raise ValueError(f"{self.command.value} requires {flags}")
        if self.command is Command.PARSE and self.gt_dir is None and self.det_dir is None:
            raise ValueError("parse requires --gt-dir or --det-dir")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        return cls(
            command=Command(args.command),
            gt_dir=args.gt_dir,
            det_dir=args.det_dir,
            calib_dir=args.calib_dir,
            pred=args.pred,
            out=args.out,
            iou_thresh=args.iou,
            difficulty=Difficulty.from_name(args.difficulty),
            score_mode=ScoreMode(args.score_mode),
            category=args.category,
            bins=args.bins,
            seed=args.seed,
            n=args.n,
            threads=args.threads if args.threads is not None else threads_from_env(),
        )
