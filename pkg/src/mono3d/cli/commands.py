# src/mono3d/cli/commands.py
"""
Drivers behind the `mono3d` subcommands.

Each driver takes a RunConfig, writes its artifacts and returns a
CommandResult whose summary is printed as JSON. Drivers raise Mono3DError
subclasses on bad input; mapping errors to exit codes is left to `main`.
"""

import json
import logging
from collections import Counter, defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..core.camera import ProjectionMatrix, focal_length
from ..core.distance import recover_box
from ..core.structures import Box3D
from ..eval.average_precision import EvalDetection, MatchedPair, PRCurve, evaluate_ap
from ..eval.iou import bev_iou, iou_3d
from ..eval.report import EvalReport, format_distance_table, format_size_error_table, pr_curve_csv
from ..eval.statistics import (
    distance_binned_error,
    factor_error_correlation,
    match_distance_pairs,
    match_size_pairs,
    yaw_sector_size_error,
)
from ..exceptions import EmptyGroundTruth, InputError, KittiFormatError, MissingCalibration, RecordValueError
from ..kitti.dataset import read_calib_dir, read_label_dir
from ..kitti.difficulty import EVALUATED_DIFFICULTIES, Difficulty, assign_difficulty
from ..kitti.labels import ObjectLabel
from ..kitti.predictions import PredictionRecord, parse_prediction_lines
from ..kitti.writer import write_detections
from ..losses.gradcheck import run_gradient_trials
from ..scoring.confidence import DetectionRecord, ScoreMode
from ..simulate.experiments import ErrorModel
from ..simulate.report import run_simulation
from ..simulate.scene import SceneDistribution
from ..simulate.uncertainty import uncertainty_csv
from .config import Command, RunConfig

logger = logging.getLogger(__name__)

PREDICTION_GLOB = "*.jsonl"
SIDECAR_SUFFIX = ".json"
EVAL_REPORT_FILE = "eval_report.json"
PR_CURVE_FILE = "pr_curve.csv"
SIMULATION_REPORT_FILE = "simulation_report.json"
UNCERTAINTY_PROFILE_FILE = "uncertainty_profile.csv"
PARSE_SUMMARY_FILE = "parse_summary.json"
DEFAULT_SIMULATION_SAMPLES = 100_000
DEFAULT_GRADIENT_TRIALS = 1000


@dataclass
class CommandResult:
    """Machine-readable outcome of a command; `passed` drives the exit code."""
    summary: Dict[str, Any] = field(default_factory=dict)
    passed: bool = True

    def to_json(self) -> str:
        payload = dict(self.summary)
        payload["status"] = "ok" if self.passed else "failed"
        return json.dumps(payload, sort_keys=True)


def dump_json(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def require_dir(path: Path, flag: str) -> Path:
    if not path.is_dir():
        raise InputError(f"{flag} {path} is not a directory")
    return path


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


# --- recover ---


def _prediction_files(pred: Path) -> List[Path]:
    if pred.is_dir():
        return sorted(pred.glob(PREDICTION_GLOB))
    if pred.is_file():
        return [pred]
    raise InputError(f"prediction path {pred} does not exist")


def read_predictions(pred: Path) -> Dict[str, List[PredictionRecord]]:
    """Prediction records grouped by image id; order within an image follows the files."""
    grouped: Dict[str, List[PredictionRecord]] = defaultdict(list)
    for path in _prediction_files(pred):
        try:
            records = parse_prediction_lines(path.read_text(encoding="utf-8", errors="replace"))
        except KittiFormatError as e:
            raise e.with_path(str(path))
        logger.debug(f"Read {len(records)} prediction(s) from {path}")
        for record in records:
            grouped[record.image_id].append(record)
    return dict(grouped)


def recover_image(
    P: ProjectionMatrix, records: List[PredictionRecord]
) -> List[Tuple[DetectionRecord, Box3D]]:
    """3D boxes for one image's predictions."""
    focal = focal_length(P)
    recovered = []
    for record in records:
        det = record.to_detection(focal)
        box = recover_box(P, det.center_kpt, det.factors, det.size, det.yaw)
        recovered.append((det, box))
    return recovered


def sidecar_entry(det: DetectionRecord) -> Dict[str, Any]:
    return {
        "cls": det.cls,
        "score": det.score,
        "composite": det.composite(),
        "H": det.factors.H,
        "h_rec": det.factors.h_rec,
        "sigma_H": det.sigma_H,
        "sigma_hrec": det.sigma_hrec,
    }


def run_recover(config: RunConfig) -> CommandResult:
    """
    Turn JSON-lines predictions into KITTI detection files.

    Writes `<out>/<image_id>.txt` plus `<out>/<image_id>.json`, a sidecar with
    the composite confidence and distance factors of every line.
    """
    predictions = read_predictions(config.pred)
    calibs = read_calib_dir(require_dir(config.calib_dir, "--calib-dir"))
    config.out.mkdir(parents=True, exist_ok=True)
    if not predictions:
        logger.warning(f"No predictions found in {config.pred}")
        return CommandResult({"command": "recover", "images": 0, "objects": 0})

    image_ids = sorted(predictions)
    missing = [image_id for image_id in image_ids if image_id not in calibs]
    if missing:
        raise MissingCalibration(
            f"no calibration in {config.calib_dir} for image(s) {', '.join(missing[:5])}"
            + (" ..." if len(missing) > 5 else "")
        )

    with ThreadPoolExecutor(max_workers=config.threads) as executor:
        results = list(executor.map(lambda i: recover_image(calibs[i], predictions[i]), image_ids))

    objects = 0
    for image_id, recovered in zip(image_ids, results):
        _write(config.out / f"{image_id}.txt", write_detections(recovered))
        _write(config.out / f"{image_id}{SIDECAR_SUFFIX}", dump_json([sidecar_entry(det) for det, _ in recovered]))
        objects += len(recovered)

    logger.info(f"Recovered {objects} object(s) in {len(image_ids)} image(s) into {config.out}")
    return CommandResult({"command": "recover", "images": len(image_ids), "objects": objects})


# --- eval ---


class SidecarEntry(BaseModel):
    """One detection line of a `recover` sidecar; unknown keys are ignored."""
    model_config = ConfigDict(frozen=True, extra="ignore")

    composite: float = Field(..., allow_inf_nan=False, description="Composite ranking key.")
    H: Optional[float] = Field(None, gt=0, description="Physical height factor (meters).")
    h_rec: Optional[float] = Field(None, gt=0, description="Reciprocal visual height factor (1/pixels).")


def _read_sidecar(det_dir: Path, image_id: str, expected: int) -> Optional[List[SidecarEntry]]:
    path = det_dir / f"{image_id}{SIDECAR_SUFFIX}"
    if not path.is_file():
        return None
    try:
        entries = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise RecordValueError(f"invalid sidecar JSON: {e.msg}", line=e.lineno, path=str(path)) from None
    if not isinstance(entries, list) or len(entries) != expected:
        raise InputError(f"{path} does not list one entry per detection line ({expected})")
    parsed = []
    for index, entry in enumerate(entries):
        try:
            parsed.append(SidecarEntry.model_validate(entry))
        except ValidationError as e:
            first = e.errors()[0]
            field = ".".join(str(part) for part in first.get("loc", ())) or None
            raise RecordValueError(
                f"invalid sidecar entry: {first.get('msg', str(e))}", line=index + 1, field=field, path=str(path)
            ) from None
    return parsed


def load_eval_detections(
    det_dir: Path, mode: ScoreMode
) -> Dict[str, List[EvalDetection]]:
    """
    Detection files as EvalDetections. Composite ranking needs the sidecar
    written by `recover`; factors are taken from it when present.
    """
    labels = read_label_dir(det_dir)
    detections: Dict[str, List[EvalDetection]] = {}
    for image_id, image_labels in labels.items():
        sidecar = _read_sidecar(det_dir, image_id, len(image_labels))
        if sidecar is None and mode is ScoreMode.COMPOSITE and image_labels:
            raise InputError(f"composite scoring needs {det_dir / (image_id + SIDECAR_SUFFIX)}")
        dets = []
        for index, label in enumerate(image_labels):
            if label.is_dontcare:
                continue
            entry = sidecar[index] if sidecar is not None else None
            score = label.score if label.score is not None else 1.0
            key = entry.composite if mode is ScoreMode.COMPOSITE and entry is not None else score
            dets.append(EvalDetection(
                category=label.category,
                box=label.box3d,
                key=key,
                H=entry.H if entry is not None else None,
                h_rec=entry.h_rec if entry is not None else None,
            ))
        detections[image_id] = dets
    return detections


def _safe_ap(dets, gts, iou_fn, config: RunConfig, difficulty: Difficulty):
    try:
        return evaluate_ap(dets, gts, iou_fn, config.iou_thresh, difficulty, config.category, config.threads)
    except EmptyGroundTruth as e:
        logger.warning(str(e))
        return None


def evaluate(
    gts: Dict[str, List[ObjectLabel]],
    dets: Dict[str, List[EvalDetection]],
    config: RunConfig,
    focals: Optional[Dict[str, float]] = None,
) -> Tuple[EvalReport, PRCurve]:
    """EvalReport at every difficulty plus the 3D PR curve at the requested one."""
    ap_3d: Dict[str, Optional[float]] = {}
    ap_bev: Dict[str, Optional[float]] = {}
    requested = None
    for difficulty in EVALUATED_DIFFICULTIES:
        result_3d = _safe_ap(dets, gts, iou_3d, config, difficulty)
        result_bev = _safe_ap(dets, gts, bev_iou, config, difficulty)
        ap_3d[difficulty.label] = None if result_3d is None else result_3d.ap
        ap_bev[difficulty.label] = None if result_bev is None else result_bev.ap
        if difficulty is config.difficulty:
            requested = result_3d

    if requested is None:
        raise EmptyGroundTruth(
            f"no {config.category} ground truth at difficulty {config.difficulty.label} or easier"
        )

    matches: List[MatchedPair] = requested.matches
    report = EvalReport(
        category=config.category,
        difficulty=config.difficulty.label,
        iou_thresh=config.iou_thresh,
        score_mode=config.score_mode.value,
        ap_3d=ap_3d,
        ap_bev=ap_bev,
        distance_bins=distance_binned_error(match_distance_pairs(matches), config.bins),
        size_errors=yaw_sector_size_error(match_size_pairs(matches)),
        pcc=factor_error_correlation(matches, focals or {}),
    )
    return report, requested.curve


def run_eval(config: RunConfig) -> CommandResult:
    """AP_3D / AP_BEV per difficulty with distance-binned and size errors."""
    gts = read_label_dir(require_dir(config.gt_dir, "--gt-dir"))
    dets = load_eval_detections(require_dir(config.det_dir, "--det-dir"), config.score_mode)
    focals = None
    if config.calib_dir is not None:
        calibs = read_calib_dir(require_dir(config.calib_dir, "--calib-dir"))
        focals = {image_id: focal_length(P) for image_id, P in calibs.items()}

    report, curve = evaluate(gts, dets, config, focals)
    logger.info(
        f"Distance errors ({config.category}, {config.difficulty.label}):\n"
        f"{format_distance_table(report.distance_bins)}"
    )
    logger.info(f"Size errors by yaw sector:\n{format_size_error_table(report.size_errors)}")

    summary: Dict[str, Any] = {"command": "eval", "ap_3d": report.ap_3d, "ap_bev": report.ap_bev}
    if config.out is not None:
        _write(config.out / EVAL_REPORT_FILE, report.to_json())
        _write(config.out / PR_CURVE_FILE, pr_curve_csv(curve))
        summary["report"] = str(config.out / EVAL_REPORT_FILE)
    else:
        summary["report"] = report.model_dump(mode="json")
    return CommandResult(summary)


# --- simulate ---


def run_simulate(config: RunConfig) -> CommandResult:
    """Monte-Carlo checks with the default scene and error model; fails if any check fails."""
    n = config.n or DEFAULT_SIMULATION_SAMPLES
    report = run_simulation(SceneDistribution(seed=config.seed), ErrorModel(), n)
    summary: Dict[str, Any] = {"command": "simulate", "n": n, "seed": config.seed, "failures": report.failures}
    if config.out is not None:
        _write(config.out / SIMULATION_REPORT_FILE, report.to_json())
        _write(config.out / UNCERTAINTY_PROFILE_FILE, uncertainty_csv(report.uncertainty_profile))
        summary["report"] = str(config.out / SIMULATION_REPORT_FILE)
    logger.info(f"Simulation with n={n}, seed={config.seed}: {'passed' if report.passed else 'FAILED'}")
    return CommandResult(summary, passed=report.passed)


# --- check-grad ---


def run_check_grad(config: RunConfig) -> CommandResult:
    """Analytic against finite-difference gradients of the uncertainty L1 loss."""
    trials = config.n or DEFAULT_GRADIENT_TRIALS
    report = run_gradient_trials(trials, seed=config.seed)
    summary = {
        "command": "check-grad",
        "trials": report.trials,
        "seed": report.seed,
        "max_relative_error": report.max_relative_error,
        "tolerance": report.tolerance,
    }
    return CommandResult(summary, passed=report.passed)


# --- parse ---


def summarize_labels(labels: Dict[str, List[ObjectLabel]]) -> Dict[str, Any]:
    """File, object, category and difficulty counts of a label directory."""
    categories: Counter = Counter()
    difficulties: Counter = Counter()
    for image_labels in labels.values():
        for label in image_labels:
            categories[label.category] += 1
            if not label.is_dontcare:
                difficulties[assign_difficulty(label).label] += 1
    return {
        "files": len(labels),
        "objects": sum(categories.values()),
        "categories": dict(sorted(categories.items())),
        "difficulties": dict(sorted(difficulties.items())),
    }


def run_parse(config: RunConfig) -> CommandResult:
    """Validate label/detection directories and count their contents."""
    summary: Dict[str, Any] = {"command": "parse"}
    for name, directory in (("gt", config.gt_dir), ("det", config.det_dir)):
        if directory is None:
            continue
        labels = read_label_dir(require_dir(directory, f"--{name}-dir"))
        if not labels:
            logger.warning(f"No label files in {directory}")
        summary[name] = summarize_labels(labels)
    if config.out is not None:
        _write(config.out / PARSE_SUMMARY_FILE, dump_json(summary))
    return CommandResult(summary)


COMMANDS = {
    Command.RECOVER: run_recover,
    Command.EVAL: run_eval,
    Command.SIMULATE: run_simulate,
    Command.CHECK_GRAD: run_check_grad,
    Command.PARSE: run_parse,
}
