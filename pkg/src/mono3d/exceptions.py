"""
Exception hierarchy for the mono3d toolkit.

Every error the library raises on bad input derives from Mono3DError, so
callers (the CLI in particular) can separate input problems from bugs.
"""

from typing import Optional


class Mono3DError(Exception):
    """Base class for all mono3d errors."""
    pass


# --- Geometry ---

class GeometryError(Mono3DError):
    """Base class for camera and box geometry errors."""
    pass


class InvalidProjection(GeometryError):
    """Raised when a projection matrix has the wrong shape or a zero depth row."""
    pass


class NonPositiveDepth(GeometryError):
    """Raised when a point lies on or behind the camera plane."""
    pass


class SingularProjection(GeometryError):
    """Raised when the left 3x3 block of a projection matrix cannot be inverted."""
    pass


class NonPositiveFocal(GeometryError):
    """Raised when a focal entry of a projection matrix is not positive."""
    pass


class DegenerateEncoding(GeometryError):
    """Raised when decoding a (sin, cos) yaw pair that is all zeros."""
    pass


class DegenerateProposal(GeometryError):
    """Raised for 2D boxes with zero or negative width or height."""
    pass


class InvalidSize(GeometryError):
    """Raised when a physical box dimension is not strictly positive."""
    pass


class InvalidFactor(Mono3DError):
    """Raised when a distance factor, focal length or uncertainty is not positive."""
    pass


# --- Losses ---

class LossError(Mono3DError):
    """Base class for loss evaluation errors."""
    pass


class NonPositiveSigma(LossError):
    """Raised when an uncertainty value is zero or negative."""
    pass


class LengthMismatch(LossError):
    """Raised when prediction and target vectors differ in length."""
    pass


class GradientCheckError(LossError):
    """Raised when a gradient check is requested at a non-differentiable point."""
    pass


# --- KITTI files ---

class KittiFormatError(Mono3DError):
    """
    Base class for malformed KITTI-style input.

    Carries the 1-based line number, the offending field name when known,
    and the source path when the text came from a file.
    """

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        field: Optional[str] = None,
        path: Optional[str] = None,
    ):
        self.line = line
        self.field = field
        self.path = path
        super().__init__(message)

    @property
    def location(self) -> str:
        """Human-readable 'file:line' location (either part may be missing)."""
        where = self.path or "<text>"
        if self.line is not None:
            where = f"{where}:{self.line}"
        return where

    def with_path(self, path: str) -> "KittiFormatError":
        """Attach a source path to an error raised by a text-level parser."""
        self.path = path
        return self

    def __str__(self) -> str:
        message = super().__str__()
        if self.field:
            message = f"{message} (field '{self.field}')"
        return f"{self.location}: {message}"


class FieldCountError(KittiFormatError):
    """Raised when a label line does not have 15 or 16 fields."""
    pass


class NumericParseError(KittiFormatError):
    """Raised when a numeric field is not a finite number."""
    pass


class RecordValueError(KittiFormatError):
    """Raised when parsed values violate a record invariant (ranges, sizes)."""
    pass


class MissingKey(KittiFormatError):
    """Raised when a calibration file lacks a required matrix entry."""
    pass


class PredictionSchemaError(KittiFormatError):
    """Raised when a JSON-lines prediction record does not match the schema."""
    pass


# --- Evaluation ---

class EvaluationError(Mono3DError):
    """Base class for metric computation errors."""
    pass


class EmptyGroundTruth(EvaluationError):
    """Raised when AP is requested with no admissible ground truth (AP undefined)."""
    pass


class DegenerateSequence(EvaluationError):
    """Raised when a correlation input is constant or too short."""
    pass


# --- Simulation ---

class SimulationError(Mono3DError):
    """Base class for Monte-Carlo simulation errors."""
    pass


class InsufficientSamples(SimulationError):
    """Raised when a Monte-Carlo statistic has too few samples per class."""
    pass


class Divergence(SimulationError):
    """Raised when an optimizer's loss keeps increasing."""
    pass


# --- Command-line input ---

class InputError(Mono3DError):
    """Raised when a run's inputs are missing or inconsistent."""
    pass


class MissingCalibration(InputError):
    """Raised when an image id has predictions but no calibration file."""
    pass
