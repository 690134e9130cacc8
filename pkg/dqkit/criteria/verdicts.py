"""Verdicts and per-run reports shared by every checker."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Iterable, Optional

from scalars.core import Mode, QRootTwo, Scalar, Tolerance, format_scalar
from scalars.exceptions import DQError, ModeError

logger = logging.getLogger(__name__)


class Verdict(str, Enum):
    ACCEPT = "accept"
    REJECT = "reject"
    INCONCLUSIVE = "inconclusive"


def jsonable(value: Any) -> Any:
    """Plain JSON data; exact scalars become their text form."""
    if isinstance(value, QRootTwo):
        return format_scalar(value)
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(key): jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(item) for item in value]
    if hasattr(value, "as_dict"):
        return jsonable(value.as_dict())
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    if isinstance(value, Fraction):
        return format_scalar(QRootTwo(value))
    return float(value)


@dataclass
class SampleResidual:
    sample: tuple
    residual: Optional[Scalar]
    passed: Optional[bool]
    note: str = ""

    def as_dict(self) -> dict:
        return {
            "sample": jsonable(self.sample),
            "residual": jsonable(self.residual),
            "passed": self.passed,
            "note": self.note,
        }


@dataclass
class CriterionReport:
    criterion: str
    verdict: Verdict
    samples_checked: int
    max_residual: Optional[Scalar]
    witness: Optional[tuple]
    tolerance: Tolerance
    mode: Mode
    notes: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)
    samples: list[SampleResidual] = field(default_factory=list)

    @property
    def all_residuals_zero(self) -> Optional[bool]:
        """Exact runs only: every evaluated residual vanished."""
        if self.mode is not Mode.EXACT:
            return None
        residuals = [row.residual for row in self.samples if row.residual is not None]
        return bool(residuals) and not any(residuals)

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "verdict": self.verdict.value,
            "mode": self.mode.value,
            "samples_checked": self.samples_checked,
            "max_residual": jsonable(self.max_residual),
            "all_residuals_zero": self.all_residuals_zero,
            "witness": jsonable(self.witness),
            "tolerance": self.tolerance.as_dict(),
            "notes": list(self.notes),
            "details": jsonable(self.details),
            "samples": [row.as_dict() for row in self.samples],
        }


class SampleLedger:
    """
    Collects per-sample outcomes of one checker run and draws the verdict.

    Any failing sample rejects, with the worst failing sample as witness.
    Otherwise a sample that could not be evaluated leaves the run
    inconclusive; accept needs every sample evaluated and passing.
    """

    def __init__(self, criterion: str, tolerance: Tolerance, mode: Mode):
        self.criterion = criterion
        self.tolerance = tolerance
        self.mode = mode
        self.rows: list[SampleResidual] = []
        self.notes: list[str] = []

    def record(self, sample: tuple, residual: Scalar, passed: bool, note: str = ""):
        self.rows.append(SampleResidual(sample, residual, passed, note))
        if not passed:
            logger.debug("%s: sample %r fails with residual %r", self.criterion, sample, residual)

    def skip(self, sample: tuple, error: DQError | str):
        self.rows.append(SampleResidual(sample, None, None, str(error)))
        logger.warning("%s: sample %r could not be checked: %s", self.criterion, sample, error)

    def attempt(self, sample: tuple, check) -> None:
        """Run ``check()``, recording evaluation failures as inconclusive samples."""
        try:
            check()
        except ModeError:
            raise
        except DQError as exc:
            self.skip(sample, exc)

    @staticmethod
    def _worst(rows: Iterable[SampleResidual]) -> Optional[SampleResidual]:
        worst = None
        for row in rows:
            # earliest sample wins ties
            if worst is None or abs(row.residual) > abs(worst.residual):
                worst = row
        return worst

    def report(self, notes: Iterable[str] = (), details: Optional[dict] = None) -> CriterionReport:
        evaluated = [row for row in self.rows if row.residual is not None]
        failing = [row for row in evaluated if not row.passed]
        skipped = len(self.rows) - len(evaluated)
        notes = self.notes + list(notes)

        worst = self._worst(evaluated)
        if failing:
            verdict = Verdict.REJECT
            witness = self._worst(failing).sample
        elif skipped or not evaluated:
            verdict = Verdict.INCONCLUSIVE
            witness = worst.sample if worst else None
        else:
            verdict = Verdict.ACCEPT
            witness = worst.sample
        if skipped:
            notes.append(f"{skipped} of {len(self.rows)} samples could not be evaluated")
        if not self.rows:
            notes.append("no samples were checked")

        report = CriterionReport(
            criterion=self.criterion,
            verdict=verdict,
            samples_checked=len(evaluated),
            max_residual=abs(worst.residual) if worst else None,
            witness=witness,
            tolerance=self.tolerance,
            mode=self.mode,
            notes=notes,
            details=details or {},
            samples=self.rows,
        )
        logger.info(
            "%s: %s over %d samples, max residual %s",
            self.criterion,
            verdict.value,
            report.samples_checked,
            jsonable(report.max_residual),
        )
        return report


def overall_verdict(reports: Iterable[CriterionReport]) -> Verdict:
    verdicts = {report.verdict for report in reports}
    if Verdict.REJECT in verdicts:
        return Verdict.REJECT
    if Verdict.INCONCLUSIVE in verdicts or not verdicts:
        return Verdict.INCONCLUSIVE
    return Verdict.ACCEPT
