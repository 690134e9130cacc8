"""
The four ``dq`` commands: criterion checks, recovery, forward verification
and the built-in demos. Each returns a RunOutcome holding the JSON report.
"""
from __future__ import annotations

import functools
import json
import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from django.conf import settings

from criteria.algebraic import run_algebraic
from criteria.integrable import run_integrable
from criteria.matrix import run_matrix
from criteria.series import load_series, run_summation
from criteria.verdicts import CriterionReport, Verdict, jsonable, overall_verdict
from expressions.evaluator import Expression
from expressions.nodes import Arity
from recovery.functions import (
    RecoveredFunction,
    equispaced,
    recover_algebraic,
    recover_integral,
    recover_series,
)
from scalars.core import Mode, Scalar
from verification.checks import partials_identity_check, roundtrip_check
from verification.quotients import dq_of

from .demos import BUILTINS, Subject, demo_manifest
from .manifest import RunManifest

logger = logging.getLogger(__name__)

EXIT_CODES = {
    Verdict.ACCEPT: 0,
    Verdict.REJECT: 1,
    Verdict.INCONCLUSIVE: 2,
}
USAGE_ERROR = 3


@dataclass
class RunOutcome:
    manifest: RunManifest
    verdict: Verdict
    criteria: list[CriterionReport]
    recovered: Optional[RecoveredFunction] = None
    points: list[Scalar] = field(default_factory=list)
    roundtrip: Optional[CriterionReport] = None
    partials: Optional[CriterionReport] = None
    wall_time: Optional[float] = None

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict]

    def recovery_summary(self) -> Optional[dict]:
        if self.recovered is None:
            return None
        summary = self.recovered.as_dict()
        summary["table"] = jsonable(self.recovered.table(self.points))
        return summary

    def to_dict(self) -> dict:
        return {
            "manifest": self.manifest.to_dict(),
            "verdict": self.verdict.value,
            "criteria": [report.to_dict() for report in self.criteria],
            "recovery": self.recovery_summary(),
            "roundtrip": self.roundtrip.to_dict() if self.roundtrip else None,
            "partials": self.partials.to_dict() if self.partials else None,
            "wall_time": self.wall_time,
        }

    def render(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def load_subject(manifest: RunManifest) -> Subject:
    sources = [
        name for name in ("expr", "series", "builtin") if getattr(manifest, name) is not None
    ]
    if len(sources) != 1:
        raise ValueError("give exactly one of --expr, --series or --builtin")
    if manifest.builtin is not None:
        if manifest.builtin not in BUILTINS:
            raise ValueError(f"unknown builtin {manifest.builtin!r}")
        return BUILTINS[manifest.builtin](manifest)
    if manifest.series is not None:
        series = load_series(manifest.series, manifest.scalar_mode)
        return Subject(series, series)
    return Subject(Expression(manifest.expr, Arity.BIVARIATE))


def selected_criteria(manifest: RunManifest, has_series: bool) -> list[str]:
    # DQ_f built from f alone has no values on the diagonal
    diagonal = not (manifest.command == "verify" and manifest.derivative is None)
    if manifest.criterion != "all":
        if manifest.criterion == "summation" and not has_series:
            raise ValueError("the summation criterion needs a coefficient series")
        if manifest.criterion == "integrable" and not diagonal:
            raise ValueError("verify needs --derivative for the integrable criterion")
        return [manifest.criterion]
    names = ["algebraic", "matrix"]
    if manifest.scalar_mode is Mode.FLOAT and diagonal:
        names.append("integrable")
    if has_series:
        names.append("summation")
    return names


def run_criteria(manifest: RunManifest, subject: Subject) -> list[CriterionReport]:
    plan, tol = manifest.plan(), manifest.tolerance()
    runners: dict[str, Callable[[], CriterionReport]] = {
        "algebraic": lambda: run_algebraic(subject.H, plan, tol, manifest.variant),
        "matrix": lambda: run_matrix(subject.H, plan, tol),
        "integrable": lambda: run_integrable(subject.H, plan, tol, manifest.quadrature()),
        "summation": lambda: run_summation(subject.series, tol),
    }
    return [runners[name]() for name in selected_criteria(manifest, subject.series is not None)]


def recovery_points(manifest: RunManifest) -> list[Scalar]:
    plan = manifest.plan()
    if plan.mode is Mode.EXACT and plan.exact_pool:
        return sorted({x for x in plan.exact_pool if 0 <= x <= 1})
    return equispaced(plan.mode)


def recover(
    manifest: RunManifest, subject: Subject, reports: list[CriterionReport]
) -> RecoveredFunction:
    """Recovery matching the criterion that accepted H."""
    C = manifest.constant_value()
    criterion = manifest.criterion
    if criterion == "all":
        criterion = "summation" if subject.series is not None else "algebraic"
    if criterion == "integrable":
        return recover_integral(subject.H, C, manifest.quadrature())
    if criterion == "summation":
        summation = next(report for report in reports if report.criterion == "summation")
        return recover_series(summation.details["profile"], C, subject.series.order)
    return recover_algebraic(subject.H, C)


def _timed(command: Callable[[RunManifest], RunOutcome]):
    @functools.wraps(command)
    def run(manifest: RunManifest) -> RunOutcome:
        started = time.perf_counter()
        outcome = command(manifest)
        if settings.DQ_REPORT_WALL_TIME:
            outcome.wall_time = time.perf_counter() - started
        logger.info("%s finished: %s", manifest.command, outcome.verdict.value)
        return outcome

    return run


@_timed
def cmd_check(manifest: RunManifest) -> RunOutcome:
    subject = load_subject(manifest)
    reports = run_criteria(manifest, subject)
    return RunOutcome(manifest, overall_verdict(reports), reports)


@_timed
def cmd_recover(manifest: RunManifest) -> RunOutcome:
    """
    Criterion, then recovery, then the round trip; a rejected or
    inconclusive criterion stops before recovery.
    """
    subject = load_subject(manifest)
    reports = run_criteria(manifest, subject)
    verdict = overall_verdict(reports)
    if verdict is not Verdict.ACCEPT:
        return RunOutcome(manifest, verdict, reports)
    recovered = recover(manifest, subject, reports)
    roundtrip = roundtrip_check(
        subject.H, recovered, manifest.plan(), manifest.tolerance()
    )
    return RunOutcome(
        manifest,
        roundtrip.verdict,
        reports,
        recovered=recovered,
        points=recovery_points(manifest),
        roundtrip=roundtrip,
    )


@_timed
def cmd_verify(manifest: RunManifest) -> RunOutcome:
    """DQ_f of a univariate --expr through the criteria, plus the partials identity when f' is given."""
    if manifest.expr is None:
        raise ValueError("verify needs a univariate --expr")
    f = Expression(manifest.expr, Arity.UNIVARIATE)
    fprime = None
    if manifest.derivative is not None:
        fprime = Expression(manifest.derivative, Arity.UNIVARIATE)
    reports = run_criteria(manifest, Subject(dq_of(f, fprime)))
    partials = None
    if fprime is not None and manifest.scalar_mode is Mode.FLOAT:
        partials = partials_identity_check(
            f, fprime, manifest.plan(), manifest.fd_step, manifest.tolerance()
        )
    verdict = overall_verdict(reports + ([partials] if partials else []))
    return RunOutcome(manifest, verdict, reports, partials=partials)


def cmd_demo(manifest: RunManifest) -> RunOutcome:
    """Pinned recover run of a built-in example."""
    if manifest.builtin is None:
        raise ValueError("demo needs a name: dirichlet, avg-exp or xexp")
    pinned = demo_manifest(manifest.builtin).with_outputs(
        out=manifest.out, function_out=manifest.function_out, xlsx=manifest.xlsx
    )
    return cmd_recover(pinned)


COMMANDS: dict[str, Callable[[RunManifest], RunOutcome]] = {
    "check": cmd_check,
    "recover": cmd_recover,
    "verify": cmd_verify,
    "demo": cmd_demo,
}


def run(manifest: RunManifest) -> RunOutcome:
    return COMMANDS[manifest.command](manifest)
