"""The inputs of one ``dq`` run, as embedded in its report."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

from django.conf import settings

from quadrature.kronrod import QuadratureConfig
from sampling.plans import SamplingPlan
from scalars.core import Mode, Scalar, Tolerance, parse_scalar

COMMANDS = ("check", "recover", "verify", "demo")
CRITERIA = ("algebraic", "matrix", "integrable", "summation", "all")
# written by the run, not part of what reproduces it
OUTPUT_FIELDS = ("out", "function_out", "xlsx")


def _setting(name: str):
    return field(default_factory=lambda: getattr(settings, name))


@dataclass
class RunManifest:
    command: str = "check"
    expr: Optional[str] = None
    series: Optional[str] = None
    builtin: Optional[str] = None
    derivative: Optional[str] = None
    criterion: str = "all"
    variant: str = "triple"
    mode: str = "float"
    pool: Optional[list[str]] = None
    seed: int = _setting("DQ_SEED")
    count: int = _setting("DQ_COUNT")
    min_gap: float = _setting("DQ_MIN_GAP")
    abs_tol: float = _setting("DQ_ABS_TOL")
    rel_tol: float = _setting("DQ_REL_TOL")
    quad_tol: float = _setting("DQ_QUAD_TOL")
    max_subdivisions: int = _setting("DQ_MAX_SUBDIVISIONS")
    fd_step: float = _setting("DQ_FD_STEP")
    constant: str = "0"
    out: Optional[str] = None
    function_out: Optional[str] = None
    xlsx: Optional[str] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.criterion not in CRITERIA:
            raise ValueError(f"unknown criterion {self.criterion!r}")
        self.mode = Mode(self.mode).value
        if self.pool is not None:
            self.pool = list(self.pool)

    @property
    def scalar_mode(self) -> Mode:
        return Mode(self.mode)

    def plan(self) -> SamplingPlan:
        pool = None
        if self.pool is not None:
            pool = tuple(parse_scalar(text, Mode.EXACT) for text in self.pool)
        return SamplingPlan(
            seed=self.seed,
            count=self.count,
            min_gap=self.min_gap,
            mode=self.scalar_mode,
            exact_pool=pool,
        )

    def tolerance(self) -> Tolerance:
        return Tolerance(self.abs_tol, self.rel_tol)

    def quadrature(self) -> QuadratureConfig:
        return QuadratureConfig(self.quad_tol, self.max_subdivisions)

    def constant_value(self) -> Scalar:
        return parse_scalar(self.constant, self.scalar_mode)

    def to_dict(self) -> dict:
        data = dataclasses.asdict(self)
        for name in OUTPUT_FIELDS:
            data.pop(name)
        return data

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], **outputs) -> RunManifest:
        known = {f.name for f in dataclasses.fields(cls)} - set(OUTPUT_FIELDS)
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown manifest fields: {', '.join(sorted(unknown))}")
        return cls(**data, **outputs)

    def with_outputs(self, **outputs) -> RunManifest:
        return dataclasses.replace(self, **outputs)
