import math
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator

from configs.general_constants import (
    FIT_T_MIN, FIT_WINDOW_FRACTION, LOWER_REL_TOL, MIN_FIT_POINTS, UPPER_REL_TOL
)
from src.fronts.tracking import FrontTrace, species_label
from src.theory.bounds import SpeedBounds


class SpeedEstimate(BaseModel):
    speed: float
    intercept: float
    fit_window: tuple[float, float]
    residual_rms: float = Field(ge=0)
    n_points: int = Field(ge=MIN_FIT_POINTS)

    @model_validator(mode='after')
    def check_window(self):
        if self.fit_window[0] > self.fit_window[1]:
            raise ValueError(f'fit window {self.fit_window} is reversed')
        return self


def estimate_speed(trace: FrontTrace, window_fraction=FIT_WINDOW_FRACTION, t_min=FIT_T_MIN) -> SpeedEstimate:
    """
    取最后 window_fraction 比例且 t >= t_min 的样本做最小二乘直线拟合

    Returns:
        SpeedEstimate，speed 为斜率（向左运动的前沿为负）
    """
    if not 0 < window_fraction <= 1:
        raise ValueError(f'window_fraction must lie in (0, 1] (got {window_fraction})')
    samples = trace.samples
    n_tail = math.ceil(window_fraction * len(samples))
    window = [(t, x) for t, x in samples[len(samples) - n_tail:] if t >= t_min]
    if len(window) < MIN_FIT_POINTS:
        raise ValueError(
            f'{trace.label}/{trace.direction}: need at least {MIN_FIT_POINTS} samples in the fit window, '
            f'got {len(window)}'
        )

    t, x = np.asarray(window, dtype=float).T
    t_mean, x_mean = t.mean(), x.mean()
    centered = t - t_mean
    slope = float(np.dot(centered, x - x_mean) / np.dot(centered, centered))
    intercept = float(x_mean - slope * t_mean)
    residual = x - (slope * t + intercept)
    return SpeedEstimate(
        speed=slope,
        intercept=intercept,
        fit_window=(float(t[0]), float(t[-1])),
        residual_rms=float(np.sqrt(np.mean(residual ** 2))),
        n_points=len(window),
    )


class BoundCheck(BaseModel):
    kind: Literal['lower', 'upper']
    bound: float
    tolerance: float
    source: Optional[str] = None
    passed: bool


class SpeciesVerdict(BaseModel):
    species: str
    measured: float
    lower: Optional[float]
    upper: Optional[float]
    checks: list[BoundCheck]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


class SpreadingReport(BaseModel):
    entries: list[SpeciesVerdict]

    @property
    def passed(self) -> bool:
        return all(entry.passed for entry in self.entries)

    def for_species(self, label):
        return next((entry for entry in self.entries if entry.species == label), None)


def check_against_bounds(measured, lower=None, upper=None, lower_tol=None, upper_tol=None,
                         lower_source=None, upper_source=None) -> list:
    checks = []
    if lower is not None:
        tol = LOWER_REL_TOL * lower if lower_tol is None else lower_tol
        checks.append(BoundCheck(kind='lower', bound=lower, tolerance=tol, source=lower_source,
                                 passed=measured >= lower - tol))
    if upper is not None:
        tol = UPPER_REL_TOL * upper if upper_tol is None else upper_tol
        checks.append(BoundCheck(kind='upper', bound=upper, tolerance=tol, source=upper_source,
                                 passed=measured <= upper + tol))
    return checks


def spreading_verdict(estimates: dict, bounds: SpeedBounds, lower_tol=None, upper_tol=None) -> SpreadingReport:
    """
    把测得速度与理论界逐项比较

    Args:
        estimates: 物种下标 -> SpeedEstimate，比较时取速度绝对值
        bounds: theory.speed_bounds 的结果
        lower_tol / upper_tol: 绝对容差；为空时按界的相对比例取
    """
    entries = []
    for species, estimate in sorted(estimates.items()):
        measured = abs(estimate.speed)
        lower = bounds.lower[species]
        upper = bounds.upper[species]
        entries.append(SpeciesVerdict(
            species=species_label(species),
            measured=measured,
            lower=lower,
            upper=upper,
            checks=check_against_bounds(measured, lower, upper, lower_tol, upper_tol,
                                        bounds.lower_source[species], bounds.upper_source[species]),
        ))
    return SpreadingReport(entries=entries)


class SpeedRecord(BaseModel):
    """speeds.jsonl 的一行"""
    species: str
    direction: str
    level: float = Field(serialization_alias='lambda')
    speed: float
    residual_rms: float
    window_start: float
    window_end: float
    verdicts: list[BoundCheck]
