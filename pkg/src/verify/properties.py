import math
from typing import Optional

import numpy as np
from pydantic import BaseModel, model_validator

from configs.general_constants import (
    BOX_TOLERANCE, CONVERGENCE_TOLERANCE, FLOOR_TOLERANCE, ORDER_TOLERANCE
)
from configs.logging_config import logger
from src.fronts.tracking import cone_mask, outer_supremum
from src.models.fisher_model import FisherModel
from src.models.schemas import CoopParams, FisherParams, SolutionBox
from src.solver.initial import InitialCondition, build_initial_state
from src.solver.observers import SnapshotRecorder
from src.solver.stepper import integrate
from src.theory.bounds import coop_lower_speed, fisher_speed


class PropertyResult(BaseModel):
    name: str
    passed: bool
    worst_violation: float
    location: Optional[tuple[float, float]] = None
    tolerance: float
    detail: str = ''

    @model_validator(mode='after')
    def check_consistency(self):
        if self.passed != (self.worst_violation <= self.tolerance):
            raise ValueError(f'{self.name}: passed={self.passed} disagrees with '
                             f'worst_violation={self.worst_violation} vs tolerance={self.tolerance}')
        return self

    @classmethod
    def from_violation(cls, name, worst, tolerance, location=None, detail=''):
        worst = float(worst)
        result = cls(name=name, passed=worst <= tolerance, worst_violation=worst,
                     location=location, tolerance=tolerance, detail=detail)
        log = logger.info if result.passed else logger.warning
        log(f'{name}: worst_violation={worst:.3e} tolerance={tolerance:.1e} passed={result.passed}')
        return result


class WorstTracker:
    """跟踪最大违反量及其 (t, x) 位置"""

    def __init__(self):
        self.value = 0.0
        self.location = None

    def update(self, state, excess):
        index = int(np.argmax(excess))
        if excess[index] > self.value:
            self.value = float(excess[index])
            self.location = (float(state.t), float(state.x[index]))


def snapshots_of(model, ic, g, ctrl):
    recorder = SnapshotRecorder()
    integrate(model, ic, g, ctrl, observers=[recorder])
    return recorder.records()


def comparison_order_check(model, lower_ic: InitialCondition, upper_ic: InitialCondition, g, ctrl,
                           order='below', name='comparison_order') -> PropertyResult:
    """
    比较原理：初值有序则解在所有快照上保持有序

    order='below' 表示第一组解应不超过第二组；'above' 表示相反，两者交换后结论一致。
    """
    if order == 'above':
        lower_ic, upper_ic = upper_ic, lower_ic
    elif order != 'below':
        raise ValueError(f'order must be "below" or "above" (got {order!r})')

    lower0 = build_initial_state(lower_ic, g, model.n_species)
    upper0 = build_initial_state(upper_ic, g, model.n_species)
    for k, (low, high) in enumerate(zip(lower0.species, upper0.species)):
        if np.any(low > high):
            raise ValueError(f'initial data are not ordered for species {k + 1}')

    worst = WorstTracker()
    for low_state, high_state in zip(snapshots_of(model, lower_ic, g, ctrl), snapshots_of(model, upper_ic, g, ctrl)):
        for low, high in zip(low_state.species, high_state.species):
            worst.update(low_state, low - high)
    return PropertyResult.from_violation(name, worst.value, ORDER_TOLERANCE, worst.location)


def bounds_invariant_check(snapshots, box: SolutionBox, name='bounds_invariant') -> PropertyResult:
    """0 <= u_i <= E_i 在每个记录节点上成立"""
    worst = WorstTracker()
    for state in snapshots:
        for values, upper in zip(state.species, box.bounds):
            worst.update(state, np.maximum(values - upper, -values))
    return PropertyResult.from_violation(name, worst.value, BOX_TOLERANCE, worst.location)


def tail_of(snapshots, t_tail):
    tail = [state for state in snapshots if state.t >= t_tail]
    if not tail:
        raise ValueError(f't_tail={t_tail} lies beyond the last snapshot')
    return tail


def convergence_to_K_check(snapshots, params: CoopParams, c, t_tail,
                           tolerance=CONVERGENCE_TOLERANCE, name='convergence_to_K') -> PropertyResult:
    """锥 |x| < c*t 内的 inf 与 sup 都收敛到 (k1, k2)，要求 c < c*"""
    c_star = coop_lower_speed(params)
    if c >= c_star:
        raise ValueError(f'cone slope c={c} must be below c*={c_star}')

    worst = WorstTracker()
    for state in tail_of(snapshots, t_tail):
        inside = cone_mask(state, c)
        for k, target in enumerate((params.k1, params.k2)):
            deviation = np.where(inside, np.abs(state.species[k] - target), 0.0)
            worst.update(state, deviation)
    return PropertyResult.from_violation(name, worst.value, tolerance, worst.location,
                                         detail=f'c={c}, c*={c_star}, t_tail={t_tail}')


def u1_floor_check(snapshots, params: CoopParams, c, t_tail,
                   tolerance=FLOOR_TOLERANCE, name='u1_floor') -> PropertyResult:
    """c < 2*sqrt(d1 r1) 时锥内 u1 的下确界不低于 1"""
    c1 = fisher_speed(params.d1, params.r1)
    if c >= c1:
        raise ValueError(f'cone slope c={c} must be below 2*sqrt(d1*r1)={c1}')

    worst = WorstTracker()
    for state in tail_of(snapshots, t_tail):
        inside = cone_mask(state, c)
        worst.update(state, np.where(inside, 1.0 - state.species[0], -np.inf))
    return PropertyResult.from_violation(name, max(worst.value, 0.0), tolerance, worst.location,
                                         detail=f'c={c}, c1={c1}')


def dominating_fisher_model(params: CoopParams) -> FisherModel:
    """u2 的上解所满足的 logistic 方程：d=d2, r=r2*k2, K=k2"""
    return FisherModel(FisherParams(d=params.d2, r=params.r2 * params.k2, K=params.k2))


def upper_comparison_check(u_snapshots, w_snapshots, species=1, name='upper_comparison') -> PropertyResult:
    """逐快照检查 u_species <= w"""
    worst = WorstTracker()
    for u_state, w_state in zip(u_snapshots, w_snapshots):
        if not math.isclose(u_state.t, w_state.t, abs_tol=1e-12):
            raise ValueError(f'snapshot times differ: {u_state.t} vs {w_state.t}')
        worst.update(u_state, u_state.species[species] - w_state.species[0])
    return PropertyResult.from_violation(name, worst.value, ORDER_TOLERANCE, worst.location)


def outer_decay_check(snapshots, species, c, t_tail, tolerance, name='outer_decay') -> PropertyResult:
    """锥外 |x| > c*t 的上确界在 t >= t_tail 后不超过 tolerance"""
    worst = WorstTracker()
    for state in tail_of(snapshots, t_tail):
        if outer_supremum(state, species, c) <= worst.value:
            continue
        outside = np.abs(state.x) > c * state.t
        worst.update(state, np.where(outside, state.species[species], 0.0))
    return PropertyResult.from_violation(name, worst.value, tolerance, worst.location, detail=f'c={c}')


def speed_window_check(name, measured, low=None, high=None) -> PropertyResult:
    """测得速度落在 [low, high] 内；越界距离作为违反量"""
    excess = 0.0
    if low is not None:
        excess = max(excess, low - measured)
    if high is not None:
        excess = max(excess, measured - high)
    return PropertyResult.from_violation(name, excess, 0.0, detail=f'measured={measured:.6f}, window=[{low}, {high}]')


def clamp_free_check(diagnostics, name='positivity') -> PropertyResult:
    return PropertyResult.from_violation(name, diagnostics.clamp_count, 0.0,
                                         detail=f'clamp_count={diagnostics.clamp_count}')
