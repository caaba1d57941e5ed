import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from configs.general_constants import BOUNDARY_GUARD_CELLS, DEFAULT_SAFETY, DEFAULT_SNAPSHOT_EVERY
from configs.logging_config import logger
from src.exceptions import CFLViolationError, NonFiniteStateError
from src.fronts.tracking import level_position, species_label
from src.solver.grid import FieldState, Grid1D, cfl_max_dt, laplacian_apply
from src.solver.initial import InitialCondition, build_initial_state


class StepControl(BaseModel):
    """时间推进控制；dt 为空时取 safety 折算后的 CFL 上限"""
    model_config = ConfigDict(frozen=True, extra='forbid')

    dt: Optional[float] = Field(default=None, gt=0)
    t_end: float = Field(ge=0)
    snapshot_every: float = Field(default=DEFAULT_SNAPSHOT_EVERY, gt=0)
    safety: float = Field(default=DEFAULT_SAFETY, gt=0, le=1)

    def resolve_dt(self, grid: Grid1D, d_max) -> float:
        limit = cfl_max_dt(grid, d_max, self.safety)
        if self.dt is None:
            return limit
        if self.dt > limit * (1 + 1e-12):
            raise CFLViolationError(self.dt, limit)
        return self.dt

    def schedule(self, grid: Grid1D, d_max):
        """
        把快照间隔等分成整数步

        Returns:
            (实际步长, 每个快照间隔的步数, 总步数)
        """
        dt = self.resolve_dt(grid, d_max)
        stride = max(1, math.ceil(self.snapshot_every / dt - 1e-9))
        dt_eff = self.snapshot_every / stride
        n_steps = math.ceil(self.t_end / dt_eff - 1e-9) if self.t_end > 0 else 0
        return dt_eff, stride, n_steps


class SnapshotDiagnostic(BaseModel):
    t: float
    steps: int
    clamped: int
    boundary_contaminated: bool


class RunDiagnostics(BaseModel):
    steps: int = 0
    clamp_count: int = 0
    boundary_contaminated: bool = False
    dt: float = 0.0
    snapshots: list[SnapshotDiagnostic] = Field(default_factory=list)


@dataclass
class IntegrationResult:
    final_state: FieldState
    records: dict = field(default_factory=dict)
    diagnostics: RunDiagnostics = field(default_factory=RunDiagnostics)


def step_explicit(model, state: FieldState, dt) -> FieldState:
    """前向 Euler 一步：u += dt*(d*Lap(u) + f(u))，负值截断为 0 并计数"""
    grid = state.grid
    dt_max = cfl_max_dt(grid, model.max_diffusion, 1.0)
    if dt <= 0 or dt > dt_max * (1 + 1e-12):
        raise CFLViolationError(dt, dt_max)

    rates = model.reaction(*state.species)
    t_next = state.t + dt
    updated = []
    clamped = 0
    for index, (values, d, rate) in enumerate(zip(state.species, model.diffusion, rates)):
        u = values + dt * (d * laplacian_apply(grid, values) + rate)
        bad = ~np.isfinite(u)
        if bad.any():
            raise NonFiniteStateError(t_next, index, float(grid.nodes[np.argmax(bad)]))
        negative = u < 0
        if negative.any():
            clamped += int(negative.sum())
            u[negative] = 0.0
        updated.append(u)
    return FieldState(t=t_next, species=tuple(updated), grid=grid, clamped=clamped)


def front_near_boundary(model, state: FieldState) -> bool:
    guard = BOUNDARY_GUARD_CELLS * state.grid.dx
    for species, level in enumerate(model.front_levels()):
        right = level_position(state, species, level, 'right')
        left = level_position(state, species, level, 'left')
        if right is not None and right >= state.grid.x_max - guard:
            return True
        if left is not None and left <= state.grid.x_min + guard:
            return True
    return False


def integrate(model, ic: InitialCondition, g: Grid1D, ctrl: StepControl, observers=()) -> IntegrationResult:
    """
    从初值推进到 t_end，按快照间隔调用各观察者

    Args:
        model: 反应模型实例
        ic: 初值描述
        g: 网格
        ctrl: 时间推进控制
        observers: 具有 observe(state) 与 records() 的观察者

    Returns:
        IntegrationResult，包含终态、各观察者记录和诊断信息
    """
    dt_eff, stride, n_steps = ctrl.schedule(g, model.max_diffusion)
    state = build_initial_state(ic, g, model.n_species)
    diagnostics = RunDiagnostics(dt=dt_eff)
    logger.info(f'integrate {model!r}: n={g.n}, dx={g.dx}, dt={dt_eff}, steps={n_steps}')

    started = time.perf_counter()
    for observer in observers:
        observer.observe(state)

    for i in range(1, n_steps + 1):
        t_next = min((i // stride) * ctrl.snapshot_every + (i % stride) * dt_eff, ctrl.t_end)
        state = step_explicit(model, state, t_next - state.t).at_time(t_next)
        diagnostics.steps = i
        if state.clamped:
            diagnostics.clamp_count += state.clamped
            logger.warning(f'clamped {state.clamped} negative node values at t={state.t}')

        if i % stride == 0 or i == n_steps:
            contaminated = front_near_boundary(model, state)
            if contaminated and not diagnostics.boundary_contaminated:
                logger.warning(f'front within {BOUNDARY_GUARD_CELLS} cells of the boundary at t={state.t}; '
                               f'result flagged boundary-contaminated')
            diagnostics.boundary_contaminated |= contaminated
            diagnostics.snapshots.append(SnapshotDiagnostic(
                t=state.t, steps=i, clamped=diagnostics.clamp_count, boundary_contaminated=contaminated,
            ))
            for observer in observers:
                observer.observe(state)
            logger.debug(f't={state.t}: ' + ', '.join(
                f'max {species_label(k)}={values.max():.6g}' for k, values in enumerate(state.species)
            ))

    logger.info(f'integration finished in {time.perf_counter() - started:.2f}s, '
                f'clamped={diagnostics.clamp_count}, boundary_contaminated={diagnostics.boundary_contaminated}')
    records = {observer.name: observer.records() for observer in observers}
    return IntegrationResult(final_state=state, records=records, diagnostics=diagnostics)
