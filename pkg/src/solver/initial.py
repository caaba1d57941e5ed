from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.solver.grid import FieldState, Grid1D


class InitialCondition(BaseModel):
    """
    初值描述

    kind:
        compact_bump: |x| <= width 上取 amplitude，余弦过渡 sigma 后为 0
        constant: 全域常数 amplitude
        step: x <= step_at 取 amplitude，其余为 0
        custom_table: table 中 (x, 形状值) 线性插值后乘以 amplitude，表外为 0
    """
    model_config = ConfigDict(frozen=True, extra='forbid')

    kind: Literal['compact_bump', 'constant', 'step', 'custom_table'] = 'compact_bump'
    amplitudes: list[float] = Field(default_factory=lambda: [0.5], min_length=1)
    width: float = Field(default=5.0, gt=0)
    sigma: float = Field(default=1.0, ge=0)
    step_at: float = 0.0
    table: list[tuple[float, float]] = Field(default_factory=list)

    @field_validator('amplitudes')
    @classmethod
    def check_amplitudes(cls, amplitudes):
        if any(a <= 0 for a in amplitudes):
            raise ValueError(f'amplitudes must be > 0 (got {amplitudes})')
        return amplitudes

    @model_validator(mode='after')
    def check_table(self):
        if self.kind != 'custom_table':
            return self
        xs = [row[0] for row in self.table]
        if len(xs) < 2 or any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError('custom_table needs at least two rows with strictly increasing x')
        if any(row[1] < 0 for row in self.table) or max(row[1] for row in self.table) <= 0:
            raise ValueError('custom_table values must be >= 0 and not all zero')
        return self

    def amplitudes_for(self, n_species) -> tuple:
        if len(self.amplitudes) == 1:
            return tuple(self.amplitudes) * n_species
        if len(self.amplitudes) != n_species:
            raise ValueError(f'expected 1 or {n_species} amplitudes, got {len(self.amplitudes)}')
        return tuple(self.amplitudes)


def init_compact_bump(g: Grid1D, amp, w, sigma) -> np.ndarray:
    """平台 + 余弦衰减的紧支集初值，支集外严格为 0"""
    if amp <= 0 or w <= 0 or sigma < 0:
        raise ValueError(f'need amp > 0, w > 0, sigma >= 0 (amp={amp}, w={w}, sigma={sigma})')
    edge = w + sigma
    if -edge < g.x_min or edge > g.x_max:
        raise ValueError(f'bump support [-{edge}, {edge}] exceeds the domain [{g.x_min}, {g.x_max}]')

    distance = np.abs(g.nodes)
    # 容差避免 x = w 的节点因舍入落到平台外
    slack = 1e-12 * max(1.0, w)
    values = np.where(distance <= w + slack, amp, 0.0)
    if sigma > 0:
        ramp = (distance > w + slack) & (distance < edge)
        phase = (distance[ramp] - w) / sigma
        values[ramp] = amp * 0.5 * (1.0 + np.cos(np.pi * phase))
    return values


def init_species(ic: InitialCondition, g: Grid1D, amp) -> np.ndarray:
    if ic.kind == 'compact_bump':
        return init_compact_bump(g, amp, ic.width, ic.sigma)
    if ic.kind == 'constant':
        return np.full(g.n, float(amp))
    if ic.kind == 'step':
        return np.where(g.nodes <= ic.step_at, float(amp), 0.0)
    xs, shape = zip(*ic.table)
    return amp * np.interp(g.nodes, xs, shape, left=0.0, right=0.0)


def build_initial_state(ic: InitialCondition, g: Grid1D, n_species) -> FieldState:
    species = tuple(init_species(ic, g, amp) for amp in ic.amplitudes_for(n_species))
    return FieldState(t=0.0, species=species, grid=g).check()
