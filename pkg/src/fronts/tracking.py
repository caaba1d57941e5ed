from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, Field, field_validator

from src.solver.grid import FieldState

Direction = Literal['left', 'right']


def species_label(species) -> str:
    return f'u{species + 1}'


class FrontTrace(BaseModel):
    """单个物种、单个方向上水平集前沿位置随时间的记录"""
    species: int = Field(ge=0)
    direction: Direction
    level: float = Field(gt=0)
    samples: list[tuple[float, float]] = Field(default_factory=list)

    @field_validator('samples')
    @classmethod
    def check_increasing(cls, samples):
        times = [t for t, _ in samples]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError('sample times must be strictly increasing')
        return samples

    def add(self, t, position):
        if self.samples and t <= self.samples[-1][0]:
            raise ValueError(f'sample time {t} does not advance past {self.samples[-1][0]}')
        self.samples.append((float(t), float(position)))

    @property
    def label(self) -> str:
        return species_label(self.species)


class ConeRecord(BaseModel):
    """锥 |x| < c*t 内各物种的 (inf, sup) 随时间的记录"""
    c: float = Field(ge=0)
    samples: list[tuple[float, tuple[tuple[float, float], ...]]] = Field(default_factory=list)

    @field_validator('samples')
    @classmethod
    def check_order(cls, samples):
        for t, pairs in samples:
            if any(low > high for low, high in pairs):
                raise ValueError(f'cone inf exceeds sup at t={t}')
        return samples

    def add(self, t, pairs):
        if self.samples and t <= self.samples[-1][0]:
            raise ValueError(f'sample time {t} does not advance past {self.samples[-1][0]}')
        pairs = tuple((float(low), float(high)) for low, high in pairs)
        if any(low > high for low, high in pairs):
            raise ValueError(f'cone inf exceeds sup at t={t}: {pairs}')
        self.samples.append((float(t), pairs))


def level_position(state: FieldState, species, level, direction: Direction) -> Optional[float]:
    """
    水平集前沿位置

    right 取最右一次从 >= level 跌到 < level 的穿越，left 取最左一次，
    在相邻两个节点之间线性插值；没有穿越时返回 None。
    """
    values = state.species[species]
    x = state.x
    above = np.flatnonzero(values >= level)
    if above.size == 0:
        return None
    if direction == 'right':
        i = above[-1]
        if i == values.size - 1:
            return None
        v0, v1 = values[i], values[i + 1]
        return float(x[i] + (v0 - level) / (v0 - v1) * (x[i + 1] - x[i]))
    j = above[0]
    if j == 0:
        return None
    v0, v1 = values[j - 1], values[j]
    return float(x[j - 1] + (level - v0) / (v1 - v0) * (x[j] - x[j - 1]))


def cone_mask(state: FieldState, c) -> np.ndarray:
    """锥 |x| < c*t 内的节点；锥宽不足一个网格间距视为空锥"""
    if c < 0:
        raise ValueError(f'cone slope must be >= 0 (c={c})')
    radius = c * state.t
    if radius < state.grid.dx:
        raise ValueError(f'empty cone: c*t={radius} is below dx={state.grid.dx}')
    inside = np.abs(state.x) < radius
    if not inside.any():
        raise ValueError(f'empty cone: no node with |x| < {radius}')
    return inside


def cone_infimum(state: FieldState, species, c) -> tuple[float, float]:
    """锥 |x| < c*t 内节点值的 (min, max)"""
    values = state.species[species][cone_mask(state, c)]
    return float(values.min()), float(values.max())


def outer_supremum(state: FieldState, species, c) -> float:
    """锥外 |x| > c*t 的最大值，锥外没有节点时为 0"""
    if c < 0:
        raise ValueError(f'cone slope must be >= 0 (c={c})')
    outside = np.abs(state.x) > c * state.t
    if not outside.any():
        return 0.0
    return float(state.species[species][outside].max())
