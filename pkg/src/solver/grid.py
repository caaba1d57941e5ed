from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator


class Grid1D(BaseModel):
    """截断区间 [x_min, x_max] 上的均匀网格，端点均为节点"""
    model_config = ConfigDict(frozen=True, extra='forbid')

    x_min: float
    x_max: float
    n: int = Field(ge=3)

    @model_validator(mode='before')
    @classmethod
    def fill_n_from_dx(cls, data):
        # 配置里可以只给 dx；回显的配置同时带 n 和 dx 时以 n 为准
        if isinstance(data, dict) and 'dx' in data:
            data = dict(data)
            dx = data.pop('dx')
            if data.get('n') is None and dx is not None:
                dx = float(dx)
                if dx <= 0:
                    raise ValueError(f'dx must be > 0 (dx={dx})')
                data['n'] = int(round((float(data['x_max']) - float(data['x_min'])) / dx)) + 1
        return data

    @model_validator(mode='after')
    def check_domain(self):
        if not self.x_min < self.x_max:
            raise ValueError(f'x_min must be < x_max (x_min={self.x_min}, x_max={self.x_max})')
        return self

    @computed_field
    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)

    @cached_property
    def nodes(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n)


def build_grid(x_min, x_max, n) -> Grid1D:
    return Grid1D(x_min=x_min, x_max=x_max, n=n)


@dataclass(frozen=True)
class FieldState:
    """某一时刻网格上的解，species 中每个数组对应一个物种"""
    t: float
    species: tuple
    grid: Grid1D
    clamped: int = 0

    def __post_init__(self):
        for index, values in enumerate(self.species):
            if np.shape(values) != (self.grid.n,):
                raise ValueError(
                    f'species {index + 1} has {np.size(values)} values, grid has {self.grid.n} nodes'
                )

    @property
    def x(self) -> np.ndarray:
        return self.grid.nodes

    def check(self):
        for index, values in enumerate(self.species):
            if not np.all(np.isfinite(values)):
                raise ValueError(f'species {index + 1} has non-finite values')
            if np.any(values < 0):
                raise ValueError(f'species {index + 1} has negative values')
        return self

    def at_time(self, t):
        return replace(self, t=t)


def laplacian_apply(g: Grid1D, values) -> np.ndarray:
    """二阶中心差分；两端按齐次 Neumann 镜像 v[-1]=v[1], v[n]=v[n-2]"""
    v = np.asarray(values, dtype=float)
    if v.shape != (g.n,):
        raise ValueError(f'expected {g.n} values, got {v.size}')
    out = np.empty_like(v)
    out[1:-1] = v[:-2] - 2.0 * v[1:-1] + v[2:]
    out[0] = 2.0 * (v[1] - v[0])
    out[-1] = 2.0 * (v[-2] - v[-1])
    return out / g.dx ** 2


def discrete_mass(g: Grid1D, values) -> float:
    """梯形权重下的总质量，镜像边界的差分格式精确守恒这个量"""
    v = np.asarray(values, dtype=float)
    return g.dx * (v.sum() - 0.5 * (v[0] + v[-1]))


def cfl_max_dt(g: Grid1D, d_max, safety) -> float:
    if d_max <= 0:
        raise ValueError(f'd_max must be > 0 (d_max={d_max})')
    if not 0 < safety <= 1:
        raise ValueError(f'safety must lie in (0, 1] (safety={safety})')
    return safety * g.dx ** 2 / (2.0 * d_max)
