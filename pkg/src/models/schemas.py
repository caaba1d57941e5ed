from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class CoopParams(BaseModel):
    """两物种合作型 Lotka-Volterra 反应扩散系统的参数"""
    model_config = ConfigDict(frozen=True, extra='forbid')

    kind: Literal['coop'] = 'coop'
    d1: float = Field(gt=0, description='u1 扩散系数')
    d2: float = Field(gt=0, description='u2 扩散系数')
    r1: float = Field(gt=0, description='u1 内禀增长率')
    r2: float = Field(gt=0, description='u2 内禀增长率')
    # b1 = b2 = 0 即两个互不耦合的 logistic 方程
    b1: float = Field(ge=0, description='u2 对 u1 的合作系数')
    b2: float = Field(ge=0, description='u1 对 u2 的合作系数')

    @model_validator(mode='after')
    def check_coupling(self):
        if self.b1 * self.b2 >= 1:
            raise ValueError(
                f'b1*b2 must be < 1 for the coexistence state K to exist '
                f'(b1={self.b1}, b2={self.b2}, b1*b2={self.b1 * self.b2})'
            )
        return self

    @property
    def k1(self) -> float:
        return (1 + self.b1) / (1 - self.b1 * self.b2)

    @property
    def k2(self) -> float:
        return (1 + self.b2) / (1 - self.b1 * self.b2)


class FisherParams(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')

    kind: Literal['fisher'] = 'fisher'
    d: float = Field(gt=0)
    r: float = Field(gt=0)
    K: float = Field(gt=0, description='环境容纳量')


class CubicParams(BaseModel):
    """u(1-u)(1+nu*u) 三次反应项；nu > 2 时传播速度不再由线性化决定"""
    model_config = ConfigDict(frozen=True, extra='forbid')

    kind: Literal['cubic'] = 'cubic'
    d: float = Field(gt=0)
    nu: float = Field(gt=-1)


class EquilibriumSet(BaseModel):
    model_config = ConfigDict(frozen=True)

    points: list[tuple[float, ...]]
    stability: list[Literal['stable', 'unstable', 'marginal']]

    @model_validator(mode='after')
    def check_lengths(self):
        if len(self.points) != len(self.stability):
            raise ValueError('points and stability must have the same length')
        return self

    def tag_of(self, point, tol=1e-12):
        for candidate, tag in zip(self.points, self.stability):
            if all(abs(a - b) <= tol * max(1.0, abs(b)) for a, b in zip(candidate, point)):
                return tag
        return None


class SolutionBox(BaseModel):
    """解的先验上界；单物种模型 E2 为空"""
    model_config = ConfigDict(frozen=True)

    E1: float = Field(gt=0)
    E2: Optional[float] = Field(default=None, gt=0)

    @property
    def bounds(self) -> tuple[float, ...]:
        return (self.E1,) if self.E2 is None else (self.E1, self.E2)
