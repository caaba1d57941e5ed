import math
from typing import Optional

from pydantic import BaseModel, model_validator

from src.exceptions import HypothesisNotMetError
from src.models.schemas import CoopParams, CubicParams, FisherParams
from src.theory.regime import classify_regime, theorem_holds


def fisher_speed(d, r) -> float:
    if d <= 0 or r <= 0:
        raise ValueError(f'd and r must be > 0 (d={d}, r={r})')
    return 2.0 * math.sqrt(d * r)


def coop_lower_speed(p: CoopParams) -> float:
    """c* = min{2*sqrt(d1 r1), 2*sqrt(d2 r2 (1+b2))}，前提 d1 r1 > d2 r2"""
    if not theorem_holds(p):
        raise HypothesisNotMetError('d1*r1 > d2*r2', f'd1*r1={p.d1 * p.r1}, d2*r2={p.d2 * p.r2}')
    return min(fisher_speed(p.d1, p.r1), fisher_speed(p.d2, p.r2 * (1 + p.b2)))


def r2_upper_speed(p: CoopParams) -> Optional[float]:
    """d1 r1 > d2 r2 k2 时 u2 的速度不超过 2*sqrt(d2 r2 k2)；条件不成立返回 None"""
    if p.d1 * p.r1 > p.d2 * p.r2 * p.k2:
        return fisher_speed(p.d2, p.r2 * p.k2)
    return None


def cubic_speed(d, nu) -> float:
    """三次反应项的传播速度：nu <= 2 时为线性速度 2*sqrt(d)，nu > 2 时为推动型速度"""
    if d <= 0 or nu <= -1:
        raise ValueError(f'need d > 0 and nu > -1 (d={d}, nu={nu})')
    if nu <= 2:
        return 2.0 * math.sqrt(d)
    return math.sqrt(d) * (2.0 + nu) / math.sqrt(2.0 * nu)


class SpeedBounds(BaseModel):
    """每个物种的速度下界、上界（可为空）及其出处"""
    lower: list[float]
    upper: list[Optional[float]]
    lower_source: list[str]
    upper_source: list[Optional[str]]

    @model_validator(mode='after')
    def check_order(self):
        for index, (low, high) in enumerate(zip(self.lower, self.upper)):
            if high is not None and low > high * (1 + 1e-12):
                raise ValueError(f'lower bound {low} exceeds upper bound {high} for species {index + 1}')
        return self


def speed_bounds(params) -> SpeedBounds:
    if isinstance(params, FisherParams):
        c = fisher_speed(params.d, params.r)
        return SpeedBounds(lower=[c], upper=[c], lower_source=['fisher'], upper_source=['fisher'])
    if isinstance(params, CubicParams):
        c = cubic_speed(params.d, params.nu)
        source = 'cubic_linear' if params.nu <= 2 else 'cubic_pushed'
        return SpeedBounds(lower=[c], upper=[c], lower_source=[source], upper_source=[source])

    p = params
    c1 = fisher_speed(p.d1, p.r1)
    lower = [c1, fisher_speed(p.d2, p.r2)]
    lower_source = ['u1_floor', 'u2_isolated']
    if theorem_holds(p):
        lower[1] = coop_lower_speed(p)
        lower_source[1] = 'theorem_cstar'

    upper = [None, None]
    upper_source = [None, None]
    regime = classify_regime(p)
    if regime in ('remark_r1', 'remark_r3'):
        upper = [c1, c1]
        upper_source = [regime, regime]
    elif regime == 'remark_r2':
        upper[1] = r2_upper_speed(p)
        upper_source[1] = regime
    return SpeedBounds(lower=lower, upper=upper, lower_source=lower_source, upper_source=upper_source)
