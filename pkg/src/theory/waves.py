import math
from typing import Literal, Optional

from pydantic import BaseModel, computed_field, model_validator

from src.models.schemas import CoopParams
from src.theory.bounds import fisher_speed
from src.theory.regime import equal_speeds_holds, fastened_invasion_holds


class WaveSpeedVerdict(BaseModel):
    c: float
    gamma1: Optional[tuple[float, float]]
    gamma2: Optional[tuple[float, float]]
    verdict: Literal['exists', 'not_exists', 'undetermined']
    reason: str

    @model_validator(mode='after')
    def check_roots(self):
        for window in (self.gamma1, self.gamma2):
            if window is not None and window[0] > window[1]:
                raise ValueError(f'gamma window {window} is not ordered')
        return self

    @computed_field
    @property
    def complex1(self) -> bool:
        return self.gamma1 is None

    @computed_field
    @property
    def complex2(self) -> bool:
        return self.gamma2 is None


def gamma_roots(d, r, c) -> Optional[tuple[float, float]]:
    """d*g^2 - c*g + r = 0 的两个实根（升序），判别式为负时返回 None"""
    if d <= 0 or r <= 0 or c <= 0:
        raise ValueError(f'd, r and c must be > 0 (d={d}, r={r}, c={c})')
    disc = c * c - 4.0 * d * r
    if disc < 0:
        return None
    root = math.sqrt(disc)
    high = (c + root) / (2.0 * d)
    # 小根用 r/(d*high) 求，避免 c - sqrt(disc) 相消
    low = r / (d * high)
    return low, high


def windows_intersect(first, second) -> bool:
    """开区间求交；重根对应空区间"""
    if first is None or second is None:
        return False
    low = max(first[0], second[0])
    high = min(first[1], second[1])
    return first[0] < first[1] and second[0] < second[1] and low < high


def wave_verdict(p: CoopParams, c) -> WaveSpeedVerdict:
    """
    连接 (0,0) 与 (k1,k2) 的行波在速度 c 下是否存在

    c < 2*sqrt(d1 r1) 时不存在；满足充分条件且两个 gamma 区间相交时存在；
    其余情形不下结论并给出原因。
    """
    if c <= 0:
        raise ValueError(f'wave speed must be > 0 (c={c})')
    gamma1 = gamma_roots(p.d1, p.r1, c)
    gamma2 = gamma_roots(p.d2, p.r2, c)

    def verdict(tag, reason):
        return WaveSpeedVerdict(c=c, gamma1=gamma1, gamma2=gamma2, verdict=tag, reason=reason)

    if c < fisher_speed(p.d1, p.r1):
        return verdict('not_exists', 'below_u1_linear_speed')
    if not c > max(fisher_speed(p.d1, p.r1), fisher_speed(p.d2, p.r2)):
        return verdict('undetermined', 'not_above_max_linear_speed')
    covered = (equal_speeds_holds(p) or fastened_invasion_holds(p)
               or (p.d1 >= p.d2 and p.r1 >= p.r2))
    if not covered:
        return verdict('undetermined', 'setting_not_covered')
    if not windows_intersect(gamma1, gamma2):
        return verdict('undetermined', 'gamma_windows_disjoint')
    return verdict('exists', 'gamma_windows_intersect')
