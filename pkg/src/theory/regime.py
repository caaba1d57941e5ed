import math
from typing import Literal

from src.models.schemas import CoopParams

RegimeTag = Literal['remark_r1', 'remark_r2', 'remark_r3', 'theorem_only', 'outside']

REGIME_ORDER = ('remark_r1', 'remark_r2', 'remark_r3')


def equal_speeds_holds(p: CoopParams) -> bool:
    return p.d1 == p.d2 and p.r1 == p.r2


def distinct_speeds_holds(p: CoopParams) -> bool:
    return p.d1 * p.r1 > p.d2 * p.r2 * p.k2


def fastened_invasion_holds(p: CoopParams) -> bool:
    # 2*sqrt(d2 r2) < 2*sqrt(d1 r1) <= 2*sqrt(d2 r2 (1+b2))，且 d1 = d2
    return (p.d1 == p.d2
            and 2 * math.sqrt(p.d2 * p.r2) < 2 * math.sqrt(p.d1 * p.r1) <= 2 * math.sqrt(p.d2 * p.r2 * (1 + p.b2)))


def theorem_holds(p: CoopParams) -> bool:
    return p.d1 * p.r1 > p.d2 * p.r2


REGIME_CHECKS = {
    'remark_r1': equal_speeds_holds,
    'remark_r2': distinct_speeds_holds,
    'remark_r3': fastened_invasion_holds,
}


def satisfied_regimes(p: CoopParams) -> list:
    return [tag for tag in REGIME_ORDER if REGIME_CHECKS[tag](p)]


def classify_regime(p: CoopParams) -> RegimeTag:
    """按 r1 > r2 > r3 的优先级取第一个成立的情形"""
    matched = satisfied_regimes(p)
    if matched:
        return matched[0]
    if theorem_holds(p):
        return 'theorem_only'
    return 'outside'
