import numpy as np

from src.models.base_model import BaseReactionModel, check_densities, classify_stability
from src.models.schemas import CoopParams, EquilibriumSet, SolutionBox


def coop_reaction(p: CoopParams, u1, u2):
    """合作系统反应项 (r1*u1*(1-u1+b1*u2), r2*u2*(1-u2+b2*u1))，标量与数组均可"""
    check_densities(u1, u2)
    rate1 = p.r1 * u1 * (1 - u1 + p.b1 * u2)
    rate2 = p.r2 * u2 * (1 - u2 + p.b2 * u1)
    return rate1, rate2


def jacobian_at(p: CoopParams, u1, u2):
    """动力学系统在 (u1, u2) 处的 Jacobian 矩阵"""
    return np.array([
        [p.r1 * (1 - 2 * u1 + p.b1 * u2), p.r1 * p.b1 * u1],
        [p.r2 * p.b2 * u2, p.r2 * (1 - 2 * u2 + p.b2 * u1)],
    ], dtype=float)


def coop_equilibria(p: CoopParams) -> EquilibriumSet:
    """四个空间齐次平衡态，顺序固定为 (0,0), (1,0), (0,1), (k1,k2)"""
    points = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (p.k1, p.k2)]
    stability = [classify_stability(jacobian_at(p, u1, u2)) for u1, u2 in points]
    return EquilibriumSet(points=points, stability=stability)


def solution_box(p: CoopParams, sup1, sup2) -> SolutionBox:
    """
    由初值上确界给出解的上界 (E1, E2)

    Args:
        sup1: u1 初值的上确界
        sup2: u2 初值的上确界
    """
    if sup1 <= 0 or sup2 <= 0:
        raise ValueError(f'initial suprema must be > 0 (sup1={sup1}, sup2={sup2})')
    k1, k2 = p.k1, p.k2
    E1 = max(sup1, k1, k1 / k2 * sup2)
    E2 = max(sup2, k2, k2 / k1 * sup1)
    return SolutionBox(E1=E1, E2=E2)


class CoopModel(BaseReactionModel):
    kind = 'coop'
    species_labels = ('u1', 'u2')

    @property
    def diffusion(self):
        return self.params.d1, self.params.d2

    def reaction(self, u1, u2):
        return coop_reaction(self.params, u1, u2)

    def equilibria(self):
        return coop_equilibria(self.params)

    def target_state(self):
        return self.params.k1, self.params.k2

    def upper_box(self, sups):
        return solution_box(self.params, *sups)
