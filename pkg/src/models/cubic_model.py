from src.models.base_model import BaseReactionModel, check_densities, classify_stability
from src.models.schemas import CubicParams, EquilibriumSet, SolutionBox


def cubic_reaction(p: CubicParams, u):
    check_densities(u)
    return u * (1 - u) * (1 + p.nu * u)


def cubic_slope(p: CubicParams, u):
    return (1 - 2 * u) * (1 + p.nu * u) + p.nu * u * (1 - u)


class CubicModel(BaseReactionModel):
    kind = 'cubic'
    species_labels = ('u1',)

    @property
    def diffusion(self):
        return (self.params.d,)

    def reaction(self, u):
        return (cubic_reaction(self.params, u),)

    def equilibria(self):
        points = [0.0, 1.0]
        # -1 < nu < 0 时 u = -1/nu > 1 也是非负平衡态
        if self.params.nu < 0:
            points.append(-1.0 / self.params.nu)
        return EquilibriumSet(
            points=[(u,) for u in points],
            stability=[classify_stability([[cubic_slope(self.params, u)]]) for u in points],
        )

    def target_state(self):
        return (1.0,)

    def upper_box(self, sups):
        (sup,) = sups
        if sup <= 0:
            raise ValueError(f'initial supremum must be > 0 (sup={sup})')
        nu = self.params.nu
        if nu < 0 and sup >= -1.0 / nu:
            raise ValueError(f'initial supremum {sup} reaches the third root {-1.0 / nu}; no invariant box')
        return SolutionBox(E1=max(sup, 1.0))
