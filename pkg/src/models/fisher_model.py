from src.models.base_model import BaseReactionModel, check_densities, classify_stability
from src.models.schemas import EquilibriumSet, FisherParams, SolutionBox


def fisher_reaction(p: FisherParams, z):
    check_densities(z)
    return p.r * z * (1 - z / p.K)


class FisherModel(BaseReactionModel):
    kind = 'fisher'
    species_labels = ('u1',)

    @property
    def diffusion(self):
        return (self.params.d,)

    def reaction(self, z):
        return (fisher_reaction(self.params, z),)

    def equilibria(self):
        # f'(0) = r, f'(K) = -r
        points = [(0.0,), (self.params.K,)]
        slopes = [self.params.r, -self.params.r]
        return EquilibriumSet(points=points, stability=[classify_stability([[s]]) for s in slopes])

    def target_state(self):
        return (self.params.K,)

    def upper_box(self, sups):
        (sup,) = sups
        if sup <= 0:
            raise ValueError(f'initial supremum must be > 0 (sup={sup})')
        return SolutionBox(E1=max(sup, self.params.K))
