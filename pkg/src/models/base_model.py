import numpy as np

from src.models.schemas import EquilibriumSet, SolutionBox


def check_densities(*values):
    """反应项只对非负密度有意义，负值直接拒绝"""
    for index, value in enumerate(values):
        if np.any(np.asarray(value) < 0):
            raise ValueError(f'density argument {index + 1} must be >= 0')


def classify_stability(jacobian, tol=1e-12):
    eigenvalues = np.linalg.eigvals(np.atleast_2d(np.asarray(jacobian, dtype=float)))
    real_parts = eigenvalues.real
    if np.all(real_parts < -tol):
        return 'stable'
    if np.any(real_parts > tol):
        return 'unstable'
    return 'marginal'


class BaseReactionModel:
    kind = None
    species_labels = ()

    def __init__(self, params):
        self.params = params

    @property
    def n_species(self) -> int:
        return len(self.species_labels)

    @property
    def diffusion(self) -> tuple:
        raise NotImplementedError

    @property
    def max_diffusion(self) -> float:
        return max(self.diffusion)

    def reaction(self, *fields):
        raise NotImplementedError

    def equilibria(self) -> EquilibriumSet:
        raise NotImplementedError

    def target_state(self) -> tuple:
        """入侵后趋近的正平衡态"""
        raise NotImplementedError

    def upper_box(self, sups) -> SolutionBox:
        raise NotImplementedError

    def front_levels(self, fraction=0.5) -> tuple:
        return tuple(fraction * value for value in self.target_state())

    def __repr__(self):
        return f'{type(self).__name__}({self.params!r})'
