import numpy as np

from src.solver.grid import FieldState


def make_state(grid, *species, t=0.0):
    return FieldState(t=t, species=tuple(np.asarray(values, dtype=float) for values in species), grid=grid)
