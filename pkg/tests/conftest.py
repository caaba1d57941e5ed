import pytest
from hypothesis import HealthCheck, settings

from src.models.schemas import CoopParams, FisherParams
from src.solver.grid import build_grid

settings.register_profile('ci', max_examples=60, deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile('ci')


@pytest.fixture
def remark_r3_params():
    return CoopParams(d1=1.0, d2=1.0, r1=1.0, r2=0.8, b1=0.2, b2=0.5)


@pytest.fixture
def remark_r2_params():
    return CoopParams(d1=1.0, d2=1.0, r1=4.0, r2=0.5, b1=0.2, b2=0.5)


@pytest.fixture
def unit_fisher():
    return FisherParams(d=1.0, r=1.0, K=1.0)


@pytest.fixture
def small_grid():
    return build_grid(-40.0, 40.0, 401)

