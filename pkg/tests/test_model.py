"""反应模型：反应项、平衡态与稳定性、解的上界盒"""

from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given, strategies as st
from pydantic import ValidationError

from src.model_factory import ModelFactory
from src.models.coop_model import CoopModel, coop_equilibria, coop_reaction, jacobian_at, solution_box
from src.models.cubic_model import CubicModel, cubic_reaction
from src.models.fisher_model import FisherModel, fisher_reaction
from src.models.schemas import CoopParams, CubicParams, FisherParams

rates = st.floats(min_value=0.1, max_value=5.0)
coupling = st.floats(min_value=0.0, max_value=0.95)


def coop(b1=0.5, b2=0.5, r1=1.0, r2=1.0, d1=1.0, d2=1.0):
    return CoopParams(d1=d1, d2=d2, r1=r1, r2=r2, b1=b1, b2=b2)


class TestCoopReaction:
    def test_extinction_is_fixed_point(self):
        assert coop_reaction(coop(), 0.0, 0.0) == (0.0, 0.0)

    def test_coexistence_state_is_fixed_point(self):
        p = coop()
        assert (p.k1, p.k2) == pytest.approx((2.0, 2.0))
        assert coop_reaction(p, 2.0, 2.0) == pytest.approx((0.0, 0.0), abs=1e-12)

    def test_unit_densities(self):
        assert coop_reaction(coop(), 1.0, 1.0) == pytest.approx((0.5, 0.5))

    def test_arrays_evaluate_pointwise(self):
        u = np.array([0.0, 1.0, 2.0])
        rate1, rate2 = coop_reaction(coop(), u, u)
        np.testing.assert_allclose(rate1, [0.0, 0.5, 0.0], atol=1e-12)
        np.testing.assert_allclose(rate2, [0.0, 0.5, 0.0], atol=1e-12)

    def test_negative_density_rejected(self):
        with pytest.raises(ValueError, match='density'):
            coop_reaction(coop(), -0.1, 0.5)

    @given(r1=rates, r2=rates, b1=coupling, b2=coupling)
    def test_coexistence_state_is_fixed_point_for_any_coupling(self, r1, r2, b1, b2):
        p = coop(b1=b1, b2=b2, r1=r1, r2=r2)
        rate1, rate2 = coop_reaction(p, p.k1, p.k2)
        assert abs(rate1) <= 1e-9 * max(1.0, p.k1 ** 2)
        assert abs(rate2) <= 1e-9 * max(1.0, p.k2 ** 2)


class TestSingleSpeciesReactions:
    @pytest.mark.parametrize('z, expected', [(0.0, 0.0), (1.0, 0.0)])
    def test_fisher_fixed_points(self, z, expected):
        assert fisher_reaction(FisherParams(d=1, r=1, K=1), z) == expected

    def test_fisher_arithmetic(self):
        assert fisher_reaction(FisherParams(d=1, r=2, K=4), 2.0) == pytest.approx(2.0)

    @pytest.mark.parametrize('u, expected', [(0.0, 0.0), (1.0, 0.0), (0.5, 0.75)])
    def test_cubic_values(self, u, expected):
        assert cubic_reaction(CubicParams(d=1, nu=4), u) == pytest.approx(expected)

    def test_fisher_negative_density_rejected(self):
        with pytest.raises(ValueError):
            fisher_reaction(FisherParams(d=1, r=1, K=1), np.array([0.2, -1e-3]))


class TestParams:
    def test_coupling_product_must_stay_below_one(self):
        with pytest.raises(ValidationError) as info:
            coop(b1=1.2, b2=1.0)
        message = str(info.value)
        assert 'b1' in message and 'b2' in message

    def test_decoupled_pair_is_allowed(self):
        p = coop(b1=0.0, b2=0.0)
        assert (p.k1, p.k2) == (1.0, 1.0)

    def test_nonpositive_rates_rejected(self):
        with pytest.raises(ValidationError):
            coop(r1=0.0)

    def test_params_are_frozen(self):
        with pytest.raises(ValidationError):
            coop().b1 = 0.1

    def test_cubic_nu_lower_limit(self):
        with pytest.raises(ValidationError):
            CubicParams(d=1.0, nu=-1.0)


class TestEquilibria:
    @pytest.mark.parametrize('b1, b2, expected', [
        (0.0, 0.0, (1.0, 1.0)),
        (0.5, 0.5, (2.0, 2.0)),
        (0.2, 0.5, (4 / 3, 5 / 3)),
    ])
    def test_coexistence_values(self, b1, b2, expected):
        equilibria = coop_equilibria(coop(b1=b1, b2=b2))
        assert equilibria.points[3] == pytest.approx(expected)
        assert equilibria.points[:3] == [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]

    def test_stability_tags(self):
        equilibria = coop_equilibria(coop())
        assert equilibria.stability == ['unstable', 'unstable', 'unstable', 'stable']
        assert equilibria.tag_of((2.0, 2.0)) == 'stable'
        assert equilibria.tag_of((5.0, 5.0)) is None

    @given(b1=st.floats(min_value=0.01, max_value=0.95), b2=st.floats(min_value=0.01, max_value=0.95))
    def test_coexistence_exceeds_unit_when_coupled(self, b1, b2):
        p = coop(b1=b1, b2=b2)
        assert p.k1 > 1.0 and p.k2 > 1.0

    def test_fisher_equilibria(self):
        equilibria = FisherModel(FisherParams(d=1, r=2, K=3)).equilibria()
        assert equilibria.points == [(0.0,), (3.0,)]
        assert equilibria.stability == ['unstable', 'stable']

    def test_cubic_third_root_for_negative_nu(self):
        equilibria = CubicModel(CubicParams(d=1, nu=-0.5)).equilibria()
        assert equilibria.points == [(0.0,), (1.0,), (2.0,)]
        assert equilibria.stability == ['unstable', 'stable', 'unstable']


class TestJacobian:
    def test_diagonal_at_origin(self):
        p = coop(r1=1.5, r2=0.7)
        np.testing.assert_allclose(jacobian_at(p, 0.0, 0.0), [[1.5, 0.0], [0.0, 0.7]])

    def test_at_coexistence_state(self):
        np.testing.assert_allclose(jacobian_at(coop(), 2.0, 2.0), [[-2.0, 1.0], [1.0, -2.0]])

    def test_matches_central_differences(self, remark_r3_params):
        p = remark_r3_params
        h = 1e-6
        numeric = np.empty((2, 2))
        for column, (du1, du2) in enumerate(((h, 0.0), (0.0, h))):
            plus = np.array(coop_reaction(p, 1.0 + du1, 1.0 + du2))
            minus = np.array(coop_reaction(p, 1.0 - du1, 1.0 - du2))
            numeric[:, column] = (plus - minus) / (2 * h)
        np.testing.assert_allclose(jacobian_at(p, 1.0, 1.0), numeric, atol=1e-6)

    def test_matches_central_differences_everywhere(self, remark_r2_params):
        p = remark_r2_params
        h = 1e-6
        rng = np.random.default_rng(7)
        for u1, u2 in rng.uniform(0.01, 2.0, size=(100, 2)):
            numeric = np.empty((2, 2))
            for column, (du1, du2) in enumerate(((h, 0.0), (0.0, h))):
                plus = np.array(coop_reaction(p, u1 + du1, u2 + du2))
                minus = np.array(coop_reaction(p, u1 - du1, u2 - du2))
                numeric[:, column] = (plus - minus) / (2 * h)
            np.testing.assert_allclose(jacobian_at(p, u1, u2), numeric, atol=1e-6)


class TestReactionZeros:
    def test_zeros_only_at_equilibria(self, remark_r3_params):
        p = remark_r3_params
        box = solution_box(p, 0.5, 0.5)
        u1, u2 = np.meshgrid(np.linspace(0.0, box.E1, 50), np.linspace(0.0, box.E2, 50))
        f, g = coop_reaction(p, u1, u2)
        near_zero = np.maximum(np.abs(f), np.abs(g)) < 0.02
        points = np.array(coop_equilibria(p).points)
        for a, b in zip(u1[near_zero], u2[near_zero]):
            distance = np.hypot(points[:, 0] - a, points[:, 1] - b).min()
            assert distance < 0.1, (a, b)


class TestSolutionBox:
    @pytest.mark.parametrize('b, sups, expected', [
        (0.5, (0.5, 0.5), (2.0, 2.0)),
        (0.5, (10.0, 0.5), (10.0, 10.0)),
        (0.0, (1.0, 1.0), (1.0, 1.0)),
    ])
    def test_box_values(self, b, sups, expected):
        assert solution_box(coop(b1=b, b2=b), *sups).bounds == pytest.approx(expected)

    def test_nonpositive_supremum_rejected(self):
        with pytest.raises(ValueError, match='sup'):
            solution_box(coop(), 0.0, 1.0)

    def test_cubic_box_requires_supremum_below_third_root(self):
        model = CubicModel(CubicParams(d=1, nu=-0.5))
        assert model.upper_box((0.5,)).bounds == (1.0,)
        with pytest.raises(ValueError, match='third root'):
            model.upper_box((2.5,))


class TestModelFactory:
    @pytest.mark.parametrize('params, model_class', [
        (CoopParams(d1=1, d2=1, r1=1, r2=1, b1=0, b2=0), CoopModel),
        (FisherParams(d=1, r=1, K=1), FisherModel),
        (CubicParams(d=1, nu=4), CubicModel),
    ])
    def test_dispatch_by_kind(self, params, model_class):
        model = ModelFactory.create_model(params)
        assert isinstance(model, model_class)
        assert model.n_species == len(model.species_labels)

    def test_unknown_kind(self):
        with pytest.raises(ValueError, match='unknown model kind'):
            ModelFactory.create_model(SimpleNamespace(kind='brusselator'))

    def test_front_levels_are_half_the_target(self, remark_r3_params):
        model = ModelFactory.create_model(remark_r3_params)
        assert model.front_levels() == pytest.approx((2 / 3, 5 / 6))
