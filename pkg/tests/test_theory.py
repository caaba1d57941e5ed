"""理论速度、情形分类与行波判定"""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from src.exceptions import HypothesisNotMetError
from src.models.schemas import CoopParams, CubicParams, FisherParams
from src.theory.bounds import coop_lower_speed, cubic_speed, fisher_speed, r2_upper_speed, speed_bounds
from src.theory.regime import classify_regime, satisfied_regimes
from src.theory.summary import theory_columns, theory_summary
from src.theory.waves import gamma_roots, wave_verdict, windows_intersect

positive = st.floats(min_value=0.05, max_value=10.0)


def coop(d1=1.0, d2=1.0, r1=1.0, r2=1.0, b1=0.2, b2=0.5):
    return CoopParams(d1=d1, d2=d2, r1=r1, r2=r2, b1=b1, b2=b2)


class TestLinearSpeeds:
    @pytest.mark.parametrize('d, r, expected', [(1, 1, 2.0), (1, 4, 4.0), (2, 0.5, 2.0)])
    def test_fisher_speed(self, d, r, expected):
        assert fisher_speed(d, r) == pytest.approx(expected)

    def test_fisher_speed_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            fisher_speed(0.0, 1.0)

    def test_cooperation_does_not_help_when_u1_is_slowest(self, remark_r3_params):
        assert coop_lower_speed(remark_r3_params) == pytest.approx(2.0)

    def test_slow_second_species_sets_the_floor(self):
        assert coop_lower_speed(coop(r1=4.0, r2=0.5)) == pytest.approx(2 * math.sqrt(0.75))

    def test_hypothesis_not_met(self):
        with pytest.raises(HypothesisNotMetError, match='d1\\*r1 > d2\\*r2'):
            coop_lower_speed(coop(r1=1.0, r2=1.0))

    @given(d1=positive, d2=positive, r1=positive, r2=positive, b2=st.floats(min_value=0.0, max_value=0.9))
    def test_lower_speed_between_isolated_speeds(self, d1, d2, r1, r2, b2):
        p = coop(d1=d1, d2=d2, r1=r1, r2=r2, b1=0.5, b2=b2)
        if d1 * r1 <= d2 * r2:
            return
        c_star = coop_lower_speed(p)
        assert fisher_speed(d2, r2) <= c_star * (1 + 1e-12)
        assert c_star <= fisher_speed(d1, r1) * (1 + 1e-12)


class TestUpperSpeed:
    def test_distinct_speed_setting(self, remark_r2_params):
        assert r2_upper_speed(remark_r2_params) == pytest.approx(2 * math.sqrt(5 / 6))

    def test_not_applicable(self, remark_r3_params):
        assert r2_upper_speed(remark_r3_params) is None

    def test_decoupled_limit(self):
        assert r2_upper_speed(coop(r1=4.0, r2=0.5, b1=0.0, b2=0.0)) == pytest.approx(fisher_speed(1.0, 0.5))


class TestCubicSpeed:
    @pytest.mark.parametrize('nu, expected', [(0.0, 2.0), (1.0, 2.0), (2.0, 2.0), (4.0, 6 / math.sqrt(8))])
    def test_values(self, nu, expected):
        assert cubic_speed(1.0, nu) == pytest.approx(expected)

    def test_continuous_at_transition(self):
        assert cubic_speed(1.0, 2.0 + 1e-9) == pytest.approx(cubic_speed(1.0, 2.0), abs=1e-6)

    def test_scales_with_diffusion(self):
        assert cubic_speed(4.0, 4.0) == pytest.approx(2.0 * cubic_speed(1.0, 4.0))


class TestSpeedBounds:
    def test_fisher_bounds_are_exact(self):
        bounds = speed_bounds(FisherParams(d=1.0, r=1.0, K=1.0))
        assert bounds.lower == [2.0] and bounds.upper == [2.0]

    def test_cubic_pushed(self):
        bounds = speed_bounds(CubicParams(d=1.0, nu=4.0))
        assert bounds.lower_source == ['cubic_pushed']
        assert bounds.lower[0] == pytest.approx(2.1213, abs=1e-4)

    def test_fastened_invasion(self, remark_r3_params):
        bounds = speed_bounds(remark_r3_params)
        assert bounds.lower == pytest.approx([2.0, 2.0])
        assert bounds.upper == pytest.approx([2.0, 2.0])
        assert bounds.lower_source == ['u1_floor', 'theorem_cstar']

    def test_distinct_speeds(self, remark_r2_params):
        bounds = speed_bounds(remark_r2_params)
        assert bounds.lower == pytest.approx([4.0, 2 * math.sqrt(0.75)])
        assert bounds.upper[0] is None
        assert bounds.upper[1] == pytest.approx(2 * math.sqrt(5 / 6))

    def test_outside_the_theorem(self):
        bounds = speed_bounds(coop(r1=0.5, r2=1.0))
        assert bounds.lower_source == ['u1_floor', 'u2_isolated']
        assert bounds.upper == [None, None]


class TestGammaRoots:
    def test_two_real_roots(self):
        assert gamma_roots(1, 1, 2.5) == pytest.approx((0.5, 2.0))

    def test_double_root(self):
        assert gamma_roots(1, 1, 2) == pytest.approx((1.0, 1.0))

    def test_complex(self):
        assert gamma_roots(1, 1, 1.9) is None

    @given(d=positive, r=positive, excess=st.floats(min_value=1e-3, max_value=10.0))
    def test_roots_solve_the_quadratic(self, d, r, excess):
        c = fisher_speed(d, r) + excess
        low, high = gamma_roots(d, r, c)
        assert low <= high
        for root in (low, high):
            assert d * root ** 2 - c * root + r == pytest.approx(0.0, abs=1e-8 * max(1.0, c * root))
        expected = np.sort(np.roots([d, -c, r]).real)
        np.testing.assert_allclose((low, high), expected, rtol=1e-8)

    def test_double_root_window_is_empty(self):
        assert not windows_intersect((1.25, 1.25), (0.5, 2.0))
        assert windows_intersect((0.5, 2.0), (0.5, 2.0))
        assert not windows_intersect(None, (0.5, 2.0))


class TestWaveVerdict:
    def test_identical_species(self):
        verdict = wave_verdict(coop(r1=1.0, r2=1.0, b1=0.5, b2=0.5), 2.5)
        assert verdict.verdict == 'exists'
        assert verdict.gamma1 == pytest.approx((0.5, 2.0))
        assert verdict.gamma2 == pytest.approx((0.5, 2.0))

    def test_degenerate_second_window(self):
        verdict = wave_verdict(coop(r1=1.0, r2=1.5625), 2.5)
        assert verdict.verdict == 'undetermined'
        assert verdict.gamma2 == pytest.approx((1.25, 1.25))

    def test_below_u1_linear_speed(self):
        verdict = wave_verdict(coop(r1=1.0, r2=0.3), 1.0)
        assert verdict.verdict == 'not_exists'
        assert verdict.complex1

    @given(c=st.floats(min_value=0.01, max_value=1.99))
    def test_not_exists_below_linear_speed(self, c):
        assert wave_verdict(coop(r1=1.0, r2=0.8), c).verdict == 'not_exists'

    def test_rejects_nonpositive_speed(self):
        with pytest.raises(ValueError):
            wave_verdict(coop(), 0.0)


class TestRegime:
    def test_equal_speeds(self):
        assert classify_regime(coop(r1=1.0, r2=1.0, b1=0.7, b2=0.3)) == 'remark_r1'

    def test_distinct_speeds(self, remark_r2_params):
        assert classify_regime(remark_r2_params) == 'remark_r2'

    def test_fastened_invasion(self, remark_r3_params):
        assert classify_regime(remark_r3_params) == 'remark_r3'

    @pytest.mark.parametrize('params, expected', [
        (dict(r1=1.0, r2=1.0), ['remark_r1']),
        (dict(r1=4.0, r2=0.5), ['remark_r2']),
        (dict(r1=1.0, r2=0.8), ['remark_r3']),
        (dict(r1=0.5, r2=1.0), []),
    ])
    def test_full_list_agrees_with_tag(self, params, expected):
        p = coop(**params)
        assert satisfied_regimes(p) == expected
        assert classify_regime(p) == (expected[0] if expected else 'outside')

    def test_theorem_only_and_outside(self):
        assert classify_regime(coop(d1=2.0, r1=1.0, r2=1.5, b1=0.5, b2=0.5)) == 'theorem_only'
        assert classify_regime(coop(r1=0.5, r2=1.0)) == 'outside'


class TestSummary:
    def test_columns_match_direct_calls(self, remark_r2_params):
        columns = theory_columns(remark_r2_params)
        assert columns['regime'] == classify_regime(remark_r2_params)
        assert columns['c_star'] == coop_lower_speed(remark_r2_params)
        assert columns['upper_u2'] == r2_upper_speed(remark_r2_params)

    def test_summary_includes_waves(self, remark_r3_params):
        summary = theory_summary(remark_r3_params, c_values=[1.0, 2.5])
        assert [wave['verdict'] for wave in summary['waves']][0] == 'not_exists'
        assert summary['k1'] == pytest.approx(4 / 3)
        assert summary['equilibria'][3]['stability'] == 'stable'
        assert summary['coexistence_stability'] == 'stable'
        # c = 1 低于 u1 的线性速度 2，特征根为复数
        assert summary['waves'][0]['complex1'] is True
        assert summary['waves'][1]['complex1'] is False

    def test_waves_only_for_cooperative_model(self):
        with pytest.raises(ValueError):
            theory_summary(FisherParams(d=1, r=1, K=1), c_values=[2.5])
