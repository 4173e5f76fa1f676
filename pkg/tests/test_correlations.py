import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tachybell.correlations import (
    REMOVED,
    EntangledState,
    FallbackKind,
    JointOutcomeDistribution,
    PolarizerSetting,
    TachyonModel,
    effective_joint,
    fallback_joint,
    lhv_joint_lambda_averaged,
    lhv_passes,
    qm_joint,
)
from tachybell.errors import ConfigError

from oracles import lhv_coincidence_numeric, qm_pass_pass_probability

angles = st.floats(min_value=0.0, max_value=math.pi, exclude_max=True)
phases = st.floats(min_value=-2 * math.pi, max_value=2 * math.pi)


class TestJointOutcomeDistribution:
    def test_rejects_unnormalized(self):
        with pytest.raises(ConfigError):
            JointOutcomeDistribution(0.5, 0.5, 0.5, 0.5)

    def test_rejects_negative(self):
        with pytest.raises(ConfigError):
            JointOutcomeDistribution(-0.5, 0.5, 0.5, 0.5)


class TestQmJoint:
    def test_equal_angles_perfect_correlation(self):
        d = qm_joint(EntangledState(0.0), PolarizerSetting(0.7), PolarizerSetting(0.7))
        assert d.p_pp == pytest.approx(0.5, abs=1e-12)

    def test_orthogonal_settings(self):
        d = qm_joint(EntangledState(0.0), PolarizerSetting(0.3), PolarizerSetting(0.3 + math.pi / 2))
        assert d.p_pp == pytest.approx(0.0, abs=1e-12)

    def test_both_removed(self):
        d = qm_joint(EntangledState(1.0), REMOVED, REMOVED)
        assert d.p_pp == 1.0

    def test_one_removed(self):
        d = qm_joint(EntangledState(0.3), REMOVED, PolarizerSetting(0.1))
        assert d.p_pp == pytest.approx(0.5)
        assert d.marginal_a == pytest.approx(1.0)

    def test_22_5_degrees(self):
        d = qm_joint(EntangledState(0.0), PolarizerSetting(0.0), PolarizerSetting(math.radians(22.5)))
        assert d.p_pp == pytest.approx(0.5 * math.cos(math.radians(22.5)) ** 2)
        assert d.p_pp == pytest.approx(0.4268, abs=1e-4)

    @given(phi=phases, ta=angles, tb=angles)
    def test_matches_projector_oracle(self, phi, ta, tb):
        d = qm_joint(EntangledState(phi), PolarizerSetting(ta), PolarizerSetting(tb))
        assert d.p_pp == pytest.approx(qm_pass_pass_probability(phi, ta, tb), abs=1e-12)

    @given(phi=phases, ta=angles, tb=angles)
    def test_marginals_are_half(self, phi, ta, tb):
        d = qm_joint(EntangledState(phi), PolarizerSetting(ta), PolarizerSetting(tb))
        assert d.marginal_a == pytest.approx(0.5, abs=1e-12)
        assert d.marginal_b == pytest.approx(0.5, abs=1e-12)

    def test_depends_only_on_angle_difference_at_zero_phase(self):
        state = EntangledState(0.0)
        for delta in np.linspace(0, math.pi, 13):
            probs = {
                round(qm_joint(state, PolarizerSetting(t0), PolarizerSetting(t0 + delta)).p_pp, 12)
                for t0 in np.linspace(0, math.pi, 7)
            }
            assert len(probs) == 1

    def test_normalization_random_settings(self):
        rng = np.random.default_rng(4)
        for _ in range(10_000):
            d = qm_joint(
                EntangledState(rng.uniform(-math.pi, math.pi)),
                PolarizerSetting(rng.uniform(0, math.pi)),
                PolarizerSetting(rng.uniform(0, math.pi)),
            )
            assert abs(d.p_pp + d.p_pf + d.p_fp + d.p_ff - 1.0) <= 1e-12


class TestFallbackJoint:
    UNCORR = TachyonModel(beta_t=2.0, fallback=FallbackKind.UNCORRELATED)
    LHV = TachyonModel(beta_t=2.0, fallback=FallbackKind.DETERMINISTIC_LHV)

    def test_uncorrelated_both_present(self):
        d = fallback_joint(self.UNCORR, None, PolarizerSetting(0.0), PolarizerSetting(1.0))
        assert d.p_pp == 0.25
        assert d.marginal_a == 0.5
        assert d.marginal_b == 0.5

    def test_uncorrelated_removed_sides(self):
        d = fallback_joint(self.UNCORR, None, REMOVED, REMOVED)
        assert d.p_pp == 1.0

    def test_lhv_requires_hidden_sample(self):
        with pytest.raises(ConfigError):
            fallback_joint(self.LHV, None, PolarizerSetting(0.0), PolarizerSetting(1.0))

    def test_lhv_outcomes_deterministic(self):
        a, b = PolarizerSetting(0.0), PolarizerSetting(math.pi / 2)
        d = fallback_joint(self.LHV, 0.1, a, b)
        assert (d.p_pp, d.p_pf, d.p_fp, d.p_ff) == (0.0, 1.0, 0.0, 0.0)

    def test_lhv_removed_always_passes(self):
        for lam in (0.0, 1.0, 3.0):
            d = fallback_joint(self.LHV, lam, REMOVED, REMOVED)
            assert d.p_pp == 1.0

    def test_lhv_threshold_rule(self):
        s = PolarizerSetting(0.0)
        assert lhv_passes(0.2, s)
        assert not lhv_passes(math.pi / 4 + 0.01, s)
        # Wraparound: an angle just below pi is close to 0 mod pi.
        assert lhv_passes(math.pi - 0.1, s)

    def test_lhv_lambda_average_equal_settings(self):
        d = lhv_joint_lambda_averaged(PolarizerSetting(0.3), PolarizerSetting(0.3))
        assert d.p_pp == pytest.approx(0.5)

    @given(ta=angles, tb=angles)
    def test_lhv_lambda_average_matches_numeric_integration(self, ta, tb):
        closed = lhv_joint_lambda_averaged(PolarizerSetting(ta), PolarizerSetting(tb))
        numeric = lhv_coincidence_numeric(ta, tb)
        assert closed.p_pp == pytest.approx(numeric, abs=2e-5)

    def test_lhv_montecarlo_average(self):
        rng = np.random.default_rng(5)
        a, b = PolarizerSetting(0.2), PolarizerSetting(1.1)
        lams = rng.uniform(0, math.pi, 200_000)
        mc = np.mean([fallback_joint(self.LHV, lam, a, b).p_pp for lam in lams])
        assert mc == pytest.approx(lhv_joint_lambda_averaged(a, b).p_pp, abs=5e-3)


class TestEffectiveJoint:
    MODEL = TachyonModel(beta_t=3.0, fallback=FallbackKind.UNCORRELATED)
    STATE = EntangledState(0.0)

    def test_feasible_dispatches_to_qm(self):
        a, b = PolarizerSetting(0.1), PolarizerSetting(0.9)
        assert effective_joint(self.MODEL, self.STATE, True, None, a, b) == qm_joint(self.STATE, a, b)

    def test_infeasible_uncorrelated(self):
        a, b = PolarizerSetting(0.1), PolarizerSetting(0.9)
        d = effective_joint(self.MODEL, self.STATE, False, None, a, b)
        assert d.p_pp == 0.25

    def test_infeasible_lhv_bchsh_contained(self):
        # Lambda-averaged LHV probabilities keep M inside [-1, 0] for random
        # setting quadruples (Bell's theorem).
        rng = np.random.default_rng(6)
        for _ in range(1000):
            a, ap, b, bp = (PolarizerSetting(x) for x in rng.uniform(0, math.pi, 4))
            p = lambda x, y: lhv_joint_lambda_averaged(x, y).p_pp
            m = (
                p(a, b) - p(a, bp) + p(ap, b) + p(ap, bp)
                - p(ap, REMOVED) - p(REMOVED, b)
            )
            assert -1.0 - 1e-6 <= m <= 0.0 + 1e-6


class TestTachyonModel:
    def test_rejects_subluminal(self):
        with pytest.raises(ConfigError):
            TachyonModel(beta_t=0.5)

    def test_infinite_speed_allowed(self):
        assert TachyonModel(beta_t=math.inf).beta_t == math.inf
