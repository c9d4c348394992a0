import math

import numpy as np
import pytest

from qsl_dephasing.model import (
    Coupling,
    OhmicSpectralDensity,
    ThermalEnvironment,
    classify_coupling,
    spectral_density,
    thermal_kernel,
)
from qsl_dephasing.numerics import gamma_fn, integrate_semi_infinite


class TestSpectralDensity:
    def test_ohmic_at_cutoff(self):
        sd = OhmicSpectralDensity(1.0, 1.0)
        assert spectral_density(sd, 1.0) == pytest.approx(math.exp(-1.0), rel=1e-12)

    @pytest.mark.parametrize("s", [0.3, 1.0, 2.5])
    def test_vanishes_at_zero(self, s):
        assert spectral_density(OhmicSpectralDensity(s), 0.0) == 0.0

    def test_ohmic_maximum_at_cutoff(self):
        sd = OhmicSpectralDensity(1.0, 1.0)
        omega = np.linspace(0.0, 5.0, 100_001)
        j = spectral_density(sd, omega)
        assert omega[int(np.argmax(j))] == pytest.approx(1.0, abs=1e-4)

    def test_negative_frequency_rejected(self):
        with pytest.raises(ValueError):
            spectral_density(OhmicSpectralDensity(1.0), -0.1)

    def test_invalid_parameters_rejected(self):
        with pytest.raises(ValueError):
            OhmicSpectralDensity(0.0)
        with pytest.raises(ValueError):
            OhmicSpectralDensity(1.0, omega_c=-1.0)

    @pytest.mark.parametrize("s", [0.5, 1.0, 2.0, 4.0])
    def test_total_weight_is_gamma(self, s):
        # int J = omega_c^2 Gamma(s+1); here omega_c = 1.
        sd = OhmicSpectralDensity(s, 1.0)
        result = integrate_semi_infinite(lambda w: spectral_density(sd, w), tail_power=s)
        assert result.converged
        assert result.value == pytest.approx(gamma_fn(s + 1.0), rel=1e-9)

    def test_cutoff_scaling(self):
        # J integrates to omega_c^2 Gamma(s+1) for general cutoff.
        sd = OhmicSpectralDensity(1.5, 2.0)
        result = integrate_semi_infinite(
            lambda w: spectral_density(sd, w), tail_scale=2.0, tail_power=1.5
        )
        assert result.value == pytest.approx(4.0 * gamma_fn(2.5), rel=1e-9)


class TestClassifyCoupling:
    def test_regions(self):
        assert classify_coupling(0.5) is Coupling.SUB_OHMIC
        assert classify_coupling(1.0) is Coupling.OHMIC
        assert classify_coupling(4.0) is Coupling.SUPER_OHMIC

    def test_ohmic_within_tolerance(self):
        assert classify_coupling(1.0 + 5e-13) is Coupling.OHMIC
        assert classify_coupling(1.0 - 5e-13) is Coupling.OHMIC
        assert classify_coupling(1.0 + 1e-11) is Coupling.SUPER_OHMIC

    def test_domain_error(self):
        with pytest.raises(ValueError):
            classify_coupling(0.0)


class TestThermalKernel:
    def test_zero_regime_is_unity(self):
        env = ThermalEnvironment.zero()
        assert thermal_kernel(0.01, env) == 1.0
        assert thermal_kernel(50.0, env) == 1.0

    def test_finite_matches_coth(self):
        env = ThermalEnvironment.finite(0.5)
        assert thermal_kernel(1.0, env) == pytest.approx(1.0 / math.tanh(1.0), rel=1e-12)

    def test_high_t_limit(self):
        env = ThermalEnvironment.high_t(1.0)
        assert thermal_kernel(0.5, env) == pytest.approx(4.0, rel=1e-14)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            thermal_kernel(0.0, ThermalEnvironment.finite(1.0))

    def test_bounded_below_and_nonincreasing(self):
        env = ThermalEnvironment.finite(1.5)
        omega = np.logspace(-8, 2, 500)
        k = thermal_kernel(omega, env)
        assert np.all(k >= 1.0)
        assert np.all(np.diff(k) <= 0.0)  # saturates at exactly 1.0 in floats
        assert k[-1] == pytest.approx(1.0, rel=1e-10)

    def test_series_guard_consistency(self):
        # At omega/2T = 1e-5 the guarded branch must track 2T/omega + omega/6T.
        env = ThermalEnvironment.finite(2.0)
        omega = 2.0 * env.temperature * 1e-5
        guarded = thermal_kernel(omega, env)
        series = 2.0 * env.temperature / omega + omega / (6.0 * env.temperature)
        assert guarded == pytest.approx(series, rel=1e-10)

    def test_branches_agree_at_threshold(self):
        # Series and tanh formulas coincide to machine accuracy at the switch.
        x = 1e-4
        assert (1.0 / x + x / 3.0) == pytest.approx(1.0 / math.tanh(x), rel=1e-14)


class TestEnvironmentInvariants:
    def test_finite_requires_positive_temperature(self):
        with pytest.raises(ValueError):
            ThermalEnvironment.finite(0.0)

    def test_high_t_requires_positive_omega_t(self):
        with pytest.raises(ValueError):
            ThermalEnvironment.high_t(0.0)

    def test_zero_forces_zero_temperature(self):
        from qsl_dephasing.model import Regime

        with pytest.raises(ValueError):
            ThermalEnvironment(Regime.ZERO, temperature=0.5)
