import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsl_dephasing.model import DephasingModel, OhmicSpectralDensity, ThermalEnvironment
from qsl_dephasing.qubit import (
    QubitState,
    evolve_analytic,
    evolve_ode,
    l1_coherence,
    trace_distance,
)

ZERO = ThermalEnvironment.zero()


def model(s, env=ZERO, omega_0=1.0):
    return DephasingModel(OhmicSpectralDensity(s), env, omega_0)


def random_state(rng):
    p1 = rng.uniform(0.0, 1.0)
    radius = math.sqrt(p1 * (1.0 - p1)) * rng.uniform(0.0, 1.0)
    phase = rng.uniform(0.0, 2.0 * math.pi)
    return QubitState(p1=p1, c=radius * cmath.exp(1j * phase))


class TestQubitState:
    def test_plus_state(self):
        plus = QubitState.plus()
        assert plus.p1 == 0.5 and plus.c == 0.5

    def test_population_bounds(self):
        with pytest.raises(ValueError):
            QubitState(p1=1.2, c=0.0)

    def test_positivity(self):
        with pytest.raises(ValueError):
            QubitState(p1=0.5, c=0.51)
        with pytest.raises(ValueError):
            QubitState(p1=1.0, c=0.1)


class TestEvolveAnalytic:
    def test_zero_time_identity(self):
        rho = QubitState(p1=0.3, c=0.2 + 0.1j)
        assert evolve_analytic(model(1.0), rho, 0.0) == rho

    def test_diagonal_states_frozen(self):
        rho = QubitState(p1=0.7, c=0.0)
        assert evolve_analytic(model(4.0), rho, 5.0) == rho

    def test_plus_state_ohmic(self):
        out = evolve_analytic(model(1.0), QubitState.plus(), 1.0)
        expected = 0.5 * (2.0**-0.5) * cmath.exp(-1j)
        assert out.p1 == 0.5
        assert out.c.real == pytest.approx(expected.real, abs=1e-9)
        assert out.c.imag == pytest.approx(expected.imag, abs=1e-9)

    def test_populations_never_move(self):
        rho = QubitState(p1=0.25, c=0.2j)
        for t in (0.1, 1.0, 10.0):
            assert evolve_analytic(model(4.0), rho, t).p1 == 0.25

    def test_coherence_never_grows(self):
        rho = QubitState.plus()
        previous = abs(rho.c)
        for t in (0.5, 1.0, 2.0, 5.0):
            now = abs(evolve_analytic(model(1.0), rho, t).c)
            assert now <= previous + 1e-15
            previous = now


class TestEvolveOde:
    @pytest.mark.parametrize(
        "s, env",
        [(0.5, ZERO), (1.0, ZERO), (4.0, ZERO), (1.0, ThermalEnvironment.finite(1.5))],
    )
    def test_matches_analytic(self, s, env):
        m = model(s, env)
        rho = QubitState.plus()
        exact = evolve_analytic(m, rho, 10.0)
        propagated = evolve_ode(m, rho, 10.0, steps=5000)
        assert propagated.p1 == exact.p1
        assert propagated.c.real == pytest.approx(exact.c.real, abs=1e-6)
        assert propagated.c.imag == pytest.approx(exact.c.imag, abs=1e-6)

    def test_population_exactly_preserved(self):
        rho = QubitState(p1=0.3, c=0.25 + 0.2j)
        assert evolve_ode(model(1.0), rho, 2.0, steps=100).p1 == 0.3

    def test_step_count_validated(self):
        with pytest.raises(ValueError):
            evolve_ode(model(1.0), QubitState.plus(), 1.0, steps=5)


class TestTraceDistance:
    def test_identical_states(self):
        rho = QubitState(p1=0.4, c=0.1j)
        assert trace_distance(rho, rho) == 0.0

    def test_orthogonal_pure_states(self):
        up = QubitState(p1=1.0, c=0.0)
        down = QubitState(p1=0.0, c=0.0)
        assert trace_distance(up, down) == 1.0

    def test_dephasing_pair_formula(self):
        # Distance between the initial state and its dephased image.
        m = model(1.0)
        rho = QubitState.plus()
        tau = 2.0
        evolved = evolve_analytic(m, rho, tau)
        expected = abs(rho.c) * abs(cmath.exp(-1j * m.omega_0 * tau) * (2.0 * abs(evolved.c)) - 1.0)
        assert trace_distance(rho, evolved) == pytest.approx(
            abs(rho.c - evolved.c), rel=1e-12
        )
        # |c| shrinks by F: the closed form in terms of F matches too.
        f = abs(evolved.c) / abs(rho.c)
        closed = abs(rho.c) * abs(cmath.exp(-1j * m.omega_0 * tau) * f - 1.0)
        assert trace_distance(rho, evolved) == pytest.approx(closed, rel=1e-12)
        assert expected >= 0.0  # sanity on the helper expression

    @given(st.integers(min_value=0, max_value=2**31 - 1))
    @settings(max_examples=50, deadline=None)
    def test_metric_axioms(self, seed):
        rng = np.random.default_rng(seed)
        a, b, c = (random_state(rng) for _ in range(3))
        assert trace_distance(a, b) == trace_distance(b, a)
        assert trace_distance(a, a) == 0.0
        assert trace_distance(a, c) <= trace_distance(a, b) + trace_distance(b, c) + 1e-12

    def test_many_random_triples(self):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            a, b, c = (random_state(rng) for _ in range(3))
            assert trace_distance(a, c) <= trace_distance(a, b) + trace_distance(b, c) + 1e-12

    def test_contractivity_in_markovian_region(self):
        m = model(1.0)
        rho1 = QubitState.plus()
        rho2 = QubitState(p1=0.5, c=-0.5)
        base = trace_distance(rho1, rho2)
        for t in np.linspace(0.1, 10.0, 25):
            dist = trace_distance(
                evolve_analytic(m, rho1, float(t)), evolve_analytic(m, rho2, float(t))
            )
            assert dist <= base + 1e-12


class TestL1Coherence:
    def test_plus_state(self):
        assert l1_coherence(QubitState.plus()) == 1.0

    def test_diagonal(self):
        assert l1_coherence(QubitState(p1=0.8, c=0.0)) == 0.0

    def test_shrinks_by_dephasing_factor(self):
        from qsl_dephasing.dephasing import dephasing_factor

        m = model(1.0)
        rho = QubitState.plus()
        for t in (0.5, 1.0, 3.0):
            evolved = evolve_analytic(m, rho, t)
            assert l1_coherence(evolved) == pytest.approx(
                l1_coherence(rho) * dephasing_factor(m, t), rel=1e-10
            )
