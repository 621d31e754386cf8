# Copyright (c) 2022 Sony Group Corporation. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import numpy as np
import pytest
from scipy.linalg import expm

from amsp_dse.estimator import (GaussianBelief, NoiseModel, correct, init_belief,
                                multi_step_predict, predict_substep)
from amsp_dse.model import MachineModel, MachineParams
from amsp_dse.model.machine import measurement_fn
from amsp_dse.scenario.network import steady_state_init
from amsp_dse.utils.errors import ConfigError, InitializationError, NumericalError


class LinearModel(object):
    r"""``x' = A x`` discretized with Euler, measured through ``C``."""

    def __init__(self, A, C):
        self.A = np.asarray(A, dtype=float)
        self.C = np.asarray(C, dtype=float)

    def transition(self, x, u, dt):
        return x + dt * self.A @ x

    def transition_jacobian(self, x, u, dt):
        return np.eye(len(x)) + dt * self.A

    def measure(self, x, u):
        return self.C @ x

    def measurement_jacobian(self, x, u):
        return self.C


@pytest.fixture
def params():
    return MachineParams.from_frequency(60.0, H=6.5, K_D=0.0, x_d=1.8, x_q=1.7, xp_d=0.3,
                                        xp_q=0.55, Tp_d0=8.0, Tp_q0=0.4)


@pytest.fixture
def equilibrium(params):
    return steady_state_init((0.8, 1.0), 1.0, 0.4, params)


@pytest.fixture
def linear():
    return LinearModel([[-0.5, 2.0], [-2.0, -0.5]], [[1.0, 0.0]])


def test_init_belief_inverts_equilibrium(params, equilibrium):
    x0, u0 = equilibrium
    P0 = np.diag([1.0, 2.0, 3.0, 4.0])
    b = init_belief(measurement_fn(x0, u0, params), u0, params, P0)
    np.testing.assert_allclose(b.mean, x0, atol=1e-8)
    np.testing.assert_array_equal(b.cov, P0)


def test_init_belief_averages(params, equilibrium):
    x0, u0 = equilibrium
    z = measurement_fn(x0, u0, params)
    noisy = np.stack([z + 0.01, z - 0.01])
    b = init_belief(noisy, np.stack([u0, u0]), MachineModel(params), np.eye(4))
    np.testing.assert_allclose(b.mean, x0, atol=1e-8)


def test_init_belief_with_noise_stays_close(params, equilibrium):
    x0, u0 = equilibrium
    z = measurement_fn(x0, u0, params)
    rng = np.random.default_rng(0)
    for _ in range(100):
        noisy = z + 0.04 * np.abs(z).max() / np.sqrt(2) * rng.standard_normal(2)
        b = init_belief(noisy, u0, params, np.eye(4))
        assert np.linalg.norm(b.mean - x0) < 10 * 0.04


def test_init_belief_degenerate(params):
    with pytest.raises(InitializationError):
        init_belief([0.0, 0.0], [0.8, 1.9, 0.0, 0.0], params, np.eye(4))
    with pytest.raises(InitializationError):
        init_belief(np.zeros((0, 2)), np.zeros((0, 4)), params, np.eye(4))


def test_predict_without_noise(params, equilibrium):
    x0, u0 = equilibrium
    model = MachineModel(params)
    P = np.diag([1e-2, 1e-4, 1e-3, 1e-3])
    b = predict_substep(GaussianBelief(x0, P), u0, model, 0.04, np.zeros((4, 4)))
    np.testing.assert_allclose(b.mean, x0, atol=1e-9)
    F = model.transition_jacobian(x0, u0, 0.04)
    np.testing.assert_allclose(b.cov, F @ P @ F.T, rtol=1e-12, atol=1e-18)


def test_predict_from_certainty(params, equilibrium):
    x0, u0 = equilibrium
    Q = np.diag([1e-6, 1e-8, 1e-6, 1e-6])
    b = predict_substep(GaussianBelief(x0, np.zeros((4, 4))), u0, MachineModel(params), 0.04, Q)
    np.testing.assert_array_equal(b.cov, Q)


def test_multi_step_matches_linear_recursion(linear):
    x = np.array([1.0, -0.5])
    P = np.array([[0.3, 0.1], [0.1, 0.2]])
    Q = np.diag([1e-3, 2e-3])
    noise = NoiseModel(Q, np.eye(1))
    dt, m_p = 0.1, 3
    F = np.eye(2) + dt / 8 * linear.A
    Fn = np.linalg.matrix_power(F, 8)
    expected = Fn @ P @ Fn.T + sum(np.linalg.matrix_power(F, j) @ Q @ np.linalg.matrix_power(F, j).T
                                   for j in range(8))
    b = multi_step_predict(GaussianBelief(x, P), None, linear, dt, m_p, noise)
    np.testing.assert_allclose(b.mean, Fn @ x, atol=1e-12)
    np.testing.assert_allclose(b.cov, expected, atol=1e-10)

    scaled = multi_step_predict(GaussianBelief(x, P), None, linear, dt, m_p, noise, 'scaled')
    expected_scaled = Fn @ P @ Fn.T + sum(
        np.linalg.matrix_power(F, j) @ (Q / 8) @ np.linalg.matrix_power(F, j).T for j in range(8))
    np.testing.assert_allclose(scaled.cov, expected_scaled, atol=1e-10)


def test_zero_factor_is_one_substep(params, equilibrium):
    x0, u0 = equilibrium
    model = MachineModel(params)
    b = GaussianBelief(x0 + 0.01, np.eye(4) * 1e-3)
    noise = NoiseModel(np.eye(4) * 1e-6, np.eye(2) * 1e-3)
    one = multi_step_predict(b, u0, model, 0.04, 0, noise)
    step = predict_substep(b, u0, model, 0.04, noise.Q)
    np.testing.assert_array_equal(one.mean, step.mean)
    np.testing.assert_array_equal(one.cov, step.cov)


def test_multi_step_converges_to_exponential(linear):
    x = np.array([1.0, -0.5])
    noise = NoiseModel(np.eye(2) * 1e-6, np.eye(1))
    # a short interval keeps the first-order term dominant from a single step on
    dt = 0.02
    exact = expm(linear.A * dt) @ x
    errors = [np.linalg.norm(multi_step_predict(GaussianBelief(x, np.eye(2)), None, linear,
                                                dt, m, noise).mean - exact)
              for m in range(0, 7)]
    ratios = np.array(errors[:-1]) / np.array(errors[1:])
    np.testing.assert_allclose(ratios, 2.0, atol=0.3)


def test_invalid_prediction_arguments(linear):
    b = GaussianBelief(np.zeros(2), np.eye(2))
    noise = NoiseModel(np.eye(2), np.eye(1))
    with pytest.raises(ValueError):
        multi_step_predict(b, None, linear, 0.1, -1, noise)
    with pytest.raises(ConfigError):
        multi_step_predict(b, None, linear, 0.1, 1, noise, 'half')


def test_scalar_gain():
    model = LinearModel([[0.0]], [[1.0]])
    b = correct(GaussianBelief([0.0], [[1.0]]), [2.0], None, model, np.eye(1))
    assert b.mean[0] == pytest.approx(1.0)
    assert b.cov[0, 0] == pytest.approx(0.5)


def test_huge_measurement_noise(linear):
    prior = GaussianBelief([1.0, -0.5], [[0.3, 0.1], [0.1, 0.2]])
    b = correct(prior, [5.0], None, linear, np.eye(1) * 1e12)
    assert np.max(np.abs(b.mean - prior.mean)) < 1e-9
    np.testing.assert_allclose(b.cov, prior.cov, atol=1e-12)


def test_zero_innovation_contracts(params, equilibrium):
    x0, u0 = equilibrium
    model = MachineModel(params)
    prior = GaussianBelief(x0, np.diag([1e-2, 1e-4, 1e-3, 1e-3]))
    b = correct(prior, model.measure(x0, u0), u0, model, np.eye(2) * 1.6e-3)
    np.testing.assert_allclose(b.mean, x0, atol=1e-15)
    assert np.trace(b.cov) <= np.trace(prior.cov)
    np.testing.assert_array_equal(b.cov, b.cov.T)


def test_singular_innovation():
    model = LinearModel([[0.0]], [[0.0]])
    with pytest.raises(NumericalError):
        correct(GaussianBelief([0.0], [[1.0]]), [1.0], None, model, np.zeros((1, 1)))


@pytest.mark.parametrize('Q, R', [
    (np.diag([1.0, 0.0]), np.eye(1)),
    (np.eye(2), np.array([[-1.0]])),
    (np.array([[1.0, 0.2], [0.0, 1.0]]), np.eye(1)),
    (np.ones((2, 3)), np.eye(1)),
])
def test_invalid_noise_model(Q, R):
    with pytest.raises(ConfigError):
        NoiseModel(Q, R)
