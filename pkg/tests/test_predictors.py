# Predictive coding of momentum-SGD updates in master-worker training
# Copyright © 2022 gradstream developers
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU Affero General Public License as
# published by the Free Software Foundation, either version 3 of the
# License, or (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU Affero General Public License for more details.
#
# You should have received a copy of the GNU Affero General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.
import numpy as np
import pytest

from gradstream.core import SparseUpdate
from gradstream.error import G_CONFIG, G_INVALID_PARAMETER, G_INVALID_STATE, Error
from gradstream.predictors import (
    EstKState,
    PredictorKind,
    PredictorSpec,
    estk_prediction,
    estk_update,
    geometric_sum,
    get_predictor,
    predict_linear,
    predict_zero,
)

from tests.test_errors import pytest_expect_error


def test_zero_predictor():
    assert np.array_equal(predict_zero(np.array([1.0, -2.0])), np.zeros(2))
    assert np.array_equal(predict_zero(np.zeros(3)), np.zeros(3))


def test_linear_predictor():
    assert np.array_equal(predict_linear(np.array([1.0, -2.0]), 0.0), np.zeros(2))
    assert np.array_equal(predict_linear(np.zeros(2), 0.9), np.zeros(2))
    assert np.allclose(predict_linear(np.array([1.0, -2.0]), 0.99), [0.99, -1.98], rtol=0, atol=1e-15)
    with pytest.raises(Error) as error:
        predict_linear(np.ones(2), 1.0)
    assert pytest_expect_error(error, G_INVALID_PARAMETER)


def test_spec_validation():
    assert PredictorSpec("estk", 0.5).kind == PredictorKind.ESTK
    for beta in (1.0, -0.1):
        with pytest.raises(Error) as error:
            PredictorSpec(PredictorKind.LINEAR, beta)
        assert pytest_expect_error(error, G_CONFIG)


def test_geometric_sum():
    assert geometric_sum(np.array([0]), 0.5).tolist() == [0.5]
    assert geometric_sum(np.array([2]), 0.5) == pytest.approx(0.5 + 0.25 + 0.125)
    assert geometric_sum(np.array([0, 7]), 0.0).tolist() == [0.0, 0.0]


def test_estk_full_first_update():
    u = np.array([0.5, -1.0, 2.0])
    state, r_hat = estk_update(EstKState.fresh(3, 0.9), SparseUpdate.from_dense(u))
    assert np.array_equal(state.p, u)
    assert state.tau.tolist() == [0, 0, 0]
    assert np.allclose(r_hat, 0.9 * u, rtol=1e-15)


def test_estk_staleness():
    """untransmitted components age and their prediction decays"""
    beta = 0.8
    state, _ = estk_update(EstKState.fresh(3, beta), SparseUpdate(3, [0, 1], [1.0, 2.0]))
    state, r_hat = estk_update(state, SparseUpdate(3, [1], [4.0]))
    assert state.tau.tolist() == [1, 0, 2]
    # component 1 was sent last round, so the old estimate is weighted by beta alone
    assert state.p[1] == pytest.approx((beta * 2.0 + 4.0) / 1)
    assert r_hat[1] == pytest.approx(beta * state.p[1])
    assert r_hat[0] == pytest.approx(beta ** 2 * 1.0)
    assert r_hat[2] == 0.0
    assert np.array_equal(r_hat, estk_prediction(state))


def test_estk_ignores_zero_entries():
    state, _ = estk_update(EstKState.fresh(2, 0.5), SparseUpdate(2, [0, 1], [0.0, 1.0]))
    assert state.tau.tolist() == [1, 0]


def test_estk_dimension_mismatch():
    with pytest.raises(Error) as error:
        estk_update(EstKState.fresh(3, 0.5), SparseUpdate(4, [0], [1.0]))
    assert pytest_expect_error(error, G_INVALID_STATE)


def test_predictor_objects(rng):
    u_tilde = np.zeros(4)
    u_tilde[2] = 1.5
    r_tilde = rng.normal(4)
    zero = get_predictor(PredictorSpec(PredictorKind.ZERO, 0.9))
    assert zero.initial_state(4) is None
    assert np.array_equal(zero.advance(None, u_tilde, r_tilde)[1], np.zeros(4))
    linear = get_predictor(PredictorSpec(PredictorKind.LINEAR, 0.9))
    assert np.array_equal(linear.advance(None, u_tilde, r_tilde)[1], 0.9 * r_tilde)
    estk = get_predictor(PredictorSpec(PredictorKind.ESTK, 0.9))
    state, r_hat = estk.advance(estk.initial_state(4), u_tilde, r_tilde)
    assert state.tau.tolist() == [1, 1, 0, 1]
    assert r_hat.tolist() == [0.0, 0.0, 0.9 * 1.5, 0.0]
