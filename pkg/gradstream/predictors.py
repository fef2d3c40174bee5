"""
Predictors shared by a worker and its decoding chain at the master
"""
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
from dataclasses import dataclass
from enum import Enum, unique

import numpy as np

from gradstream.core import ParamVector, SparseUpdate, check_dimension
from gradstream.error import G_CONFIG, G_INVALID_PARAMETER, G_INVALID_STATE


@unique
class PredictorKind(str, Enum):
    ZERO = "zero"
    LINEAR = "linear"
    ESTK = "estk"


def check_beta(beta: float, name: str = "beta"):
    if not 0.0 <= beta < 1.0:
        raise G_CONFIG.with_detail(f"{name}: {beta} not in [0, 1)")


@dataclass(frozen=True)
class PredictorSpec:
    kind: PredictorKind
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "kind", PredictorKind(self.kind))
        check_beta(self.beta)


def predict_zero(r_tilde: ParamVector) -> ParamVector:
    return np.zeros_like(r_tilde, dtype=np.float64)


def predict_linear(r_tilde: ParamVector, beta: float) -> ParamVector:
    """First-order linear prediction beta * r_tilde"""
    if not 0.0 <= beta < 1.0:
        raise G_INVALID_PARAMETER.with_detail(f"beta={beta} not in [0, 1)")
    return beta * np.asarray(r_tilde, dtype=np.float64)


@dataclass(frozen=True)
class EstKState:
    """
    Per-component momentum estimate p and staleness tau, the number of
    iterations since the component was last transmitted.
    """

    p: np.ndarray
    tau: np.ndarray
    beta: float

    @classmethod
    def fresh(cls, d: int, beta: float) -> "EstKState":
        check_dimension(d)
        return cls(np.zeros(d, dtype=np.float64), np.zeros(d, dtype=np.int64), float(beta))

    @property
    def dim(self) -> int:
        return int(self.p.size)


def geometric_sum(tau: np.ndarray, beta: float) -> np.ndarray:
    """beta + beta^2 + ... + beta^(tau+1), elementwise"""
    if beta == 0.0:
        return np.zeros(np.shape(tau), dtype=np.float64)
    return beta * (1.0 - np.power(beta, np.asarray(tau, dtype=np.float64) + 1.0)) / (1.0 - beta)


def estk_prediction(state: EstKState) -> ParamVector:
    return np.power(state.beta, state.tau.astype(np.float64) + 1.0) * state.p


def estk_update(state: EstKState, u_tilde: SparseUpdate) -> (EstKState, ParamVector):
    """
    Advance the estimator with the transmitted update. Components present in
    u_tilde average the momentum implied since their last transmission and
    reset their staleness; the rest age by one. Returns the new state and the
    prediction r_hat for the next iteration.
    """
    if u_tilde.dim != state.dim:
        raise G_INVALID_STATE.with_detail(f"update has d={u_tilde.dim}, state d={state.dim}")
    update = u_tilde.nonzero()
    p = state.p.copy()
    tau = state.tau + 1
    j = update.indices
    if j.size:
        stale = state.tau[j]
        p[j] = (geometric_sum(stale, state.beta) * state.p[j] + update.values) / (stale + 1.0)
        tau[j] = 0
    new_state = EstKState(p, tau, state.beta)
    return new_state, estk_prediction(new_state)


class Predictor:
    """
    Predictor characteristics. Implementations are pure over their state so a
    worker and the master chain stay in lockstep when fed the same updates.
    """

    def __init__(self, spec: PredictorSpec):
        self.spec = spec

    def initial_state(self, d: int):
        return None

    def advance(self, state, u_tilde: ParamVector, r_tilde: ParamVector):
        """Returns (state', r_hat for the next iteration)"""
        raise NotImplementedError


class ZeroPredictor(Predictor):
    def advance(self, state, u_tilde: ParamVector, r_tilde: ParamVector):
        return state, predict_zero(r_tilde)


class LinearPredictor(Predictor):
    def advance(self, state, u_tilde: ParamVector, r_tilde: ParamVector):
        return state, predict_linear(r_tilde, self.spec.beta)


class EstKPredictor(Predictor):
    def initial_state(self, d: int) -> EstKState:
        return EstKState.fresh(d, self.spec.beta)

    def advance(self, state: EstKState, u_tilde: ParamVector, r_tilde: ParamVector):
        return estk_update(state, SparseUpdate.from_dense(u_tilde))


_PREDICTORS = {
    PredictorKind.ZERO: ZeroPredictor,
    PredictorKind.LINEAR: LinearPredictor,
    PredictorKind.ESTK: EstKPredictor,
}


def get_predictor(spec: PredictorSpec) -> Predictor:
    return _PREDICTORS[spec.kind](spec)
