"""
Worker state machine: momentum, error feedback, prediction and quantization
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
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from gradstream.core import ParamVector, check_finite, zeros
from gradstream.error import G_INVALID_STATE, G_INVALID_STEP
from gradstream.pipeline.channel import Channel


@dataclass(frozen=True)
class WorkerState:
    """
    Memory of one worker between iterations: momentum v, quantization error e,
    the prediction r_hat for the coming iteration, the predictor's own state
    and the previous step size. u, u_tilde and r_tilde keep the signals of the
    last completed iteration.
    """

    worker: int
    channel: Channel
    beta: float
    ef_enabled: bool
    v: ParamVector
    e: ParamVector
    r_hat: ParamVector
    predictor_state: object = None
    eta_prev: float = 0.0
    t: int = 0
    u: Optional[ParamVector] = None
    u_tilde: Optional[ParamVector] = None
    r_tilde: Optional[ParamVector] = None

    @classmethod
    def initial(cls, channel: Channel, beta: float, ef_enabled: bool, worker: int = 0) -> "WorkerState":
        d = channel.d
        return cls(
            worker=worker,
            channel=channel,
            beta=float(beta),
            ef_enabled=bool(ef_enabled),
            v=zeros(d),
            e=zeros(d),
            r_hat=zeros(d),
            predictor_state=channel.predictor.initial_state(d),
        )


def worker_step(state: WorkerState, g: ParamVector, eta: float) -> ((), WorkerState):
    """
    One iteration at a worker. Returns the frames sent to the master (one per
    block) and the advanced state.
    """
    if not eta > 0:
        raise G_INVALID_STEP.with_detail(f"eta={eta}")
    g = np.asarray(g, dtype=np.float64)
    if g.shape != state.v.shape:
        raise G_INVALID_STATE.with_detail(f"gradient of shape {g.shape} for d={state.v.size}")
    check_finite(g, "gradient")

    v = state.beta * state.v + (1.0 - state.beta) * g
    if state.ef_enabled:
        r = v + (state.eta_prev / eta) * state.e
    else:
        r = v
    u = r - state.r_hat

    channel = state.channel
    frames = channel.compress(u, state.worker, state.t)
    # reconstruct from the frames so the worker sees exactly what the master sees
    u_tilde = channel.expand(frames, state.worker, state.t)
    e = u - u_tilde
    r_tilde = u_tilde + state.r_hat
    predictor_state, r_hat = channel.predictor.advance(state.predictor_state, u_tilde, r_tilde)
    for name, vector in (("momentum", v), ("error", e), ("prediction", r_hat)):
        check_finite(vector, name)

    return frames, replace(
        state,
        v=v,
        e=e,
        r_hat=r_hat,
        predictor_state=predictor_state,
        eta_prev=float(eta),
        t=state.t + 1,
        u=u,
        u_tilde=u_tilde,
        r_tilde=r_tilde,
    )
