"""
Master state machine: one decoding-and-prediction chain per worker, then the
averaged parameter update
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
import logging
from dataclasses import dataclass, replace

import numpy as np

from gradstream.codec import CompressedFrame
from gradstream.core import ParamVector, check_finite, zeros
from gradstream.error import Error, G_INVALID_STEP, G_PROTOCOL
from gradstream.pipeline.channel import Channel

logger = logging.getLogger("pipeline")


@dataclass(frozen=True)
class ChainState:
    """Master-side replica of one worker's predictor"""

    r_hat: ParamVector
    predictor_state: object = None


@dataclass(frozen=True)
class MasterState:
    w: ParamVector
    chains: tuple
    channel: Channel
    t: int = 0

    @classmethod
    def initial(cls, w0: ParamVector, channel: Channel, workers: int) -> "MasterState":
        d = channel.d
        chains = tuple(
            ChainState(zeros(d), channel.predictor.initial_state(d)) for _ in range(workers)
        )
        return cls(np.array(w0, dtype=np.float64), chains, channel)


def _as_frames(blob) -> (CompressedFrame,):
    if isinstance(blob, (bytes, bytearray, CompressedFrame)):
        blob = (blob,)
    return tuple(f if isinstance(f, CompressedFrame) else CompressedFrame.from_bytes(bytes(f)) for f in blob)


def decode_round(state: MasterState, frames) -> (MasterState, ParamVector):
    """
    Decode every worker's frames and advance its chain without touching w.
    frames holds one entry per worker, each a frame, its bytes, or a sequence
    of those (one per block). Returns the new state and mean(r_tilde).
    """
    if len(frames) != len(state.chains):
        raise G_PROTOCOL.with_detail(f"{len(frames)} frames for {len(state.chains)} workers")

    channel = state.channel
    chains = []
    total = np.zeros_like(state.w)
    for worker, (chain, blob) in enumerate(zip(state.chains, frames)):
        try:
            u_tilde = channel.expand(_as_frames(blob), worker, state.t)
        except Error as err:
            if err.errcode == G_PROTOCOL.errcode:
                raise
            raise G_PROTOCOL.with_detail(f"worker {worker}: {err}") from err
        r_tilde = u_tilde + chain.r_hat
        predictor_state, r_hat = channel.predictor.advance(chain.predictor_state, u_tilde, r_tilde)
        chains.append(ChainState(r_hat, predictor_state))
        total += r_tilde

    mean = total / len(chains)
    logger.debug("master step %d: |mean update|^2=%r", state.t, float(np.dot(mean, mean)))
    return replace(state, chains=tuple(chains), t=state.t + 1), mean


def apply_update(state: MasterState, direction: ParamVector, eta: float) -> MasterState:
    """w <- w - eta * direction"""
    if not eta > 0:
        raise G_INVALID_STEP.with_detail(f"eta={eta}")
    w = state.w - eta * direction
    check_finite(w, "parameters")
    return replace(state, w=w)


def master_step(state: MasterState, frames, eta: float) -> (MasterState, ParamVector):
    """
    Decode every worker's frames, advance its chain and apply
    w <- w - eta * mean(r_tilde). Returns the new state and the averaged update.
    """
    if not eta > 0:
        raise G_INVALID_STEP.with_detail(f"eta={eta}")
    state, mean = decode_round(state, frames)
    return apply_update(state, mean, eta), mean
