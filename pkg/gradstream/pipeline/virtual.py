"""
Virtual iterates of an error-feedback run without momentum
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
import numpy as np

from gradstream.core import ParamVector
from gradstream.error import G_INVALID_INPUT, G_NUMERIC, G_UNSUPPORTED_CONFIGURATION
from gradstream.pipeline.training import History


def virtual_iterates(history: History, rtol: float = 1e-9) -> [ParamVector]:
    """
    w~_0 = w_0 and w~_{t+1} = w_{t+1} - eta_t mean(e_t). With beta = 0 and error
    feedback these evolve like uncompressed SGD,
    w~_{t+1} = w~_t - eta_t mean(g_t); a relative violation above rtol raises.
    """
    if history.beta != 0.0 or not history.ef_enabled:
        raise G_UNSUPPORTED_CONFIGURATION.with_detail(
            f"virtual iterates need beta=0 with error feedback (beta={history.beta}, ef={history.ef_enabled})"
        )
    steps = len(history.step_sizes)
    if len(history.iterates) != steps + 1:
        raise G_INVALID_INPUT.with_detail("history must hold T+1 iterates for T steps")
    virtual = [np.array(history.iterates[0], dtype=np.float64)]
    for t in range(steps):
        virtual.append(history.iterates[t + 1] - history.step_sizes[t] * history.mean_errors[t])
    deviation = recurrence_deviation(history, virtual)
    if deviation > rtol:
        raise G_NUMERIC.with_detail(f"virtual iterate recurrence off by {deviation:.3e} (relative)")
    return virtual


def recurrence_deviation(history: History, virtual: [ParamVector]) -> float:
    """Largest relative gap between w~_{t+1} and w~_t - eta_t mean(g_t)"""
    worst = 0.0
    for t, eta in enumerate(history.step_sizes):
        expected = virtual[t] - eta * history.mean_gradients[t]
        scale = max(float(np.linalg.norm(expected)), np.finfo(np.float64).tiny)
        worst = max(worst, float(np.linalg.norm(virtual[t + 1] - expected)) / scale)
    return worst
