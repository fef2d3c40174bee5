"""
Momentum applied at the master to quantized gradients, and the error it
accumulates
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

import numpy as np

from gradstream.error import G_UNSUPPORTED_CONFIGURATION
from gradstream.pipeline.master import apply_update, decode_round
from gradstream.pipeline.training import RunConfig, Simulation
from gradstream.predictors import PredictorKind


@dataclass
class MomentumDeviationRow:
    """
    ||v~_t - v_t||^2 between the master's momentum over decoded updates and
    the momentum over the exact gradients, next to the value the
    quantization errors alone predict for it.
    """

    t: int
    ef: bool
    deviation: float
    oracle: float


class MasterMomentum(Simulation):
    """
    Workers quantize their (error-fed) gradients with no momentum or
    prediction of their own; the master keeps a momentum of rate master_beta
    over the decoded mean and steps along it.
    """

    def __init__(self, config: RunConfig):
        if config.predictor != PredictorKind.ZERO:
            raise G_UNSUPPORTED_CONFIGURATION.with_detail("master-side momentum runs without a predictor")
        if config.lr_decay_every:
            raise G_UNSUPPORTED_CONFIGURATION.with_detail("master-side momentum needs a constant step size")
        super().__init__(replace(config, beta=0.0), keep_history=True)
        self.master_beta = config.master_beta
        d = config.d
        self.v_tilde = np.zeros(d)
        self.v_ideal = np.zeros(d)
        # sum over k <= t of master_beta^(t-k) mean(e_k)
        self.acc = np.zeros(d)
        self.deviations = []

    def update_parameters(self, blobs, eta: float):
        b = self.master_beta
        self.master, mean = decode_round(self.master, blobs)
        t = self.master.t - 1
        mean_g = self.history.mean_gradients[-1]
        mean_e = self.history.mean_errors[-1]

        self.v_tilde = b * self.v_tilde + (1.0 - b) * mean
        self.v_ideal = b * self.v_ideal + (1.0 - b) * mean_g
        self.master = apply_update(self.master, self.v_tilde, eta)

        if self.config.ef:
            oracle = -(1.0 - b) * mean_e + (1.0 - b) ** 2 * self.acc
            self.acc = b * self.acc + mean_e
        else:
            self.acc = b * self.acc + mean_e
            oracle = (1.0 - b) * self.acc
        diff = self.v_tilde - self.v_ideal
        self.deviations.append(
            MomentumDeviationRow(t, self.config.ef, float(np.dot(diff, diff)), float(np.dot(oracle, oracle)))
        )


def master_momentum_sim(config: RunConfig) -> [MomentumDeviationRow]:
    """Deviation traces with error feedback off, then on"""
    rows = []
    for ef in (False, True):
        sim = MasterMomentum(replace(config, ef=ef))
        sim.run()
        rows.extend(sim.deviations)
    return rows
