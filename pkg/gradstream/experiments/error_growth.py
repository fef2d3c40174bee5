"""
Growth of the quantization error with and without error feedback
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

import numpy as np

from gradstream.pipeline import RunConfig, run_training
from gradstream.predictors import PredictorKind
from gradstream.problems import ProblemKind
from gradstream.quantizers import QuantizerKind, QuantizerSpec, k_from_fraction


@dataclass
class ErrorGrowthRow:
    t: int
    ef: bool
    error_norm_sq: float


def run_error_growth(
    ef: bool,
    iters: int = 100,
    d: int = 1000,
    k_frac: float = 0.01,
    beta: float = 0.99,
    seed: int = 0,
    kind=QuantizerKind.TOPKQ,
    predictor=PredictorKind.LINEAR,
) -> [ErrorGrowthRow]:
    """
    ||e_t||^2 for t = 0..iters of one worker on the Gaussian stream with a
    linear predictor. The last row is t = iters so both ends of the horizon
    are observable.
    """
    config = RunConfig(
        d=d,
        quantizer=QuantizerSpec(kind, k=k_from_fraction(k_frac, d)),
        predictor=predictor,
        beta=beta,
        ef=ef,
        iters=iters + 1,
        lr=1.0,
        problem=ProblemKind.GAUSSIAN,
        seed=seed,
    )
    return error_growth_from(config)


def error_growth_from(config: RunConfig) -> [ErrorGrowthRow]:
    return [ErrorGrowthRow(row.t, config.ef, row.mse * config.d) for row in run_training(config)]


def growth_ratio(rows: [ErrorGrowthRow], early: int = 10, late: int = 100) -> float:
    """||e_late||^2 / ||e_early||^2"""
    by_t = {row.t: row.error_norm_sq for row in rows}
    return by_t[late] / by_t[early]


def boundedness_ratio(rows: [ErrorGrowthRow]) -> float:
    """max over t in [50, 100] of ||e_t||^2 over its median over t in [10, 50]"""
    late = [row.error_norm_sq for row in rows if 50 <= row.t <= 100]
    early = [row.error_norm_sq for row in rows if 10 <= row.t <= 50]
    return float(max(late) / np.median(early))
