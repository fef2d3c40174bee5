"""
Quantization error with and without Est-K prediction on logistic regression
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
from gradstream.pipeline import RunConfig, run_training
from gradstream.predictors import PredictorKind
from gradstream.problems import ProblemKind
from gradstream.quantizers import QuantizerKind, QuantizerSpec


@dataclass
class MseRow:
    t: int
    predictor: str
    mse: float


def mse_config(d: int = 200, k: int = 2, iters: int = 2000, beta: float = 0.995, lr: float = 0.1, seed: int = 0) -> RunConfig:
    return RunConfig(
        d=d,
        quantizer=QuantizerSpec(QuantizerKind.TOPK, k=k),
        predictor=PredictorKind.ZERO,
        beta=beta,
        ef=True,
        iters=iters,
        lr=lr,
        problem=ProblemKind.LOGISTIC,
        seed=seed,
    )


def run_mse_comparison(config: RunConfig) -> [MseRow]:
    """
    (1/d)||e_t||^2 per iteration, averaged over workers, for the zero
    predictor and for Est-K under the same K and seed. Est-K applies to Top-K
    only; under the lossless scheme both runs use the zero predictor.
    """
    if not config.quantizer.kind.is_top_k_family() and config.quantizer.kind != QuantizerKind.NONE:
        raise G_UNSUPPORTED_CONFIGURATION.with_detail("mse comparison needs a Top-K quantizer")
    if not config.ef:
        raise G_UNSUPPORTED_CONFIGURATION.with_detail("mse comparison runs with error feedback")
    table = []
    for predictor in (PredictorKind.ZERO, PredictorKind.ESTK):
        quantizer_ok = config.quantizer.kind.is_top_k_family()
        run = replace(config, predictor=predictor if quantizer_ok else PredictorKind.ZERO)
        per_t = {}
        for row in run_training(run):
            per_t.setdefault(row.t, []).append(row.mse)
        table.extend(MseRow(t, predictor.value, float(np.mean(values))) for t, values in sorted(per_t.items()))
    return table


def late_mean(rows: [MseRow], predictor) -> float:
    """Mean mse over the final quarter of the run"""
    name = PredictorKind(predictor).value
    values = [row.mse for row in rows if row.predictor == name]
    return float(np.mean(values[len(values) - len(values) // 4 :]))
