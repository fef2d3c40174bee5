"""
Component traces of the single-worker Gaussian-stream system
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
from dataclasses import replace

import numpy as np

from gradstream.error import G_UNSUPPORTED_CONFIGURATION
from gradstream.experiments.constants import PEAK_WINDOW
from gradstream.experiments.metrics import MetricsRow
from gradstream.pipeline import RunConfig, run_training
from gradstream.predictors import PredictorKind
from gradstream.problems import ProblemKind
from gradstream.quantizers import QuantizerKind, QuantizerSpec
from gradstream.settings import settings

logger = logging.getLogger("experiments")


def run_timeseries(
    beta: float,
    d: int = 1000,
    k: int = 10,
    iters: int = 1000,
    predictor=PredictorKind.ZERO,
    seed: int = 0,
    component: int = None,
    kind=QuantizerKind.TOPK,
) -> [MetricsRow]:
    """
    One worker with error feedback on i.i.d. standard normal gradients and a
    constant step, tracing v_t, u_t, u_tilde_t and r_hat_t at one component
    (the trace_component setting when not given).
    """
    if not QuantizerKind(kind).is_top_k_family():
        raise G_UNSUPPORTED_CONFIGURATION.with_detail(f"timeseries needs Top-K, not {QuantizerKind(kind).value}")
    if component is None:
        component = int(settings.get("TRACE_COMPONENT", 0))
    config = RunConfig(
        d=d,
        quantizer=QuantizerSpec(kind, k=k),
        predictor=predictor,
        beta=beta,
        ef=True,
        iters=iters,
        lr=1.0,
        problem=ProblemKind.GAUSSIAN,
        seed=seed,
        trace_component=component,
    )
    return timeseries_from(config)


def timeseries_from(config: RunConfig) -> [MetricsRow]:
    if not config.quantizer.kind.is_top_k_family():
        raise G_UNSUPPORTED_CONFIGURATION.with_detail("timeseries needs a Top-K quantizer")
    if config.workers != 1 or not config.ef:
        raise G_UNSUPPORTED_CONFIGURATION.with_detail("timeseries runs one worker with error feedback")
    if config.lr_decay_every:
        raise G_UNSUPPORTED_CONFIGURATION.with_detail("timeseries uses a constant step size")
    if config.trace_component is None:
        config = replace(config, trace_component=int(settings.get("TRACE_COMPONENT", 0)))
    logger.info("timeseries: beta=%r K=%d predictor=%s", config.beta, config.quantizer.k, config.predictor.value)
    return run_training(config)


def peak_times(rows: [MetricsRow]) -> np.ndarray:
    """Iterations at which the traced component was transmitted"""
    return np.array([row.t for row in rows if row.trace_uq != 0.0], dtype=np.int64)


def interval_cv(rows: [MetricsRow]) -> float:
    """Coefficient of variation of the gaps between transmissions; nan with fewer than two gaps"""
    gaps = np.diff(peak_times(rows))
    if gaps.size < 2:
        return float("nan")
    return float(np.std(gaps) / np.mean(gaps))


def peak_residual(rows: [MetricsRow], window=PEAK_WINDOW) -> float:
    """max |u_t[j]| over t in the window"""
    lo, hi = window
    values = [abs(row.trace_u) for row in rows if lo <= row.t <= hi]
    return max(values) if values else 0.0


def tracking_error(rows: [MetricsRow], window=PEAK_WINDOW) -> float:
    """RMS of r_hat_t[j] - v_t[j] relative to the RMS of v_t[j] over the window"""
    lo, hi = window
    picked = [row for row in rows if lo <= row.t <= hi]
    v = np.array([row.trace_v for row in picked])
    rhat = np.array([row.trace_rhat for row in picked])
    scale = np.sqrt(np.mean(v * v))
    if scale == 0:
        return 0.0
    return float(np.sqrt(np.mean((rhat - v) ** 2)) / scale)
