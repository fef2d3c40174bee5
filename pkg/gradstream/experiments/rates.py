"""
Analytic and measured communication rates
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
from typing import Optional

import numpy as np

from gradstream.pipeline import RunConfig, run_training
from gradstream.predictors import PredictorKind
from gradstream.quantizers import QuantizerKind, QuantizerSpec, k_from_fraction

logger = logging.getLogger("experiments")

# step of the dithered quantizer when a config gives none
DEFAULT_STEP = 0.01

# (scheme, K/d) pairs of the reference rate table; None where K does not apply
REFERENCE_ROWS = (
    (QuantizerKind.TOPK, 0.015),
    (QuantizerKind.TOPK, 0.35),
    (QuantizerKind.TOPKQ, 0.23),
    (QuantizerKind.TOPKQ, 0.01),
    (QuantizerKind.TOPK, 1.2e-4),
    (QuantizerKind.TOPK, 6.5e-5),
    (QuantizerKind.SCALED_SIGN, None),
)


@dataclass
class RateRow:
    scheme: str
    k_frac: Optional[float]
    analytic_bits: Optional[float]
    measured_bits: float


def measured_rate(config: RunConfig) -> float:
    """Mean transmitted bits per component over every frame of a run"""
    rows = run_training(config)
    return float(np.mean([row.frame_bits for row in rows])) / config.d


def rate_table(configs: [RunConfig]) -> [RateRow]:
    table = []
    for config in configs:
        spec = config.quantizer
        k_frac = spec.k / config.d if spec.kind.is_top_k_family() else None
        row = RateRow(spec.kind.value, k_frac, config.analytic_bits(), measured_rate(config))
        logger.info("rate: %s K/d=%r analytic=%r measured=%r", row.scheme, k_frac, row.analytic_bits, row.measured_bits)
        table.append(row)
    return table


def _with_quantizer(base: RunConfig, spec: QuantizerSpec) -> RunConfig:
    predictor = base.predictor
    if predictor == PredictorKind.ESTK and not spec.kind.is_top_k_family():
        predictor = PredictorKind.ZERO
    return replace(base, quantizer=spec, predictor=predictor)


def scheme_configs(base: RunConfig) -> [RunConfig]:
    """base run repeated once per scheme, with base's K (1% of d without one) and step"""
    k = base.quantizer.k or k_from_fraction(0.01, base.d)
    step = base.quantizer.step or DEFAULT_STEP
    specs = [
        QuantizerSpec(QuantizerKind.TOPK, k=k),
        QuantizerSpec(QuantizerKind.TOPKQ, k=k),
        QuantizerSpec(QuantizerKind.SCALED_SIGN),
        QuantizerSpec(QuantizerKind.DITHERED, step=step),
        QuantizerSpec(QuantizerKind.NONE),
    ]
    return [_with_quantizer(base, spec) for spec in specs]


def reference_configs(base: RunConfig) -> [RunConfig]:
    """base run at each (scheme, K/d) of the reference table"""
    configs = []
    for kind, fraction in REFERENCE_ROWS:
        k = k_from_fraction(fraction, base.d) if fraction is not None else None
        configs.append(_with_quantizer(base, QuantizerSpec(kind, k=k)))
    return configs
