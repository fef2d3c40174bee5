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
import pytest

from gradstream.experiments.rates import (
    DEFAULT_STEP,
    REFERENCE_ROWS,
    measured_rate,
    rate_table,
    reference_configs,
    scheme_configs,
)
from gradstream.pipeline import RunConfig
from gradstream.predictors import PredictorKind
from gradstream.quantizers import QuantizerKind, QuantizerSpec

BASE = RunConfig(d=200000, quantizer=QuantizerSpec(QuantizerKind.TOPK, k=3000), iters=1)

REFERENCE_BITS = [0.59236, 12.134, 1.008, 0.090793, 0.005576, 0.0030779, 1.0]


def test_reference_table():
    table = rate_table(reference_configs(BASE))
    assert [(row.scheme, row.k_frac) for row in table] == [
        (kind.value, fraction) for kind, fraction in REFERENCE_ROWS
    ]
    for row, expected in zip(table, REFERENCE_BITS):
        assert row.analytic_bits == pytest.approx(expected, rel=1e-3)
        # the frames spend close to the entropy estimate
        assert row.measured_bits == pytest.approx(row.analytic_bits, rel=0.1)


def test_scheme_configs():
    configs = scheme_configs(RunConfig(d=300, quantizer=QuantizerSpec(QuantizerKind.SCALED_SIGN), predictor="zero"))
    assert [c.quantizer.kind for c in configs] == list(QuantizerKind)
    assert configs[0].quantizer.k == 3
    assert configs[3].quantizer.step == pytest.approx(DEFAULT_STEP)


def test_estk_falls_back_off_top_k():
    base = RunConfig(d=100, quantizer=QuantizerSpec(QuantizerKind.TOPK, k=5), predictor=PredictorKind.ESTK)
    predictors = [c.predictor for c in scheme_configs(base)]
    assert predictors == [PredictorKind.ESTK] * 2 + [PredictorKind.ZERO] * 3


def test_measured_rates():
    base = RunConfig(d=64, quantizer=QuantizerSpec(QuantizerKind.SCALED_SIGN), iters=3, workers=2)
    assert measured_rate(base) == pytest.approx((64 + 32) / 64)
    lossless = RunConfig(d=64, quantizer=QuantizerSpec(QuantizerKind.NONE), iters=2)
    assert measured_rate(lossless) == 64.0
    dithered = rate_table([RunConfig(d=64, quantizer=QuantizerSpec(QuantizerKind.DITHERED, step=0.5))])
    assert dithered[0].analytic_bits is None
    assert dithered[0].k_frac is None
    assert dithered[0].measured_bits > 1.0
