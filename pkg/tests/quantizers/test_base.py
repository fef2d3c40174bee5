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
import itertools

import numpy as np
import pytest

from gradstream.core import RngStream
from gradstream.error import G_CONFIG, G_DOMAIN, G_INVALID_PARAMETER, Error
from gradstream.quantizers import (
    QuantizerKind,
    QuantizerSpec,
    delta_check,
    get_quantizer,
    k_from_fraction,
    top_k,
)

from tests.test_errors import pytest_expect_error


def test_spec_validation():
    """K and step are checked when the kind needs them"""
    for bad in (
        lambda: QuantizerSpec(QuantizerKind.TOPK, k=0),
        lambda: QuantizerSpec(QuantizerKind.TOPKQ),
        lambda: QuantizerSpec(QuantizerKind.DITHERED, step=0.0),
        lambda: QuantizerSpec("topk", k=5).validate(4),
    ):
        with pytest.raises(Error) as error:
            bad()
        assert pytest_expect_error(error, G_CONFIG)

    assert QuantizerSpec("scaledsign").kind == QuantizerKind.SCALED_SIGN
    assert QuantizerSpec(QuantizerKind.DITHERED, step=0.1).step == float(np.float32(0.1))


def test_k_from_fraction():
    assert k_from_fraction(0.015, 100000) == 1500
    assert k_from_fraction(1e-6, 100) == 1
    assert k_from_fraction(1.0, 7) == 7
    with pytest.raises(Error) as error:
        k_from_fraction(0.0, 10)
    assert pytest_expect_error(error, G_INVALID_PARAMETER)


def test_for_block():
    spec = QuantizerSpec(QuantizerKind.TOPK, k=10)
    assert spec.for_block(50, 100).k == 5
    assert spec.for_block(3, 100).k == 1
    sign = QuantizerSpec(QuantizerKind.SCALED_SIGN)
    assert sign.for_block(3, 100) is sign


def test_distortion():
    assert QuantizerSpec(QuantizerKind.DITHERED, step=0.5).distortion(12) == pytest.approx(0.25)
    assert QuantizerSpec(QuantizerKind.NONE).distortion(12) == 0.0
    assert QuantizerSpec(QuantizerKind.TOPK, k=1).distortion(12) is None


def test_factory():
    u = np.array([3.0, -1.0, 4.0, -5.0, 2.0])
    for kind, extra in (
        (QuantizerKind.TOPK, {"k": 2}),
        (QuantizerKind.TOPKQ, {"k": 2}),
        (QuantizerKind.SCALED_SIGN, {}),
        (QuantizerKind.DITHERED, {"step": 0.25}),
        (QuantizerKind.NONE, {}),
    ):
        quantizer = get_quantizer(QuantizerSpec(kind, **extra))
        dense = quantizer.dense(quantizer.quantize(u, RngStream(0)))
        assert dense.shape == u.shape
        assert np.all(np.isfinite(dense))


def test_delta_check_topk(rng):
    """Top-K is a K/d compressor: 10^4 Gaussian inputs, no violation"""
    d = 20
    for _ in range(10 ** 4):
        u = rng.normal(d)
        k = int(rng.choice(d, 1)[0]) + 1
        assert delta_check(u, top_k(u, k).to_dense(), k / d)


def test_delta_check_scaled_sign(rng):
    """Scaled-sign is a 1/d compressor: 10^4 Gaussian inputs, no violation"""
    quantizer = get_quantizer(QuantizerSpec(QuantizerKind.SCALED_SIGN))
    for d in (1, 2, 17):
        for _ in range(10 ** 4 // 3 + 1):
            u = rng.normal(d)
            assert delta_check(u, quantizer.dense(quantizer.quantize(u)), 1.0 / d)


def test_delta_check_edges(rng):
    u = rng.normal(8)
    assert delta_check(u, u, 1.0)
    assert delta_check(u, u, 1e-3)
    assert not delta_check(u, np.zeros(8), 0.5)
    for delta in (0.0, 1.5):
        with pytest.raises(Error) as error:
            delta_check(u, u, delta)
        assert pytest_expect_error(error, G_DOMAIN)


def test_topk_is_best_k_sparse(rng):
    """top_k error is the minimum over every K-sparse approximation"""
    d = 8
    for _ in range(20):
        u = rng.normal(d)
        for k in (1, 3, 6):
            err = np.sum((u - top_k(u, k).to_dense()) ** 2)
            best = min(
                np.sum(np.delete(u, list(kept)) ** 2)
                for kept in itertools.combinations(range(d), k)
            )
            assert err == pytest.approx(best, rel=1e-12, abs=1e-15)
