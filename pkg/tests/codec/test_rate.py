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

from gradstream.codec import binary_entropy, bits_per_component, ternary_entropy
from gradstream.error import G_DOMAIN, Error

from tests.test_errors import pytest_expect_error


def test_binary_entropy():
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0.015) == pytest.approx(0.1123606, rel=1e-6)


def test_ternary_entropy():
    assert ternary_entropy(0.0, 0.0) == 0.0
    assert ternary_entropy(1 / 3, 1 / 3) == pytest.approx(1.5849625, rel=1e-7)


@pytest.mark.parametrize(
    "scheme, k, d, expected",
    [
        ("topk", 15, 1000, 0.59236),
        ("topk", 35, 100, 12.134),
        ("topk", 12, 100000, 0.005576),
        ("topk", 13, 200000, 0.0030779),
        ("topkq", 23, 100, 1.008),
        ("topkq", 1, 100, 0.090793),
    ],
)
def test_reference_rates(scheme, k, d, expected):
    assert bits_per_component(scheme, k, d) == pytest.approx(expected, rel=1e-3)


def test_fixed_rates():
    assert bits_per_component("scaledsign", 0, 100) == 1.0
    assert bits_per_component("none", 0, 100) == 32.0
    assert bits_per_component("dithered", 0, 100) is None


def test_topkq_sign_split():
    """all K entries of one sign collapse to the binary entropy"""
    assert bits_per_component("topkq", 10, 100, k_neg=0) == pytest.approx(binary_entropy(0.1))


@pytest.mark.parametrize(
    "call",
    [
        lambda: binary_entropy(1.5),
        lambda: ternary_entropy(0.7, 0.7),
        lambda: bits_per_component("topk", 11, 10),
        lambda: bits_per_component("topkq", 4, 10, k_neg=5),
    ],
)
def test_domain_errors(call):
    with pytest.raises(Error) as error:
        call()
    assert pytest_expect_error(error, G_DOMAIN)
