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
import math

import pytest

from gradstream.error import G_DOMAIN, Error
from gradstream.experiments.bounds import BoundInputs, corollary_terms, plain_sgd_bound, theoretical_bound

from tests.test_errors import pytest_expect_error


def _inputs(**kwargs):
    values = {"T": 100, "L": 1.0, "delta_f": 1.0, "sigma2": 0.0, "n": 1, "D": 0.0, "xi": 100 ** 0.25}
    values.update(kwargs)
    return BoundInputs(**values)


def test_reference_values():
    report = theoretical_bound(_inputs())
    assert report.c == pytest.approx(0.841886, abs=1e-6)
    assert report.A == pytest.approx(0.148515, abs=1e-6)
    assert report.B == 0.0
    assert report.corollary is not None
    assert report.corollary.total == pytest.approx(report.total, rel=1e-12)


def test_uncompressed_limit():
    inputs = _inputs(sigma2=2.0, n=2, xi=1e12)
    report = theoretical_bound(inputs)
    assert report.B == 0.0
    assert report.corollary is None
    assert report.A == pytest.approx(plain_sgd_bound(100, 1.0, 1.0, 2.0, 2), rel=1e-9)


def test_compression_term_vanishes():
    ratios = []
    for T in (10 ** 3, 10 ** 6):
        report = theoretical_bound(_inputs(T=T, sigma2=1.0, D=1.0, xi=T ** 0.25))
        ratios.append(report.B / report.A)
    assert ratios[1] < ratios[0]
    assert ratios[1] < 0.02


def test_noise_term_halves():
    one = theoretical_bound(_inputs(delta_f=0.0, sigma2=1.0, n=1)).A
    two = theoretical_bound(_inputs(delta_f=0.0, sigma2=1.0, n=2)).A
    assert two == pytest.approx(one / 2, rel=1e-12)


def test_corollary_split():
    inputs = _inputs(T=10 ** 4, sigma2=1.0, n=4, D=0.5, xi=10.0)
    terms = corollary_terms(inputs)
    assert terms.first == plain_sgd_bound(10 ** 4, 1.0, 1.0, 1.0, 4)
    assert terms.second == pytest.approx((2.0 + 0.5) / (2 * 1000 - 10))
    assert terms.total == pytest.approx(theoretical_bound(inputs).total, rel=1e-12)


def test_step_size():
    inputs = _inputs(L=2.0)
    assert inputs.step_size() == pytest.approx(inputs.c / 20.0)
    assert math.isclose(inputs.c, 1 - 1 / (2 * 100 ** 0.25))


@pytest.mark.parametrize(
    "kwargs", [{"xi": 0.5}, {"T": 0}, {"n": 0}, {"L": 0.0}, {"D": -1.0}, {"sigma2": -1.0}, {"delta_f": -0.1}]
)
def test_domain(kwargs):
    with pytest.raises(Error) as error:
        _inputs(**kwargs)
    assert pytest_expect_error(error, G_DOMAIN)
