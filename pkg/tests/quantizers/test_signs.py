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
import pytest

from gradstream.quantizers import scaled_sign


def test_scaled_sign_two_level():
    out = scaled_sign(np.array([1.0, -1.0, 1.0, -1.0]))
    assert out.scale == 1.0
    assert out.signs.tolist() == [1, -1, 1, -1]
    assert out.to_dense().tolist() == [1.0, -1.0, 1.0, -1.0]


def test_scaled_sign_zero():
    """zero input, zero scale; zero entries count as positive"""
    out = scaled_sign(np.zeros(3))
    assert out.scale == 0.0
    assert out.signs.tolist() == [1, 1, 1]
    assert np.array_equal(out.to_dense(), np.zeros(3))


def test_scaled_sign_error():
    """u = [3, -1]: scale 2, squared error 2 <= (1 - 1/2) * 10"""
    u = np.array([3.0, -1.0])
    out = scaled_sign(u)
    assert out.scale == 2.0
    err = np.sum((u - out.to_dense()) ** 2)
    assert err == 2.0
    assert err <= 0.5 * np.sum(u * u)


def test_scaled_sign_identity(rng):
    """||u - a sign(u)||^2 = ||u||^2 - ||u||_1^2 / d"""
    for d in (1, 5, 64):
        u = rng.normal(d)
        err = np.sum((u - scaled_sign(u).to_dense()) ** 2)
        expected = np.sum(u * u) - np.sum(np.abs(u)) ** 2 / d
        assert err == pytest.approx(expected, rel=1e-9, abs=1e-12)
