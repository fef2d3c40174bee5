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

from gradstream.core import (
    RngStream,
    SparseUpdate,
    add,
    dot,
    gaussian_vector,
    scale,
    sq_norm,
    zeros,
)
from gradstream.error import G_INVALID_DIMENSION, G_INVALID_INPUT, Error

from tests.test_errors import pytest_expect_error


def test_gaussian_vector_determinism():
    """same seed, same samples; different seed, different samples"""
    a = gaussian_vector(RngStream(7), 16)
    b = gaussian_vector(RngStream(7), 16)
    c = gaussian_vector(RngStream(8), 16)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_gaussian_vector_moments():
    """law of large numbers on 10^5 samples"""
    x = gaussian_vector(RngStream(1), 10 ** 5)
    assert -0.02 < x.mean() < 0.02
    assert 0.98 < x.var() < 1.02


def test_gaussian_vector_rejects_empty():
    with pytest.raises(Error) as error:
        gaussian_vector(RngStream(1), 0)
    assert pytest_expect_error(error, G_INVALID_DIMENSION)


def test_stream_replay():
    """replaying a stream yields bitwise identical samples"""
    first = RngStream(3, stream=5)
    second = RngStream(3, stream=5)
    for _ in range(3):
        assert first.normal(8).tobytes() == second.normal(8).tobytes()
    assert not np.array_equal(RngStream(3, 5).normal(8), RngStream(3, 6).normal(8))
    assert np.array_equal(first.child(9).uniform(4), RngStream(3, 9).uniform(4))


def test_arithmetic_matches_naive(rng):
    a = rng.normal(33)
    b = rng.normal(33)
    assert list(add(a, b)) == [x + y for x, y in zip(a, b)]
    assert list(scale(a, 0.3)) == [0.3 * x for x in a]
    naive = 0.0
    for x, y in zip(a, b):
        naive += x * y
    assert dot(a, b) == pytest.approx(naive, rel=1e-14)
    assert sq_norm(a) == pytest.approx(sum(x * x for x in a), rel=1e-14)
    assert np.array_equal(zeros(3), [0.0, 0.0, 0.0])


def test_sparse_update():
    update = SparseUpdate(5, [1, 3], [2.0, -1.0])
    assert len(update) == 2
    assert update.entries() == [(1, 2.0), (3, -1.0)]
    assert np.array_equal(update.to_dense(), [0.0, 2.0, 0.0, -1.0, 0.0])
    assert SparseUpdate.from_dense(update.to_dense()).entries() == update.entries()
    assert SparseUpdate(3, [0, 2], [0.0, 1.0]).nonzero().entries() == [(2, 1.0)]


@pytest.mark.parametrize(
    "dim,indices,values",
    [
        (4, [2, 1], [1.0, 1.0]),
        (4, [1, 1], [1.0, 1.0]),
        (4, [4], [1.0]),
        (4, [-1], [1.0]),
        (2, [0, 1, 2], [1.0, 1.0, 1.0]),
        (4, [0, 1], [1.0]),
    ],
)
def test_sparse_update_invariants(dim, indices, values):
    with pytest.raises(Error) as error:
        SparseUpdate(dim, indices, values)
    assert pytest_expect_error(error, G_INVALID_INPUT)
