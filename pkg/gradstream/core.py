"""
Vector types and seeded random streams shared by every stage of the pipeline
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

from gradstream.error import (
    G_INVALID_DIMENSION,
    G_INVALID_INPUT,
    G_NUMERIC,
)

# Dense real vector of dimension d, always float64
ParamVector = np.ndarray

_MASK64 = (1 << 64) - 1


def zeros(d: int) -> ParamVector:
    """All-zeros vector of dimension d"""
    check_dimension(d)
    return np.zeros(d, dtype=np.float64)


def check_dimension(d: int):
    if isinstance(d, bool) or int(d) != d or d < 1:
        raise G_INVALID_DIMENSION.with_detail(f"got {d}")


def check_finite(v: ParamVector, name: str = "vector"):
    """Raise G_NUMERIC if v holds NaN or Inf"""
    if not np.all(np.isfinite(v)):
        raise G_NUMERIC.with_detail(name)


def add(a: ParamVector, b: ParamVector) -> ParamVector:
    return np.add(a, b)


def scale(a: ParamVector, alpha: float) -> ParamVector:
    return np.multiply(alpha, a)


def dot(a: ParamVector, b: ParamVector) -> float:
    return float(np.dot(a, b))


def sq_norm(a: ParamVector) -> float:
    return float(np.dot(a, a))


@dataclass(frozen=True)
class SparseUpdate:
    """K index-value pairs over dimension dim, indices strictly increasing"""

    dim: int
    indices: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        check_dimension(self.dim)
        indices = np.asarray(self.indices, dtype=np.int64)
        values = np.asarray(self.values, dtype=np.float64)
        if indices.ndim != 1 or indices.shape != values.shape:
            raise G_INVALID_INPUT.with_detail("indices and values must pair up")
        if indices.size > self.dim:
            raise G_INVALID_INPUT.with_detail("more entries than dimension")
        if indices.size:
            if indices[0] < 0 or indices[-1] >= self.dim:
                raise G_INVALID_INPUT.with_detail("index out of range")
            if np.any(np.diff(indices) <= 0):
                raise G_INVALID_INPUT.with_detail("indices must be strictly increasing")
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return int(self.indices.size)

    def entries(self) -> [(int, float)]:
        return list(zip(self.indices.tolist(), self.values.tolist()))

    def to_dense(self) -> ParamVector:
        dense = np.zeros(self.dim, dtype=np.float64)
        dense[self.indices] = self.values
        return dense

    def nonzero(self) -> "SparseUpdate":
        """Entries whose value is not zero"""
        keep = self.values != 0.0
        return SparseUpdate(self.dim, self.indices[keep], self.values[keep])

    @classmethod
    def from_dense(cls, dense: ParamVector) -> "SparseUpdate":
        """Sparse view of the non-zero entries of a dense vector"""
        indices = np.flatnonzero(dense)
        return cls(int(dense.size), indices, dense[indices])


class RngStream:
    """
    Deterministic random stream.

    Backed by numpy's Philox counter-based generator keyed by (seed, stream),
    so identical keys replay bitwise-identical samples on every platform and
    distinct stream ids never overlap.
    """

    def __init__(self, seed: int, stream: int = 0):
        self.seed = int(seed) & _MASK64
        self.stream = int(stream) & _MASK64
        key = self.seed | (self.stream << 64)
        self.generator = np.random.Generator(np.random.Philox(key=key))

    def child(self, stream: int) -> "RngStream":
        """Independent stream sharing this stream's seed"""
        return RngStream(self.seed, stream)

    def normal(self, size: int) -> np.ndarray:
        return self.generator.standard_normal(size)

    def uniform(self, size: int, low: float = 0.0, high: float = 1.0) -> np.ndarray:
        return self.generator.uniform(low, high, size)

    def choice(self, n: int, size: int) -> np.ndarray:
        """size distinct integers drawn from [0, n)"""
        return self.generator.choice(n, size=size, replace=False)


def gaussian_vector(rng: RngStream, d: int) -> ParamVector:
    """d i.i.d. standard-normal samples"""
    check_dimension(d)
    return rng.normal(int(d))
