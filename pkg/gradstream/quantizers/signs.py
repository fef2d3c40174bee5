"""
Sign quantizer and the lossless pass-through
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
from typing import NamedTuple

import numpy as np

from gradstream.core import ParamVector, check_finite
from gradstream.quantizers.base import Quantizer


class SignUpdate(NamedTuple):
    """Two-level reconstruction scale * signs"""

    scale: float
    signs: np.ndarray

    def to_dense(self) -> ParamVector:
        return self.scale * self.signs.astype(np.float64)


def scaled_sign(u: ParamVector) -> SignUpdate:
    """Scaled-sign with scale ||u||_1 / d; zero entries get sign +1"""
    check_finite(u, "quantizer input")
    signs = np.where(u < 0, -1, 1).astype(np.int8)
    return SignUpdate(float(np.abs(u).sum() / u.size), signs)


class ScaledSign(Quantizer):
    def quantize(self, u: ParamVector, rng=None) -> SignUpdate:
        return scaled_sign(u)

    def dense(self, payload: SignUpdate) -> ParamVector:
        return payload.to_dense()


class PassThrough(Quantizer):
    """Identity map, used for exact uncompressed baselines"""

    def quantize(self, u: ParamVector, rng=None) -> ParamVector:
        check_finite(u, "quantizer input")
        return np.array(u, dtype=np.float64, copy=True)

    def dense(self, payload: ParamVector) -> ParamVector:
        return payload
