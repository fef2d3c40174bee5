"""
Subtractively dithered uniform quantizer
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

from gradstream.core import ParamVector, RngStream, check_finite
from gradstream.error import G_INVALID_PARAMETER
from gradstream.quantizers.base import Quantizer


@dataclass(frozen=True)
class DitheredUpdate:
    """Integer levels plus the dither that both ends regenerate"""

    step: float
    levels: np.ndarray
    dither: np.ndarray

    def to_dense(self) -> ParamVector:
        return self.step * (self.levels.astype(np.float64) - self.dither)


def dither(rng: RngStream, d: int) -> np.ndarray:
    """Dither samples, uniform on (-1/2, 1/2)"""
    return rng.uniform(d, -0.5, 0.5)


def dithered_levels(u: ParamVector, step: float, rng: RngStream) -> DitheredUpdate:
    if not step > 0:
        raise G_INVALID_PARAMETER.with_detail(f"step={step} must be positive")
    check_finite(u, "quantizer input")
    z = dither(rng, u.size)
    levels = np.rint(u / step + z).astype(np.int64)
    return DitheredUpdate(float(step), levels, z)


def dithered_uniform(u: ParamVector, step: float, rng: RngStream) -> ParamVector:
    """
    step * round(u/step + z) - step * z with z ~ U(-1/2, 1/2).
    Per-component error is uniform on (-step/2, step/2), so E||u - Q(u)||^2 = d step^2 / 12.
    """
    return dithered_levels(u, step, rng).to_dense()


class DitheredUniform(Quantizer):
    def quantize(self, u: ParamVector, rng: RngStream = None) -> DitheredUpdate:
        if rng is None:
            raise G_INVALID_PARAMETER.with_detail("dithered quantizer needs a dither stream")
        return dithered_levels(u, self.spec.step, rng)

    def dense(self, payload: DitheredUpdate) -> ParamVector:
        return payload.to_dense()
