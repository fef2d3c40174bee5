"""
Quantizer behavior base class
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
from enum import Enum, unique
from typing import Optional

import numpy as np

from gradstream.core import ParamVector, RngStream, sq_norm
from gradstream.error import G_CONFIG, G_DOMAIN, G_INVALID_PARAMETER


@unique
class QuantizerKind(str, Enum):
    TOPK = "topk"
    TOPKQ = "topkq"
    SCALED_SIGN = "scaledsign"
    DITHERED = "dithered"
    NONE = "none"

    def is_top_k_family(self) -> bool:
        return self in (QuantizerKind.TOPK, QuantizerKind.TOPKQ)


def k_from_fraction(fraction: float, d: int) -> int:
    """K given as a fraction of d: nearest integer, at least 1"""
    if not 0 < fraction <= 1:
        raise G_INVALID_PARAMETER.with_detail(f"K fraction {fraction} not in (0, 1]")
    return max(1, int(round(fraction * d)))


@dataclass(frozen=True)
class QuantizerSpec:
    """Which lossy map Q to apply, with its parameters"""

    kind: QuantizerKind
    k: Optional[int] = None
    step: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", QuantizerKind(self.kind))
        if self.kind.is_top_k_family():
            if self.k is None or self.k < 1:
                raise G_CONFIG.with_detail(f"k: {self.kind.value} needs K >= 1")
        if self.kind == QuantizerKind.DITHERED:
            if self.step is None or not self.step > 0:
                raise G_CONFIG.with_detail("step: dithered quantizer needs step > 0")
            # the step travels as binary32, both ends must use the rounded value
            object.__setattr__(self, "step", float(np.float32(self.step)))

    def validate(self, d: int):
        """Check parameters against the vector dimension"""
        if self.kind.is_top_k_family() and self.k > d:
            raise G_CONFIG.with_detail(f"k: K={self.k} exceeds d={d}")

    def for_block(self, size: int, d: int) -> "QuantizerSpec":
        """Spec for one block of a partitioned vector, K split proportionally"""
        if not self.kind.is_top_k_family():
            return self
        k = max(1, min(size, int(round(self.k * size / d))))
        return QuantizerSpec(self.kind, k=k, step=self.step)

    def distortion(self, d: int) -> Optional[float]:
        """Expected squared error bound D where the quantizer guarantees one"""
        if self.kind == QuantizerKind.DITHERED:
            return d * self.step ** 2 / 12.0
        if self.kind == QuantizerKind.NONE:
            return 0.0
        return None


class Quantizer:
    """Quantizer characteristics. All quantizers must implement this class"""

    def __init__(self, spec: QuantizerSpec):
        self.spec = spec

    def quantize(self, u: ParamVector, rng: RngStream = None):
        """Apply Q to u. Returns the scheme-specific payload handed to the encoder"""
        raise NotImplementedError

    def dense(self, payload) -> ParamVector:
        """Reconstruction of a payload before any transport rounding"""
        raise NotImplementedError


def delta_check(u: ParamVector, q_out: ParamVector, delta: float, rtol: float = 1e-12) -> bool:
    """
    True iff ||u - q_out||^2 <= (1 - delta) ||u||^2, the delta-compressor
    inequality, up to a relative rounding allowance rtol.
    """
    if not 0 < delta <= 1:
        raise G_DOMAIN.with_detail(f"delta={delta} not in (0, 1]")
    norm = sq_norm(u)
    error = sq_norm(np.subtract(u, q_out))
    return error <= (1 - delta) * norm + rtol * norm
