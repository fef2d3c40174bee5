"""
Analytic rate accounting, in bits per vector component
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
import math
from typing import Optional

from gradstream.error import G_DOMAIN
from gradstream.quantizers import QuantizerKind

FLOAT_BITS = 32


def _plogp(p: float) -> float:
    if p == 0.0:
        return 0.0
    return -p * math.log2(p)


def binary_entropy(p: float) -> float:
    """H_b(p) in bits, with 0 log 0 taken as 0"""
    if not 0.0 <= p <= 1.0:
        raise G_DOMAIN.with_detail(f"probability {p} not in [0, 1]")
    return _plogp(p) + _plogp(1.0 - p)


def ternary_entropy(p_pos: float, p_neg: float) -> float:
    """Entropy of a {+, -, 0} source with the given non-zero probabilities"""
    for p in (p_pos, p_neg):
        if not 0.0 <= p <= 1.0:
            raise G_DOMAIN.with_detail(f"probability {p} not in [0, 1]")
    p_zero = 1.0 - p_pos - p_neg
    if p_zero < -1e-12:
        raise G_DOMAIN.with_detail(f"probabilities {p_pos} + {p_neg} exceed 1")
    return _plogp(p_pos) + _plogp(p_neg) + _plogp(max(p_zero, 0.0))


def bits_per_component(scheme, k: int, d: int, k_neg: Optional[float] = None) -> Optional[float]:
    """
    Communication cost per component.

    topk: H_b(K/d) + 32K/d. topkq: entropy of the ternary assignment vector,
    with k_neg of the K kept entries negative (half when not given).
    scaledsign: one bit. none: the uncompressed 32-bit baseline.
    dithered has no closed form and yields None; measure it from frames.
    """
    kind = QuantizerKind(scheme)
    if d < 1:
        raise G_DOMAIN.with_detail(f"d={d}")
    if kind == QuantizerKind.SCALED_SIGN:
        return 1.0
    if kind == QuantizerKind.NONE:
        return float(FLOAT_BITS)
    if kind == QuantizerKind.DITHERED:
        return None
    if not 0 <= k <= d:
        raise G_DOMAIN.with_detail(f"K={k} not in [0, {d}]")
    if kind == QuantizerKind.TOPK:
        return binary_entropy(k / d) + FLOAT_BITS * k / d
    if k_neg is None:
        k_neg = k / 2
    if not 0 <= k_neg <= k:
        raise G_DOMAIN.with_detail(f"{k_neg} negative entries out of K={k}")
    return ternary_entropy((k - k_neg) / d, k_neg / d)
