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

from .base import Quantizer, QuantizerKind, QuantizerSpec, delta_check, k_from_fraction
from .topk import TopK, TopKQ, top_k, top_k_q
from .signs import PassThrough, ScaledSign, SignUpdate, scaled_sign
from .dithered import DitheredUniform, DitheredUpdate, dithered_levels, dithered_uniform

_QUANTIZERS = {
    QuantizerKind.TOPK: TopK,
    QuantizerKind.TOPKQ: TopKQ,
    QuantizerKind.SCALED_SIGN: ScaledSign,
    QuantizerKind.DITHERED: DitheredUniform,
    QuantizerKind.NONE: PassThrough,
}


def get_quantizer(spec: QuantizerSpec) -> Quantizer:
    """Quantizer implementing spec"""
    return _QUANTIZERS[spec.kind](spec)
