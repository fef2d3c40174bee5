"""
Top-K sparsifiers
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
import numpy as np

from gradstream.core import ParamVector, SparseUpdate, check_finite
from gradstream.error import G_INVALID_PARAMETER
from gradstream.quantizers.base import Quantizer, QuantizerSpec, QuantizerKind


def _support(u: ParamVector, k: int) -> np.ndarray:
    d = u.size
    if isinstance(k, bool) or int(k) != k or not 1 <= k <= d:
        raise G_INVALID_PARAMETER.with_detail(f"K={k} not in [1, {d}]")
    check_finite(u, "quantizer input")
    # stable sort on -|u|: among equal magnitudes the lower index wins
    order = np.argsort(-np.abs(u), kind="stable")
    return np.sort(order[: int(k)])


def top_k(u: ParamVector, k: int) -> SparseUpdate:
    """Keep the K entries of largest magnitude"""
    idx = _support(u, k)
    return SparseUpdate(u.size, idx, u[idx])


def top_k_q(u: ParamVector, k: int) -> SparseUpdate:
    """
    Top-K with the kept values collapsed to two reconstruction points: the
    mean of the non-negative kept values and the mean of the negative ones.
    """
    idx = _support(u, k)
    kept = u[idx]
    negative = kept < 0
    values = np.zeros_like(kept)
    if np.any(negative):
        values[negative] = kept[negative].mean()
    if np.any(~negative):
        values[~negative] = kept[~negative].mean()
    return SparseUpdate(u.size, idx, values)


class TopK(Quantizer):
    def quantize(self, u: ParamVector, rng=None) -> SparseUpdate:
        return top_k(u, self.spec.k)

    def dense(self, payload: SparseUpdate) -> ParamVector:
        return payload.to_dense()


class TopKQ(TopK):
    def quantize(self, u: ParamVector, rng=None) -> SparseUpdate:
        return top_k_q(u, self.spec.k)
