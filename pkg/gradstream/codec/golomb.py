"""
Golomb coding of sorted index sets
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

import numpy as np

from gradstream.codec.bits import BitReader, BitWriter
from gradstream.error import G_DECODE, G_INVALID_INPUT, G_INVALID_PARAMETER


def optimal_parameter(k: int, d: int) -> int:
    """
    Golomb parameter for K positions spread uniformly over d slots: gaps are
    close to geometric with success probability K/d, for which
    m = round(-1 / log2(1 - K/d)) is near optimal.
    """
    if k <= 0:
        return 1
    if k >= d:
        return 1
    return max(1, int(round(-1.0 / math.log2(1.0 - k / d))))


def _check_indices(indices, d: int) -> np.ndarray:
    indices = np.asarray(indices, dtype=np.int64)
    if indices.ndim != 1:
        raise G_INVALID_INPUT.with_detail("indices must be one dimensional")
    if indices.size:
        if indices[0] < 0 or indices[-1] >= d:
            raise G_INVALID_INPUT.with_detail(f"index out of range [0, {d})")
        if np.any(np.diff(indices) <= 0):
            raise G_INVALID_INPUT.with_detail("indices must be strictly increasing")
    return indices


def write_indices(writer: BitWriter, indices: np.ndarray, m: int):
    previous = -1
    for index in indices.tolist():
        gap = index - previous - 1
        q, r = divmod(gap, m)
        writer.write_unary(q)
        writer.write_truncated(r, m)
        previous = index


def read_indices(reader: BitReader, count: int, d: int, m: int) -> np.ndarray:
    indices = np.empty(count, dtype=np.int64)
    previous = -1
    for i in range(count):
        q = reader.read_unary()
        gap = q * m + reader.read_truncated(m)
        previous = previous + gap + 1
        if previous >= d:
            raise G_DECODE.with_detail(f"decoded index {previous} outside [0, {d})")
        indices[i] = previous
    return indices


def golomb_encode(indices, d: int, m: int) -> str:
    """
    Encode the first index, then each successive difference minus one, as
    Golomb codewords with parameter m: quotient in unary (ones closed by a
    zero), remainder in truncated binary.
    """
    if m < 1:
        raise G_INVALID_PARAMETER.with_detail(f"Golomb parameter m={m}")
    writer = BitWriter()
    write_indices(writer, _check_indices(indices, d), m)
    return writer.getvalue()


def golomb_decode(bits: str, count: int, d: int, m: int) -> np.ndarray:
    """Exact inverse of `golomb_encode`; the stream must hold exactly count codewords"""
    if m < 1:
        raise G_INVALID_PARAMETER.with_detail(f"Golomb parameter m={m}")
    reader = BitReader(bits)
    indices = read_indices(reader, count, d, m)
    reader.expect_end()
    return indices
