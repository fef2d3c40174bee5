"""
CompressedFrame: the bit-exact wire format between a worker and the master
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
import logging
import struct
from dataclasses import dataclass
from enum import IntEnum, unique

import numpy as np

from gradstream.codec.bits import BitReader, BitWriter, pack, unpack
from gradstream.codec.golomb import optimal_parameter, read_indices, write_indices
from gradstream.core import ParamVector, SparseUpdate
from gradstream.error import G_DECODE, G_INVALID_INPUT
from gradstream.quantizers import (
    DitheredUpdate,
    QuantizerKind,
    QuantizerSpec,
    SignUpdate,
)

MAGIC = b"GCF1"
HEADER = struct.Struct("<4sBIIIQ")
HEADER_BITS = 8 * HEADER.size

logger = logging.getLogger("codec")


@unique
class Scheme(IntEnum):
    TOPK = 0
    TOPKQ = 1
    SCALED_SIGN = 2
    DITHERED = 3
    RAW = 4

    @classmethod
    def for_kind(cls, kind: QuantizerKind) -> "Scheme":
        return _SCHEMES[kind]


_SCHEMES = {
    QuantizerKind.TOPK: Scheme.TOPK,
    QuantizerKind.TOPKQ: Scheme.TOPKQ,
    QuantizerKind.SCALED_SIGN: Scheme.SCALED_SIGN,
    QuantizerKind.DITHERED: Scheme.DITHERED,
    QuantizerKind.NONE: Scheme.RAW,
}


@dataclass(frozen=True)
class CompressedFrame:
    """Header fields, payload bits and binary32 values of one encoded update"""

    scheme: Scheme
    dim: int
    k: int
    m: int
    payload: str
    values: np.ndarray

    @property
    def payload_bits(self) -> int:
        return len(self.payload)

    @property
    def measured_bits(self) -> int:
        """Transmitted bits, header excluded: payload plus 32 per value"""
        return self.payload_bits + 32 * int(self.values.size)

    def value_count(self) -> int:
        return _value_count(self.scheme, self.k)

    def to_bytes(self) -> bytes:
        header = HEADER.pack(MAGIC, int(self.scheme), self.dim, self.k, self.m, self.payload_bits)
        return header + pack(self.payload) + self.values.astype("<f4").tobytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "CompressedFrame":
        if len(data) < HEADER.size:
            raise G_DECODE.with_detail("frame shorter than its header")
        magic, scheme, dim, k, m, nbits = HEADER.unpack_from(data)
        if magic != MAGIC:
            raise G_DECODE.with_detail(f"bad magic {magic!r}")
        try:
            scheme = Scheme(scheme)
        except ValueError:
            raise G_DECODE.with_detail(f"unknown scheme code {scheme}") from None
        payload_end = HEADER.size + (nbits + 7) // 8
        nvalues = _value_count(scheme, k)
        if len(data) != payload_end + 4 * nvalues:
            raise G_DECODE.with_detail(
                f"frame length {len(data)} does not match header (expected {payload_end + 4 * nvalues})"
            )
        payload = unpack(data[HEADER.size : payload_end], nbits)
        values = np.frombuffer(data[payload_end:], dtype="<f4").astype(np.float32)
        return cls(scheme, dim, k, m, payload, values)


def _value_count(scheme: Scheme, k: int) -> int:
    if scheme == Scheme.TOPK:
        return k
    if scheme == Scheme.TOPKQ:
        return 2
    if scheme in (Scheme.SCALED_SIGN, Scheme.DITHERED):
        return 1
    return 0


def _to_binary32(values) -> np.ndarray:
    values = np.asarray(values, dtype=np.float64)
    with np.errstate(over="ignore"):
        rounded = values.astype(np.float32)
    if not np.all(np.isfinite(rounded)):
        raise G_INVALID_INPUT.with_detail("value overflows binary32")
    return rounded


def _sparse(update, spec: QuantizerSpec) -> SparseUpdate:
    if not isinstance(update, SparseUpdate):
        raise G_INVALID_INPUT.with_detail(f"{spec.kind.value} frames carry a SparseUpdate")
    if len(update) > spec.k:
        raise G_INVALID_INPUT.with_detail(f"{len(update)} entries for K={spec.k}")
    return update


def _encode_topk(update, spec: QuantizerSpec) -> CompressedFrame:
    update = _sparse(update, spec)
    m = optimal_parameter(len(update), update.dim)
    writer = BitWriter()
    write_indices(writer, update.indices, m)
    return CompressedFrame(
        Scheme.TOPK, update.dim, len(update), m, writer.getvalue(), _to_binary32(update.values)
    )


def _encode_topkq(update, spec: QuantizerSpec) -> CompressedFrame:
    update = _sparse(update, spec)
    negative = update.values < 0
    levels = np.zeros(2, dtype=np.float64)
    for slot, mask in enumerate((~negative, negative)):
        distinct = np.unique(update.values[mask])
        if distinct.size > 1:
            raise G_INVALID_INPUT.with_detail("Top-K-Q values take more than one level per sign")
        if distinct.size:
            levels[slot] = distinct[0]
    m = optimal_parameter(len(update), update.dim)
    writer = BitWriter()
    write_indices(writer, update.indices, m)
    writer.write_flags(negative)
    return CompressedFrame(
        Scheme.TOPKQ, update.dim, len(update), m, writer.getvalue(), _to_binary32(levels)
    )


def _encode_sign(update, spec: QuantizerSpec) -> CompressedFrame:
    if not isinstance(update, SignUpdate):
        raise G_INVALID_INPUT.with_detail("scaledsign frames carry a SignUpdate")
    writer = BitWriter()
    writer.write_flags(update.signs < 0)
    d = int(update.signs.size)
    return CompressedFrame(
        Scheme.SCALED_SIGN, d, d, 0, writer.getvalue(), _to_binary32([update.scale])
    )


def _encode_dithered(update, spec: QuantizerSpec) -> CompressedFrame:
    if not isinstance(update, DitheredUpdate):
        raise G_INVALID_INPUT.with_detail("dithered frames carry a DitheredUpdate")
    if float(np.float32(update.step)) != update.step:
        raise G_INVALID_INPUT.with_detail("dithered step is not representable in binary32")
    writer = BitWriter()
    for level in update.levels.tolist():
        writer.write_se(level)
    d = int(update.levels.size)
    return CompressedFrame(
        Scheme.DITHERED, d, d, 0, writer.getvalue(), _to_binary32([update.step])
    )


def _encode_raw(update, spec: QuantizerSpec) -> CompressedFrame:
    dense = np.asarray(update, dtype="<f8")
    if dense.ndim != 1:
        raise G_INVALID_INPUT.with_detail("lossless frames carry a dense vector")
    payload = unpack(dense.tobytes(), 64 * dense.size)
    d = int(dense.size)
    return CompressedFrame(Scheme.RAW, d, d, 0, payload, np.zeros(0, dtype=np.float32))


_ENCODERS = {
    Scheme.TOPK: _encode_topk,
    Scheme.TOPKQ: _encode_topkq,
    Scheme.SCALED_SIGN: _encode_sign,
    Scheme.DITHERED: _encode_dithered,
    Scheme.RAW: _encode_raw,
}


def encode_frame(update, spec: QuantizerSpec) -> CompressedFrame:
    """
    Losslessly encode a quantizer output.

    TopK: Golomb-coded indices, then K binary32 values in index order.
    TopKQ: Golomb-coded indices and one sign bit per kept index (1 = negative),
    then the two binary32 levels (non-negative, negative).
    ScaledSign: d sign bits, then the binary32 scale.
    Dithered: d signed exp-Golomb integers, then the binary32 step.
    Raw: the binary64 vector, no values.
    """
    frame = _ENCODERS[Scheme.for_kind(spec.kind)](update, spec)
    logger.debug("encoded %s frame: d=%d k=%d bits=%d", frame.scheme.name, frame.dim, frame.k, frame.measured_bits)
    return frame


def decode_frame(frame: CompressedFrame, dither: np.ndarray = None):
    """
    Recover the quantizer output from a frame, with every value as transmitted.

    Dithered frames need the dither samples the worker used; the master's chain
    regenerates them from its replica of the worker's dither stream.
    """
    reader = BitReader(frame.payload)
    values = np.asarray(frame.values, dtype=np.float32).astype(np.float64)
    if values.size != frame.value_count():
        raise G_DECODE.with_detail(f"{values.size} values, header expects {frame.value_count()}")

    if frame.scheme == Scheme.TOPK:
        indices = read_indices(reader, frame.k, frame.dim, max(frame.m, 1))
        reader.expect_end()
        return SparseUpdate(frame.dim, indices, values)

    if frame.scheme == Scheme.TOPKQ:
        indices = read_indices(reader, frame.k, frame.dim, max(frame.m, 1))
        negative = reader.read_flags(frame.k)
        reader.expect_end()
        return SparseUpdate(frame.dim, indices, np.where(negative, values[1], values[0]))

    if frame.scheme == Scheme.SCALED_SIGN:
        negative = reader.read_flags(frame.dim)
        reader.expect_end()
        return SignUpdate(float(values[0]), np.where(negative, -1, 1).astype(np.int8))

    if frame.scheme == Scheme.DITHERED:
        if dither is None or np.size(dither) != frame.dim:
            raise G_DECODE.with_detail("dithered frame needs the matching dither samples")
        levels = np.array([reader.read_se() for _ in range(frame.dim)], dtype=np.int64)
        reader.expect_end()
        return DitheredUpdate(float(values[0]), levels, np.asarray(dither, dtype=np.float64))

    raw = pack(frame.payload)
    if len(raw) != 8 * frame.dim:
        raise G_DECODE.with_detail("lossless payload does not hold d binary64 values")
    return np.frombuffer(raw, dtype="<f8").astype(np.float64)


def reconstruct(frame: CompressedFrame, dither: np.ndarray = None) -> ParamVector:
    """Dense ũ carried by a frame"""
    decoded = decode_frame(frame, dither)
    if isinstance(decoded, np.ndarray):
        return decoded
    return decoded.to_dense()
