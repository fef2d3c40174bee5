"""
Bit sequences held as strings of "0"/"1", most-significant bit first
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

from gradstream.error import G_DECODE, G_INVALID_INPUT


def truncated_width(m: int) -> int:
    """b = ceil(log2 m), the long codeword width of truncated binary"""
    return (m - 1).bit_length()


class BitWriter:
    """Accumulate codewords; `getvalue` joins them"""

    def __init__(self):
        self.chunks = []

    def write_bits(self, bits: str):
        self.chunks.append(bits)

    def write_uint(self, value: int, bits: int):
        if bits == 0:
            return
        if value < 0 or value >> bits:
            raise G_INVALID_INPUT.with_detail(f"{value} does not fit in {bits} bits")
        self.chunks.append(format(value, f"0{bits}b"))

    def write_unary(self, q: int):
        """q ones closed by a zero"""
        self.chunks.append("1" * q + "0")

    def write_truncated(self, r: int, m: int):
        """Truncated binary code of r in [0, m)"""
        b = truncated_width(m)
        cutoff = (1 << b) - m
        if r < cutoff:
            self.write_uint(r, b - 1)
        else:
            self.write_uint(r + cutoff, b)

    def write_ue(self, value: int):
        """Unsigned exp-Golomb, order 0"""
        value += 1
        self.chunks.append("0" * (value.bit_length() - 1) + format(value, "b"))

    def write_se(self, value: int):
        """Signed exp-Golomb: 0, 1, -1, 2, -2, ... map to 0, 1, 2, 3, 4, ..."""
        self.write_ue(2 * value - 1 if value > 0 else -2 * value)

    def write_flags(self, flags: np.ndarray):
        """One bit per entry, 1 where flags is true"""
        self.chunks.append((np.asarray(flags, dtype=np.uint8) + ord("0")).tobytes().decode("ascii"))

    def getvalue(self) -> str:
        return "".join(self.chunks)


class BitReader:
    """Sequential reader over a bit string; running off the end is a decode error"""

    def __init__(self, bits: str):
        self.bits = bits
        self.pos = 0

    def remaining(self) -> int:
        return len(self.bits) - self.pos

    def _take(self, n: int) -> str:
        if n > self.remaining():
            raise G_DECODE.with_detail(f"need {n} bits at offset {self.pos}, {self.remaining()} left")
        chunk = self.bits[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def read_uint(self, bits: int) -> int:
        if bits == 0:
            return 0
        return int(self._take(bits), 2)

    def read_unary(self) -> int:
        end = self.bits.find("0", self.pos)
        if end < 0:
            raise G_DECODE.with_detail(f"unterminated unary code at offset {self.pos}")
        q = end - self.pos
        self.pos = end + 1
        return q

    def read_truncated(self, m: int) -> int:
        b = truncated_width(m)
        if b == 0:
            return 0
        cutoff = (1 << b) - m
        r = self.read_uint(b - 1)
        if r < cutoff:
            return r
        return ((r << 1) | self.read_uint(1)) - cutoff

    def read_ue(self) -> int:
        zeros = 0
        while self._take(1) == "0":
            zeros += 1
        return ((1 << zeros) | self.read_uint(zeros)) - 1

    def read_se(self) -> int:
        mapped = self.read_ue()
        if mapped % 2:
            return (mapped + 1) // 2
        return -(mapped // 2)

    def read_flags(self, n: int) -> np.ndarray:
        chunk = self._take(n)
        return np.frombuffer(chunk.encode("ascii"), dtype=np.uint8) == ord("1")

    def expect_end(self):
        if self.remaining():
            raise G_DECODE.with_detail(f"{self.remaining()} trailing bits")


def pack(bits: str) -> bytes:
    """Bit string to bytes, MSB first, last byte zero-padded"""
    flags = np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")
    return np.packbits(flags).tobytes()


def unpack(data: bytes, nbits: int) -> str:
    """Inverse of `pack` for a payload of nbits bits"""
    if nbits > 8 * len(data):
        raise G_DECODE.with_detail(f"payload holds {8 * len(data)} bits, header says {nbits}")
    flags = np.unpackbits(np.frombuffer(data, dtype=np.uint8))[:nbits]
    return (flags + ord("0")).astype(np.uint8).tobytes().decode("ascii")
