"""
Quantize-encode and decode-reconstruct stages shared by both ends of a link
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

from gradstream.codec import CompressedFrame, Scheme, encode_frame, reconstruct
from gradstream.core import ParamVector, RngStream, check_dimension
from gradstream.error import G_CONFIG, G_PROTOCOL
from gradstream.predictors import PredictorSpec, get_predictor
from gradstream.quantizers import QuantizerKind, QuantizerSpec, get_quantizer
from gradstream.quantizers.dithered import dither

# stream ids at and above this are reserved for dither
DITHER_STREAM = 1 << 62


def dither_stream(seed: int, worker: int, t: int) -> RngStream:
    """Dither source of one worker at iteration t, regenerated by the master"""
    return RngStream(seed, DITHER_STREAM | (worker << 32) | t)


def check_blocks(blocks, d: int) -> tuple:
    blocks = tuple(int(b) for b in blocks)
    if not blocks or blocks[0] != 0:
        raise G_CONFIG.with_detail("blocks: first offset must be 0")
    if any(b >= d for b in blocks) or any(b <= a for a, b in zip(blocks, blocks[1:])):
        raise G_CONFIG.with_detail(f"blocks: offsets must increase strictly within [0, {d})")
    return blocks


class Channel:
    """
    Quantizer, codec and predictor configuration of one worker-to-master link.

    The vector is compressed whole, or as consecutive blocks starting at the
    given offsets with K split in proportion to block size.
    """

    def __init__(
        self,
        d: int,
        quantizer: QuantizerSpec,
        predictor: PredictorSpec,
        blocks=(0,),
        seed: int = 0,
        quantizer_factory=get_quantizer,
    ):
        check_dimension(d)
        quantizer.validate(d)
        self.d = d
        self.quantizer_spec = quantizer
        self.predictor_spec = predictor
        self.seed = seed
        self.blocks = check_blocks(blocks, d)
        self.spans = list(zip(self.blocks, self.blocks[1:] + (d,)))
        self.quantizers = [
            quantizer_factory(quantizer.for_block(stop - start, d)) for start, stop in self.spans
        ]
        self.predictor = get_predictor(predictor)

    @property
    def dithered(self) -> bool:
        return self.quantizer_spec.kind == QuantizerKind.DITHERED

    def _dither_rng(self, worker: int, t: int):
        if self.dithered:
            return dither_stream(self.seed, worker, t)
        return None

    def compress(self, u: ParamVector, worker: int, t: int) -> (CompressedFrame,):
        """Quantize and encode u, one frame per block"""
        rng = self._dither_rng(worker, t)
        frames = []
        for (start, stop), quantizer in zip(self.spans, self.quantizers):
            payload = quantizer.quantize(u[start:stop], rng)
            frames.append(encode_frame(payload, quantizer.spec))
        return tuple(frames)

    def expand(self, frames, worker: int, t: int) -> ParamVector:
        """Dense u_tilde carried by one worker's frames"""
        if len(frames) != len(self.spans):
            raise G_PROTOCOL.with_detail(f"{len(frames)} frames for {len(self.spans)} blocks")
        rng = self._dither_rng(worker, t)
        scheme = Scheme.for_kind(self.quantizer_spec.kind)
        parts = []
        for (start, stop), frame in zip(self.spans, frames):
            if frame.dim != stop - start or frame.scheme != scheme:
                raise G_PROTOCOL.with_detail(
                    f"frame {frame.scheme.name}/{frame.dim} does not fit block [{start}, {stop})"
                )
            z = dither(rng, stop - start) if rng is not None else None
            parts.append(reconstruct(frame, z))
        return np.concatenate(parts)

    def frame_bits(self, frames) -> int:
        return sum(frame.measured_bits for frame in frames)
