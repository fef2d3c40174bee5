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

from .bits import BitReader, BitWriter
from .golomb import golomb_decode, golomb_encode, optimal_parameter
from .frame import CompressedFrame, Scheme, decode_frame, encode_frame, reconstruct
from .rate import binary_entropy, bits_per_component, ternary_entropy
