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

from gradstream.experiments.constants import EF_GROWTH_FACTOR, NO_EF_BOUND_FACTOR
from gradstream.experiments.error_growth import boundedness_ratio, growth_ratio, run_error_growth


def test_without_error_feedback_stays_bounded():
    rows = run_error_growth(ef=False)
    assert [row.t for row in rows] == list(range(101))
    assert math.isfinite(rows[0].error_norm_sq) and rows[0].error_norm_sq > 0
    assert boundedness_ratio(rows) <= NO_EF_BOUND_FACTOR


def test_error_feedback_grows():
    rows = run_error_growth(ef=True)
    assert all(row.ef for row in rows)
    assert growth_ratio(rows, 10, 100) >= EF_GROWTH_FACTOR
