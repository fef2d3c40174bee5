"""
Pass thresholds of the desk-scale experiments
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
# error feedback with a linear predictor: ||e_T||^2 >= factor * ||e_10||^2
EF_GROWTH_FACTOR = 10.0
# no error feedback: max over the second half <= factor * median over [10, 50]
NO_EF_BOUND_FACTOR = 3.0
# Est-K peak |u_t[j]| relative to the zero predictor's
ESTK_PEAK_RATIO = 0.7
# Est-K late-run mse relative to the zero predictor's
MSE_RATIO = 0.5
# window of the peak comparison
PEAK_WINDOW = (100, 1000)
