"""
Convergence bound of error-feedback SGD with a bounded-distortion quantizer
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
from dataclasses import dataclass
from typing import Optional

from gradstream.error import G_DOMAIN


@dataclass(frozen=True)
class BoundInputs:
    """
    T iterations, smoothness L, initial gap delta_f = f(w_0) - f*, gradient
    noise variance sigma2 over n workers, quantizer distortion D and the
    step-size knob xi (xi = inf gives the uncompressed limit).
    """

    T: int
    L: float
    delta_f: float
    sigma2: float
    n: int
    D: float
    xi: float

    def __post_init__(self):
        if self.T < 1 or self.n < 1:
            raise G_DOMAIN.with_detail(f"T={self.T}, n={self.n}")
        if not self.L > 0:
            raise G_DOMAIN.with_detail(f"L={self.L}")
        if self.delta_f < 0 or self.sigma2 < 0 or self.D < 0:
            raise G_DOMAIN.with_detail("delta_f, sigma2 and D must be non-negative")
        if not self.xi > 0.5:
            raise G_DOMAIN.with_detail(f"xi={self.xi} must exceed 1/2")

    @property
    def c(self) -> float:
        return 1.0 - 1.0 / (2.0 * self.xi)

    def step_size(self) -> float:
        """eta = c / (L sqrt(T))"""
        return self.c / (self.L * math.sqrt(self.T))


@dataclass(frozen=True)
class CorollaryTerms:
    """A + B at xi = T^(1/4), split into its two leading terms and the rest"""

    first: float
    second: float
    third: float

    @property
    def total(self) -> float:
        return self.first + self.second + self.third


@dataclass(frozen=True)
class BoundReport:
    c: float
    A: float
    B: float
    corollary: Optional[CorollaryTerms] = None

    @property
    def total(self) -> float:
        return self.A + self.B


def plain_sgd_bound(T: int, L: float, delta_f: float, sigma2: float, n: int) -> float:
    """(2 L delta_f + sigma2/n) / (2 sqrt(T) - 1), the uncompressed rate"""
    return (2.0 * L * delta_f + sigma2 / n) / (2.0 * math.sqrt(T) - 1.0)


def _terms(inputs: BoundInputs) -> (float, float, float):
    c = inputs.c
    root_t = math.sqrt(inputs.T)
    a = (2.0 * inputs.L / c ** 2 * inputs.delta_f + inputs.sigma2 / inputs.n) / (2.0 * root_t - 1.0)
    if inputs.D == 0:
        b = 0.0
    else:
        b = c * inputs.xi * inputs.D / (2.0 * inputs.T - root_t)
    return c, a, b


def corollary_terms(inputs: BoundInputs) -> CorollaryTerms:
    """Decomposition of the bound with xi = T^(1/4); its total equals A + B there"""
    quarter = inputs.T ** 0.25
    at_quarter = BoundInputs(inputs.T, inputs.L, inputs.delta_f, inputs.sigma2, inputs.n, inputs.D, quarter)
    _, a, b = _terms(at_quarter)
    first = plain_sgd_bound(inputs.T, inputs.L, inputs.delta_f, inputs.sigma2, inputs.n)
    second = (2.0 * inputs.L * inputs.delta_f + inputs.D) / (2.0 * inputs.T ** 0.75 - quarter)
    return CorollaryTerms(first, second, a + b - first - second)


def theoretical_bound(inputs: BoundInputs) -> BoundReport:
    """
    Upper bound on the average squared gradient norm over T iterations:
    A = (2L/c^2 delta_f + sigma2/n) / (2 sqrt(T) - 1) and
    B = c xi D / (2T - sqrt(T)), with c = 1 - 1/(2 xi).
    The corollary split is attached when xi = T^(1/4).
    """
    c, a, b = _terms(inputs)
    corollary = None
    if math.isclose(inputs.xi, inputs.T ** 0.25, rel_tol=1e-12):
        corollary = corollary_terms(inputs)
    return BoundReport(c, a, b, corollary)
