"""
Gradient sources: a pure Gaussian stream, a noisy quadratic with known
constants, and synthetic logistic regression
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
from dataclasses import dataclass
from enum import Enum, unique
from typing import NamedTuple, Optional

import numpy as np

from gradstream.core import ParamVector, RngStream, check_dimension, gaussian_vector
from gradstream.error import G_CONFIG, G_INVALID_INPUT

# stream id of the generator that draws the logistic dataset
DATA_STREAM = 1 << 48


@unique
class ProblemKind(str, Enum):
    GAUSSIAN = "gaussian"
    QUADRATIC = "quadratic"
    LOGISTIC = "logistic"


@dataclass(frozen=True)
class ProblemSpec:
    """
    kind and dimension, plus: sigma2, the total gradient-noise variance of the
    quadratic; curvature, its eigenvalues (evenly spaced in [0.1, 1] when
    omitted); samples, separation, batch and reg for the logistic dataset.
    """

    kind: ProblemKind
    d: int
    sigma2: float = 1.0
    curvature: Optional[tuple] = None
    samples: int = 1000
    separation: float = 2.0
    batch: int = 32
    reg: float = 1e-4

    def __post_init__(self):
        object.__setattr__(self, "kind", ProblemKind(self.kind))
        check_dimension(self.d)
        if self.sigma2 < 0:
            raise G_CONFIG.with_detail(f"sigma2: {self.sigma2} is negative")
        if self.curvature is not None:
            curvature = tuple(float(c) for c in self.curvature)
            if len(curvature) != self.d or min(curvature) <= 0:
                raise G_CONFIG.with_detail("curvature: need d positive eigenvalues")
            object.__setattr__(self, "curvature", curvature)
        if self.samples < 2 or not 1 <= self.batch <= self.samples:
            raise G_CONFIG.with_detail(f"batch: {self.batch} not in [1, {self.samples}]")
        if self.reg < 0:
            raise G_CONFIG.with_detail(f"reg: {self.reg} is negative")

    def eigenvalues(self) -> np.ndarray:
        if self.curvature is not None:
            return np.array(self.curvature, dtype=np.float64)
        if self.d == 1:
            return np.ones(1)
        return np.linspace(0.1, 1.0, self.d)


class LogisticBatch(NamedTuple):
    features: np.ndarray
    labels: np.ndarray


def gaussian_stream_grad(rng: RngStream, d: int) -> ParamVector:
    """Gradient of the synthetic stream: i.i.d. standard normal components"""
    return gaussian_vector(rng, d)


def quadratic_grad(w: ParamVector, spec: ProblemSpec, rng: RngStream) -> (ParamVector, float, ParamVector):
    """
    Stochastic gradient, value and exact gradient of f(w) = 1/2 sum lambda_j w_j^2.
    Noise is isotropic Gaussian with E||noise||^2 = sigma2.
    """
    lam = spec.eigenvalues()
    grad = lam * w
    value = 0.5 * float(np.dot(lam, w * w))
    if spec.sigma2 == 0:
        return grad.copy(), value, grad
    noise = rng.normal(spec.d) * np.sqrt(spec.sigma2 / spec.d)
    return grad + noise, value, grad


def logistic_loss(w: ParamVector, batch: LogisticBatch, reg: float) -> float:
    margins = batch.labels * (batch.features @ w)
    return float(np.mean(np.logaddexp(0.0, -margins)) + 0.5 * reg * np.dot(w, w))


def logistic_grad(w: ParamVector, batch: LogisticBatch, reg: float = 1e-4) -> ParamVector:
    """Gradient of the l2-regularized logistic loss averaged over batch"""
    if batch.labels.size == 0:
        raise G_INVALID_INPUT.with_detail("empty batch")
    margins = batch.labels * (batch.features @ w)
    # sigmoid(-margin), computed without overflow
    weights = np.exp(-np.logaddexp(0.0, margins))
    return -(batch.features.T @ (batch.labels * weights)) / batch.labels.size + reg * w


class Problem:
    """Problem characteristics. All gradient sources must implement this class"""

    def __init__(self, spec: ProblemSpec, seed: int = 0):
        self.spec = spec
        self.seed = seed

    @property
    def d(self) -> int:
        return self.spec.d

    def initial_point(self) -> ParamVector:
        return np.zeros(self.d)

    def stochastic_gradient(self, w: ParamVector, rng: RngStream) -> ParamVector:
        raise NotImplementedError

    def loss(self, w: ParamVector) -> Optional[float]:
        """Objective value where one exists"""
        return None

    def gradient(self, w: ParamVector) -> Optional[ParamVector]:
        """Exact full gradient where one exists"""
        return None

    def smoothness(self) -> Optional[float]:
        """Lipschitz constant L of the gradient, when known"""
        return None

    def optimum(self) -> Optional[float]:
        """f*, when known"""
        return None


class GaussianStream(Problem):
    """No objective, gradients are pure noise"""

    def stochastic_gradient(self, w: ParamVector, rng: RngStream) -> ParamVector:
        return gaussian_stream_grad(rng, self.d)


class NoisyQuadratic(Problem):
    def initial_point(self) -> ParamVector:
        return np.ones(self.d)

    def stochastic_gradient(self, w: ParamVector, rng: RngStream) -> ParamVector:
        g, _, _ = quadratic_grad(w, self.spec, rng)
        return g

    def loss(self, w: ParamVector) -> float:
        return 0.5 * float(np.dot(self.spec.eigenvalues(), w * w))

    def gradient(self, w: ParamVector) -> ParamVector:
        return self.spec.eigenvalues() * w

    def smoothness(self) -> float:
        return float(self.spec.eigenvalues().max())

    def optimum(self) -> float:
        return 0.0


class SyntheticLogistic(Problem):
    """
    Two Gaussian clusters with unit covariance whose means sit at
    +/- separation/2 along a fixed random direction; labels +1 and -1, balanced.
    """

    def __init__(self, spec: ProblemSpec, seed: int = 0):
        super().__init__(spec, seed)
        rng = RngStream(seed, DATA_STREAM)
        direction = rng.normal(spec.d)
        direction /= np.linalg.norm(direction)
        labels = np.where(np.arange(spec.samples) < spec.samples // 2, 1.0, -1.0)
        noise = rng.normal(spec.samples * spec.d).reshape(spec.samples, spec.d)
        features = noise + np.outer(labels, 0.5 * spec.separation * direction)
        self.data = LogisticBatch(features, labels)

    def sample_batch(self, rng: RngStream) -> LogisticBatch:
        rows = np.sort(rng.choice(self.spec.samples, self.spec.batch))
        return LogisticBatch(self.data.features[rows], self.data.labels[rows])

    def stochastic_gradient(self, w: ParamVector, rng: RngStream) -> ParamVector:
        return logistic_grad(w, self.sample_batch(rng), self.spec.reg)

    def loss(self, w: ParamVector) -> float:
        return logistic_loss(w, self.data, self.spec.reg)

    def gradient(self, w: ParamVector) -> ParamVector:
        return logistic_grad(w, self.data, self.spec.reg)


_PROBLEMS = {
    ProblemKind.GAUSSIAN: GaussianStream,
    ProblemKind.QUADRATIC: NoisyQuadratic,
    ProblemKind.LOGISTIC: SyntheticLogistic,
}


def get_problem(spec: ProblemSpec, seed: int = 0) -> Problem:
    return _PROBLEMS[spec.kind](spec, seed)
