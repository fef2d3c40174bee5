"""
Synchronized multi-worker training runs
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
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from gradstream.codec import bits_per_component
from gradstream.core import RngStream, check_dimension
from gradstream.error import Error, G_CONFIG, G_PROTOCOL
from gradstream.experiments.metrics import MetricsRow
from gradstream.pipeline.channel import Channel, check_blocks
from gradstream.pipeline.master import MasterState, master_step
from gradstream.pipeline.worker import WorkerState, worker_step
from gradstream.predictors import PredictorKind, PredictorSpec, check_beta
from gradstream.problems import ProblemKind, ProblemSpec, get_problem
from gradstream.quantizers import QuantizerKind, QuantizerSpec
from gradstream.settings import thread_cap

logger = logging.getLogger("pipeline")


@dataclass(frozen=True)
class RunConfig:
    """Everything a run depends on; the trace of a run is a function of this alone"""

    d: int
    quantizer: QuantizerSpec
    predictor: PredictorKind = PredictorKind.ZERO
    beta: float = 0.0
    ef: bool = False
    workers: int = 1
    iters: int = 100
    lr: float = 0.1
    lr_decay_every: int = 0
    lr_decay_factor: float = 1.0
    problem: ProblemKind = ProblemKind.GAUSSIAN
    sigma2: float = 1.0
    batch: int = 32
    seed: int = 0
    blocks: tuple = (0,)
    master_beta: float = 0.9
    xi: Optional[float] = None
    trace_component: Optional[int] = None
    curvature: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "predictor", PredictorKind(self.predictor))
        object.__setattr__(self, "problem", ProblemKind(self.problem))
        self.validate()

    def validate(self):
        try:
            check_dimension(self.d)
        except Error as err:
            raise G_CONFIG.with_detail(f"d: {err}") from err
        check_beta(self.beta)
        check_beta(self.master_beta, "master_beta")
        self.quantizer.validate(self.d)
        if self.workers < 1:
            raise G_CONFIG.with_detail(f"workers: {self.workers} < 1")
        if self.iters < 1:
            raise G_CONFIG.with_detail(f"iters: {self.iters} < 1")
        if not self.lr > 0:
            raise G_CONFIG.with_detail(f"lr: {self.lr} must be positive")
        if self.lr_decay_every < 0:
            raise G_CONFIG.with_detail(f"lr_decay_every: {self.lr_decay_every} < 0")
        if not self.lr_decay_factor > 0:
            raise G_CONFIG.with_detail(f"lr_decay_factor: {self.lr_decay_factor} must be positive")
        if self.predictor == PredictorKind.ESTK and not self.quantizer.kind.is_top_k_family():
            raise G_CONFIG.with_detail(
                f"predictor: estk needs a Top-K quantizer, not {self.quantizer.kind.value}"
            )
        if self.xi is not None and not self.xi > 0.5:
            raise G_CONFIG.with_detail(f"xi: {self.xi} must exceed 1/2")
        if self.trace_component is not None and not 0 <= self.trace_component < self.d:
            raise G_CONFIG.with_detail(f"trace_component: {self.trace_component} not in [0, {self.d})")
        check_blocks(self.blocks, self.d)
        self.problem_spec()

    def predictor_spec(self) -> PredictorSpec:
        return PredictorSpec(self.predictor, self.beta)

    def problem_spec(self) -> ProblemSpec:
        return ProblemSpec(
            self.problem, self.d, sigma2=self.sigma2, curvature=self.curvature, batch=self.batch,
            samples=max(1000, self.batch),
        )

    def step_size(self, t: int) -> float:
        """Step decay: lr scaled by lr_decay_factor every lr_decay_every iterations"""
        if self.lr_decay_every:
            return self.lr * self.lr_decay_factor ** (t // self.lr_decay_every)
        return self.lr

    def channel(self) -> Channel:
        return Channel(self.d, self.quantizer, self.predictor_spec(), self.blocks, self.seed)

    def analytic_bits(self) -> Optional[float]:
        return bits_per_component(self.quantizer.kind, self.quantizer.k or 0, self.d)

    def with_seed(self, seed: int) -> "RunConfig":
        return replace(self, seed=seed)


@dataclass
class History:
    """Per-iteration record of the quantities the convergence analysis uses"""

    beta: float
    ef_enabled: bool
    iterates: list = field(default_factory=list)
    mean_gradients: list = field(default_factory=list)
    mean_errors: list = field(default_factory=list)
    step_sizes: list = field(default_factory=list)


class Simulation:
    """
    n workers and a master stepping in lockstep. Each round every worker draws
    its stochastic gradient at the current parameters and produces its frames,
    concurrently up to the GRADSTREAM_THREADS cap; the master then decodes and
    updates. After every round each worker's prediction is compared with its
    replica at the master.
    """

    def __init__(self, config: RunConfig, keep_history: bool = False, channel: Channel = None):
        self.config = config
        self.logger = logger
        self.problem = get_problem(config.problem_spec(), config.seed)
        self.channel = channel or config.channel()
        self.workers = [
            WorkerState.initial(self.channel, config.beta, config.ef, worker=i)
            for i in range(config.workers)
        ]
        self.rngs = [RngStream(config.seed, i) for i in range(config.workers)]
        self.master = MasterState.initial(self.problem.initial_point(), self.channel, config.workers)
        self.analytic_bits = config.analytic_bits()
        self.history = History(config.beta, config.ef) if keep_history else None
        self.rows = []

    def _step_worker(self, i: int, eta: float):
        g = self.problem.stochastic_gradient(self.master.w, self.rngs[i])
        frames, state = worker_step(self.workers[i], g, eta)
        return g, frames, state

    def _check_sync(self):
        for i, (state, chain) in enumerate(zip(self.workers, self.master.chains)):
            if not np.array_equal(state.r_hat, chain.r_hat):
                raise G_PROTOCOL.with_detail(f"worker {i} prediction diverged at t={self.master.t}")

    def step(self, t: int, pool: ThreadPoolExecutor = None):
        config = self.config
        eta = config.step_size(t)
        w = self.master.w
        loss = self.problem.loss(w)
        grad = self.problem.gradient(w)
        grad_norm_sq = None if grad is None else float(np.dot(grad, grad))
        traced = [state.r_hat for state in self.workers]

        indices = range(config.workers)
        if pool is not None:
            results = list(pool.map(lambda i: self._step_worker(i, eta), indices))
        else:
            results = [self._step_worker(i, eta) for i in indices]

        blobs = []
        for i, (g, frames, state) in enumerate(results):
            self.workers[i] = state
            blobs.append([frame.to_bytes() for frame in frames])
            self.rows.append(self._row(t, state, loss, grad_norm_sq, frames, traced[i]))

        if self.history is not None:
            self.history.iterates.append(w)
            self.history.mean_gradients.append(np.mean([g for g, _, _ in results], axis=0))
            self.history.mean_errors.append(np.mean([state.e for state in self.workers], axis=0))
            self.history.step_sizes.append(eta)

        self.update_parameters(blobs, eta)
        self._check_sync()

    def update_parameters(self, blobs, eta: float):
        self.master, _ = master_step(self.master, blobs, eta)

    def _row(self, t, state, loss, grad_norm_sq, frames, r_hat) -> MetricsRow:
        row = MetricsRow(
            t=t,
            worker=state.worker,
            loss=loss,
            grad_norm_sq=grad_norm_sq,
            mse=float(np.dot(state.e, state.e)) / self.config.d,
            frame_bits=self.channel.frame_bits(frames),
            analytic_bits=self.analytic_bits,
        )
        j = self.config.trace_component
        if j is not None:
            row.trace_v = float(state.v[j])
            row.trace_u = float(state.u[j])
            row.trace_uq = float(state.u_tilde[j])
            row.trace_rhat = float(r_hat[j])
        return row

    def run(self) -> [MetricsRow]:
        config = self.config
        self.logger.info(
            "run: d=%d n=%d T=%d scheme=%s predictor=%s ef=%s",
            config.d, config.workers, config.iters, config.quantizer.kind.value,
            config.predictor.value, config.ef,
        )
        threads = min(thread_cap(), config.workers)
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                for t in range(config.iters):
                    self.step(t, pool)
        else:
            for t in range(config.iters):
                self.step(t)
        if self.history is not None:
            self.history.iterates.append(self.master.w)
        return self.rows


def run_training(config: RunConfig) -> [MetricsRow]:
    """Run config.iters synchronized rounds, one MetricsRow per worker and iteration"""
    return Simulation(config).run()
