"""
Empirical check of the convergence bound on the noisy quadratic
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
from dataclasses import dataclass, replace

from gradstream.error import G_UNSUPPORTED_CONFIGURATION
from gradstream.experiments.bounds import BoundInputs, BoundReport, plain_sgd_bound, theoretical_bound
from gradstream.pipeline import RunConfig, Simulation
from gradstream.problems import ProblemKind, get_problem
from gradstream.quantizers import QuantizerKind

logger = logging.getLogger("experiments")


@dataclass(frozen=True)
class ConvergenceReport:
    seed: int
    min_grad_norm_sq: float
    bound: BoundReport
    sgd_bound: float
    step_size: float

    @property
    def holds(self) -> bool:
        return self.min_grad_norm_sq <= self.bound.total


@dataclass
class ConvergenceRow:
    seed: int
    min_grad_norm_sq: float
    A: float
    B: float
    bound: float
    sgd_bound: float
    step_size: float
    holds: bool


def bound_inputs(config: RunConfig) -> BoundInputs:
    problem = get_problem(config.problem_spec(), config.seed)
    w0 = problem.initial_point()
    xi = config.xi if config.xi is not None else config.iters ** 0.25
    return BoundInputs(
        T=config.iters,
        L=problem.smoothness(),
        delta_f=problem.loss(w0) - problem.optimum(),
        sigma2=config.sigma2,
        n=config.workers,
        D=config.quantizer.distortion(config.d),
        xi=xi,
    )


def run_convergence(config: RunConfig) -> ConvergenceReport:
    """
    Run error-feedback SGD without momentum on the noisy quadratic with the
    step size eta = c/(L sqrt(T)) the bound prescribes, and compare
    min_t ||grad f(w_t)||^2 (exact gradients) with the bound.
    """
    if config.beta != 0.0 or not config.ef:
        raise G_UNSUPPORTED_CONFIGURATION.with_detail("convergence runs need beta=0 and error feedback")
    if config.problem != ProblemKind.QUADRATIC:
        raise G_UNSUPPORTED_CONFIGURATION.with_detail("convergence runs need the quadratic problem")
    if config.quantizer.kind not in (QuantizerKind.DITHERED, QuantizerKind.NONE):
        raise G_UNSUPPORTED_CONFIGURATION.with_detail("convergence runs need a bounded-distortion quantizer")
    if config.lr_decay_every:
        raise G_UNSUPPORTED_CONFIGURATION.with_detail("convergence runs use a constant step size")

    inputs = bound_inputs(config)
    eta = inputs.step_size()
    config = replace(config, lr=eta)
    logger.info("convergence: T=%d n=%d D=%r xi=%r eta=%r", inputs.T, inputs.n, inputs.D, inputs.xi, eta)
    rows = Simulation(config).run()
    min_grad = min(row.grad_norm_sq for row in rows)
    bound = theoretical_bound(inputs)
    sgd = plain_sgd_bound(inputs.T, inputs.L, inputs.delta_f, inputs.sigma2, inputs.n)
    return ConvergenceReport(config.seed, min_grad, bound, sgd, eta)


def convergence_rows(config: RunConfig, seeds) -> [ConvergenceRow]:
    rows = []
    for seed in seeds:
        report = run_convergence(config.with_seed(seed))
        rows.append(
            ConvergenceRow(
                seed=seed,
                min_grad_norm_sq=report.min_grad_norm_sq,
                A=report.bound.A,
                B=report.bound.B,
                bound=report.bound.total,
                sgd_bound=report.sgd_bound,
                step_size=report.step_size,
                holds=report.holds,
            )
        )
    return rows
