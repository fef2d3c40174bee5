"""
Command-line entry point and run-configuration parser
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
import sys

import click

from gradstream.error import Error, G_CONFIG, RUNTIME
from gradstream.experiments.convergence import ConvergenceRow, convergence_rows
from gradstream.experiments.error_growth import ErrorGrowthRow, error_growth_from
from gradstream.experiments.metrics import FORMATS, MetricsRow, write_rows
from gradstream.experiments.mse import MseRow, run_mse_comparison
from gradstream.experiments.rates import RateRow, rate_table, reference_configs, scheme_configs
from gradstream.experiments.timeseries import timeseries_from
from gradstream.pipeline import MomentumDeviationRow, RunConfig, master_momentum_sim, run_training
from gradstream.predictors import PredictorKind
from gradstream.problems import ProblemKind
from gradstream.quantizers import QuantizerKind, QuantizerSpec, k_from_fraction
from gradstream.settings import settings

logger = logging.getLogger("cli")

REQUIRED = ("scheme", "d")
INTEGER_KEYS = ("k", "d", "workers", "iters", "lr_decay_every", "seed", "batch")
FLOAT_KEYS = ("beta", "k_frac", "lr", "lr_decay_factor", "sigma2", "step", "master_beta", "xi")
BOOLEAN_KEYS = ("ef",)
CHOICE_KEYS = {
    "scheme": QuantizerKind,
    "predictor": PredictorKind,
    "problem": ProblemKind,
}
KEYS = INTEGER_KEYS + FLOAT_KEYS + BOOLEAN_KEYS + tuple(CHOICE_KEYS) + ("blocks",)
TRUE = ("true", "yes", "on", "1")
FALSE = ("false", "no", "off", "0")


def _tokens(text: str) -> [str]:
    tokens = []
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        tokens.extend(line.split())
    return tokens


def _convert(key: str, raw: str):
    try:
        if key in INTEGER_KEYS:
            return int(raw)
        if key in FLOAT_KEYS:
            return float(raw)
    except ValueError:
        raise G_CONFIG.with_detail(f"{key}: {raw!r} is not a number") from None
    if key in BOOLEAN_KEYS:
        if raw.lower() in TRUE:
            return True
        if raw.lower() in FALSE:
            return False
        raise G_CONFIG.with_detail(f"{key}: {raw!r} is not a boolean")
    if key in CHOICE_KEYS:
        choices = CHOICE_KEYS[key]
        try:
            return choices(raw.lower())
        except ValueError:
            allowed = ", ".join(c.value for c in choices)
            raise G_CONFIG.with_detail(f"{key}: {raw!r} not one of {allowed}") from None
    try:
        return tuple(int(part) for part in raw.split(","))
    except ValueError:
        raise G_CONFIG.with_detail(f"{key}: {raw!r} is not a comma-separated offset list") from None


def parse_config(text: str) -> RunConfig:
    """
    Parse flat key=value run configuration text. Pairs are separated by
    whitespace or newlines and # starts a comment. Unknown or repeated keys,
    contradictory keys and out-of-range values are config errors naming the key.
    """
    values = {}
    for token in _tokens(text):
        key, sep, raw = token.partition("=")
        if not sep or not key:
            raise G_CONFIG.with_detail(f"{token!r} is not key=value")
        if key not in KEYS:
            raise G_CONFIG.with_detail(f"{key}: unknown key")
        if key in values:
            raise G_CONFIG.with_detail(f"{key}: given twice")
        values[key] = _convert(key, raw)

    for key in REQUIRED:
        if key not in values:
            raise G_CONFIG.with_detail(f"{key}: required")

    d = values.pop("d")
    if d < 1:
        raise G_CONFIG.with_detail(f"d: {d} must be positive")
    kind = values.pop("scheme")
    k = values.pop("k", None)
    k_frac = values.pop("k_frac", None)
    step = values.pop("step", None)
    if k is not None and k_frac is not None:
        raise G_CONFIG.with_detail("k_frac: give either k or k_frac, not both")
    if kind.is_top_k_family():
        if k is None and k_frac is None:
            raise G_CONFIG.with_detail(f"k: {kind.value} needs k or k_frac")
        if k_frac is not None:
            if not 0 < k_frac <= 1:
                raise G_CONFIG.with_detail(f"k_frac: {k_frac} not in (0, 1]")
            k = k_from_fraction(k_frac, d)
    elif k is not None or k_frac is not None:
        raise G_CONFIG.with_detail(f"k: {kind.value} takes no K")
    if step is not None and kind != QuantizerKind.DITHERED:
        raise G_CONFIG.with_detail(f"step: {kind.value} takes no step")

    values.setdefault("seed", int(settings.get("SEED", 0)))
    return RunConfig(d=d, quantizer=QuantizerSpec(kind, k=k, step=step), **values)


def _load(path: str, seed: int) -> RunConfig:
    with open(path, encoding="utf-8") as f:
        config = parse_config(f.read())
    if seed is not None:
        config = config.with_seed(seed)
    return config


def _emit(output: str, rows, row_type, fmt: str):
    fmt = fmt or str(settings.get("OUTPUT_FORMAT", "csv"))
    if output == "-":
        write_rows(click.get_text_stream("stdout"), rows, row_type, fmt)
        return
    with open(output, "w", encoding="utf-8", newline="") as f:
        write_rows(f, rows, row_type, fmt)
    logger.info("wrote %d rows to %s", len(rows), output)


def run_options(fn):
    fn = click.option("--format", "fmt", type=click.Choice(FORMATS), default=None, help="Output format")(fn)
    fn = click.option("--seed", type=int, default=None, help="Override the config seed")(fn)
    fn = click.option("-o", "--output", default="-", show_default=True, help="Output file")(fn)
    fn = click.option(
        "-c", "--config", "config_path", required=True,
        type=click.Path(exists=True, dir_okay=False), help="Run configuration file",
    )(fn)
    return fn


@click.group()
def cli():
    """Simulate predictive coding of momentum-SGD updates"""


@cli.command("simulate")
@run_options
def simulate(config_path, output, seed, fmt):
    """Run training and write one row per worker and iteration"""
    config = _load(config_path, seed)
    _emit(output, run_training(config), MetricsRow, fmt)


@cli.command("timeseries")
@run_options
def timeseries(config_path, output, seed, fmt):
    """Trace one component of v, u, u_tilde and r_hat"""
    config = _load(config_path, seed)
    _emit(output, timeseries_from(config), MetricsRow, fmt)


@cli.command("error-growth")
@run_options
def error_growth(config_path, output, seed, fmt):
    """Squared norm of the quantization error per iteration"""
    config = _load(config_path, seed)
    _emit(output, error_growth_from(config), ErrorGrowthRow, fmt)


@cli.command("convergence")
@run_options
@click.option("--repeat", type=int, default=1, show_default=True, help="Number of consecutive seeds")
def convergence(config_path, output, seed, fmt, repeat):
    """Compare min_t ||grad f(w_t)||^2 with the convergence bound"""
    config = _load(config_path, seed)
    seeds = range(config.seed, config.seed + max(1, repeat))
    _emit(output, convergence_rows(config, seeds), ConvergenceRow, fmt)


@cli.command("rate-table")
@run_options
@click.option("--reference", is_flag=True, help="Use the reference (scheme, K/d) rows instead of the config's K")
def rate_table_command(config_path, output, seed, fmt, reference):
    """Analytic and measured bits per component, one row per scheme"""
    config = _load(config_path, seed)
    configs = reference_configs(config) if reference else scheme_configs(config)
    _emit(output, rate_table(configs), RateRow, fmt)


@cli.command("mse-compare")
@run_options
def mse_compare(config_path, output, seed, fmt):
    """(1/d)||e_t||^2 with the zero predictor and with Est-K"""
    config = _load(config_path, seed)
    _emit(output, run_mse_comparison(config), MseRow, fmt)


@cli.command("master-momentum")
@run_options
def master_momentum(config_path, output, seed, fmt):
    """Momentum error accumulated when momentum is applied at the master"""
    config = _load(config_path, seed)
    _emit(output, master_momentum_sim(config), MomentumDeviationRow, fmt)


def main(argv=None) -> int:
    """Run the command line; returns 0 on success, 1 on runtime errors, 2 on usage or config errors"""
    logging.basicConfig(
        level=str(settings.get("LOG_LEVEL", "WARNING")).upper(),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        rv = cli.main(args=argv, prog_name="gradstream", standalone_mode=False)
    except click.ClickException as err:
        err.show()
        return err.exit_code
    except click.Abort:
        click.echo("Aborted!", err=True)
        return RUNTIME
    except Error as err:
        click.echo(f"error: {err}", err=True)
        return err.status
    except OSError as err:
        click.echo(f"error: {err}", err=True)
        return RUNTIME
    if isinstance(rv, int):
        return rv
    return 0


def run():
    sys.exit(main())
