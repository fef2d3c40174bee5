"""
Per-iteration records and their CSV / JSON serialization
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
import csv
import json
from dataclasses import asdict, dataclass, fields
from typing import Optional

import numpy as np

from gradstream.error import G_CONFIG

FORMATS = ("csv", "json")


@dataclass
class MetricsRow:
    """
    One worker's view of one iteration. mse is (1/d)||e_t||^2; loss and
    grad_norm_sq are taken at the parameters the gradient was drawn at, and
    stay empty when the problem has no objective. trace_* hold the traced
    component of v_t, u_t, u_tilde_t and the prediction r_hat_t subtracted at t.
    """

    t: int
    worker: int
    loss: Optional[float]
    grad_norm_sq: Optional[float]
    mse: float
    frame_bits: int
    analytic_bits: Optional[float]
    trace_v: Optional[float] = None
    trace_u: Optional[float] = None
    trace_uq: Optional[float] = None
    trace_rhat: Optional[float] = None


def format_value(value) -> str:
    """Locale-independent text: repr for floats, empty for missing"""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _plain(value):
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def headers(row_type) -> [str]:
    return [f.name for f in fields(row_type)]


def write_csv(stream, rows, row_type=MetricsRow):
    """Header row, then one line per record, LF line endings"""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(headers(row_type))
    for row in rows:
        writer.writerow([format_value(v) for v in asdict(row).values()])


def write_json(stream, rows, row_type=MetricsRow):
    """Array of objects mirroring the CSV rows"""
    records = [{k: _plain(v) for k, v in asdict(row).items()} for row in rows]
    json.dump(records, stream, indent=2)
    stream.write("\n")


def write_rows(stream, rows, row_type=MetricsRow, fmt: str = "csv"):
    if fmt == "csv":
        write_csv(stream, rows, row_type)
    elif fmt == "json":
        write_json(stream, rows, row_type)
    else:
        raise G_CONFIG.with_detail(f"format: {fmt} not one of {', '.join(FORMATS)}")
