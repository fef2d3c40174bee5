"""
Errors
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
from dataclasses import dataclass, replace

# exit codes
RUNTIME = 1
USAGE = 2


@dataclass
class Error(Exception):
    """Helper class for presenting errors with a stable code and exit status"""

    errcode: str
    error: str
    status: int

    def get_error(self) -> dict:
        """Get error in serializable form"""
        error = {}
        error["errcode"] = self.errcode
        error["error"] = self.error
        return error

    def with_detail(self, detail: str) -> "Error":
        """Copy of this error with context appended to the message"""
        return replace(self, error=f"{self.error}: {detail}")

    def __str__(self) -> str:
        return f"{self.errcode}: {self.error}"


G_INVALID_DIMENSION = Error(
    errcode="G_INVALID_DIMENSION",
    error="Dimension must be a positive integer",
    status=RUNTIME,
)

G_INVALID_PARAMETER = Error(
    errcode="G_INVALID_PARAMETER",
    error="Parameter out of range",
    status=RUNTIME,
)

G_INVALID_STATE = Error(
    errcode="G_INVALID_STATE",
    error="State does not match the update",
    status=RUNTIME,
)

G_INVALID_INPUT = Error(
    errcode="G_INVALID_INPUT",
    error="Invalid input",
    status=RUNTIME,
)

G_DECODE = Error(
    errcode="G_DECODE",
    error="Malformed or truncated bit stream",
    status=RUNTIME,
)

G_DOMAIN = Error(
    errcode="G_DOMAIN",
    error="Argument outside the function's domain",
    status=RUNTIME,
)

G_INVALID_STEP = Error(
    errcode="G_INVALID_STEP",
    error="Step size must be positive",
    status=RUNTIME,
)

G_NUMERIC = Error(
    errcode="G_NUMERIC",
    error="Non-finite value encountered",
    status=RUNTIME,
)

G_PROTOCOL = Error(
    errcode="G_PROTOCOL",
    error="Worker and master are out of step",
    status=RUNTIME,
)

G_CONFIG = Error(
    errcode="G_CONFIG",
    error="Invalid configuration",
    status=USAGE,
)

G_UNSUPPORTED_CONFIGURATION = Error(
    errcode="G_UNSUPPORTED_CONFIGURATION",
    error="Operation is not supported for this configuration",
    status=USAGE,
)
