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
import os

from dynaconf import Dynaconf

_CONFIG_DIR = os.path.join(os.path.dirname(os.path.dirname(__file__)), "config")

settings = Dynaconf(
    envvar_prefix="GRADSTREAM",
    settings_files=[os.path.join(_CONFIG_DIR, "settings.toml")],
    environments=True,
    env_switcher="GRADSTREAM_ENV",
)


def thread_cap() -> int:
    """Upper bound on concurrently stepping workers (GRADSTREAM_THREADS)"""
    return max(1, int(settings.get("THREADS", 1)))
