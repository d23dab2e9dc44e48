"""
This file is part of armanorm.
Copyright (c) 2022 spezifisch (https://github.com/spezifisch)

This program is free software: you can redistribute it and/or modify
it under the terms of the GNU Affero General Public License as
published by the Free Software Foundation, version 3 of the License.

This program is distributed in the hope that it will be useful,
but WITHOUT ANY WARRANTY; without even the implied warranty of
MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
GNU Affero General Public License for more details.

You should have received a copy of the GNU Affero General Public License
along with this program.  If not, see <https://www.gnu.org/licenses/>.
"""

from typing import Any, Dict, Mapping, Optional

from .approx import DEFAULT_BUDGET, DEFAULT_RESTARTS
from .norms import DEFAULT_TOL
from .series import DEFAULT_ORDER, DEFAULT_SEED


class RunConfig:
    OUTPUT_FORMATS = ("csv", "json")
    DEFAULT_OUTPUT_FORMAT = "csv"

    def __init__(
        self,
        order: int = DEFAULT_ORDER,
        grid_tol: float = DEFAULT_TOL,
        budget: int = DEFAULT_BUDGET,
        restarts: int = DEFAULT_RESTARTS,
        seed: int = DEFAULT_SEED,
        output_format: str = DEFAULT_OUTPUT_FORMAT,
        out: Optional[str] = None,
    ) -> None:
        # truncation order K of every series expansion
        self.order = order  # type: int
        if not isinstance(order, int) or order < 1:
            raise ValueError(f"invalid order: {order}")

        self.grid_tol = grid_tol  # type: float
        if not grid_tol > 0:
            raise ValueError(f"invalid grid tolerance: {grid_tol}")

        # optimizer: evaluations per restart, number of restarts, base seed
        self.budget = budget  # type: int
        if not isinstance(budget, int) or budget < 1:
            raise ValueError(f"invalid budget: {budget}")
        self.restarts = restarts  # type: int
        if not isinstance(restarts, int) or restarts < 1:
            raise ValueError(f"invalid restarts: {restarts}")
        self.seed = seed  # type: int
        if not isinstance(seed, int) or seed < 0:
            raise ValueError(f"invalid seed: {seed}")

        self.output_format = output_format  # type: str
        if output_format not in self.OUTPUT_FORMATS:
            raise ValueError(f"invalid output format: {output_format}")
        # None writes to stdout
        self.out = out  # type: Optional[str]

    @classmethod
    def from_sources(cls, file_values: Mapping[str, Any], overrides: Mapping[str, Any]) -> "RunConfig":
        """Config file values first, then every override that was actually given."""
        values = dict(file_values)
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "order": self.order,
            "grid_tol": self.grid_tol,
            "budget": self.budget,
            "restarts": self.restarts,
            "seed": self.seed,
            "output_format": self.output_format,
            "out": self.out,
        }
