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

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import click
import numpy as np
from loguru import logger

from .closed_forms import format_number
from .reference_values import REFERENCES, Reference
from .run_config import RunConfig

PASS = "PASS"
FAIL = "FAIL"


def plain(value: Any) -> Any:
    """JSON-safe copy: numpy scalars and arrays unwrapped, complex split, non-finite floats as null."""
    if isinstance(value, dict):
        return {str(key): plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [plain(item) for item in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        if value.imag == 0:
            return plain(float(value.real))
        return {"re": plain(float(value.real)), "im": plain(float(value.imag))}
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (complex, np.complexfloating)):
        return format_number(value)
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


@dataclass(frozen=True)
class Check:
    name: str
    value: Optional[float]
    reference: Reference

    @property
    def passed(self) -> bool:
        return self.reference.check(self.value)

    @property
    def status(self) -> str:
        return PASS if self.passed else FAIL

    def as_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "value": plain(self.value),
            "expected": plain(self.reference.expected),
            "tolerance": plain(self.reference.tolerance),
            "relation": self.reference.relation,
            "status": self.status,
        }


class Report:
    """Table rows, free-form results and PASS/FAIL checks of one command run."""

    def __init__(self, command: str, config: RunConfig, columns: Sequence[str]) -> None:
        self.command = command  # type: str
        self.config = config  # type: RunConfig
        self.columns = tuple(columns)  # type: Tuple[str, ...]
        self.rows = []  # type: List[Tuple[Any, ...]]
        self.results = {}  # type: Dict[str, Any]
        self.checks = []  # type: List[Check]
        # emitted as '#' lines above the CSV header
        self.notes = []  # type: List[str]

    def add_row(self, *values: Any) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} values, expected {len(self.columns)}")
        self.rows.append(tuple(values))

    def add_check(self, name: str, value: Optional[float], reference: Optional[str] = None) -> Check:
        check = Check(name, None if value is None else float(value), REFERENCES[reference or name])
        if check.passed:
            logger.info(f"{PASS} {name} = {value} ({check.reference.describe()})")
        else:
            logger.warning(f"{FAIL} {name} = {value} ({check.reference.describe()})")
        self.checks.append(check)
        return check

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def to_json(self) -> str:
        document = {
            "command": self.command,
            "config": plain(self.config.as_dict()),
            "results": plain({**self.results, "table": {"columns": self.columns, "rows": self.rows}}),
            "checks": [check.as_dict() for check in self.checks],
        }
        return json.dumps(document, indent=2, ensure_ascii=False) + "\n"

    def to_csv(self) -> str:
        buffer = io.StringIO()
        for note in self.notes:
            buffer.write(f"# {note}\n")
        for check in self.checks:
            described = check.reference.describe()
            buffer.write(f"# check {check.name} = {_cell(check.value)} ({described}) {check.status}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.columns)
        writer.writerows([_cell(value) for value in row] for row in self.rows)
        return buffer.getvalue()

    def render(self) -> str:
        return self.to_json() if self.config.output_format == "json" else self.to_csv()

    def write(self) -> None:
        text = self.render()
        if self.config.out is None:
            click.echo(text, nl=False)
            return
        with open(self.config.out, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        logger.info(f"wrote {self.command} report to {self.config.out}")
