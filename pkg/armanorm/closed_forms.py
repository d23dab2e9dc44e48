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

import math

import numpy as np
from numpy.typing import ArrayLike
from scipy import special

from .evaluator_base import EvaluatorBase
from .exceptions import ArmanormUncertifiedEvaluation

# terms of a geometric tail below this relative size are dropped
_TAIL_CUTOFF = 1e-40


def format_number(value: complex) -> str:
    value = complex(value)
    if value.imag == 0:
        return f"{value.real:g}"
    return f"{value:g}"


def _check_ratio(a: complex, allow_unit: bool) -> complex:
    a = complex(a)
    if a == 0:
        raise ValueError("ratio a must be nonzero")
    if abs(a) > 1 or (abs(a) == 1 and not allow_unit):
        raise ValueError(f"ratio out of range: |a| = {abs(a)}")
    return a


def _geometric_tail_sum(r2: float, k: int, weight_shift: int) -> float:
    """Σ_{n>k} r2^n / (n + weight_shift)² for 0 < r2 < 1."""
    count = int(math.ceil(math.log(_TAIL_CUTOFF) / math.log(r2))) + 1
    n = np.arange(k + 1, k + 1 + count, dtype=float)
    return math.fsum(np.exp(n * math.log(r2)) / (n + weight_shift) ** 2)


class Log1pClosedForm(EvaluatorBase):
    """x(z) = log(1 + az), 0 < |a| ≤ 1 (principal branch)."""

    def __init__(self, a: complex) -> None:
        self.a = _check_ratio(a, allow_unit=True)  # type: complex

    @property
    def label(self) -> str:
        return f"log(1+({format_number(self.a)})z)"

    def evaluate(self, z: ArrayLike) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log1p(self.a * np.asarray(z, dtype=complex))

    def check_circle(self) -> None:
        if abs(self.a) >= 1:
            raise ArmanormUncertifiedEvaluation(f"{self.label} has a branch point on S¹ and is unbounded there")

    def l2_tail(self, k: int) -> float:
        """Σ_{n>k} |x_n|² with x_n = (-1)^{n+1} aⁿ/n."""
        r2 = abs(self.a) ** 2
        if r2 == 1:
            return float(special.polygamma(1, k + 1))
        return _geometric_tail_sum(r2, k, 0)


class Log1pQuotientClosedForm(EvaluatorBase):
    """x(z) = log(1 + az)/(az), continued by 1 at z = 0; coefficients (-a)ⁿ/(n+1)."""

    def __init__(self, a: complex) -> None:
        self.a = _check_ratio(a, allow_unit=True)  # type: complex

    @property
    def label(self) -> str:
        return f"log(1+({format_number(self.a)})z)/(({format_number(self.a)})z)"

    def evaluate(self, z: ArrayLike) -> np.ndarray:
        w = self.a * np.asarray(z, dtype=complex)
        safe = np.where(w == 0, 1.0, w)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(w == 0, 1.0 + 0j, np.log1p(safe) / safe)

    def check_circle(self) -> None:
        if abs(self.a) >= 1:
            raise ArmanormUncertifiedEvaluation(f"{self.label} has a branch point on S¹ and is unbounded there")

    def l2_tail(self, k: int) -> float:
        r2 = abs(self.a) ** 2
        if r2 == 1:
            return float(special.polygamma(1, k + 2))
        return _geometric_tail_sum(r2, k, 1)


class GeometricClosedForm(EvaluatorBase):
    """x(z) = 1/(1 - az), |a| < 1."""

    def __init__(self, a: complex) -> None:
        a = complex(a)
        if abs(a) >= 1:
            raise ValueError(f"ratio out of range: |a| = {abs(a)}")
        self.a = a  # type: complex

    @property
    def label(self) -> str:
        return f"1/(1-({format_number(self.a)})z)"

    def evaluate(self, z: ArrayLike) -> np.ndarray:
        return 1.0 / (1.0 - self.a * np.asarray(z, dtype=complex))

    def check_circle(self) -> None:
        pass

    def l2_tail(self, k: int) -> float:
        r2 = abs(self.a) ** 2
        return float(r2 ** (k + 1) / (1.0 - r2))


class SingularInnerClosedForm(EvaluatorBase):
    """h(z) = exp(-(1+z)/(1-z)) + shift.

    Bounded by 1 + |shift| on the closed disk but discontinuous at z = 1, so it is never accepted on S¹.
    The value at z = 1 itself is taken as the radial limit, i.e. `shift`.
    """

    def __init__(self, shift: complex = 0) -> None:
        self.shift = complex(shift)  # type: complex

    @property
    def label(self) -> str:
        if self.shift == 0:
            return "exp(-(1+z)/(1-z))"
        return f"exp(-(1+z)/(1-z))+({format_number(self.shift)})"

    def evaluate(self, z: ArrayLike) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        at_one = z == 1
        safe = np.where(at_one, 0.0, z)
        values = np.exp(-(1 + safe) / (1 - safe))
        return np.where(at_one, 0.0, values) + self.shift

    def check_circle(self) -> None:
        raise ArmanormUncertifiedEvaluation(f"{self.label} is discontinuous at z = 1, no essential sup is computed")
