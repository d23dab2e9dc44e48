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

import abc
from typing import Callable, Dict

import numpy as np
from numpy.typing import ArrayLike

from .exceptions import ArmanormUncertifiedEvaluation


def unit_roots(m: int) -> np.ndarray:
    """The m-th roots of unity exp(2πij/m), j = 0..m-1, i.e. the dyadic grids on S¹."""
    return np.exp(2j * np.pi * np.arange(m) / m)


def fold_circle_values(coeffs: np.ndarray, m: int) -> np.ndarray:
    """Σ c_n ω^{jn} on the m-th roots of unity: coefficients fold modulo m, then one FFT."""
    folded = np.zeros(m, dtype=complex)
    np.add.at(folded, np.arange(len(coeffs)) % m, coeffs)
    return np.fft.ifft(folded) * m


class EvaluatorBase(abc.ABC):
    """A transfer function that can be evaluated on the closed unit disk."""

    @property
    @abc.abstractmethod
    def label(self) -> str:
        return ""

    @abc.abstractmethod
    def evaluate(self, z: ArrayLike) -> np.ndarray:
        """Pointwise values, vectorized over z."""
        return np.zeros(0)

    @abc.abstractmethod
    def check_circle(self) -> None:
        """Raise unless values on S¹ are certified (continuous, no pole on the circle, bounded tail)."""
        pass

    def circle_values(self, m: int) -> np.ndarray:
        return self.evaluate(unit_roots(m))

    def circle_tail_bound(self) -> float:
        # bound on |f - evaluate(f)| on S¹, nonzero for truncated series
        return 0.0


class Combination(EvaluatorBase):
    """Pointwise sum, difference or product of two evaluators."""

    OPERATIONS = {
        "add": np.add,
        "sub": np.subtract,
        "mul": np.multiply,
    }  # type: Dict[str, Callable[[np.ndarray, np.ndarray], np.ndarray]]
    SYMBOLS = {"add": "+", "sub": "-", "mul": "*"}

    def __init__(self, operation: str, left: EvaluatorBase, right: EvaluatorBase) -> None:
        if operation not in self.OPERATIONS:
            raise ValueError(f"unknown operation: {operation}")
        self.operation = operation  # type: str
        self.left = left  # type: EvaluatorBase
        self.right = right  # type: EvaluatorBase

    @property
    def label(self) -> str:
        return f"({self.left.label} {self.SYMBOLS[self.operation]} {self.right.label})"

    def evaluate(self, z: ArrayLike) -> np.ndarray:
        return self.OPERATIONS[self.operation](self.left.evaluate(z), self.right.evaluate(z))

    def check_circle(self) -> None:
        self.left.check_circle()
        self.right.check_circle()
        if self.operation == "mul" and (self.left.circle_tail_bound() > 0 or self.right.circle_tail_bound() > 0):
            raise ArmanormUncertifiedEvaluation(f"no tail bound for the product {self.label}")

    def circle_values(self, m: int) -> np.ndarray:
        return self.OPERATIONS[self.operation](self.left.circle_values(m), self.right.circle_values(m))

    def circle_tail_bound(self) -> float:
        if self.operation == "mul":
            return 0.0
        return self.left.circle_tail_bound() + self.right.circle_tail_bound()


def difference(x: EvaluatorBase, y: EvaluatorBase) -> Combination:
    return Combination("sub", x, y)
