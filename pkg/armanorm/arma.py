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
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np
from loguru import logger
from numpy.polynomial import polynomial as npoly
from numpy.typing import ArrayLike
from scipy import signal

from .closed_forms import format_number
from .exceptions import ArmanormNonStationaryModel
from .rational import RationalTransfer, is_stationary, taylor
from .series import DEFAULT_ORDER, DEFAULT_SEED, L2Estimate, PowerSeries, ProcessSpec


@dataclass(frozen=True, eq=False)
class ArmaModel:
    """Y_t = Σ_{j=1..N} (-q_j) Y_{t-j} + Σ_{j=0..M} p_j ε_{t-j}.

    `ar` stores q_1..q_N exactly as the denominator has them (q_0 = 1 implied), `ma` stores p_0..p_M.
    The sign flip happens only when the recurrence is iterated or printed.
    """

    ar: ArrayLike
    ma: ArrayLike = (1.0,)
    innovation_variance: float = 1.0
    stationary: bool = field(init=False)

    def __post_init__(self) -> None:
        ar = np.array(self.ar, dtype=complex, ndmin=1)
        if len(ar):
            ar = npoly.polytrim(ar)
        if len(ar) == 1 and ar[0] == 0:
            ar = ar[:0]
        ma = npoly.polytrim(np.array(self.ma, dtype=complex, ndmin=1))
        if not (np.all(np.isfinite(ar)) and np.all(np.isfinite(ma))):
            raise ValueError("coefficients must be finite")
        if not self.innovation_variance > 0:
            raise ValueError(f"innovation variance must be positive: {self.innovation_variance}")
        ar.setflags(write=False)
        ma.setflags(write=False)
        object.__setattr__(self, "ar", ar)
        object.__setattr__(self, "ma", ma)
        object.__setattr__(self, "stationary", is_stationary(to_rational(self)).holds)

    @property
    def ar_order(self) -> int:
        return len(self.ar)

    @property
    def ma_order(self) -> int:
        return len(self.ma) - 1

    @property
    def is_real(self) -> bool:
        return not (np.any(np.imag(self.ar)) or np.any(np.imag(self.ma)))

    def recurrence(self) -> str:
        """Human readable form, e.g. 'Y_t = -0.25 Y_{t-1} + 0.5 ε_{t-1}'."""
        terms = []
        for j, q in enumerate(self.ar, start=1):
            if q != 0:
                terms.append(f"{format_number(-q)} Y_{{t-{j}}}")
        for j, p in enumerate(self.ma):
            if p != 0:
                terms.append(f"{format_number(p)} {'ε_t' if j == 0 else f'ε_{{t-{j}}}'}")
        return "Y_t = " + (" + ".join(terms) if terms else "0")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ArmaModel):
            return NotImplemented
        return (
            np.array_equal(self.ar, other.ar)
            and np.array_equal(self.ma, other.ma)
            and self.innovation_variance == other.innovation_variance
        )

    def __repr__(self) -> str:
        return f"ArmaModel(ar={np.asarray(self.ar).tolist()}, ma={np.asarray(self.ma).tolist()})"


class PredictionReport(NamedTuple):
    sigma_model: float
    distance: L2Estimate
    sigma_predictor: float
    holds: bool


# arithmetic slack for the prediction triangle inequality
PREDICTION_SLACK = 1e-12


def from_rational(r: RationalTransfer) -> ArmaModel:
    """Read q(L)Y_t = p(L)ε_t literally off the polynomials."""
    return ArmaModel(ar=r.den.coeffs[1:], ma=r.num.coeffs)


def to_rational(a: ArmaModel) -> RationalTransfer:
    return RationalTransfer(np.asarray(a.ma), np.concatenate(([1.0], np.asarray(a.ar))), reduce=False)


def process(a: ArmaModel, label: str = "Y") -> ProcessSpec:
    return ProcessSpec(to_rational(a), label=label)


def wold_coeffs(a: ArmaModel, order: int = DEFAULT_ORDER) -> PowerSeries:
    if not a.stationary:
        raise ArmanormNonStationaryModel(f"{a!r} has a root of q on or inside S¹")
    return taylor(to_rational(a), order)


def l2_distance(a: ProcessSpec, b: ProcessSpec, order: int = DEFAULT_ORDER) -> L2Estimate:
    """‖A_t - B_t‖₂ from the Wold coefficients through `order`; the tail is the sum of both tails when known."""
    xa, xb = a.wold(order), b.wold(order)
    value = float(np.linalg.norm(xa.coeffs - xb.coeffs))
    ta, tb = xa.l2_tail_bound(), xb.l2_tail_bound()
    return L2Estimate(value, None if ta is None or tb is None else ta + tb)


def prediction_decomposition(x: ProcessSpec, y: ProcessSpec, order: int = DEFAULT_ORDER) -> PredictionReport:
    """Split the prediction error of the model predictor Ŷ for the true process X.

    With shared innovations, σ(Ŷ - Y) = |y_0| and σ(Ŷ - X)² = |x_0|² + Σ_{j≥1} |y_j - x_j|², which can never
    exceed σ(Ŷ - Y) + ‖Y - X‖₂.
    """
    xs, ys = x.wold(order).coeffs, y.wold(order).coeffs
    sigma_model = float(abs(ys[0]))
    distance = l2_distance(y, x, order)
    sigma_predictor = math.sqrt(abs(xs[0]) ** 2 + float(np.sum(np.abs(ys[1:] - xs[1:]) ** 2)))
    holds = sigma_predictor <= sigma_model + distance.value + PREDICTION_SLACK
    if not holds:
        logger.warning(f"prediction decomposition violated: {sigma_predictor} > {sigma_model} + {distance.value}")
    return PredictionReport(sigma_model, distance, sigma_predictor, holds)


def default_burn_in(a: ArmaModel) -> int:
    return 10 * max(a.ar_order, a.ma_order) + 100


def simulate(a: ArmaModel, length: int, burn_in: Optional[int] = None, seed: int = DEFAULT_SEED) -> np.ndarray:
    """Sample path of length `length` driven by seeded Gaussian innovations, after `burn_in` dropped steps."""
    if not a.is_real:
        raise ValueError("only real-coefficient models can be simulated")
    if not a.stationary:
        raise ArmanormNonStationaryModel(f"{a!r} has a root of q on or inside S¹")
    if length < 1:
        raise ValueError(f"path length must be positive: {length}")
    if burn_in is None:
        burn_in = default_burn_in(a)
    if burn_in < 0:
        raise ValueError(f"burn-in must be nonnegative: {burn_in}")

    rng = np.random.default_rng(seed)
    innovations = rng.standard_normal(burn_in + length) * math.sqrt(a.innovation_variance)
    path = signal.lfilter(np.real(a.ma), np.concatenate(([1.0], np.real(a.ar))), innovations)
    logger.debug(f"simulated {length} steps of {a.recurrence()} after {burn_in} burn-in steps")
    return path[burn_in:]

