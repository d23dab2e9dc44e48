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
from dataclasses import dataclass
from typing import TYPE_CHECKING, NamedTuple, Optional, Union

import numpy as np
from loguru import logger
from numpy.polynomial import polynomial as npoly
from numpy.typing import ArrayLike
from scipy import signal

from .closed_forms import (
    GeometricClosedForm,
    Log1pClosedForm,
    Log1pQuotientClosedForm,
    format_number,
)
from .evaluator_base import EvaluatorBase, fold_circle_values
from .exceptions import ArmanormNotInvertibleAtOrigin, ArmanormUncertifiedEvaluation

if TYPE_CHECKING:
    from .rational import RationalTransfer

# Default truncation order K
DEFAULT_ORDER = 256
# RNG seed for simulation and search restarts
DEFAULT_SEED = 42

_EPS = float(np.finfo(float).eps)


class SeriesEvaluation(NamedTuple):
    value: complex
    error_bound: float


class L2Estimate(NamedTuple):
    value: float
    # None means no tail certificate is available
    tail_bound: Optional[float]

    @property
    def upper(self) -> Optional[float]:
        if self.tail_bound is None:
            return None
        return self.value + self.tail_bound


def _decay_holds(coeffs: np.ndarray, rate: float, const: float) -> bool:
    """|c_n| ≤ C·rⁿ for every stored n (relative slack for rounding)."""
    magnitudes = np.abs(coeffs)
    if rate == 0:
        return bool(magnitudes[0] <= const * (1 + 1e-9) and not np.any(magnitudes[1:]))
    bound = const * np.exp(np.arange(len(coeffs)) * math.log(rate))
    return bool(np.all(magnitudes <= bound * (1 + 1e-9) + 1e-300))


def fit_decay_constant(coeffs: np.ndarray, rate: float) -> float:
    """Smallest C with |c_n| ≤ C·rⁿ over the stored coefficients."""
    magnitudes = np.abs(coeffs)
    nonzero = magnitudes > 0
    if not np.any(nonzero):
        return 0.0
    n = np.arange(len(coeffs))[nonzero]
    return float(np.exp(np.max(np.log(magnitudes[nonzero]) - n * math.log(rate))))


class PowerSeries(EvaluatorBase):
    """Truncated power series c_0 + c_1 z + ... + c_K z^K over the complex numbers.

    The stored coefficients are exact up to rounding. What is known beyond order K is recorded separately:
    `terminates` says every later coefficient is zero, a `decay_rate` r with constant C certifies
    |c_n| ≤ C·rⁿ for all n, and `closed_form` optionally carries the function the series expands.
    """

    def __init__(
        self,
        coeffs: ArrayLike,
        decay_rate: Optional[float] = None,
        decay_const: float = 1.0,
        terminates: bool = False,
        closed_form: Optional[EvaluatorBase] = None,
        label: str = "x",
    ) -> None:
        values = np.array(coeffs, dtype=complex, ndmin=1)
        if values.ndim != 1 or len(values) == 0:
            raise ValueError("coefficients must be a non-empty sequence")
        if not np.all(np.isfinite(values)):
            raise ValueError("coefficients must be finite")
        values.setflags(write=False)
        self._coeffs = values  # type: np.ndarray

        if decay_rate is not None:
            if not 0 <= decay_rate < 1:
                raise ValueError(f"decay rate must lie in [0, 1): {decay_rate}")
            if decay_const < 0:
                raise ValueError(f"decay constant must be nonnegative: {decay_const}")
            if not _decay_holds(values, decay_rate, decay_const):
                raise ValueError(f"coefficients violate |c_n| <= {decay_const}*{decay_rate}^n")
        self._decay_rate = decay_rate  # type: Optional[float]
        self._decay_const = decay_const  # type: float
        self._terminates = terminates  # type: bool
        self._closed_form = closed_form  # type: Optional[EvaluatorBase]
        self._label = label  # type: str

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def order(self) -> int:
        return len(self._coeffs) - 1

    @property
    def degree(self) -> int:
        """Index of the last nonzero stored coefficient (0 for the zero series)."""
        nonzero = np.flatnonzero(self._coeffs)
        return int(nonzero[-1]) if len(nonzero) else 0

    @property
    def decay_rate(self) -> Optional[float]:
        return self._decay_rate

    @property
    def decay_const(self) -> float:
        return self._decay_const

    @property
    def terminates(self) -> bool:
        return self._terminates

    @property
    def closed_form(self) -> Optional[EvaluatorBase]:
        return self._closed_form

    @property
    def label(self) -> str:
        return self._label

    @property
    def certified(self) -> bool:
        """Whether the stored coefficients alone bound the function on the closed disk."""
        return self._terminates or self._decay_rate is not None

    def evaluate(self, z: ArrayLike) -> np.ndarray:
        """Partial sum Σ_{n≤K} c_n zⁿ by Horner's rule."""
        return np.asarray(npoly.polyval(np.asarray(z, dtype=complex), self._coeffs), dtype=complex)

    def check_circle(self) -> None:
        if not self.certified:
            raise ArmanormUncertifiedEvaluation(f"series {self.label} carries no tail bound on S¹")

    def circle_values(self, m: int) -> np.ndarray:
        return fold_circle_values(self._coeffs, m)

    def circle_tail_bound(self) -> float:
        if self._terminates:
            return 0.0
        if self._decay_rate is None:
            raise ArmanormUncertifiedEvaluation(f"series {self.label} carries no tail bound on S¹")
        r = self._decay_rate
        return self._decay_const * r ** (self.order + 1) / (1 - r)

    def l2_tail_bound(self) -> Optional[float]:
        """Bound on sqrt(Σ_{n>K} |c_n|²), exact when a closed form knows its tail."""
        if self._terminates:
            return 0.0
        l2_tail = getattr(self._closed_form, "l2_tail", None)
        if l2_tail is not None:
            return math.sqrt(l2_tail(self.order))
        if self._decay_rate is not None:
            r = self._decay_rate
            return self._decay_const * r ** (self.order + 1) / math.sqrt(1 - r * r)
        return None

    def wold(self, order: int) -> "PowerSeries":
        """The series seen at order `order`, as ProcessSpec expansions use it."""
        if order == self.order:
            return self
        return truncate(self, order)

    def __repr__(self) -> str:
        return f"PowerSeries({self.label}, K={self.order}, decay={self._decay_rate}, terminates={self._terminates})"


@dataclass(frozen=True)
class ProcessSpec:
    """X_t = x(L)ε_t given by its transfer function, either a power series or a rational function."""

    transfer: Union[PowerSeries, "RationalTransfer"]
    label: str = "X"

    def __post_init__(self) -> None:
        from .rational import RationalTransfer

        if not isinstance(self.transfer, (PowerSeries, RationalTransfer)):
            raise ValueError(f"unsupported transfer representation: {type(self.transfer).__name__}")

    def wold(self, order: int) -> PowerSeries:
        return self.transfer.wold(order)


def _check_order(order: int) -> int:
    if int(order) != order or order < 0:
        raise ValueError(f"order must be a nonnegative integer: {order}")
    return int(order)


def from_coeffs(*coeffs: complex, label: str = "x") -> PowerSeries:
    """A polynomial given literally, all later coefficients zero."""
    return PowerSeries(coeffs, terminates=True, label=label)


def geometric(a: complex, order: int = DEFAULT_ORDER) -> PowerSeries:
    """c_n = aⁿ, the expansion of 1/(1 - az)."""
    order = _check_order(order)
    a = complex(a)
    if abs(a) >= 1:
        raise ValueError(f"no certified decay for |a| = {abs(a)} >= 1")
    coeffs = np.power(a, np.arange(order + 1))
    return PowerSeries(
        coeffs,
        decay_rate=abs(a),
        decay_const=1.0,
        terminates=a == 0,
        closed_form=GeometricClosedForm(a),
        label=f"1/(1-({format_number(a)})z)",
    )


def log1p_scaled(a: complex, order: int = DEFAULT_ORDER) -> PowerSeries:
    """c_0 = 0, c_n = (-1)^{n+1} aⁿ/n, the expansion of log(1 + az)."""
    order = _check_order(order)
    closed_form = Log1pClosedForm(a)  # validates 0 < |a| <= 1
    a = closed_form.a
    n = np.arange(1, order + 1)
    coeffs = np.concatenate(([0j], -np.power(-a, n) / n))
    return PowerSeries(
        coeffs,
        decay_rate=abs(a) if abs(a) < 1 else None,
        decay_const=1.0,
        closed_form=closed_form,
        label=closed_form.label,
    )


def log1p_quotient(a: complex, order: int = DEFAULT_ORDER) -> PowerSeries:
    """c_n = (-a)ⁿ/(n+1), the expansion of log(1 + az)/(az)."""
    order = _check_order(order)
    closed_form = Log1pQuotientClosedForm(a)
    a = closed_form.a
    n = np.arange(order + 1)
    coeffs = np.power(-a, n) / (n + 1)
    return PowerSeries(
        coeffs,
        decay_rate=abs(a) if abs(a) < 1 else None,
        decay_const=1.0,
        closed_form=closed_form,
        label=closed_form.label,
    )


def truncate(s: PowerSeries, order: int) -> PowerSeries:
    """The same function seen through a different order; only terminating series can be extended."""
    order = _check_order(order)
    if order > s.order:
        if not s.terminates:
            raise ValueError(f"cannot extend {s!r} beyond its order {s.order} to {order}")
        coeffs = np.concatenate((s.coeffs, np.zeros(order - s.order, dtype=complex)))
        return PowerSeries(coeffs, terminates=True, closed_form=s.closed_form, label=s.label)

    terminates = s.terminates and s.degree <= order
    decay_rate = s.decay_rate
    if s.terminates and not terminates:
        # the dropped coefficients become an unknown tail
        decay_rate = None
    return PowerSeries(
        s.coeffs[: order + 1],
        decay_rate=decay_rate,
        decay_const=s.decay_const,
        terminates=terminates,
        closed_form=s.closed_form,
        label=s.label,
    )


def _pad(coeffs: np.ndarray, order: int) -> np.ndarray:
    return np.concatenate((coeffs, np.zeros(order + 1 - len(coeffs), dtype=complex)))


def add(s: PowerSeries, t: PowerSeries) -> PowerSeries:
    """Coefficientwise sum at the larger order.

    A non-terminating operand is never padded: its unknown coefficients would be invented as zeros, so the
    result falls back to the smaller order in that case.
    """
    order = max(s.order, t.order)
    if (s.order < order and not s.terminates) or (t.order < order and not t.terminates):
        order = min(s.order, t.order)
    coeffs = _pad(s.coeffs[: order + 1], order) + _pad(t.coeffs[: order + 1], order)

    terminates = s.terminates and t.terminates
    decay_rate = None  # type: Optional[float]
    decay_const = 1.0
    if not terminates and s.certified and t.certified:
        rates = [u.decay_rate for u in (s, t) if u.decay_rate is not None and not u.terminates]
        decay_rate = max(rates)
        if decay_rate > 0:
            decay_const = sum(
                fit_decay_constant(u.coeffs, decay_rate) if u.terminates else u.decay_const for u in (s, t)
            )
        else:
            decay_rate = None
    return PowerSeries(
        coeffs,
        decay_rate=decay_rate,
        decay_const=decay_const,
        terminates=terminates,
        label=f"({s.label} + {t.label})",
    )


def scale(s: PowerSeries, factor: complex) -> PowerSeries:
    factor = complex(factor)
    return PowerSeries(
        s.coeffs * factor,
        decay_rate=s.decay_rate,
        decay_const=s.decay_const * abs(factor),
        terminates=s.terminates,
        label=f"({format_number(factor)})*{s.label}",
    )


def mul(s: PowerSeries, t: PowerSeries) -> PowerSeries:
    """Cauchy product truncated to the smaller order."""
    order = min(s.order, t.order)
    coeffs = np.convolve(s.coeffs[: order + 1], t.coeffs[: order + 1])[: order + 1]

    terminates = s.terminates and t.terminates and s.degree + t.degree <= order
    decay_rate = None  # type: Optional[float]
    decay_const = 1.0
    if not terminates:
        # |Σ_k t_k d_{n-k}| ≤ C rⁿ Σ_k |t_k| r^{-k} when t terminates and d decays
        for finite, decaying in ((s, t), (t, s)):
            if finite.terminates and finite.degree <= order and decaying.decay_rate:
                r = decaying.decay_rate
                k = np.arange(finite.degree + 1)
                weight = float(np.sum(np.abs(finite.coeffs[: finite.degree + 1]) * np.exp(-k * math.log(r))))
                decay_rate = r
                decay_const = decaying.decay_const * weight
                break
    return PowerSeries(
        coeffs,
        decay_rate=decay_rate,
        decay_const=decay_const,
        terminates=terminates,
        label=f"{s.label}*{t.label}",
    )


def reciprocal(s: PowerSeries) -> PowerSeries:
    """1/s through order K; the recursion is the impulse response of the all-pole filter 1/s(z)."""
    if s.coeffs[0] == 0:
        raise ArmanormNotInvertibleAtOrigin(f"{s.label} vanishes at the origin")
    impulse = np.zeros(s.order + 1, dtype=complex)
    impulse[0] = 1
    coeffs = signal.lfilter([1.0], s.coeffs, impulse)
    return PowerSeries(coeffs, label=f"1/{s.label}")


def exp_series(s: PowerSeries) -> PowerSeries:
    """exp(s) through order K via n·u_n = Σ_{k=1}^{n} k·g_k·u_{n-k}, g = s - c_0, scaled by e^{c_0}."""
    order = s.order
    weighted = np.arange(order + 1) * s.coeffs
    u = np.zeros(order + 1, dtype=complex)
    u[0] = 1
    for n in range(1, order + 1):
        u[n] = np.dot(weighted[1 : n + 1], u[n - 1 :: -1]) / n
    logger.trace(f"exp_series: K={order}")
    return PowerSeries(u * np.exp(s.coeffs[0]), label=f"exp({s.label})")


def log_series(s: PowerSeries) -> PowerSeries:
    """log(s) through order K, the recursion of exp_series run backwards (principal log of c_0)."""
    c0 = s.coeffs[0]
    if c0 == 0:
        raise ArmanormNotInvertibleAtOrigin(f"{s.label} vanishes at the origin")
    order = s.order
    v = s.coeffs / c0
    weighted = np.zeros(order + 1, dtype=complex)  # k·L_k
    for n in range(1, order + 1):
        weighted[n] = n * v[n] - np.dot(weighted[1:n], v[n - 1 : 0 : -1])
    coeffs = weighted / np.maximum(np.arange(order + 1), 1)
    coeffs[0] = np.log(c0)
    return PowerSeries(coeffs, label=f"log({s.label})")


def l2_norm(s: PowerSeries) -> L2Estimate:
    """sqrt(Σ_{n≤K} |c_n|²) with the tail bound when one is certified."""
    return L2Estimate(float(np.linalg.norm(s.coeffs)), s.l2_tail_bound())


def l1_norm(s: PowerSeries) -> float:
    """Partial absolute sum Σ_{n≤K} |c_n| (Wiener's summability condition at finite order)."""
    return float(np.sum(np.abs(s.coeffs)))


def root_test(s: PowerSeries, window: int) -> float:
    """max |c_n|^{1/n} over the nonzero coefficients among the last `window`.

    A heuristic estimate of limsup |c_n|^{1/n}, the inverse radius of convergence.
    """
    if window < 1 or window > s.order:
        raise ValueError(f"window must lie in [1, {s.order}]: {window}")
    n = np.arange(s.order - window + 1, s.order + 1)
    magnitudes = np.abs(s.coeffs[n])
    keep = (magnitudes > 0) & (n >= 1)
    if not np.any(keep):
        return 0.0
    return float(np.max(np.exp(np.log(magnitudes[keep]) / n[keep])))


def eval_series(s: PowerSeries, z: complex) -> SeriesEvaluation:
    """Partial sum at z with a sound error bound (tail plus rounding of the summation)."""
    z = complex(z)
    if z == 0:
        return SeriesEvaluation(complex(s.coeffs[0]), 0.0)

    partial = complex(s.evaluate(z))
    rounding = (s.order + 1) * _EPS * float(npoly.polyval(abs(z), np.abs(s.coeffs)))
    if s.terminates:
        return SeriesEvaluation(partial, rounding)
    if s.decay_rate is not None and s.decay_rate * abs(z) < 1:
        q = s.decay_rate * abs(z)
        tail = s.decay_const * q ** (s.order + 1) / (1 - q)
        return SeriesEvaluation(partial, tail + rounding)
    if s.closed_form is not None:
        return SeriesEvaluation(complex(s.closed_form.evaluate(z)), 0.0)
    raise ArmanormUncertifiedEvaluation(f"no tail bound for {s.label} at |z| = {abs(z)}")
