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
from functools import cached_property
from typing import List, NamedTuple, Tuple, Union

import numpy as np
from loguru import logger
from numpy.polynomial import polynomial as npoly
from numpy.typing import ArrayLike
from scipy import linalg, signal

from .evaluator_base import EvaluatorBase, fold_circle_values
from .exceptions import (
    ArmanormEmptyReport,
    ArmanormNotInvertibleAtOrigin,
    ArmanormPoleHit,
    ArmanormPoleOnCircle,
    ArmanormSingularPadeSystem,
)
from .series import PowerSeries, fit_decay_constant

# |modulus - 1| at or below this counts as a root on the unit circle
DEFAULT_ROOT_TOL = 1e-8
# p and q roots closer than this are cancelled as a common factor
COMMON_ROOT_TOL = 1e-9
# |q(z)| below this is a pole hit
POLE_HIT_TOL = 1e-14
PADE_CONDITION_LIMIT = 1e12
# taylor(pade(s, m, n), m + n) must agree with s this closely, relative to max(1, |c|)
PADE_MATCH_TOL = 1e-8
NEWTON_STEPS = 3

INSIDE = "inside"
ON_CIRCLE = "on_circle"
OUTSIDE = "outside"


class Polynomial(EvaluatorBase):
    """c_0 + c_1 z + ... + c_d z^d with trailing zeros trimmed (the zero polynomial keeps one coefficient)."""

    def __init__(self, coeffs: ArrayLike, label: str = "p") -> None:
        values = np.array(coeffs, dtype=complex, ndmin=1)
        if values.ndim != 1 or len(values) == 0:
            raise ValueError("coefficients must be a non-empty sequence")
        if not np.all(np.isfinite(values)):
            raise ValueError("coefficients must be finite")
        values = npoly.polytrim(values, tol=0)
        values.setflags(write=False)
        self._coeffs = values  # type: np.ndarray
        self._label = label  # type: str

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def degree(self) -> int:
        return len(self._coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return self.degree == 0 and self._coeffs[0] == 0

    @property
    def is_real(self) -> bool:
        return not np.any(self._coeffs.imag)

    @property
    def label(self) -> str:
        return self._label

    def evaluate(self, z: ArrayLike) -> np.ndarray:
        return np.asarray(npoly.polyval(np.asarray(z, dtype=complex), self._coeffs), dtype=complex)

    def check_circle(self) -> None:
        pass

    def circle_values(self, m: int) -> np.ndarray:
        return fold_circle_values(self._coeffs, m)

    def scaled(self, factor: complex) -> "Polynomial":
        return Polynomial(self._coeffs * factor, label=self._label)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return bool(np.array_equal(self._coeffs, other._coeffs))

    def __hash__(self) -> int:
        return hash(self._coeffs.tobytes())

    def __repr__(self) -> str:
        return f"Polynomial({self._coeffs.tolist()})"


class RootInfo(NamedTuple):
    location: complex
    modulus: float
    location_class: str


@dataclass(frozen=True)
class RootReport:
    roots: Tuple[RootInfo, ...]
    tolerance: float

    @property
    def all_outside(self) -> bool:
        return all(root.location_class == OUTSIDE for root in self.roots)

    @property
    def any_on_circle(self) -> bool:
        return any(root.location_class == ON_CIRCLE for root in self.roots)

    @property
    def min_modulus(self) -> float:
        return min((root.modulus for root in self.roots), default=math.inf)

    @property
    def locations(self) -> np.ndarray:
        return np.array([root.location for root in self.roots], dtype=complex)


class Verdict(NamedTuple):
    holds: bool
    report: RootReport


def _classify(modulus: float, tol: float) -> str:
    if abs(modulus - 1) <= tol:
        return ON_CIRCLE
    return INSIDE if modulus < 1 else OUTSIDE


def _newton_polish(coeffs: np.ndarray, located: np.ndarray) -> np.ndarray:
    derivative = npoly.polyder(coeffs)
    polished = located.astype(complex)
    for i, root in enumerate(polished):
        residual = abs(npoly.polyval(root, coeffs))
        for _ in range(NEWTON_STEPS):
            slope = npoly.polyval(root, derivative)
            if slope == 0:
                break
            candidate = root - npoly.polyval(root, coeffs) / slope
            candidate_residual = abs(npoly.polyval(candidate, coeffs))
            if candidate_residual > residual:
                # multiple or clustered roots: keep the eigenvalue estimate
                break
            root, residual = candidate, candidate_residual
        polished[i] = root
    return polished


def roots(p: Polynomial, tol: float = DEFAULT_ROOT_TOL) -> RootReport:
    """All roots of p with multiplicity: balanced companion eigenvalues, Newton-polished, classified vs S¹."""
    if p.degree < 1:
        raise ArmanormEmptyReport(f"{p!r} has no roots")
    companion = npoly.polycompanion(p.coeffs)
    balanced, _ = linalg.matrix_balance(companion)
    located = linalg.eigvals(balanced)
    polished = _newton_polish(p.coeffs, located)
    logger.trace(f"roots of degree {p.degree}: {polished}")
    infos = tuple(RootInfo(complex(r), float(abs(r)), _classify(float(abs(r)), tol)) for r in polished)
    return RootReport(roots=infos, tolerance=tol)


def from_roots(locations: ArrayLike, leading: complex = 1.0) -> Polynomial:
    """leading·∏(z - r), the reconstruction side of `roots`."""
    return Polynomial(npoly.polyfromroots(np.asarray(locations, dtype=complex)) * leading)


def _as_polynomial(value: Union[Polynomial, ArrayLike], label: str) -> Polynomial:
    if isinstance(value, Polynomial):
        return value
    return Polynomial(value, label=label)


def _cancel_common_roots(num: Polynomial, den: Polynomial) -> Tuple[Polynomial, Polynomial]:
    if num.is_zero:
        return num, Polynomial([1.0], label=den.label)
    if num.degree < 1 or den.degree < 1:
        return num, den

    remaining = list(roots(den).locations)
    common = []  # type: List[complex]
    for root in roots(num).locations:
        distances = [abs(root - other) for other in remaining]
        if distances and min(distances) <= COMMON_ROOT_TOL:
            common.append(root)
            remaining.pop(int(np.argmin(distances)))

    real = num.is_real and den.is_real
    if real:
        # a non-real root only goes together with its conjugate
        common = [
            root
            for root in common
            if abs(root.imag) <= COMMON_ROOT_TOL
            or any(abs(root.conjugate() - other) <= COMMON_ROOT_TOL for other in common)
        ]
    if not common:
        return num, den

    logger.debug(f"cancelling {len(common)} common root(s): {common}")
    p, q = num.coeffs, den.coeffs
    for root in common:
        p, _ = npoly.polydiv(p, np.array([-root, 1.0]))
        q, _ = npoly.polydiv(q, np.array([-root, 1.0]))
    if real:
        residue = max(float(np.max(np.abs(p.imag))), float(np.max(np.abs(q.imag))))
        scale = max(float(np.max(np.abs(p))), float(np.max(np.abs(q))))
        if residue > COMMON_ROOT_TOL * scale:
            logger.debug(f"keeping common roots: quotient has imaginary residue {residue:.3g}")
            return num, den
        p, q = p.real, q.real
    return Polynomial(p, label=num.label), Polynomial(q, label=den.label)


class RationalTransfer(EvaluatorBase):
    """x(z) = p(z)/q(z) with q(0) = 1 and, unless `reduce` is off, no common root of p and q."""

    def __init__(
        self,
        num: Union[Polynomial, ArrayLike],
        den: Union[Polynomial, ArrayLike] = (1.0,),
        reduce: bool = True,
        label: str = "x",
    ) -> None:
        p = _as_polynomial(num, "p")
        q = _as_polynomial(den, "q")
        if q.coeffs[0] == 0:
            raise ValueError(f"denominator must not vanish at the origin: {q!r}")
        if reduce:
            p, q = _cancel_common_roots(p, q)
        q0 = q.coeffs[0]
        if q0 != 1:
            p, q = p.scaled(1 / q0), q.scaled(1 / q0)
        self._num = p  # type: Polynomial
        self._den = q  # type: Polynomial
        self._label = label  # type: str

    @property
    def num(self) -> Polynomial:
        return self._num

    @property
    def den(self) -> Polynomial:
        return self._den

    @property
    def label(self) -> str:
        return self._label

    @cached_property
    def pole_report(self) -> RootReport:
        if self._den.degree < 1:
            return RootReport(roots=(), tolerance=DEFAULT_ROOT_TOL)
        return roots(self._den)

    @cached_property
    def zero_report(self) -> RootReport:
        if self._num.degree < 1:
            return RootReport(roots=(), tolerance=DEFAULT_ROOT_TOL)
        return roots(self._num)

    def evaluate(self, z: ArrayLike) -> np.ndarray:
        q = self._den.evaluate(z)
        if np.any(np.abs(q) < POLE_HIT_TOL):
            raise ArmanormPoleHit(f"{self.label} evaluated at a pole")
        return self._num.evaluate(z) / q

    def check_circle(self) -> None:
        if self.pole_report.any_on_circle:
            raise ArmanormPoleOnCircle(f"{self.label} has a pole on S¹")

    def circle_values(self, m: int) -> np.ndarray:
        q = self._den.circle_values(m)
        if np.any(np.abs(q) < POLE_HIT_TOL):
            raise ArmanormPoleHit(f"{self.label} has a pole on the {m}-point grid")
        return self._num.circle_values(m) / q

    def wold(self, order: int) -> PowerSeries:
        return taylor(self, order)

    def __repr__(self) -> str:
        return f"RationalTransfer(num={self._num.coeffs.tolist()}, den={self._den.coeffs.tolist()})"


def pade(s: PowerSeries, m: int, n: int) -> RationalTransfer:
    """The (m, n) Padé approximant: numerator degree m, denominator degree n, matching s through order m+n.

    The denominator solves the n×n Toeplitz system of Taylor coefficients, the numerator follows by
    convolution. Ill-conditioned systems are reported, not reduced automatically.
    """
    if m < 0 or n < 0:
        raise ValueError(f"Padé orders must be nonnegative: ({m}, {n})")
    if s.order < m + n:
        raise ValueError(f"series of order {s.order} is too short for Padé ({m}, {n})")

    c = s.coeffs
    q = np.ones(1, dtype=complex)
    if n > 0:
        column = c[m : m + n]
        row = np.array([c[m - j] if m - j >= 0 else 0 for j in range(n)], dtype=complex)
        system = linalg.toeplitz(column, row)
        singular_values = linalg.svdvals(system)
        condition = math.inf if singular_values[-1] == 0 else singular_values[0] / singular_values[-1]
        logger.trace(f"Padé ({m}, {n}) denominator condition number {condition:.3g}")
        if not condition <= PADE_CONDITION_LIMIT:
            raise ArmanormSingularPadeSystem(f"Padé ({m}, {n}) denominator system has condition {condition:.3g}")
        q = np.concatenate(([1.0], linalg.solve(system, -c[m + 1 : m + n + 1])))
    p = np.convolve(c[: m + 1], q)[: m + 1]
    label = f"pade{m}{n}({s.label})"
    reduced = RationalTransfer(p, q, label=label)
    if _matches_through(reduced, c, m + n):
        return reduced
    # near-common roots within COMMON_ROOT_TOL that still carry Taylor mass stay in
    logger.debug(f"Padé ({m}, {n}): reduced form misses the series, keeping the unreduced pair")
    unreduced = RationalTransfer(p, q, reduce=False, label=label)
    if _matches_through(unreduced, c, m + n):
        return unreduced
    raise ArmanormSingularPadeSystem(f"Padé ({m}, {n}) does not reproduce the series through order {m + n}")


def _matches_through(r: RationalTransfer, c: np.ndarray, order: int) -> bool:
    target = c[: order + 1]
    expansion = signal.lfilter(r.num.coeffs, r.den.coeffs, np.eye(1, order + 1, dtype=complex)[0])
    scale = max(1.0, float(np.max(np.abs(target))))
    return bool(np.max(np.abs(expansion - target)) <= PADE_MATCH_TOL * scale)


def taylor(r: RationalTransfer, order: int) -> PowerSeries:
    """Wold coefficients of p/q by long division, i.e. the impulse response of the filter p(L)/q(L)."""
    if order < 0:
        raise ValueError(f"order must be nonnegative: {order}")
    impulse = np.zeros(order + 1, dtype=complex)
    impulse[0] = 1
    coeffs = signal.lfilter(r.num.coeffs, r.den.coeffs, impulse)

    if r.den.degree == 0:
        terminates = r.num.degree <= order
        return PowerSeries(coeffs, terminates=terminates, label=r.label)

    poles = r.pole_report
    if not poles.all_outside:
        return PowerSeries(coeffs, label=r.label)
    # halfway between the pole rate 1/|pole| and 1
    rate = (1 / poles.min_modulus + 1) / 2
    const = max(fit_decay_constant(coeffs, rate), _cauchy_constant(r, poles, rate))
    return PowerSeries(coeffs, decay_rate=rate, decay_const=const, label=r.label)


def _cauchy_constant(r: RationalTransfer, poles: RootReport, rate: float) -> float:
    """Bound on max |p/q| over |z| = R = 1/rate, so that |c_n| <= bound * rate^n for every n.

    |p| <= Σ|p_k| R^k and |q| >= |q_N| ∏(|pole| - R) on that circle.
    """
    radius = 1 / rate
    num_bound = float(np.sum(np.abs(r.num.coeffs) * radius ** np.arange(len(r.num.coeffs))))
    gaps = np.array([root.modulus - radius for root in poles.roots])
    den_bound = float(abs(r.den.coeffs[-1]) * np.prod(gaps))
    # pole locations carry eigenvalue error; widen by the root tolerance
    return num_bound / den_bound * (1 + DEFAULT_ROOT_TOL)


def is_stationary(r: RationalTransfer) -> Verdict:
    """Every root of q strictly outside the closed unit disk; on_circle roots fail."""
    report = r.pole_report
    return Verdict(report.all_outside, report)


def is_invertible(r: RationalTransfer) -> Verdict:
    """Every root of p strictly outside the closed unit disk; p ≡ 0 is never invertible."""
    report = r.zero_report
    return Verdict(report.all_outside and not r.num.is_zero, report)


def formal_inverse(r: RationalTransfer) -> RationalTransfer:
    """q/p renormalized so the new denominator starts with 1."""
    if r.num.coeffs[0] == 0:
        raise ArmanormNotInvertibleAtOrigin(f"{r.label} vanishes at the origin")
    return RationalTransfer(r.den, r.num, reduce=False, label=f"1/{r.label}")


def eval_rational(r: RationalTransfer, z: complex) -> complex:
    return complex(r.evaluate(complex(z)))
