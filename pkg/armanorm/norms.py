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
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from scipy import optimize

from .evaluator_base import EvaluatorBase, difference, unit_roots
from .exceptions import ArmanormUncertifiedEvaluation
from .rational import Polynomial
from .series import DEFAULT_ORDER, L2Estimate, PowerSeries, ProcessSpec, l2_norm

DEFAULT_TOL = 1e-4
GRID_START = 4096
GRID_MAX = 2 ** 20
SAFETY_FACTOR = 2.0


@dataclass(frozen=True)
class NormEstimate:
    """Supremum of |f| on S¹ from nested dyadic grids.

    `value` is attained by f (a lower bound for the supremum of the evaluated function), `refinement_gap` is the
    difference between the last two grid maxima and `tail_bound` covers what a truncated series leaves out.
    """

    value: float
    grid_points: int
    refinement_gap: float
    argmax_angle: float
    tail_bound: float = 0.0
    converged: bool = True

    @property
    def upper(self) -> float:
        return self.value + SAFETY_FACTOR * self.refinement_gap + self.tail_bound


class NormControl(NamedTuple):
    holds: bool
    l2: L2Estimate
    linf: NormEstimate


class DiskMinimum(NamedTuple):
    value: float
    location: complex


def grid_maximum(f: EvaluatorBase, m: int) -> Tuple[float, float]:
    """max |f| over the m-th roots of unity and the angle where it is attained."""
    magnitudes = np.abs(f.circle_values(m))
    j = int(np.argmax(magnitudes))
    return float(magnitudes[j]), 2 * math.pi * j / m


def _polish(f: EvaluatorBase, angle: float, width: float) -> Tuple[float, float]:
    def negative_modulus(theta: float) -> float:
        return -float(np.abs(f.evaluate(np.exp(1j * theta))))

    result = optimize.minimize_scalar(
        negative_modulus, bounds=(angle - width, angle + width), method="bounded", options={"xatol": 1e-12}
    )
    return -float(result.fun), float(result.x) % (2 * math.pi)


def supnorm_circle(
    f: EvaluatorBase, tol: float = DEFAULT_TOL, grid_start: int = GRID_START, grid_max: int = GRID_MAX
) -> NormEstimate:
    """sup |f| on S¹: dyadic grids from `grid_start` points, doubled until successive maxima agree.

    Successive maxima must differ by at most tol·max(1, value). The best grid angle is then polished by a bounded
    scalar search inside its grid cell.
    """
    f.check_circle()
    tail = f.circle_tail_bound()

    m = grid_start
    value, angle = grid_maximum(f, m)
    gap = math.inf
    while 2 * m <= grid_max:
        m *= 2
        refined, refined_angle = grid_maximum(f, m)
        # nested grids: the maximum can only grow
        gap = refined - value
        value, angle = refined, refined_angle
        logger.trace(f"supnorm {f.label}: {m} points, max {value:.12g}, gap {gap:.3g}")
        if gap <= tol * max(1.0, value):
            break

    converged = gap <= tol * max(1.0, value)
    if not converged:
        logger.warning(f"supnorm of {f.label} not converged at {m} points (gap {gap:.3g})")
        if math.isinf(gap):
            gap = value

    polished, polished_angle = _polish(f, angle, 2 * math.pi / m)
    if polished > value:
        value, angle = polished, polished_angle
    logger.debug(f"supnorm {f.label} = {value:.10g} at θ = {angle:.6f} ({m} points)")
    return NormEstimate(value, m, gap, angle, tail, converged)


def error_supnorm(x: EvaluatorBase, y: EvaluatorBase, tol: float = DEFAULT_TOL) -> NormEstimate:
    """sup |x - y| on S¹, which bounds ‖X_t - Y_t‖₂ from above."""
    return supnorm_circle(difference(x, y), tol)


def process_l2(spec: ProcessSpec, order: int = DEFAULT_ORDER) -> L2Estimate:
    """‖X_t‖₂ = ℓ² norm of the Wold coefficients through `order`, with the certified tail."""
    return l2_norm(spec.wold(order))


def check_l2_linf(
    spec: ProcessSpec, order: int = DEFAULT_ORDER, tol: float = DEFAULT_TOL, grid_tol: float = DEFAULT_TOL
) -> NormControl:
    """‖X_t‖₂ ≤ ‖X_t‖∞ with the supnorm allowed its refinement gap, tail and a relative slack `tol`."""
    l2 = process_l2(spec, order)
    linf = supnorm_circle(spec.transfer, grid_tol)
    holds = l2.value <= (linf.value + linf.refinement_gap + linf.tail_bound) * (1 + tol)
    if not holds:
        logger.warning(f"norm control violated for {spec.label}: l2 {l2.value} > linf {linf.value}")
    return NormControl(holds, l2, linf)


def min_modulus_disk(f: EvaluatorBase, radius: float = 0.999, radii: int = 256, angles: int = 1024) -> DiskMinimum:
    """min |f| over a polar grid of the disk |z| ≤ radius (center included)."""
    if not 0 < radius <= 1:
        raise ValueError(f"radius must lie in (0, 1]: {radius}")
    rings = radius * np.arange(1, radii + 1) / radii
    points = np.concatenate(([0j], np.outer(rings, unit_roots(angles)).ravel()))
    magnitudes = np.abs(f.evaluate(points))
    j = int(np.argmin(magnitudes))
    return DiskMinimum(float(magnitudes[j]), complex(points[j]))


class TruncationError(NamedTuple):
    terms: int
    # None when neither s nor its closed form is certified on S¹
    sup_error: Optional[NormEstimate]
    l2_error: float
    l2_tail: Optional[float]


def _circle_reference(s: PowerSeries) -> Optional[EvaluatorBase]:
    for candidate in (s.closed_form, s):
        if candidate is None:
            continue
        try:
            candidate.check_circle()
        except ArmanormUncertifiedEvaluation:
            continue
        return candidate
    return None


def truncation_error(s: PowerSeries, terms: int, tol: float = DEFAULT_TOL) -> TruncationError:
    """Errors of keeping the first `terms` coefficients of s.

    The ℓ² error adds the dropped stored coefficients and the certified tail in quadrature, which is exact when the
    tail is a closed-form sum. The sup error is measured against the closed form when one is attached.
    """
    if not 1 <= terms <= s.order + 1:
        raise ValueError(f"terms must lie in [1, {s.order + 1}]: {terms}")
    kept = Polynomial(s.coeffs[:terms], label=f"{s.label}[:{terms}]")
    inner = float(np.linalg.norm(s.coeffs[terms:]))
    tail = s.l2_tail_bound()
    l2_error = math.hypot(inner, tail) if tail is not None else inner

    reference = _circle_reference(s)
    sup_error = None if reference is None else error_supnorm(reference, kept, tol)
    return TruncationError(terms, sup_error, l2_error, tail)


def truncation_convergence(s: PowerSeries, terms: Sequence[int], tol: float = DEFAULT_TOL) -> List[TruncationError]:
    return [truncation_error(s, k, tol) for k in terms]
