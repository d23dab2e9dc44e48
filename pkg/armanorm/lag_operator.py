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
from typing import List, NamedTuple, Sequence, Tuple

import numpy as np
from loguru import logger
from scipy import linalg

from .closed_forms import SingularInnerClosedForm
from .evaluator_base import fold_circle_values
from .exceptions import ArmanormConvergenceFailure, ArmanormUncertifiedEvaluation
from .norms import DEFAULT_TOL, NormEstimate, min_modulus_disk, supnorm_circle
from .rational import RationalTransfer, taylor
from .series import PowerSeries, exp_series, l1_norm, l2_norm, mul, root_test, truncate

# dense singular values up to this dimension, power iteration beyond
DENSE_LIMIT = 1024
MAX_ITERATIONS = 100_000
OP_NORM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class ToeplitzTruncation:
    """f(L) compressed to the span of the n most recent innovations: entry (i, j) = c_{i-j} for i ≥ j."""

    n: int
    generator: PowerSeries
    matrix: np.ndarray


class SpectralRow(NamedTuple):
    n: int
    op_norm: float


class SpectralCheck(NamedTuple):
    rows: Tuple[SpectralRow, ...]
    supnorm: NormEstimate
    monotone: bool
    bounded: bool
    terminal_gap: float


class CirculantRow(NamedTuple):
    n: int
    op_norm: float
    grid_maximum: float
    deviation: float


class HInfReport(NamedTuple):
    order: int
    h0: complex
    disk_minimum: float
    disk_argmin: complex
    l1_growth: Tuple[Tuple[int, float], ...]
    l2_partial: float
    root_test: float
    series_gap: float


def toeplitz(s: PowerSeries, n: int) -> ToeplitzTruncation:
    if n < 1:
        raise ValueError(f"dimension must be positive: {n}")
    series = s if s.order >= n - 1 else truncate(s, n - 1)
    matrix = linalg.toeplitz(series.coeffs[:n], np.zeros(n))
    matrix.setflags(write=False)
    return ToeplitzTruncation(n, s, matrix)


def circulant(s: PowerSeries, n: int) -> np.ndarray:
    """n×n circulant with the coefficients folded modulo n, the compression of f(U) for the bilateral shift U."""
    if n < 1:
        raise ValueError(f"dimension must be positive: {n}")
    folded = np.zeros(n, dtype=complex)
    np.add.at(folded, np.arange(s.order + 1) % n, s.coeffs)
    return linalg.circulant(folded)


def op_norm(
    t: ToeplitzTruncation, tol: float = OP_NORM_TOL, method: str = "auto", max_iterations: int = MAX_ITERATIONS
) -> float:
    """Largest singular value of the truncation.

    "dense" takes the full singular value decomposition, "power" iterates on the Gram product AᴴA from the
    normalized all-ones vector until the estimate changes by at most `tol` relative.
    """
    if method == "auto":
        method = "dense" if t.n <= DENSE_LIMIT else "power"
    if method == "dense":
        return float(linalg.svdvals(t.matrix)[0])
    if method != "power":
        raise ValueError(f"unknown method: {method}")

    a = t.matrix
    v = np.ones(t.n, dtype=complex) / math.sqrt(t.n)
    estimate = 0.0
    for iteration in range(max_iterations):
        w = a.conj().T @ (a @ v)
        size = float(np.linalg.norm(w))
        if size == 0:
            return 0.0
        v = w / size
        refined = float(np.linalg.norm(a @ v))
        if abs(refined - estimate) <= tol * refined:
            logger.trace(f"power iteration converged after {iteration + 1} steps")
            return refined
        estimate = refined
    raise ArmanormConvergenceFailure(f"power iteration did not converge in {max_iterations} steps")


def spectral_lemma_check(f: PowerSeries, ns: Sequence[int], tol: float = DEFAULT_TOL) -> SpectralCheck:
    """‖T_N(f)‖ for growing N against sup |f| on S¹: nondecreasing and bounded by the supnorm."""
    if not f.certified:
        raise ArmanormUncertifiedEvaluation(f"{f.label} has no certified decay, its supnorm is not defined here")
    sup = supnorm_circle(f, tol)
    ceiling = sup.value + sup.refinement_gap + sup.tail_bound + tol
    rows = tuple(SpectralRow(n, op_norm(toeplitz(f, n))) for n in sorted(ns))
    norms = [row.op_norm for row in rows]
    monotone = all(later >= earlier - 1e-12 * max(1.0, earlier) for earlier, later in zip(norms, norms[1:]))
    bounded = all(value <= ceiling for value in norms)
    terminal_gap = sup.value - norms[-1] if norms else math.nan
    logger.debug(f"spectral check {f.label}: norms {norms}, supnorm {sup.value:.8g}")
    return SpectralCheck(rows, sup, monotone, bounded, terminal_gap)


def unitary_lemma_check(f: PowerSeries, ns: Sequence[int]) -> List[CirculantRow]:
    """Circulant norms against max |f| over the N-th roots of unity; normal matrices make them equal."""
    rows = []
    for n in ns:
        norm = float(linalg.svdvals(circulant(f, n))[0])
        grid_max = float(np.max(np.abs(fold_circle_values(f.coeffs, n))))
        rows.append(CirculantRow(n, norm, grid_max, abs(norm - grid_max)))
    return rows


def multiplicativity_gap(f: PowerSeries, g: PowerSeries, n: int) -> float:
    """max |T_N(fg) - T_N(f)·T_N(g)| entrywise; lower-triangular Toeplitz matrices form an algebra."""
    product = toeplitz(mul(f, g), n).matrix
    return float(np.max(np.abs(product - toeplitz(f, n).matrix @ toeplitz(g, n).matrix)))


def singular_inner_series(order: int) -> PowerSeries:
    """h(z) = exp(-(1+z)/(1-z)) expanded through `order`."""
    exponent = taylor(RationalTransfer([-1.0, -1.0], [1.0, -1.0], reduce=False), order)
    h = exp_series(exponent)
    return PowerSeries(h.coeffs, closed_form=SingularInnerClosedForm(), label="h")


def hinf_counterexample_report(order: int = 1024, grid: int = 256, shift: float = 2.0) -> HInfReport:
    """Numerical view of h + shift, bounded and bounded away from zero on the disk yet not invertible in ℓ¹.

    The ℓ¹ growth is reported without a verdict; divergence cannot be shown from finitely many coefficients.
    """
    if order < 64:
        raise ValueError(f"order must be at least 64: {order}")
    h = singular_inner_series(order)
    disk = min_modulus_disk(SingularInnerClosedForm(shift), radius=0.999, radii=grid, angles=4 * grid)
    checkpoints = (order // 4, order // 2, order)
    l1_growth = tuple((k, l1_norm(truncate(h, k))) for k in checkpoints)

    # partial sums against the closed form inside the disk, where both converge fast
    z = 0.5 * np.exp(2j * np.pi * np.arange(grid) / grid)
    series_gap = float(np.max(np.abs(h.evaluate(z) - SingularInnerClosedForm().evaluate(z))))
    report = HInfReport(
        order=order,
        h0=complex(h.coeffs[0]),
        disk_minimum=disk.value,
        disk_argmin=disk.location,
        l1_growth=l1_growth,
        l2_partial=l2_norm(h).value,
        root_test=root_test(h, min(32, order)),
        series_gap=series_gap,
    )
    logger.debug(f"H∞ counterexample: {report}")
    return report
