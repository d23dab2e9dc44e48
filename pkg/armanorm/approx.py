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
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from numpy.polynomial import polynomial as npoly
from scipy import optimize, signal

from .closed_forms import GeometricClosedForm, Log1pClosedForm, Log1pQuotientClosedForm
from .evaluator_base import EvaluatorBase, unit_roots
from .exceptions import (
    ArmanormBudgetExhausted,
    ArmanormException,
    ArmanormInfeasibleInit,
    ArmanormSingularPadeSystem,
)
from .norms import DEFAULT_TOL, NormEstimate, error_supnorm, truncation_error
from .rational import RationalTransfer, pade, taylor
from .series import DEFAULT_ORDER, DEFAULT_SEED, PowerSeries, geometric, log1p_quotient, log1p_scaled

DEFAULT_BUDGET = 2000
DEFAULT_RESTARTS = 8
# denominator roots must keep |root| ≥ 1 + POLE_MARGIN
POLE_MARGIN = 1e-3
PENALTY_WEIGHT = 1e3
SIMPLEX_SCALE = 0.05
OBJECTIVE_GRID = 2048
CONJECTURE_ORDER = 4096


@dataclass(frozen=True)
class ApproxResult:
    candidate: RationalTransfer
    # None when the target has no certified values on S¹
    sup_error: Optional[NormEstimate]
    # coefficient-space error through the expansion order, tails added in quadrature
    l2_error: Optional[float]
    l2_tail: Optional[float]
    iterations: int
    feasible: bool


class CoefficientError(NamedTuple):
    value: float
    target_tail: Optional[float]
    candidate_tail: Optional[float]


class ConjectureRow(NamedTuple):
    budget: int
    kind: str
    m: int
    n: int
    l2_error: Optional[float]
    target_tail: Optional[float]
    candidate_tail: Optional[float]
    iterations: int
    status: str


class _SearchOutcome(NamedTuple):
    x: np.ndarray
    value: float
    iterations: int
    exhausted: bool


class _CandidateSpace:
    """Real parameter vectors [p_0..p_m, q_1..q_n]; q_0 = 1 is fixed."""

    def __init__(self, m: int, n: int, delta: float) -> None:
        if m < 0 or n < 0:
            raise ValueError(f"degrees must be nonnegative: ({m}, {n})")
        if delta < 0:
            raise ValueError(f"pole margin must be nonnegative: {delta}")
        self.m = m  # type: int
        self.n = n  # type: int
        self.delta = delta  # type: float

    def pack(self, r: RationalTransfer) -> np.ndarray:
        num, den = r.num, r.den
        if num.degree > self.m or den.degree > self.n:
            raise ValueError(f"{r!r} does not fit degrees ({self.m}, {self.n})")
        if not (num.is_real and den.is_real):
            raise ValueError("the search space has real coefficients only")
        x = np.zeros(self.m + self.n + 1)
        x[: num.degree + 1] = num.coeffs.real
        x[self.m + 1 : self.m + 1 + den.degree] = den.coeffs[1:].real
        return x

    def split(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return x[: self.m + 1], np.concatenate(([1.0], x[self.m + 1 :]))

    def violation(self, q: np.ndarray) -> float:
        trimmed = npoly.polytrim(q)
        if len(trimmed) < 2:
            return 0.0
        min_modulus = float(np.min(np.abs(npoly.polyroots(trimmed))))
        return max(0.0, 1 + self.delta - min_modulus)

    def feasible(self, r: RationalTransfer) -> bool:
        return r.den.degree < 1 or r.pole_report.min_modulus >= 1 + self.delta

    def candidate(self, x: np.ndarray, label: str) -> RationalTransfer:
        p, q = self.split(x)
        return RationalTransfer(p, q, label=label)


class _CircleError:
    """max |target - p/q| over a fixed grid of roots of unity."""

    def __init__(self, target: EvaluatorBase, grid: int) -> None:
        self.z = unit_roots(grid)
        self.values = target.circle_values(grid)

    def __call__(self, p: np.ndarray, q: np.ndarray) -> float:
        with np.errstate(all="ignore"):
            candidate = npoly.polyval(self.z, p) / npoly.polyval(self.z, q)
        return float(np.max(np.abs(self.values - candidate)))


class _CoefficientError:
    """‖taylor(p/q) - target‖ over the stored target coefficients."""

    def __init__(self, target: PowerSeries) -> None:
        self.coeffs = target.coeffs
        self.impulse = np.zeros(target.order + 1)
        self.impulse[0] = 1

    def __call__(self, p: np.ndarray, q: np.ndarray) -> float:
        with np.errstate(all="ignore"):
            expansion = signal.lfilter(p, q, self.impulse)
        return float(np.linalg.norm(expansion - self.coeffs))


def _penalized(
    error: Callable[[np.ndarray, np.ndarray], float], space: _CandidateSpace, init_value: float
) -> Callable[[np.ndarray], float]:
    weight = PENALTY_WEIGHT * max(init_value, 1e-12)

    def objective(x: np.ndarray) -> float:
        p, q = space.split(x)
        violation = space.violation(q)
        if violation > space.delta:
            # a pole on or inside S¹: the error itself is meaningless there
            return init_value + weight * violation
        value = error(p, q)
        if not math.isfinite(value):
            return init_value + weight * max(violation, space.delta)
        return value + weight * violation

    return objective


def _nelder_mead(
    objective: Callable[[np.ndarray], float], x0: np.ndarray, budget: int, restarts: int, seed: int
) -> _SearchOutcome:
    dim = len(x0)
    best = None  # type: Optional[_SearchOutcome]
    for k in range(restarts):
        rng = np.random.default_rng([seed, k])
        start = x0 if k == 0 else x0 + rng.normal(scale=SIMPLEX_SCALE, size=dim)
        simplex = np.vstack((start, start + SIMPLEX_SCALE * np.eye(dim)))
        result = optimize.minimize(
            objective,
            start,
            method="Nelder-Mead",
            options={"maxfev": budget, "maxiter": budget, "initial_simplex": simplex, "xatol": 1e-10, "fatol": 1e-12},
        )
        exhausted = result.status != 0
        logger.trace(f"restart {k}: objective {result.fun:.10g} after {result.nfev} evaluations ({result.message})")
        # strict comparison keeps the lowest restart index on ties
        if best is None or result.fun < best.value:
            best = _SearchOutcome(np.array(result.x), float(result.fun), int(result.nit), exhausted)
    assert best is not None
    return best


def _check_search(budget: int, restarts: int) -> None:
    if budget < 1:
        raise ValueError(f"evaluation budget must be positive: {budget}")
    if restarts < 1:
        raise ValueError(f"restarts must be positive: {restarts}")


def expand_target(target: EvaluatorBase, order: int) -> Optional[PowerSeries]:
    """Taylor coefficients of a target through `order`, or None when it has no expansion here."""
    if isinstance(target, PowerSeries):
        return target
    if isinstance(target, RationalTransfer):
        return taylor(target, order) if target.pole_report.all_outside else None
    if isinstance(target, Log1pClosedForm):
        return log1p_scaled(target.a, order)
    if isinstance(target, Log1pQuotientClosedForm):
        return log1p_quotient(target.a, order)
    if isinstance(target, GeometricClosedForm):
        return geometric(target.a, order)
    return None


def coefficient_l2_error(target: PowerSeries, candidate: RationalTransfer) -> CoefficientError:
    """Wold-coefficient distance through the target's order; both tails are added in quadrature when certified."""
    expansion = taylor(candidate, target.order)
    inner = float(np.linalg.norm(expansion.coeffs - target.coeffs))
    target_tail = target.l2_tail_bound()
    candidate_tail = expansion.l2_tail_bound()
    if target_tail is None or candidate_tail is None:
        return CoefficientError(inner, target_tail, candidate_tail)
    return CoefficientError(math.hypot(inner, target_tail + candidate_tail), target_tail, candidate_tail)


def _result(
    candidate: RationalTransfer,
    sup_error: Optional[NormEstimate],
    target_series: Optional[PowerSeries],
    iterations: int,
    space: _CandidateSpace,
) -> ApproxResult:
    l2_error = l2_tail = None  # type: Optional[float]
    if target_series is not None:
        error = coefficient_l2_error(target_series, candidate)
        l2_error = error.value
        if error.target_tail is not None and error.candidate_tail is not None:
            l2_tail = error.target_tail + error.candidate_tail
    return ApproxResult(candidate, sup_error, l2_error, l2_tail, iterations, space.feasible(candidate))


def _report_budget(result: ApproxResult, outcome: _SearchOutcome, strict: bool) -> ApproxResult:
    if outcome.exhausted:
        logger.warning(f"evaluation budget used up before the search converged ({outcome.iterations} iterations)")
        if strict:
            raise ArmanormBudgetExhausted("evaluation budget exhausted", best=result)
    return result


def optimize_supnorm(
    target: EvaluatorBase,
    m: int,
    n: int,
    init: RationalTransfer,
    budget: int = DEFAULT_BUDGET,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = DEFAULT_SEED,
    order: int = DEFAULT_ORDER,
    tol: float = DEFAULT_TOL,
    delta: float = POLE_MARGIN,
    strict: bool = False,
) -> ApproxResult:
    """Best (m, n) rational approximation of `target` in the sup norm on S¹, found by Nelder–Mead.

    The search runs on a fixed grid with a penalty keeping every pole at modulus ≥ 1 + delta; the winner is
    re-measured with supnorm_circle and only replaces `init` when it is strictly better.
    """
    _check_search(budget, restarts)
    target.check_circle()
    space = _CandidateSpace(m, n, delta)
    x0 = space.pack(init)
    if not space.feasible(init):
        raise ArmanormInfeasibleInit(f"initial candidate {init!r} has a pole within {delta} of S¹")

    target_series = expand_target(target, order)
    init_sup = error_supnorm(target, init, tol)
    if init_sup.value == 0:
        logger.debug("initial candidate reproduces the target")
        return _result(init, init_sup, target_series, 0, space)

    error = _CircleError(target, OBJECTIVE_GRID)
    init_value = error(*space.split(x0))
    outcome = _nelder_mead(_penalized(error, space, init_value), x0, budget, restarts, seed)
    logger.debug(f"sup search ({m}, {n}): grid objective {init_value:.6g} -> {outcome.value:.6g}")

    candidate = space.candidate(outcome.x, label=f"sup{m}{n}({target.label})")
    sup_error = error_supnorm(target, candidate, tol) if space.feasible(candidate) else None
    if sup_error is None or sup_error.value >= init_sup.value:
        logger.info(f"no feasible improvement over the initial candidate for ({m}, {n})")
        return _report_budget(_result(init, init_sup, target_series, 0, space), outcome, strict)
    return _report_budget(_result(candidate, sup_error, target_series, outcome.iterations, space), outcome, strict)


def optimize_l2(
    target: PowerSeries,
    m: int,
    n: int,
    init: RationalTransfer,
    budget: int = DEFAULT_BUDGET,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = DEFAULT_SEED,
    delta: float = POLE_MARGIN,
    strict: bool = False,
) -> ApproxResult:
    """Like optimize_supnorm, minimizing the Wold-coefficient ℓ² error instead; never touches S¹."""
    _check_search(budget, restarts)
    space = _CandidateSpace(m, n, delta)
    x0 = space.pack(init)
    if not space.feasible(init):
        raise ArmanormInfeasibleInit(f"initial candidate {init!r} has a pole within {delta} of S¹")

    error = _CoefficientError(target)
    init_value = error(*space.split(x0))
    if init_value == 0:
        return _result(init, None, target, 0, space)

    outcome = _nelder_mead(_penalized(error, space, init_value), x0, budget, restarts, seed)
    logger.debug(f"l2 search ({m}, {n}): objective {init_value:.6g} -> {outcome.value:.6g}")
    candidate = space.candidate(outcome.x, label=f"l2{m}{n}({target.label})")
    if not space.feasible(candidate) or error(*space.split(space.pack(candidate))) >= init_value:
        return _report_budget(_result(init, None, target, 0, space), outcome, strict)
    return _report_budget(_result(candidate, None, target, outcome.iterations, space), outcome, strict)


def truncation_baseline(s: PowerSeries, degree: int, tol: float = DEFAULT_TOL) -> ApproxResult:
    """The degree-`degree` Maclaurin polynomial of s over 1, with its sup and ℓ² errors against s."""
    errors = truncation_error(s, degree + 1, tol)
    candidate = RationalTransfer(s.coeffs[: degree + 1], label=f"trunc{degree}({s.label})")
    return ApproxResult(candidate, errors.sup_error, errors.l2_error, errors.l2_tail, 0, True)


def initial_candidate(target: PowerSeries, m: int, n: int, delta: float = POLE_MARGIN) -> RationalTransfer:
    """Padé (m, n) when it exists with every pole outside the margin, else the degree-m truncation."""
    try:
        init = pade(target, m, n)
        if init.den.degree < 1 or init.pole_report.min_modulus >= 1 + delta:
            return init
        logger.debug(f"Padé ({m}, {n}) has a pole within the margin, starting from the truncation")
    except ArmanormSingularPadeSystem as e:
        logger.debug(f"Padé ({m}, {n}) unavailable: {e}")
    return RationalTransfer(target.coeffs[: m + 1], label=f"trunc{m}({target.label})")


def conjecture_explorer(
    budgets: Sequence[int],
    restarts: int = DEFAULT_RESTARTS,
    order: int = CONJECTURE_ORDER,
    evaluations: int = DEFAULT_BUDGET,
    seed: int = DEFAULT_SEED,
    delta: float = POLE_MARGIN,
) -> List[ConjectureRow]:
    """Truncation vs the best ARMA(m, n) candidates with m + n = budget for x(z) = log(1 + z), in ℓ².

    Candidates start from Padé where it is feasible and are searched in Wold-coefficient space, since the
    partial sums of log(1 + z) have no certified values on S¹. Failed cells are recorded, not raised.
    """
    for budget in budgets:
        if not 1 <= budget <= order:
            raise ValueError(f"budget must lie in [1, {order}]: {budget}")
    target = log1p_scaled(1, order)
    target_tail = target.l2_tail_bound()

    rows = []  # type: List[ConjectureRow]
    for budget in budgets:
        baseline = truncation_baseline(target, budget)
        rows.append(ConjectureRow(budget, "truncation", budget, 0, baseline.l2_error, target_tail, 0.0, 0, "ok"))
        for m in range(budget, -1, -1):
            n = budget - m
            try:
                init = initial_candidate(target, m, n, delta)
                result = optimize_l2(target, m, n, init, evaluations, restarts, seed, delta)
                error = coefficient_l2_error(target, result.candidate)
            except (ArmanormException, ValueError) as e:
                logger.warning(f"conjecture cell budget {budget} ({m}, {n}) failed: {e}")
                rows.append(ConjectureRow(budget, "arma", m, n, None, target_tail, None, 0, f"failed: {e}"))
                continue
            logger.debug(f"budget {budget} ({m}, {n}): l2 {error.value:.6g}")
            rows.append(
                ConjectureRow(
                    budget, "arma", m, n, error.value, error.target_tail, error.candidate_tail, result.iterations, "ok"
                )
            )
    return rows
