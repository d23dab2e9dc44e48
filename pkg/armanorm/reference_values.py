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
from typing import Dict, Optional

NEAR = "near"
AT_LEAST = "at_least"
AT_MOST = "at_most"


@dataclass(frozen=True)
class Reference:
    expected: float
    tolerance: float = 0.0
    relation: str = NEAR

    def check(self, value: Optional[float]) -> bool:
        if value is None or math.isnan(value):
            return False
        if self.relation == NEAR:
            return abs(value - self.expected) <= self.tolerance
        if self.relation == AT_LEAST:
            return value >= self.expected - self.tolerance
        if self.relation == AT_MOST:
            return value <= self.expected + self.tolerance
        raise ValueError(f"unknown relation: {self.relation}")

    def describe(self) -> str:
        symbol = {NEAR: "±", AT_LEAST: "≥", AT_MOST: "≤"}[self.relation]
        if self.relation == NEAR:
            return f"{self.expected:g} {symbol} {self.tolerance:g}"
        if self.tolerance:
            return f"{symbol} {self.expected:g} ({self.tolerance:g} slack)"
        return f"{symbol} {self.expected:g}"


REFERENCES = {
    # log(1+z/2): sup on S¹ is |log(1/2)|, attained at z = -1
    "log_half_linf": Reference(math.log(2), 1e-3, AT_LEAST),
    # Σ 4^{-k}/k² ≤ 1/3
    "log_half_l2": Reference(math.sqrt(1 / 3), 0.0, AT_MOST),
    "log_half_norm_gap": Reference(0.0, 0.0, AT_LEAST),
    # 1 - 2L has its root at 1/2, 1 - L/2 at 2
    "one_minus_2l_invertible": Reference(0.0),
    "one_minus_half_l_invertible": Reference(1.0),
    # 1/(1 - z/2) = 1 + z/2 + z²/4 + z³/8 + ...
    "inverse_expansion_error": Reference(0.0, 1e-12, AT_MOST),
    # k-term truncation of 1/(1 - z/2) has sup error 2^{1-k}, relative deviation
    "geometric_truncation_error": Reference(0.0, 1e-9, AT_MOST),
    # Padé (1, 1) of the geometric series is the series itself
    "geometric_pade_error": Reference(0.0, 1e-12, AT_MOST),
    # Padé (1, 1) of log(1+z/2) is (z/2)/(1 + z/4)
    "pade_coefficient_error": Reference(0.0, 1e-12, AT_MOST),
    # error peaks of the two candidates on S¹
    "figure1_pade_peak": Reference(0.025, 0.002),
    "figure1_nonpade_peak": Reference(0.020, 0.002),
    # supnorm optimization improves on Padé (1, 1)
    "optimized_sup_error": Reference(0.021, 0.0, AT_MOST),
    "pade_improvement": Reference(0.003, 0.0, AT_LEAST),
    "optimized_feasible": Reference(1.0),
    "optimized_not_worse": Reference(0.0, 0.0, AT_LEAST),
    # truncation of log(1+z) at degree 8 in ℓ²: sqrt(Σ_{n>8} 1/n²)
    "conjecture_truncation_8": Reference(0.3429, 1.5e-4),
    "conjecture_table_complete": Reference(1.0),
    # Toeplitz norms of 1 + z/2 approach 1.5
    "spectral_monotone": Reference(1.0),
    "spectral_bounded": Reference(1.0),
    "spectral_terminal_gap": Reference(0.015, 0.0, AT_MOST),
    "spectral_relative_gap": Reference(0.01, 0.0, AT_MOST),
    "spectral_pade_relative_gap": Reference(0.02, 0.0, AT_MOST),
    "circulant_deviation": Reference(0.0, 1e-10, AT_MOST),
    # h(z) = exp(-(1+z)/(1-z)): h(0) = 1/e, |h| ≤ 1 on the disk
    "hinf_h0": Reference(math.exp(-1), 1e-9),
    "hinf_disk_minimum": Reference(1.0, 0.0, AT_LEAST),
    "hinf_l2_partial": Reference(1.0, 0.0, AT_MOST),
}  # type: Dict[str, Reference]
