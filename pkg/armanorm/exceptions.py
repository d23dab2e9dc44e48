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

from typing import Any


# Base exception for everything we raise
class ArmanormException(Exception):
    pass


# * Shared by series and rational transfers...
class ArmanormNotInvertibleAtOrigin(ArmanormException):
    pass


class ArmanormUncertifiedEvaluation(ArmanormException):
    pass


# Base Rational exception
class ArmanormRationalException(ArmanormException):
    pass


# * Rational exceptions...
class ArmanormSingularPadeSystem(ArmanormRationalException):
    pass


class ArmanormEmptyReport(ArmanormRationalException):
    pass


class ArmanormPoleHit(ArmanormRationalException):
    pass


class ArmanormPoleOnCircle(ArmanormRationalException):
    pass


# Base Approx exception
class ArmanormApproxException(ArmanormException):
    pass


# * Approx exceptions...
class ArmanormInfeasibleInit(ArmanormApproxException):
    pass


class ArmanormBudgetExhausted(ArmanormApproxException):
    def __init__(self, message: str, best: Any) -> None:
        super().__init__(message)
        # best ApproxResult found before the evaluation budget ran out
        self.best = best


# Base Arma exception
class ArmanormArmaException(ArmanormException):
    pass


# * Arma exceptions...
class ArmanormNonStationaryModel(ArmanormArmaException):
    pass


# Base Operator exception
class ArmanormOperatorException(ArmanormException):
    pass


# * Operator exceptions...
class ArmanormConvergenceFailure(ArmanormOperatorException):
    pass
