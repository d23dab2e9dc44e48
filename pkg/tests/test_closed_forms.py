# type: ignore
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
import unittest

import numpy as np
import pytest

from armanorm.closed_forms import (
    GeometricClosedForm,
    Log1pClosedForm,
    Log1pQuotientClosedForm,
    SingularInnerClosedForm,
    format_number,
)
from armanorm.evaluator_base import Combination, difference, fold_circle_values, unit_roots
from armanorm.exceptions import ArmanormUncertifiedEvaluation
from armanorm.rational import Polynomial
from armanorm.series import log1p_quotient, log1p_scaled


def test_format_number() -> None:
    assert format_number(0.5) == "0.5"
    assert format_number(-2) == "-2"
    assert format_number(1 + 2j) == "1+2j"


def test_fold_circle_values() -> None:
    coeffs = np.array([1, -2, 0.5, 3j, 0.25, 1])
    for m in (1, 2, 4, 16):
        np.testing.assert_allclose(fold_circle_values(coeffs, m), np.polyval(coeffs[::-1], unit_roots(m)), atol=1e-13)


class TestClosedForms(unittest.TestCase):
    def test_log1p(self) -> None:
        f = Log1pClosedForm(0.5)
        assert complex(f.evaluate(-1)) == pytest.approx(math.log(0.5))
        assert f.label == "log(1+(0.5)z)"
        f.check_circle()
        with self.assertRaises(ArmanormUncertifiedEvaluation):
            Log1pClosedForm(1).check_circle()
        with self.assertRaises(ValueError):
            Log1pClosedForm(0)
        with self.assertRaises(ValueError):
            Log1pClosedForm(2)

    def test_log1p_tails(self) -> None:
        s = log1p_scaled(0.5, 400)
        assert Log1pClosedForm(0.5).l2_tail(8) == pytest.approx(float(np.sum(np.abs(s.coeffs[9:]) ** 2)), rel=1e-12)
        q = log1p_quotient(0.5, 400)
        assert Log1pQuotientClosedForm(0.5).l2_tail(8) == pytest.approx(float(np.sum(np.abs(q.coeffs[9:]) ** 2)))
        assert Log1pQuotientClosedForm(1).l2_tail(0) == pytest.approx(math.pi ** 2 / 6 - 1)

    def test_quotient_at_origin(self) -> None:
        f = Log1pQuotientClosedForm(0.5)
        np.testing.assert_allclose(f.evaluate([0, -1]), [1, -2 * math.log(0.5)])

    def test_geometric(self) -> None:
        f = GeometricClosedForm(0.5)
        assert complex(f.evaluate(1)) == pytest.approx(2)
        assert f.l2_tail(0) == pytest.approx(1 / 3)
        with self.assertRaises(ValueError):
            GeometricClosedForm(1)

    def test_singular_inner(self) -> None:
        h = SingularInnerClosedForm(2)
        assert complex(h.evaluate(0)) == pytest.approx(math.exp(-1) + 2)
        # radial limit at the singularity
        assert complex(h.evaluate(1)) == 2
        # |h| = 1 on the rest of the circle
        assert abs(complex(SingularInnerClosedForm().evaluate(-1))) == pytest.approx(1)
        with self.assertRaises(ArmanormUncertifiedEvaluation):
            h.check_circle()


class TestCombination(unittest.TestCase):
    def test_operations(self) -> None:
        p, q = Polynomial([1, 1]), Polynomial([2], label="c")
        z = unit_roots(8)
        np.testing.assert_allclose(difference(p, q).evaluate(z), z - 1)
        np.testing.assert_allclose(Combination("add", p, q).circle_values(8), z + 3, atol=1e-13)
        np.testing.assert_allclose(Combination("mul", p, q).circle_values(8), 2 * z + 2, atol=1e-13)
        assert difference(p, q).label == "(p - c)"

    def test_unknown_operation(self) -> None:
        with self.assertRaises(ValueError):
            Combination("div", Polynomial([1]), Polynomial([1]))

    def test_tail_of_a_difference(self) -> None:
        s = log1p_scaled(0.5, 16)
        combined = difference(s, Polynomial([0, 0.5]))
        assert combined.circle_tail_bound() == s.circle_tail_bound()
        combined.check_circle()
