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

from armanorm.exceptions import ArmanormUncertifiedEvaluation
from armanorm.lag_operator import (
    circulant,
    hinf_counterexample_report,
    multiplicativity_gap,
    op_norm,
    singular_inner_series,
    spectral_lemma_check,
    toeplitz,
    unitary_lemma_check,
)
from armanorm.rational import RationalTransfer, from_roots, pade, taylor
from armanorm.series import PowerSeries, from_coeffs, geometric, log1p_scaled, truncate


def taylor_of_pade() -> PowerSeries:
    return pade(log1p_scaled(0.5, 16), 1, 1).wold(512)


class TestToeplitz(unittest.TestCase):
    def test_matrix(self) -> None:
        t = toeplitz(from_coeffs(1, 0.5), 3)
        np.testing.assert_array_equal(t.matrix, [[1, 0, 0], [0.5, 1, 0], [0, 0.5, 1]])
        assert t.n == 3

    def test_longer_series_is_cut(self) -> None:
        t = toeplitz(geometric(0.5, 16), 3)
        np.testing.assert_allclose(t.matrix, [[1, 0, 0], [0.5, 1, 0], [0.25, 0.5, 1]])

    def test_short_series(self) -> None:
        with self.assertRaises(ValueError):
            toeplitz(geometric(0.5, 2), 5)
        with self.assertRaises(ValueError):
            toeplitz(from_coeffs(1), 0)

    def test_circulant(self) -> None:
        c = circulant(from_coeffs(1, 2, 3), 2)
        # coefficients fold modulo 2: 1 + 3, 2
        np.testing.assert_array_equal(c, [[4, 2], [2, 4]])
        with self.assertRaises(ValueError):
            circulant(from_coeffs(1), 0)


class TestOpNorm(unittest.TestCase):
    def test_two_by_two(self) -> None:
        # sqrt of the largest eigenvalue of [[1.25, 0.5], [0.5, 1]]
        expected = math.sqrt((2.25 + math.sqrt(1.0625)) / 2)
        assert op_norm(toeplitz(from_coeffs(1, 0.5), 2)) == pytest.approx(expected)
        assert expected == pytest.approx(1.2808, abs=1e-4)

    def test_power_matches_dense(self) -> None:
        t = toeplitz(geometric(0.5, 64), 64)
        dense = op_norm(t, method="dense")
        assert op_norm(t, method="power") == pytest.approx(dense, rel=1e-6)

    def test_zero_matrix(self) -> None:
        assert op_norm(toeplitz(truncate(from_coeffs(0), 4), 4), method="power") == 0

    def test_unknown_method(self) -> None:
        with self.assertRaises(ValueError):
            op_norm(toeplitz(from_coeffs(1), 2), method="lanczos")


class TestSpectralCheck(unittest.TestCase):
    def test_one_plus_half_z(self) -> None:
        check = spectral_lemma_check(from_coeffs(1, 0.5), [512, 2, 8, 64])
        assert [row.n for row in check.rows] == [2, 8, 64, 512]
        assert check.rows[0].op_norm == pytest.approx(1.2808, abs=1e-4)
        assert check.supnorm.value == pytest.approx(1.5)
        assert check.monotone
        assert check.bounded
        assert 0 <= check.terminal_gap <= 0.015

    def test_pade_of_log(self) -> None:
        f = taylor_of_pade()
        check = spectral_lemma_check(f, [8, 64, 256])
        assert check.monotone
        assert check.bounded
        assert check.terminal_gap <= 0.02 * check.supnorm.value

    def test_constant(self) -> None:
        check = spectral_lemma_check(from_coeffs(2), [1, 4, 16])
        assert all(row.op_norm == pytest.approx(2) for row in check.rows)
        assert check.terminal_gap == pytest.approx(0, abs=1e-12)

    def test_random_stationary_rationals(self) -> None:
        rng = np.random.default_rng(11)
        for _ in range(20):
            n, m = int(rng.integers(1, 4)), int(rng.integers(0, 4))
            poles = rng.uniform(1.2, 4, n) * np.exp(2j * np.pi * rng.uniform(size=n))
            num = rng.normal(size=m + 1) + 1j * rng.normal(size=m + 1)
            f = taylor(RationalTransfer(num, from_roots(poles), reduce=False), 512)
            check = spectral_lemma_check(f, [2, 8, 64, 256])
            assert check.monotone
            assert check.bounded

    def test_uncertified(self) -> None:
        with self.assertRaises(ArmanormUncertifiedEvaluation):
            spectral_lemma_check(PowerSeries([1, 1, 1]), [2])


class TestCirculant(unittest.TestCase):
    def test_unitary_check(self) -> None:
        rows = unitary_lemma_check(geometric(0.5, 64), [4, 16, 64])
        assert [row.n for row in rows] == [4, 16, 64]
        assert all(row.deviation <= 1e-10 for row in rows)
        # the 4th roots of unity include z = 1, where |f| is largest
        assert rows[0].grid_maximum == pytest.approx(2, rel=1e-12)


class TestMultiplicativity(unittest.TestCase):
    def test_inverse_pair(self) -> None:
        gap = multiplicativity_gap(geometric(0.5, 32), truncate(from_coeffs(1, -0.5), 32), 16)
        assert gap < 1e-12

    def test_random_polynomials(self) -> None:
        rng = np.random.default_rng(9)
        for _ in range(100):
            f = truncate(from_coeffs(*rng.normal(size=5)), 20)
            g = truncate(from_coeffs(*rng.normal(size=5)), 20)
            assert multiplicativity_gap(f, g, 12) < 1e-12


class TestSingularInner(unittest.TestCase):
    def test_coefficients(self) -> None:
        h = singular_inner_series(16)
        assert h.coeffs[0] == pytest.approx(math.exp(-1), abs=1e-15)
        assert h.coeffs[1] == pytest.approx(-2 * math.exp(-1), abs=1e-15)
        assert abs(h.coeffs[2]) < 1e-15
        assert h.closed_form is not None
        assert not h.certified

    def test_report(self) -> None:
        report = hinf_counterexample_report(order=256, grid=64)
        assert report.order == 256
        assert report.h0 == pytest.approx(math.exp(-1), abs=1e-9)
        assert report.disk_minimum >= 1
        assert report.l2_partial <= 1
        assert report.series_gap < 1e-10
        assert [k for k, _ in report.l1_growth] == [64, 128, 256]
        sums = [value for _, value in report.l1_growth]
        assert sums == sorted(sums)
        assert report.root_test > 0.9

    def test_report_order(self) -> None:
        with self.assertRaises(ValueError):
            hinf_counterexample_report(order=32)
