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

import inspect
import math
import unittest

import numpy as np
import pytest

from armanorm.arma import (
    ArmaModel,
    default_burn_in,
    from_rational,
    l2_distance,
    prediction_decomposition,
    process,
    simulate,
    to_rational,
    wold_coeffs,
)
from armanorm.exceptions import ArmanormNonStationaryModel
from armanorm.rational import RationalTransfer, formal_inverse, from_roots, taylor
from armanorm.run_config import RunConfig
from armanorm.series import DEFAULT_SEED, ProcessSpec, geometric, log1p_quotient, mul


def random_stationary_model(rng: np.random.Generator) -> ArmaModel:
    n, m = int(rng.integers(0, 4)), int(rng.integers(0, 4))
    poles = rng.uniform(1.1, 4, n) * np.exp(2j * np.pi * rng.uniform(size=n))
    den = from_roots(poles).coeffs
    return ArmaModel(ar=den[1:] / den[0], ma=rng.normal(size=m + 1))


class TestArmaModel(unittest.TestCase):
    def test_orders_and_trimming(self) -> None:
        a = ArmaModel(ar=[-0.5, 0.1], ma=[1, 0.3, 0.0])
        assert a.ar_order == 2
        assert a.ma_order == 1
        assert a.is_real
        assert a.stationary

        white = ArmaModel(ar=[0, 0])
        assert white.ar_order == 0
        assert white.ma_order == 0

    def test_recurrence(self) -> None:
        assert ArmaModel(ar=[0.25], ma=[0, 0.5]).recurrence() == "Y_t = -0.25 Y_{t-1} + 0.5 ε_{t-1}"
        assert ArmaModel(ar=[-0.5]).recurrence() == "Y_t = 0.5 Y_{t-1} + 1 ε_t"
        assert ArmaModel(ar=[], ma=[0]).recurrence() == "Y_t = 0"

    def test_validation(self) -> None:
        with self.assertRaises(ValueError):
            ArmaModel(ar=[math.nan])
        with self.assertRaises(ValueError):
            ArmaModel(ar=[], innovation_variance=0)
        with self.assertRaises(ValueError):
            ArmaModel(ar=[], innovation_variance=-1)

    def test_stationarity(self) -> None:
        assert not ArmaModel(ar=[-2]).stationary
        assert not ArmaModel(ar=[-1]).stationary
        assert ArmaModel(ar=[]).stationary

    def test_equality(self) -> None:
        assert ArmaModel(ar=[-0.5], ma=[1, 0]) == ArmaModel(ar=[-0.5])
        assert ArmaModel(ar=[-0.5]) != ArmaModel(ar=[0.5])
        assert ArmaModel(ar=[-0.5]) != ArmaModel(ar=[-0.5], innovation_variance=2)
        assert repr(ArmaModel(ar=[-0.5])).startswith("ArmaModel(ar=")


class TestConversions(unittest.TestCase):
    def test_rational_round_trip(self) -> None:
        r = RationalTransfer([1, 0.5], [1, -0.5])
        a = from_rational(r)
        np.testing.assert_allclose(a.ar, [-0.5])
        np.testing.assert_allclose(a.ma, [1, 0.5])
        back = to_rational(a)
        assert back.num == r.num
        assert back.den == r.den
        assert from_rational(back) == a

    def test_common_factor_is_kept(self) -> None:
        # the model is read literally, reduction is up to the caller
        a = ArmaModel(ar=[-0.5], ma=[1, -0.5])
        assert to_rational(a).den.degree == 1

    def test_wold(self) -> None:
        np.testing.assert_allclose(wold_coeffs(ArmaModel(ar=[-0.5]), 4).coeffs, 0.5 ** np.arange(5))
        # (1 + L/2)/(1 - L/2)
        np.testing.assert_allclose(wold_coeffs(ArmaModel(ar=[-0.5], ma=[1, 0.5]), 3).coeffs, [1, 1, 0.5, 0.25])
        np.testing.assert_allclose(process(ArmaModel(ar=[-0.5])).wold(2).coeffs, [1, 0.5, 0.25])

    def test_wold_times_inverse_is_unit(self) -> None:
        rng = np.random.default_rng(9)
        unit = np.zeros(65)
        unit[0] = 1
        for _ in range(100):
            # |p_1| + |p_2| < 1 keeps the MA part invertible
            a = ArmaModel(ar=random_stationary_model(rng).ar, ma=np.concatenate(([1.0], rng.uniform(-0.4, 0.4, 2))))
            product = mul(wold_coeffs(a, 64), taylor(formal_inverse(to_rational(a)), 64))
            np.testing.assert_allclose(product.coeffs, unit, rtol=0, atol=1e-9)

    def test_wold_nonstationary(self) -> None:
        with self.assertRaises(ArmanormNonStationaryModel):
            wold_coeffs(ArmaModel(ar=[-2]), 8)


class TestDistances(unittest.TestCase):
    def test_l2_distance_of_equal_processes(self) -> None:
        distance = l2_distance(process(ArmaModel(ar=[-0.5])), ProcessSpec(geometric(0.5, 256)))
        assert distance.value < 1e-12
        assert distance.tail_bound is not None

    def test_l2_distance(self) -> None:
        distance = l2_distance(ProcessSpec(RationalTransfer([1])), ProcessSpec(RationalTransfer([1, 0.5])))
        assert distance.value == pytest.approx(0.5)
        assert distance.tail_bound == 0

    def test_prediction_decomposition(self) -> None:
        report = prediction_decomposition(ProcessSpec(RationalTransfer([1])), ProcessSpec(RationalTransfer([1, 0.5])))
        assert report.sigma_model == pytest.approx(1)
        assert report.distance.value == pytest.approx(0.5)
        assert report.sigma_predictor == pytest.approx(math.sqrt(1.25))
        assert report.holds

    def test_prediction_of_the_true_model(self) -> None:
        x = process(ArmaModel(ar=[-0.5], ma=[2, 0.3]))
        report = prediction_decomposition(x, x)
        assert report.distance.value == pytest.approx(0, abs=1e-15)
        assert report.sigma_predictor == pytest.approx(report.sigma_model)
        assert report.sigma_model == pytest.approx(2)
        assert report.holds

    def test_prediction_of_log_quotient(self) -> None:
        x = ProcessSpec(log1p_quotient(0.5, 256))
        y = process(ArmaModel(ar=[1 / 3], ma=[1, 1 / 12]))
        assert prediction_decomposition(x, y).holds

    @pytest.mark.slow
    def test_prediction_campaign(self) -> None:
        rng = np.random.default_rng(8)
        for _ in range(500):
            x, y = process(random_stationary_model(rng)), process(random_stationary_model(rng))
            report = prediction_decomposition(x, y)
            assert report.holds
            assert report.sigma_predictor <= report.sigma_model + report.distance.value + 1e-12


class TestSimulate(unittest.TestCase):
    def test_white_noise(self) -> None:
        path = simulate(ArmaModel(ar=[]), 10, seed=3)
        innovations = np.random.default_rng(3).standard_normal(110)
        np.testing.assert_allclose(path, innovations[100:])

    def test_deterministic(self) -> None:
        a = ArmaModel(ar=[-0.5], ma=[1, 0.3])
        np.testing.assert_array_equal(simulate(a, 50, seed=1), simulate(a, 50, seed=1))
        assert not np.array_equal(simulate(a, 50, seed=1), simulate(a, 50, seed=2))
        assert len(simulate(a, 50, burn_in=0)) == 50

    def test_recurrence_holds(self) -> None:
        a = ArmaModel(ar=[-0.5], ma=[1, 0.3])
        rng = np.random.default_rng(4)
        eps = rng.standard_normal(200)
        path = simulate(a, 200, burn_in=0, seed=4)
        np.testing.assert_allclose(path[1:], 0.5 * path[:-1] + eps[1:] + 0.3 * eps[:-1])

    def test_variance(self) -> None:
        path = simulate(ArmaModel(ar=[-0.5]), 100_000, seed=5)
        assert np.var(path) == pytest.approx(4 / 3, abs=0.05)

    def test_innovation_variance(self) -> None:
        path = simulate(ArmaModel(ar=[], innovation_variance=4), 5, burn_in=0, seed=6)
        np.testing.assert_allclose(path, 2 * np.random.default_rng(6).standard_normal(5))

    def test_seed_default_matches_run_config(self) -> None:
        assert inspect.signature(simulate).parameters["seed"].default == DEFAULT_SEED
        assert RunConfig().seed == DEFAULT_SEED

    def test_default_burn_in(self) -> None:
        assert default_burn_in(ArmaModel(ar=[-0.5, 0.1], ma=[1, 0.3, 0.2, 0.1])) == 130
        assert default_burn_in(ArmaModel(ar=[])) == 100

    def test_rejects(self) -> None:
        with self.assertRaises(ArmanormNonStationaryModel):
            simulate(ArmaModel(ar=[-2]), 10)
        with self.assertRaises(ValueError):
            simulate(ArmaModel(ar=[-0.5j]), 10)
        with self.assertRaises(ValueError):
            simulate(ArmaModel(ar=[-0.5]), 0)
        with self.assertRaises(ValueError):
            simulate(ArmaModel(ar=[-0.5]), 10, burn_in=-1)
