import numpy as np
import pytest

from lpsquare.experiments import (
    FROZEN,
    SUITES,
    ExperimentRecord,
    _tensor_entropy,
    bourgain_lower_suite,
    check_records,
    counterexample_euclidean_suite,
    counterexample_periodic_record,
    counterexample_periodic_suite,
    coupled_p,
    fit_exponent,
    multiplier_growth_suite,
    sharpness_exponent,
    weak_type_sharpness_suite,
)
from lpsquare.kernels import vallee_poussin
from lpsquare.norms import lp_norm
from lpsquare.operators import square_function, square_function_nd
from lpsquare.torus import admissible_grid_size, evaluate_on_grid, tensor_product


class TestFit:
    def test_exact_power(self):
        s = np.array([2, 4, 8, 16.0])
        fit = fit_exponent(s, s ** 1.5)
        assert abs(fit.slope - 1.5) < 1e-12 and fit.max_residual <= 1e-12
        fit = fit_exponent(s, 7 * s ** 3)
        assert abs(fit.slope - 3) < 1e-12 and abs(fit.intercept - np.log(7)) < 1e-12

    def test_perturbed(self):
        s = np.arange(2, 20, dtype=float)
        alt = (-1.0) ** np.arange(s.size)
        assert abs(fit_exponent(s, s ** 1.5 * (1 + 0.01 * alt)).slope - 1.5) <= 0.02

    def test_errors(self):
        with pytest.raises(ValueError):
            fit_exponent([1, 2], [1, 2])
        with pytest.raises(ValueError):
            fit_exponent([1, 2, 3], [1, 0, 2])


class TestSmallSuites:
    def test_helpers(self):
        assert coupled_p(1) == pytest.approx(1 + 1 / np.log(2))
        assert sharpness_exponent(1) == 0.5 and sharpness_exponent(2) == 2.0

    def test_columns_stable(self):
        recs = bourgain_lower_suite([5, 6])
        for r in recs:
            assert tuple(r.row()) == SUITES["bourgain"].columns
        assert np.isnan(recs[0].fits["fit_S_L1_slope"])

    def test_bourgain_values(self):
        recs = bourgain_lower_suite([6, 7, 8])
        r = recs[0]
        V = vallee_poussin(64)
        S = square_function(V, r.params["M"])
        assert r.measurements["norm_S_L1"] == lp_norm(S, 1)
        # the block L^1 chain is a lower bound for ||S V||_1 (Minkowski)
        assert all(x.measurements["chain_L1"] <= x.measurements["norm_S_L1"] for x in recs)

    def test_block_l1_grows(self):
        rec = bourgain_lower_suite([10])[0]
        blocks = [float(v) for v in rec.measurements["block_L1"].split(";")]
        assert all(b > a for a, b in zip(blocks[1:], blocks[2:]))

    def test_multiplier_seeded(self):
        a = multiplier_growth_suite([5, 6, 7], trials=3, seed=11)
        b = multiplier_growth_suite([5, 6, 7], trials=3, seed=11)
        assert [x.row() for x in a] == [x.row() for x in b]
        assert all(x.measurements["all_plus_ratio"] == 1.0 for x in a)

    def test_range_checks(self):
        with pytest.raises(ValueError):
            bourgain_lower_suite([15])
        with pytest.raises(ValueError):
            bourgain_lower_suite([])
        with pytest.raises(ValueError):
            weak_type_sharpness_suite([6], n=3)
        with pytest.raises(ValueError):
            counterexample_periodic_record(12, 2 ** 13)
        with pytest.raises(ValueError):
            counterexample_euclidean_suite([21])
        with pytest.raises(ValueError):
            counterexample_euclidean_suite([12], x_grid=[1e-6, 0.5])

    def test_weak_sharpness_1d(self):
        recs = weak_type_sharpness_suite([6, 8, 10])
        for r in recs:
            m = r.measurements
            assert 1 <= m["weak_dual"] / m["weak_S"] <= 4
            assert m["weak_S"] <= m["strong_S_L1"]
        names = {a.name: a.passed for a in check_records("weak-sharpness", recs)}
        assert names["ratio_under_increasing"] and names["ratio_sharp_bounded"]

    def test_2d_separable_shortcut(self):
        # S_2(V (x) V) = S(V) (x) S(V), so ||S_2||_1 = ||S V||_1^2
        for N in (2, 3, 4):
            V = vallee_poussin(2 ** N)
            M = admissible_grid_size(V.degree)
            S2 = square_function_nd(tensor_product(V, V), M)
            assert abs(lp_norm(S2, 1) - lp_norm(square_function(V, M), 1) ** 2) < 1e-10
        rec = weak_type_sharpness_suite([4], n=2)[0]
        V = vallee_poussin(16)
        M = rec.params["M"]
        assert rec.measurements["strong_S_L1"] == pytest.approx(lp_norm(square_function(V, M), 1) ** 2, rel=1e-14)


class TestTensorEntropy:
    def test_brackets_exact_value(self, rng):
        v = rng.exponential(size=300) * 5
        u = np.multiply.outer(v, v)
        for r in (0.5, 2.0):
            exact = float(np.mean(u * np.log1p(u) ** r))
            est, lo, hi = _tensor_entropy(v, r)
            assert lo <= exact <= hi
            assert abs(est - exact) < 1e-3 * exact

    def test_floor_bin(self):
        v = np.r_[np.full(10, 1e-12), np.ones(10)]
        est, lo, hi = _tensor_entropy(v, 1.0)
        assert lo <= 0.25 * np.log(2) <= hi


class TestCounterexamples:
    def test_periodic_small(self):
        rec = counterexample_periodic_record(12, 2 ** 14)
        m = rec.measurements
        assert m["min_x_delta"] >= 0.054
        assert m["atom_support_ok"] and m["atom_l2_ok"] and m["atom_mean_zero_ok"]
        assert abs(m["atom_l2"] - 2 ** 5.5) < 1e-9
        assert m["weak_surrogate"] >= m["weak_1d"] ** 2 * (1 - 1e-12)

    def test_periodic_empty_window(self):
        rec = counterexample_periodic_record(10, 2 ** 12)
        assert np.isnan(rec.measurements["min_x_delta"])
        assert all(a.passed for a in check_records("counter-periodic", [rec]))

    def test_euclidean(self):
        recs = counterexample_euclidean_suite([12])
        assert all(a.passed for a in check_records("counter-euclidean", recs))


class TestChecks:
    def _rec(self, **meas):
        return ExperimentRecord("counter-euclidean", {"N": 16}, meas)

    def test_euclidean_failure_detected(self):
        good = dict(min_x_I1=0.2, max_x_I2=0.01, max_x_I3=0.01, max_x_I4=0.01, min_x_P=0.1,
                    route_gap=0.0, quadrature_change=0.0)
        assert all(a.passed for a in check_records("counter-euclidean", [self._rec(**good)]))
        bad = dict(good, max_x_I3=0.05)
        res = {a.name: a.passed for a in check_records("counter-euclidean", [self._rec(**bad)])}
        assert not res["x_I234_upper"]

    def test_frozen_constants(self):
        assert FROZEN["block_l1_per_k"] > 0 and FROZEN["weak_half_ratio_1d"] > 0

    def test_empty(self):
        with pytest.raises(ValueError):
            check_records("bourgain", [])
