import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpsquare.torus import (
    FrequencyRange,
    GridSignal,
    admissible_grid_size,
    block_index,
    block_range,
    blocks_meeting,
    coefficients_from_grid,
    delta_block,
    delta_block_nd,
    evaluate_on_grid,
    make_trig_poly,
    monomial,
    tensor_product,
)

from conftest import direct_block_range, direct_eval, random_poly


class TestBlocks:
    def test_examples(self):
        assert block_range(3) == FrequencyRange(4, 7)
        assert block_range(-2) == FrequencyRange(-3, -2)
        assert block_range(0) == FrequencyRange(0, 0)
        assert block_range(1) == FrequencyRange(1, 1)
        assert block_range(-1) == FrequencyRange(-1, -1)

    @pytest.mark.parametrize("k", range(-9, 10))
    def test_block_range_matches_scan(self, k):
        r = block_range(k)
        assert list(range(r.lo, r.hi + 1)) == direct_block_range(k)

    def test_block_index_inverts_block_range(self):
        for k in range(-20, 21):
            r = block_range(k)
            assert np.all(block_index(np.arange(r.lo, r.hi + 1)) == k)

    def test_block_index_exact_at_powers_of_two(self):
        # float log2 would misround near 2^k; frexp must not
        for k in range(1, 52):
            assert block_index(2 ** k - 1) == k
            assert block_index(2 ** k) == k + 1
            assert block_index(-(2 ** k)) == -(k + 1)

    @given(st.integers(-(2 ** 40), 2 ** 40))
    def test_block_index_property(self, m):
        k = int(block_index(m))
        assert m in block_range(k)

    def test_blocks_meeting(self):
        assert blocks_meeting(FrequencyRange(-5, 9)) == list(range(-3, 5))
        assert blocks_meeting(FrequencyRange(4, 7)) == [3]


class TestPartition:
    @settings(max_examples=60, deadline=None)
    @given(st.integers(-300, 300), st.integers(0, 300), st.integers(0, 2 ** 32 - 1))
    def test_blocks_sum_to_f(self, lo, width, seed):
        f = random_poly(np.random.default_rng(seed), lo, lo + width)
        total = sum(delta_block(f, k).coeffs for k in blocks_meeting(f.ranges[0]))
        assert np.array_equal(total, f.coeffs)

    def test_blocks_disjoint(self, rng):
        f = random_poly(rng, -40, 40)
        support = [np.flatnonzero(delta_block(f, k).coeffs) for k in blocks_meeting(f.ranges[0])]
        flat = np.concatenate(support)
        assert flat.size == np.unique(flat).size == 81

    def test_nd_partition(self, rng):
        c = rng.standard_normal((9, 13)) + 0j
        f = make_trig_poly([(-4, 4), (-6, 6)], c)
        total = np.zeros_like(c)
        for kx in blocks_meeting(f.ranges[0]):
            for ky in blocks_meeting(f.ranges[1]):
                total = total + delta_block_nd(f, (kx, ky)).coeffs
        assert np.array_equal(total, c)


class TestEvaluation:
    def test_matches_direct_summation(self, rng):
        f = random_poly(rng, -17, 23)
        M = 64
        g = evaluate_on_grid(f, M)
        ref = direct_eval(f.frequencies(), f.coeffs, np.arange(M) / M)
        assert np.max(np.abs(g.values - ref)) < 1e-12

    def test_roundtrip(self, rng):
        f = random_poly(rng, -30, 5)
        back = coefficients_from_grid(evaluate_on_grid(f, 64), f.ranges)
        assert np.max(np.abs(back.coeffs - f.coeffs)) < 1e-12

    def test_monomial(self):
        g = evaluate_on_grid(monomial(3), 16)
        assert np.allclose(g.values, np.exp(2j * np.pi * 3 * np.arange(16) / 16))

    def test_tightest_grid_is_allowed(self, rng):
        f = random_poly(rng, -3, 4)
        back = coefficients_from_grid(evaluate_on_grid(f, 8), f.ranges)
        assert np.allclose(back.coeffs, f.coeffs)

    def test_aliasing_rejected(self, rng):
        f = random_poly(rng, -5, 5)
        with pytest.raises(ValueError, match="aliases"):
            evaluate_on_grid(f, 10)
        with pytest.raises(ValueError, match="Nyquist"):
            coefficients_from_grid(GridSignal(np.zeros(8)), (-5, 5))

    def test_parseval(self, rng):
        f = random_poly(rng, -50, 50)
        g = evaluate_on_grid(f, 256)
        assert abs(np.sqrt(np.mean(np.abs(g.values) ** 2)) - f.l2_norm()) < 1e-12

    def test_tensor_product_separates(self, rng):
        f, h = random_poly(rng, -3, 5), random_poly(rng, 0, 7)
        F = evaluate_on_grid(tensor_product(f, h), 16).values
        outer = np.multiply.outer(evaluate_on_grid(f, 16).values, evaluate_on_grid(h, 16).values)
        assert np.max(np.abs(F - outer)) < 1e-12

    def test_2d_matches_direct(self, rng):
        c = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
        f = make_trig_poly([(-1, 1), (2, 5)], c)
        g = evaluate_on_grid(f, (8, 16))
        x, y = 3 / 8, 5 / 16
        ref = sum(c[i, j] * np.exp(2j * np.pi * ((i - 1) * x + (j + 2) * y)) for i in range(3) for j in range(4))
        assert abs(g.values[3, 5] - ref) < 1e-12


class TestValidation:
    def test_admissible_grid_size(self):
        assert admissible_grid_size(5) == 32
        assert admissible_grid_size(7, oversample=1) == 16
        assert admissible_grid_size(2 ** 11 + 1) == 2 ** 14

    def test_bad_inputs(self):
        with pytest.raises(ValueError):
            make_trig_poly((3, 1), [])
        with pytest.raises(ValueError):
            make_trig_poly((0, 2), [1, 2])
        with pytest.raises(ValueError):
            make_trig_poly((0, 1), [1, np.nan])
        with pytest.raises(ValueError):
            make_trig_poly([(0, 0)] * 4, np.ones((1, 1, 1, 1)))
        with pytest.raises(ValueError):
            GridSignal(np.array([1.0, np.inf]))

    def test_immutable(self, rng):
        f = random_poly(rng, 0, 3)
        with pytest.raises(ValueError):
            f.coeffs[0] = 1
        g = evaluate_on_grid(f, 8)
        with pytest.raises(ValueError):
            g.values[0] = 1

    def test_coeff_lookup(self):
        f = make_trig_poly((-1, 1), [1, 2, 3])
        assert f.coeff(0) == 2 and f.coeff(5) == 0
        assert f.degree == 1 and f.dims == 1
