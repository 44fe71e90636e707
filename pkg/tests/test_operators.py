import numpy as np
import pytest

from lpsquare.kernels import vallee_poussin
from lpsquare.operators import (
    MAX_ENUMERATED_BLOCKS,
    SignPattern,
    all_plus,
    default_breadth,
    rademacher_average,
    rademacher_first_moment,
    random_signs,
    square_function,
    square_function_nd,
    t_omega,
    tensor_multiplier,
)
from lpsquare.torus import (
    admissible_grid_size,
    block_index,
    evaluate_on_grid,
    make_trig_poly,
    monomial,
    tensor_product,
)

from conftest import direct_eval, random_poly

# First-moment Khintchine constant: the sharp value is 1/sqrt(2); enumeration
# on random polynomials gives ratios >= 0.83 (demos/calibrate_constants.py).
KHINTCHINE_C = 1 / np.sqrt(2)


def direct_square_function(f, x):
    """``S f`` by direct summation of each block, no FFT."""
    freqs = f.frequencies()
    ks = block_index(freqs)
    total = np.zeros(len(x))
    for k in np.unique(ks):
        sel = ks == k
        total += np.abs(direct_eval(freqs[sel], f.coeffs[sel], x)) ** 2
    return np.sqrt(total)


class TestSquareFunction:
    def test_single_mode(self):
        assert np.allclose(square_function(monomial(3), 16).values, 1.0)

    def test_two_blocks(self):
        f = make_trig_poly((0, 1), [1, 1])
        assert np.allclose(square_function(f, 8).values, np.sqrt(2))

    def test_matches_direct_summation(self, rng):
        f = random_poly(rng, -45, 70)
        M = 256
        S = square_function(f, M)
        assert np.max(np.abs(S.values - direct_square_function(f, np.arange(M) / M))) < 1e-10

    def test_vp_matches_direct(self):
        V = vallee_poussin(16)
        M = admissible_grid_size(V.degree)
        ref = direct_square_function(V, np.arange(M) / M)
        assert np.max(np.abs(square_function(V, M).values - ref)) < 1e-10

    def test_parseval_random(self, rng):
        for _ in range(100):
            d = int(rng.integers(0, 65))
            lo = int(rng.integers(-d, 1))
            f = random_poly(rng, lo, lo + d)
            S = square_function(f, 256)
            assert abs(np.sqrt(np.mean(S.values ** 2)) - f.l2_norm()) < 1e-10 * max(1, f.l2_norm())

    def test_nd_separable(self, rng):
        g, h = random_poly(rng, -9, 9), random_poly(rng, -5, 12)
        S2 = square_function_nd(tensor_product(g, h), 32).values
        outer = np.multiply.outer(square_function(g, 32).values, square_function(h, 32).values)
        assert np.max(np.abs(S2 - outer)) < 1e-10
        assert np.allclose(square_function_nd(tensor_product(monomial(3), monomial(5)), 16).values, 1.0)

    def test_nd_parseval(self, rng):
        c = rng.standard_normal((11, 9)) + 1j * rng.standard_normal((11, 9))
        f = make_trig_poly([(-5, 5), (-2, 6)], c)
        S = square_function_nd(f, 32)
        assert abs(np.sqrt(np.mean(S.values ** 2)) - f.l2_norm()) < 1e-10

    def test_3d(self, rng):
        f = tensor_product(tensor_product(random_poly(rng, -3, 3), random_poly(rng, 0, 4)), random_poly(rng, -2, 1))
        S = square_function_nd(f, 8)
        assert S.shape == (8, 8, 8)
        assert abs(np.sqrt(np.mean(S.values ** 2)) - f.l2_norm()) < 1e-10

    def test_dims_checked(self, rng):
        with pytest.raises(ValueError):
            square_function(tensor_product(monomial(1), monomial(1)), 8)
        with pytest.raises(ValueError):
            square_function_nd(monomial(1), 8)
        with pytest.raises(ValueError):
            square_function(random_poly(rng, -9, 9), 16)

    def test_zero(self):
        assert np.all(square_function(make_trig_poly((0, 3), np.zeros(4)), 8).values == 0)

    def test_bitwise_reproducible(self):
        V = vallee_poussin(2 ** 8)
        M = admissible_grid_size(V.degree)
        assert np.array_equal(square_function(V, M).values, square_function(V, M).values)


class TestSigns:
    def test_pattern(self):
        s = SignPattern(np.array([1, -1, 1]))
        assert s.breadth == 1 and s[-1] == 1 and s[0] == -1
        assert np.array_equal(s.flipped().signs, [-1, 1, -1])
        with pytest.raises(ValueError):
            SignPattern(np.array([1, 1]))
        with pytest.raises(ValueError):
            SignPattern(np.array([1, 0, 1]))
        with pytest.raises(KeyError):
            s[2]

    def test_random_signs_seeded(self):
        a = random_signs(5, 7).signs
        assert np.array_equal(a, random_signs(5, 7).signs)
        assert set(a.tolist()) <= {-1, 1}

    def test_default_breadth_covers(self):
        for d in (1, 2, 3, 7, 8, 100, 2 ** 15 + 1):
            assert default_breadth(d) >= block_index(d)

    def test_all_plus_identity(self, rng):
        f = random_poly(rng, -30, 30)
        assert np.array_equal(t_omega(f, all_plus(5)).coeffs, f.coeffs)

    def test_single_block_flip(self):
        eps = all_plus(3).signs.copy()
        eps[2 + 3] = -1
        f = monomial(3)
        assert t_omega(f, SignPattern(eps)).coeff(3) == -1

    def test_isometry(self, rng):
        for _ in range(20):
            f = random_poly(rng, -60, 60)
            g = t_omega(f, random_signs(6, rng))
            assert abs(g.l2_norm() - f.l2_norm()) < 1e-12

    def test_breadth_too_small(self, rng):
        with pytest.raises(ValueError):
            t_omega(random_poly(rng, -20, 20), all_plus(3))

    def test_tensor_multiplier(self, rng):
        g, h = random_poly(rng, -7, 7), random_poly(rng, -3, 9)
        e1, e2 = random_signs(4, rng), random_signs(4, rng)
        lhs = tensor_multiplier(tensor_product(g, h), [e1, e2]).coeffs
        rhs = tensor_product(t_omega(g, e1), t_omega(h, e2)).coeffs
        assert np.array_equal(lhs, rhs)
        f = tensor_product(g, h)
        assert np.array_equal(tensor_multiplier(f, [all_plus(4), all_plus(4)]).coeffs, f.coeffs)
        with pytest.raises(ValueError):
            tensor_multiplier(f, [e1])


class TestRademacher:
    def test_single_mode(self):
        assert np.allclose(rademacher_average(monomial(3), 8, 2).values, 1.0)

    def test_oracle_random(self, rng):
        for _ in range(100):
            d = int(rng.integers(1, 33))
            lo = int(rng.integers(-d, 1))
            f = random_poly(rng, lo, lo + d)
            avg = rademacher_average(f, 128, 6)
            S = square_function(f, 128)
            assert np.max(np.abs(avg.values - S.values)) < 1e-10

    def test_khintchine_first_moment(self, rng):
        for _ in range(10):
            f = random_poly(rng, -31, 31)
            m1 = rademacher_first_moment(f, 128, 5).values
            S = square_function(f, 128).values
            assert np.all(m1 <= S * (1 + 1e-12))
            assert np.all(m1 >= KHINTCHINE_C * S)

    def test_limits(self, rng):
        f = random_poly(rng, -8, 8)
        with pytest.raises(ValueError):
            rademacher_average(f, 64, (MAX_ENUMERATED_BLOCKS + 1) // 2)
        with pytest.raises(ValueError):
            rademacher_average(f, 64, 2)
