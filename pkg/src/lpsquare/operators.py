"""
Littlewood-Paley square functions and randomized block-sign multipliers.

Square functions are accumulated block by block, one inverse FFT per block,
in increasing block order: the reduction order is fixed, so results are
bitwise reproducible.
"""

from dataclasses import dataclass
from itertools import product

import numpy as np

from .torus import (
    GridSignal,
    TrigPoly,
    block_index,
    block_range,
    blocks_meeting,
    delta_block_nd,
    evaluate_on_grid,
    make_trig_poly,
)

__all__ = [
    "SignPattern",
    "default_breadth",
    "random_signs",
    "all_plus",
    "square_function",
    "square_function_nd",
    "t_omega",
    "tensor_multiplier",
    "rademacher_average",
    "rademacher_first_moment",
    "MAX_ENUMERATED_BLOCKS",
]

MAX_ENUMERATED_BLOCKS = 25


@dataclass(frozen=True, eq=False)
class SignPattern:
    """Signs ``eps_k`` for blocks ``k = -K..K``; ``signs[k + K]`` is ``eps_k``."""

    signs: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.signs)
        if s.ndim != 1 or s.size % 2 != 1:
            raise ValueError("sign pattern needs an odd number of entries (-K..K)")
        if not np.all(np.abs(s) == 1):
            raise ValueError("signs must be exactly +1 or -1")
        s = s.astype(np.int8)
        s.setflags(write=False)
        object.__setattr__(self, "signs", s)

    @property
    def breadth(self) -> int:
        return (self.signs.size - 1) // 2

    def __getitem__(self, k: int) -> int:
        K = self.breadth
        if abs(k) > K:
            raise KeyError(f"block {k} outside breadth {K}")
        return int(self.signs[k + K])

    def flipped(self) -> "SignPattern":
        return SignPattern(-self.signs)


def default_breadth(degree: int) -> int:
    """``ceil(log2(degree)) + 1``: enough blocks to cover ``|m| <= degree``."""
    degree = int(degree)
    if degree <= 1:
        return 1
    return int(np.ceil(np.log2(degree))) + 1


def all_plus(K: int) -> SignPattern:
    return SignPattern(np.ones(2 * K + 1, dtype=np.int8))


def random_signs(K: int, rng) -> SignPattern:
    """Uniform i.i.d. signs; ``rng`` is a seed or a numpy Generator."""
    rng = np.random.default_rng(rng)
    return SignPattern(rng.choice(np.array([-1, 1], dtype=np.int8), size=2 * K + 1))


def _nonzero_blocks(f: TrigPoly, axis: int) -> list:
    return blocks_meeting(f.ranges[axis])


def square_function(f: TrigPoly, M: int) -> GridSignal:
    """``S(f)(x_j) = (sum_k |Delta_k f(x_j)|^2)^(1/2)`` on the grid ``j / M``."""
    if f.dims != 1:
        raise ValueError("square_function takes 1D polynomials; see square_function_nd")
    return _square_function(f, M)


def square_function_nd(f: TrigPoly, M) -> GridSignal:
    """n-parameter square function over tensor blocks, for ``n`` in {2, 3}."""
    if f.dims not in (2, 3):
        raise ValueError(f"square_function_nd supports 2 or 3 dimensions, got {f.dims}")
    return _square_function(f, M)


def _square_function(f: TrigPoly, M) -> GridSignal:
    per_axis = [_nonzero_blocks(f, ax) for ax in range(f.dims)]
    energy = None
    for ks in product(*per_axis):
        blk = delta_block_nd(f, ks)
        if not np.any(blk.coeffs):
            continue
        v = evaluate_on_grid(blk, M).values
        e = v.real ** 2 + v.imag ** 2
        energy = e if energy is None else energy + e
    if energy is None:
        shape = (M,) * f.dims if np.isscalar(M) else tuple(M)
        # zero polynomial still has to pass the aliasing check
        evaluate_on_grid(f, M)
        energy = np.zeros(shape)
    return GridSignal(np.sqrt(energy))


def _sign_multiplier(r, signs: SignPattern) -> np.ndarray:
    freqs = np.arange(r.lo, r.hi + 1)
    ks = block_index(freqs)
    K = signs.breadth
    if np.any(np.abs(ks) > K):
        need = int(np.max(np.abs(ks)))
        raise ValueError(f"sign breadth {K} does not cover block {need}")
    return signs.signs[ks + K].astype(float)


def t_omega(f: TrigPoly, signs: SignPattern) -> TrigPoly:
    """``T f = sum_k eps_k Delta_k f``."""
    if f.dims != 1:
        raise ValueError("t_omega acts on 1D polynomials; see tensor_multiplier")
    return make_trig_poly(f.ranges, f.coeffs * _sign_multiplier(f.ranges[0], signs))


def tensor_multiplier(f: TrigPoly, signs_per_axis) -> TrigPoly:
    """``T_1 (x) ... (x) T_n`` with one sign pattern per axis."""
    signs_per_axis = list(signs_per_axis)
    if len(signs_per_axis) != f.dims:
        raise ValueError(f"need {f.dims} sign patterns, got {len(signs_per_axis)}")
    c = f.coeffs
    for axis, (r, s) in enumerate(zip(f.ranges, signs_per_axis)):
        shape = [1] * f.dims
        shape[axis] = r.width
        c = c * _sign_multiplier(r, s).reshape(shape)
    return make_trig_poly(f.ranges, c)


def _block_samples(f: TrigPoly, M: int, K: int) -> np.ndarray:
    """Rows ``Delta_k f`` on the grid for ``k = -K..K`` (zeros for empty blocks)."""
    rows = np.zeros((2 * K + 1, M), dtype=complex)
    for k in range(-K, K + 1):
        blk = delta_block_nd(f, (k,))
        if np.any(blk.coeffs):
            rows[k + K] = evaluate_on_grid(blk, M).values
    return rows


def _enumerate_signs(f: TrigPoly, M: int, K: int, moment: int, chunk: int = 1 << 12):
    if f.dims != 1:
        raise ValueError("Rademacher averages are implemented for 1D polynomials")
    n = 2 * K + 1
    if n > MAX_ENUMERATED_BLOCKS:
        raise ValueError(f"breadth {K} needs 2^{n} sign patterns; limit is 2^{MAX_ENUMERATED_BLOCKS}")
    hi = max(abs(f.ranges[0].lo), abs(f.ranges[0].hi))
    if hi and int(block_index(hi)) > K:
        raise ValueError(f"breadth {K} does not cover the polynomial's blocks")
    evaluate_on_grid(f, M)
    rows = _block_samples(f, M, K)
    total = np.zeros(M)
    count = 1 << n
    bits = np.arange(n)
    for start in range(0, count, chunk):
        ids = np.arange(start, min(start + chunk, count))
        eps = 1.0 - 2.0 * ((ids[:, None] >> bits) & 1)
        vals = np.abs(eps @ rows)
        total += np.sum(vals ** moment, axis=0)
    return total / count


def rademacher_average(f: TrigPoly, M: int, K: int) -> GridSignal:
    """``(mean over all 2^(2K+1) sign patterns of |T f(x)|^2)^(1/2)``.

    Brute-force enumeration; by orthogonality of independent signs this is
    ``S(f)`` exactly, which makes it an oracle for :func:`square_function`.
    """
    return GridSignal(np.sqrt(_enumerate_signs(f, M, K, 2)))


def rademacher_first_moment(f: TrigPoly, M: int, K: int) -> GridSignal:
    """Mean over all sign patterns of ``|T f(x)|`` (Khintchine's first moment)."""
    return GridSignal(_enumerate_signs(f, M, K, 1))
