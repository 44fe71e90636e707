"""
Band-limited functions on the torus T^n.

A trigonometric polynomial is stored as a dense coefficient tensor over a
rectangular box of integer frequencies. Evaluation on uniform grids goes
through the FFT; dyadic block projections are coefficient masks.
"""

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

__all__ = [
    "FrequencyRange",
    "TrigPoly",
    "GridSignal",
    "MAX_DIMS",
    "make_trig_poly",
    "monomial",
    "evaluate_on_grid",
    "coefficients_from_grid",
    "admissible_grid_size",
    "block_index",
    "block_range",
    "blocks_meeting",
    "delta_block",
    "delta_block_nd",
    "tensor_product",
]

MAX_DIMS = 3


class FrequencyRange(NamedTuple):
    """Inclusive integer frequency interval ``[lo, hi]`` on one axis."""

    lo: int
    hi: int

    @property
    def width(self) -> int:
        return self.hi - self.lo + 1

    def __contains__(self, m) -> bool:
        return self.lo <= m <= self.hi


def _as_range(r) -> FrequencyRange:
    lo, hi = int(r[0]), int(r[1])
    if lo > hi:
        raise ValueError(f"empty frequency range [{lo}, {hi}]")
    return FrequencyRange(lo, hi)


@dataclass(frozen=True, eq=False)
class TrigPoly:
    """Trigonometric polynomial with coefficients ``coeffs[m - lo]`` per axis.

    Use :func:`make_trig_poly` to build one; the constructor trusts its input.
    """

    ranges: tuple
    coeffs: np.ndarray

    @property
    def dims(self) -> int:
        return len(self.ranges)

    @property
    def degree(self) -> int:
        """Largest ``|m|`` over the declared ranges, all axes."""
        return max(max(abs(r.lo), abs(r.hi)) for r in self.ranges)

    def frequencies(self, axis: int = 0) -> np.ndarray:
        r = self.ranges[axis]
        return np.arange(r.lo, r.hi + 1)

    def coeff(self, *m) -> complex:
        """Fourier coefficient at frequency ``m`` (zero outside the box)."""
        if len(m) != self.dims:
            raise ValueError(f"expected {self.dims} indices, got {len(m)}")
        idx = []
        for mi, r in zip(m, self.ranges):
            if mi not in r:
                return 0j
            idx.append(mi - r.lo)
        return complex(self.coeffs[tuple(idx)])

    def with_coeffs(self, coeffs: np.ndarray) -> "TrigPoly":
        return make_trig_poly(self.ranges, coeffs)

    def l2_norm(self) -> float:
        """Coefficient-side L^2 norm (Parseval)."""
        return float(np.sqrt(np.sum(np.abs(self.coeffs) ** 2)))


@dataclass(frozen=True, eq=False)
class GridSignal:
    """Samples on the uniform grid ``x_j = j / M`` along every axis."""

    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.ndim < 1 or values.ndim > MAX_DIMS:
            raise ValueError(f"grid signals have 1..{MAX_DIMS} axes, got {values.ndim}")
        if min(values.shape) < 1:
            raise ValueError("grid size must be at least 1 per axis")
        if not np.all(np.isfinite(values)):
            raise ValueError("grid signal contains non-finite samples")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def dims(self) -> int:
        return self.values.ndim

    @property
    def shape(self) -> tuple:
        return self.values.shape

    @property
    def size(self) -> int:
        return self.values.size

    def abs(self) -> "GridSignal":
        return GridSignal(np.abs(self.values))

    def points(self, axis: int = 0) -> np.ndarray:
        M = self.values.shape[axis]
        return np.arange(M) / M


def make_trig_poly(ranges, coeffs) -> TrigPoly:
    """Validate and build a :class:`TrigPoly`.

    Parameters
    ----------
    ranges : sequence of (lo, hi) pairs, or a single pair for 1D
        Inclusive frequency interval per axis.
    coeffs : array_like
        Complex tensor of shape ``(hi - lo + 1, ...)``.
    """
    if len(ranges) == 2 and np.isscalar(ranges[0]):
        ranges = [ranges]
    rs = tuple(_as_range(r) for r in ranges)
    if not 1 <= len(rs) <= MAX_DIMS:
        raise ValueError(f"supported dimensions are 1..{MAX_DIMS}, got {len(rs)}")
    c = np.array(coeffs, dtype=complex)
    expected = tuple(r.width for r in rs)
    if c.shape != expected:
        raise ValueError(f"coefficient shape {c.shape} does not match ranges {expected}")
    if not np.all(np.isfinite(c)):
        raise ValueError("non-finite coefficient")
    c.setflags(write=False)
    return TrigPoly(rs, c)


def monomial(*m) -> TrigPoly:
    """``exp(2 pi i m . x)`` as a one-point TrigPoly."""
    return make_trig_poly([(mi, mi) for mi in m], np.ones((1,) * len(m)))


def admissible_grid_size(max_freq: int, oversample: int = 2) -> int:
    """Power-of-two grid size, at least ``2 * max_freq + 2``, times ``oversample``."""
    if oversample < 1:
        raise ValueError("oversample must be >= 1")
    base = 1 << int(2 * abs(int(max_freq)) + 1).bit_length()
    return base * int(oversample)


def _grid_shape(f: TrigPoly, M) -> tuple:
    shape = (int(M),) * f.dims if np.isscalar(M) else tuple(int(m) for m in M)
    if len(shape) != f.dims:
        raise ValueError("grid shape does not match polynomial dimension")
    for m, r in zip(shape, f.ranges):
        if m < r.width:
            raise ValueError(f"grid size {m} aliases frequency range [{r.lo}, {r.hi}]")
    return shape


def evaluate_on_grid(f: TrigPoly, M) -> GridSignal:
    """Sample ``f`` at ``x_j = j / M`` on each axis using the inverse FFT.

    Parameters
    ----------
    f : TrigPoly
    M : int or tuple of int
        Samples per axis; must be at least the frequency range width so that
        distinct frequencies land on distinct FFT bins.
    """
    shape = _grid_shape(f, M)
    spectrum = np.zeros(shape, dtype=complex)
    index = np.ix_(*[np.arange(r.lo, r.hi + 1) % m for r, m in zip(f.ranges, shape)])
    spectrum[index] = f.coeffs
    return GridSignal(np.fft.ifftn(spectrum, norm="forward"))


def coefficients_from_grid(g: GridSignal, ranges) -> TrigPoly:
    """Read off Fourier coefficients of a band-limited grid signal.

    Inverse of :func:`evaluate_on_grid` when the range is admissible for the
    grid.
    """
    if len(ranges) == 2 and np.isscalar(ranges[0]):
        ranges = [ranges]
    rs = [_as_range(r) for r in ranges]
    if len(rs) != g.dims:
        raise ValueError("range count does not match grid dimension")
    for m, r in zip(g.shape, rs):
        if r.width > m:
            raise ValueError(f"range [{r.lo}, {r.hi}] exceeds Nyquist for grid size {m}")
    spectrum = np.fft.fftn(g.values, norm="forward")
    index = np.ix_(*[np.arange(r.lo, r.hi + 1) % m for r, m in zip(rs, g.shape)])
    return make_trig_poly(rs, spectrum[index])


def block_index(m):
    """Signed dyadic block containing frequency ``m`` (vectorized).

    ``m`` in ``[2^(k-1), 2^k - 1]`` maps to ``k``; negatives mirror; 0 maps to 0.
    """
    m = np.asarray(m, dtype=np.int64)
    a = np.abs(m)
    # floor(log2) via frexp is exact for |m| < 2^53
    k = np.where(a > 0, np.frexp(a.astype(float))[1], 0)
    return np.sign(m) * k


def block_range(k: int) -> FrequencyRange:
    """Frequencies owned by the dyadic block ``k``."""
    k = int(k)
    if k == 0:
        return FrequencyRange(0, 0)
    a = abs(k)
    if k > 0:
        return FrequencyRange(1 << (a - 1), (1 << a) - 1)
    return FrequencyRange(-(1 << a) + 1, -(1 << (a - 1)))


def blocks_meeting(r: FrequencyRange) -> list:
    """Sorted block indices whose frequency sets intersect ``r``."""
    return list(range(int(block_index(r.lo)), int(block_index(r.hi)) + 1))


def _block_mask(r: FrequencyRange, k: int) -> np.ndarray:
    freqs = np.arange(r.lo, r.hi + 1)
    b = block_range(k)
    return (freqs >= b.lo) & (freqs <= b.hi)


def delta_block(f: TrigPoly, k: int) -> TrigPoly:
    """Dyadic block projection along the single axis of a 1D polynomial."""
    if f.dims != 1:
        raise ValueError("delta_block acts on 1D polynomials; use delta_block_nd")
    return delta_block_nd(f, (k,))


def delta_block_nd(f: TrigPoly, ks: Sequence[int]) -> TrigPoly:
    """Tensor block projection, one block index per axis.

    The result keeps the parent's frequency box with zeros outside the block.
    """
    ks = tuple(ks)
    if len(ks) != f.dims:
        raise ValueError(f"need {f.dims} block indices, got {len(ks)}")
    c = np.array(f.coeffs)
    for axis, (r, k) in enumerate(zip(f.ranges, ks)):
        shape = [1] * f.dims
        shape[axis] = r.width
        c = c * _block_mask(r, k).reshape(shape)
    return make_trig_poly(f.ranges, c)


def tensor_product(f: TrigPoly, g: TrigPoly) -> TrigPoly:
    """``(f (x) g)(x, y) = f(x) g(y)``; dimensions add."""
    return make_trig_poly(f.ranges + g.ranges, np.multiply.outer(f.coeffs, g.coeffs))
