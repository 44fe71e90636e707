"""
Scalar functionals on grid signals: L^p Riemann sums, decreasing
rearrangements, two weak-L^1 formulas, L log^r L and the entropy integral.

Every grid sample is treated as constant on its cell, so on a full torus grid
with ``M`` samples each sample carries measure ``1/M``. The weak-type
functionals are exact for such step functions.
"""

from dataclasses import dataclass

import numpy as np
from scipy import special

from .torus import GridSignal

__all__ = [
    "RearrangedProfile",
    "lp_norm",
    "rearrange",
    "weak_l1",
    "weak_l1_dual",
    "llogr_weights",
    "llogr_norm",
    "entropy_functional",
    "weak_l1_tensor",
]


@dataclass(frozen=True, eq=False)
class RearrangedProfile:
    """Magnitudes sorted in decreasing order, each of measure ``total_measure / M_total``."""

    values: np.ndarray
    total_measure: float = 1.0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size == 0:
            raise ValueError("profile must be a nonempty 1D array")
        if not np.all(np.isfinite(v)) or np.any(v < 0):
            raise ValueError("profile values must be finite and nonnegative")
        if np.any(np.diff(v) > 0):
            raise ValueError("profile values must be sorted in decreasing order")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def M_total(self) -> int:
        return self.values.size

    @property
    def cell(self) -> float:
        return self.total_measure / self.values.size

    @classmethod
    def from_values(cls, values, total_measure: float = 1.0) -> "RearrangedProfile":
        v = np.abs(np.asarray(values)).ravel()
        return cls(-np.sort(-v), total_measure)


def _samples(g) -> np.ndarray:
    if isinstance(g, GridSignal):
        return np.asarray(g.values)
    v = np.asarray(g)
    if not np.all(np.isfinite(v)):
        raise ValueError("non-finite samples")
    return v


def lp_norm(g, p: float) -> float:
    """``((1/M^n) sum |g_j|^p)^(1/p)``; a quasinorm for ``p < 1``."""
    if not p > 0:
        raise ValueError("p must be positive")
    a = np.abs(_samples(g)).ravel()
    if p == 1:
        return float(np.mean(a))
    if p == 2:
        return float(np.sqrt(np.mean(a * a)))
    # factor out the max so huge samples do not overflow a^p
    top = a.max()
    if top == 0:
        return 0.0
    return float(top * np.mean((a / top) ** p) ** (1.0 / p))


def rearrange(g) -> RearrangedProfile:
    """Decreasing rearrangement of ``|g|`` over the full grid."""
    return RearrangedProfile.from_values(_samples(g))


def _profile(p) -> RearrangedProfile:
    return p if isinstance(p, RearrangedProfile) else rearrange(p)


def weak_l1(profile) -> float:
    """``sup_lambda lambda * mu(|g| > lambda)``, exact for step functions.

    The supremum is approached from below each sample level, which gives
    ``max_j values[j] * (j + 1) * cell``.
    """
    p = _profile(profile)
    j = np.arange(1, p.M_total + 1)
    return float(np.max(p.values * j) * p.cell)


def weak_l1_dual(profile) -> float:
    """``sup_E mu(E)^-1 ||g||_{L^{1/2}(E)}`` over unions of cells.

    For a fixed measure the best ``E`` is a super-level set, so only prefixes
    of the profile are scanned. The prefix of ``j`` cells scores at least
    ``values[j-1] * j * cell``; terms are clamped to that bound so that
    rounding in ``sqrt(v)^2`` can never put the result below :func:`weak_l1`.
    """
    p = _profile(profile)
    j = np.arange(1, p.M_total + 1)
    prefix = np.cumsum(np.sqrt(p.values)) * p.cell
    terms = np.maximum(prefix ** 2 / (j * p.cell), p.values * j * p.cell)
    return float(np.max(terms))


def _llogr_cumulative(t: np.ndarray, r: float, upper: bool) -> np.ndarray:
    # int_0^t ln(1/t')^r dt' = Gamma(r+1) Q(r+1, ln 1/t); upper=False returns
    # the complement int_t^1, = Gamma(r+1) P(r+1, ln 1/t)
    with np.errstate(divide="ignore"):
        ell = np.where(t > 0, -np.log(np.where(t > 0, t, 1.0)), np.inf)
    f = special.gammaincc if upper else special.gammainc
    return special.gamma(r + 1.0) * f(r + 1.0, ell)


def llogr_weights(M: int, r: float) -> np.ndarray:
    """Cell weights ``w_j = int_{j/M}^{(j+1)/M} ln(1/t)^r dt`` for ``j < M``.

    Computed in closed form through the regularized incomplete gamma
    function; each cell uses whichever tail avoids cancellation.
    """
    if not r > 0:
        raise ValueError("r must be positive")
    t = np.arange(M + 1) / M
    lo, hi = t[:-1], t[1:]
    head = _llogr_cumulative(hi, r, True) - _llogr_cumulative(lo, r, True)
    tail = _llogr_cumulative(lo, r, False) - _llogr_cumulative(hi, r, False)
    # Q small near t = 0, P small near t = 1
    with np.errstate(divide="ignore"):
        use_head = -np.log(hi) > r + 1.0
    return np.where(use_head, head, tail)


def llogr_norm(profile, r: float) -> float:
    """``int_0^1 g*(t) ln(1/t)^r dt`` with ``g*`` constant on each cell."""
    p = _profile(profile)
    if not r > 0:
        raise ValueError("r must be positive")
    if not np.isclose(p.total_measure, 1.0, rtol=0, atol=1e-12):
        raise ValueError("L log^r L norm is defined here on probability spaces only")
    return float(np.dot(p.values, llogr_weights(p.M_total, r)))


def entropy_functional(g, r: float) -> float:
    """``(1/M^n) sum |g_j| ln(1 + |g_j|)^r``."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    a = np.abs(_samples(g)).ravel()
    if r == 0:
        return float(np.mean(a))
    return float(np.mean(a * np.log1p(a) ** r))


def _row_counts(a, b, b_neg, v, strict, lo_idx, hi_idx):
    """Per row ``i``, the number of ``j`` with ``a_i * b_j > v`` (or ``>= v``).

    ``b`` is descending and ``b_neg = -b``. Answers are known to lie in
    ``[lo_idx, hi_idx]``. Float products are monotone in ``b_j`` for fixed
    ``a_i``, so each row's set is a prefix; the searchsorted guess is
    corrected against the true products.
    """
    nb = b.size
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(a > 0, -v / np.where(a > 0, a, 1.0), -np.inf)
    idx = np.searchsorted(b_neg, t, side="left" if strict else "right")
    idx = np.clip(idx, lo_idx, hi_idx)
    hit = (lambda x: x > v) if strict else (lambda x: x >= v)
    while True:
        up = (idx < hi_idx) & hit(a * b[np.minimum(idx, nb - 1)])
        down = (idx > lo_idx) & ~hit(a * b[np.maximum(idx - 1, 0)])
        if not (up.any() or down.any()):
            return idx
        idx = idx + up - down


class _LevelBand:
    """Cells with product in ``(lo, hi)``, tracked through the rows meeting it.

    ``c_gt[r]`` counts columns with product ``> lo`` and ``c_ge[r]`` those
    ``>= hi`` for active row ``rows[r]``; rows outside contribute ``fixed``
    cells to both counts.
    """

    __slots__ = ("lo", "hi", "rows", "c_gt", "c_ge", "fixed")

    def __init__(self, lo, hi, rows, c_gt, c_ge, fixed):
        keep = c_gt > c_ge
        self.lo, self.hi = lo, hi
        self.fixed = fixed + int(c_ge[~keep].sum())
        self.rows, self.c_gt, self.c_ge = rows[keep], c_gt[keep], c_ge[keep]

    @property
    def n_gt_lo(self) -> int:
        return self.fixed + int(self.c_gt.sum())

    @property
    def n_ge_hi(self) -> int:
        return self.fixed + int(self.c_ge.sum())


def weak_l1_tensor(pA, pB, enumerate_below: int = 1 << 22) -> float:
    """Weak-L^1 quasinorm of ``A(x) B(y)`` from the two 1D profiles.

    Exact for step functions without forming the ``M_A * M_B`` product.
    Levels are bisected geometrically; a band of levels ``(lo, hi]`` is
    pruned when ``hi * mu(> lo)`` cannot beat the best value found, and
    bands holding at most ``enumerate_below`` cells are enumerated.
    """
    pA, pB = _profile(pA), _profile(pB)
    a, b = pA.values, pB.values
    cell = pA.total_measure * pB.total_measure / (a.size * b.size)
    if a[0] == 0 or b[0] == 0:
        return 0.0

    b_neg = -b
    zeros = np.zeros(a.size, dtype=np.int64)
    full = np.full(a.size, b.size, dtype=np.int64)
    top = a[0] * b[0]
    c_top = _row_counts(a, b, b_neg, top, False, zeros, full)
    best = top * int(c_top.sum()) * cell
    # weak(A) * weak(B) is attained at some cell; used for pruning only, with
    # a margin so rounding can never discard the maximizer
    floor = max(best, weak_l1(pA) * weak_l1(pB) * (1 - 1e-12))
    # a level v scores v * mu(>= v) <= v, so only v > floor matters
    c_floor = _row_counts(a, b, b_neg, floor, True, c_top, full)
    stack = [_LevelBand(floor, top, np.arange(a.size), c_floor, c_top, 0)]
    while stack:
        band = stack.pop()
        n_gt, n_ge = band.n_gt_lo, band.n_ge_hi
        best = max(best, band.hi * n_ge * cell)
        # any level in (lo, hi] scores at most hi * #{> lo}
        if band.hi * n_gt * cell <= max(best, floor) or n_gt == n_ge:
            continue
        if n_gt - n_ge <= enumerate_below or np.nextafter(band.lo, np.inf) >= band.hi:
            lens = band.c_gt - band.c_ge
            offsets = np.cumsum(lens) - lens
            cols = np.arange(lens.sum()) + np.repeat(band.c_ge - offsets, lens)
            vals = np.repeat(a[band.rows], lens) * b[cols]
            levels, inverse_counts = np.unique(-vals, return_counts=True)
            at_least = np.cumsum(inverse_counts)
            best = max(best, float(np.max(-levels * (n_ge + at_least)) * cell))
            continue
        lo, hi = band.lo, band.hi
        mid = np.sqrt(lo * hi)
        if not lo < mid < hi:
            mid = 0.5 * (lo + hi)
        ra = a[band.rows]
        c_mid_ge = _row_counts(ra, b, b_neg, mid, False, band.c_ge, band.c_gt)
        c_mid_gt = _row_counts(ra, b, b_neg, mid, True, band.c_ge, c_mid_ge)
        stack.append(_LevelBand(lo, mid, band.rows, band.c_gt, c_mid_ge, band.fixed))
        stack.append(_LevelBand(mid, hi, band.rows, c_mid_gt, band.c_ge, band.fixed))
    return float(best)
