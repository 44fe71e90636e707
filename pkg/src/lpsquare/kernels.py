"""
Extremal kernels and atoms: Fejer, de la Vallee Poussin, the modulated
interval atoms ``a_N`` and a discrete rectangle-atom checker.
"""

from dataclasses import dataclass

import numpy as np

from .torus import (
    GridSignal,
    block_range,
    evaluate_on_grid,
    make_trig_poly,
)

__all__ = [
    "fejer",
    "vallee_poussin",
    "AtomSpec",
    "atom_spec",
    "periodic_atom_coeff",
    "periodic_atom_poly",
    "periodic_atom_block",
    "sample_periodic_atom",
    "AtomValidationReport",
    "validate_rectangle_atom",
]

MIN_ATOM_N = 3
MAX_ATOM_N = 24


def _fejer_coeffs(n: int, freqs: np.ndarray) -> np.ndarray:
    return np.clip(1.0 - np.abs(freqs) / (n + 1.0), 0.0, None)


def fejer(n: int):
    """Fejer kernel of order ``n``: coefficients ``1 - |j|/(n+1)`` for ``|j| <= n``."""
    n = int(n)
    if n < 0:
        raise ValueError("Fejer order must be nonnegative")
    freqs = np.arange(-n, n + 1)
    return make_trig_poly([(-n, n)], _fejer_coeffs(n, freqs))


def vallee_poussin(n: int):
    """de la Vallee Poussin kernel ``V_n = 2 K_{2n+1} - K_n``.

    Coefficients equal 1 on ``|j| <= n + 1`` and decay linearly to 0 at
    ``|j| = 2n + 2``.
    """
    n = int(n)
    if n < 0:
        raise ValueError("de la Vallee Poussin order must be nonnegative")
    d = 2 * n + 1
    freqs = np.arange(-d, d + 1)
    # 2 K^_{2n+1} - K^_n with an integer numerator, so the flat part is exactly 1
    c = np.minimum(n + 1, 2 * n + 2 - np.abs(freqs)) / (n + 1.0)
    return make_trig_poly([(-d, d)], c)


@dataclass(frozen=True)
class AtomSpec:
    """``a_N(x) = 2^(N-1) exp(2 pi i 2^(N-1) x)`` on ``[0, 2^-(N-1))``."""

    N: int

    @property
    def carrier(self) -> int:
        return 1 << (self.N - 1)

    @property
    def support(self) -> float:
        return 2.0 ** -(self.N - 1)

    @property
    def amplitude(self) -> float:
        return float(self.carrier)


def atom_spec(N: int) -> AtomSpec:
    N = int(N)
    if not MIN_ATOM_N <= N <= MAX_ATOM_N:
        raise ValueError(f"atom order N must lie in [{MIN_ATOM_N}, {MAX_ATOM_N}], got {N}")
    return AtomSpec(N)


def periodic_atom_coeff(N: int, m):
    """Exact Fourier coefficients of ``a_N`` at frequencies ``m`` (vectorized).

    ``a_N^(m) = c (exp(2 pi i (c - m) / c) - 1) / (2 pi i (c - m))`` with
    ``c = 2^(N-1)``, and 1 at ``m = c``.
    """
    spec = atom_spec(N)
    c = spec.carrier
    m = np.asarray(m)
    d = (c - m).astype(float)
    # exp(2 pi i d / c) - 1 = 2i sin(pi d / c) exp(i pi d / c): no cancellation
    theta = np.pi * d / c
    safe = np.where(d == 0, 1.0, d)
    val = c * np.sin(theta) * np.exp(1j * theta) / (np.pi * safe)
    out = np.where(d == 0, 1.0 + 0j, val)
    # d a nonzero multiple of c: exact zero (full cycles)
    out = np.where((d != 0) & (np.mod(d, c) == 0), 0j, out)
    return out if out.ndim else complex(out)


def periodic_atom_poly(N: int, freq_range):
    """Truncation of ``a_N`` to an integer frequency range, as a TrigPoly."""
    lo, hi = int(freq_range[0]), int(freq_range[1])
    return make_trig_poly([(lo, hi)], periodic_atom_coeff(N, np.arange(lo, hi + 1)))


def periodic_atom_block(N: int, k: int, M: int) -> GridSignal:
    """Samples of the dyadic block ``Delta_k(a_N)`` on the grid ``j / M``."""
    k = int(k)
    if M < 2 ** (abs(k) + 1):
        raise ValueError(f"grid size {M} too small for block {k}; need >= {2 ** (abs(k) + 1)}")
    return evaluate_on_grid(periodic_atom_poly(N, block_range(k)), M)


def sample_periodic_atom(N: int, M: int) -> GridSignal:
    """Point samples of ``a_N`` at ``j / M``."""
    spec = atom_spec(N)
    x = np.arange(M) / M
    inside = x < spec.support
    vals = np.where(inside, spec.amplitude * np.exp(2j * np.pi * spec.carrier * x), 0.0)
    return GridSignal(vals)


@dataclass(frozen=True)
class AtomValidationReport:
    support_ok: bool
    l2_ok: bool
    cancel_x_ok: bool
    cancel_y_ok: bool
    support_violation: float
    l2_violation: float
    cancel_x_violation: float
    cancel_y_violation: float

    @property
    def ok(self) -> bool:
        return self.support_ok and self.l2_ok and self.cancel_x_ok and self.cancel_y_ok


def validate_rectangle_atom(g: GridSignal, rect, tol: float = 1e-6) -> AtomValidationReport:
    """Check the discrete rectangle-atom conditions for a grid signal.

    ``rect`` holds one half-open sample index interval per axis, e.g.
    ``((i0, i1), (j0, j1))``. Integrals are Riemann sums with cell measure
    ``1/M`` per axis. The L^2 condition is checked as
    ``||g||_2 <= |R|^(-1/2) (1 + tol)``; the others as absolute violations.

    A 1D signal is checked as an interval atom (support, L^2 bound, mean
    zero); its single cancellation condition fills both cancellation fields.
    """
    v = np.asarray(g.values)
    rect = tuple(tuple(int(i) for i in r) for r in rect)
    if v.ndim not in (1, 2) or len(rect) != v.ndim:
        raise ValueError("need a 1D or 2D signal with one index interval per axis")
    for (i0, i1), m in zip(rect, v.shape):
        if not 0 <= i0 < i1 <= m:
            raise ValueError("rectangle lies outside the grid")
    cellm = 1.0 / v.size

    inside = tuple(slice(i0, i1) for i0, i1 in rect)
    outside = np.ones(v.shape, dtype=bool)
    outside[inside] = False
    support_violation = float(np.max(np.abs(v[outside]), initial=0.0))

    area = float(np.prod([(i1 - i0) / m for (i0, i1), m in zip(rect, v.shape)]))
    l2 = float(np.sqrt(np.sum(np.abs(v) ** 2) * cellm))
    bound = area ** -0.5
    l2_violation = max(0.0, l2 - bound)

    inner = v[inside]
    if v.ndim == 1:
        cancel_x = cancel_y = float(abs(inner.sum()) / v.shape[0])
    else:
        Mx, My = v.shape
        # integral over x' in I for each y in J, and over y' in J for each x in I
        cancel_x = float(np.max(np.abs(inner.sum(axis=0) / Mx)))
        cancel_y = float(np.max(np.abs(inner.sum(axis=1) / My)))

    return AtomValidationReport(
        support_ok=support_violation <= tol,
        l2_ok=l2 <= bound * (1.0 + tol),
        cancel_x_ok=cancel_x <= tol,
        cancel_y_ok=cancel_y <= tol,
        support_violation=support_violation,
        l2_violation=l2_violation,
        cancel_x_violation=cancel_x,
        cancel_y_violation=cancel_y,
    )
