"""
Gauss-Legendre quadrature with a node-doubling convergence check, and the
kernel integrals of the rough projection ``P_N`` applied to the atom ``a_N``
on the real line.
"""

import numpy as np

__all__ = [
    "QuadratureError",
    "ALLOWED_NODES",
    "gauss_quadrature",
    "converged_quadrature",
    "euclidean_atom_terms",
    "euclidean_atom_direct",
]

ALLOWED_NODES = (16, 32, 64, 128)


class QuadratureError(ArithmeticError):
    """Raised when doubling the node count moves the result by more than the tolerance."""


def gauss_quadrature(integrand, interval, nodes: int = 64):
    """Gauss-Legendre rule on ``interval = (a, b)``.

    ``integrand`` is called once with the 1D array of nodes and may return an
    array whose leading axis runs over the nodes; trailing axes are kept, so
    many integrals sharing one variable can be done in a single call.
    """
    if nodes not in ALLOWED_NODES:
        raise ValueError(f"nodes must be one of {ALLOWED_NODES}")
    a, b = interval
    t, w = np.polynomial.legendre.leggauss(nodes)
    half = 0.5 * (b - a)
    y = np.asarray(integrand(a + half * (t + 1.0)))
    w = w.reshape((-1,) + (1,) * (y.ndim - 1))
    return half * np.sum(w * y, axis=0)


def converged_quadrature(integrand, interval, nodes: int = 64, tol: float = 1e-10):
    """Quadrature at ``nodes`` and ``2 * nodes``; returns ``(value, change)``.

    Raises :class:`QuadratureError` if the change exceeds ``tol`` anywhere.
    """
    if 2 * nodes not in ALLOWED_NODES:
        raise ValueError(f"2 * nodes must be one of {ALLOWED_NODES}")
    coarse = gauss_quadrature(integrand, interval, nodes)
    fine = gauss_quadrature(integrand, interval, 2 * nodes)
    change = np.max(np.abs(fine - coarse))
    if not change < tol:
        raise QuadratureError(f"node doubling changed the integral by {change:.3e} (tol {tol:.1e})")
    return fine, float(change)


def _carrier_phase(N: int, x, multiple: int) -> np.ndarray:
    # exp(2 pi i multiple * 2^(N-1) x) with the integer part removed first
    u = np.mod(multiple * (2.0 ** (N - 1)) * np.asarray(x, dtype=float), 1.0)
    return np.exp(2j * np.pi * u)


def euclidean_atom_terms(N: int, x, nodes: int = 64, tol: float = 1e-10):
    """The four pieces of ``x * P_N(a_N)(x)`` on the real line.

    With ``c = 2^(N-1)``, ``h = 1/c`` and ``y = h t``, the convolution of the
    atom against the kernel of ``P_N`` splits as ``I_1 + I_2 + I_3 + I_4``,
    each a phase times an integral of ``exp(2 pi i m t) / (x - h t)`` over
    ``t`` in ``[0, 1]`` with ``m`` in ``{0, -1, 2, 3}``.

    Returns
    -------
    terms : ndarray, shape (4, len(x))
        ``x * I_j(x)`` for ``j = 1..4``.
    change : float
        Largest node-doubling change over all integrals.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    h = 2.0 ** -(N - 1)
    s = h / x
    freqs = np.array([0, -1, 2, 3])

    def integrand(t):
        # shape (nodes, 4, len(x)); x / (x - h t) = 1 / (1 - s t)
        wave = np.exp(2j * np.pi * freqs[None, :] * t[:, None])
        return wave[:, :, None] / (1.0 - s[None, None, :] * t[:, None, None])

    integrals, change = converged_quadrature(integrand, (0.0, 1.0), nodes, tol)
    pref = np.stack(
        [
            -_carrier_phase(N, x, 1),
            _carrier_phase(N, x, 2),
            _carrier_phase(N, x, -1),
            -_carrier_phase(N, x, -2),
        ]
    ) / (2j * np.pi)
    return pref * integrals, change


def euclidean_atom_direct(N: int, x, nodes: int = 64, tol: float = 1e-10):
    """``x * P_N(a_N)(x)`` by quadrature of the convolution with the real kernel.

    ``P_N`` has kernel ``(sin(4 pi c z) - sin(2 pi c z)) / (pi z)``; this
    route never splits the integral, so it checks the sum of the four terms.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    h = 2.0 ** -(N - 1)
    s = h / x
    u = np.mod((2.0 ** (N - 1)) * x, 1.0)

    def integrand(t):
        t = t[:, None]
        # c (x - h t) = c x - t; only its fractional part matters
        phase = u[None, :] - t
        kernel = (np.sin(4 * np.pi * phase) - np.sin(2 * np.pi * phase)) / (np.pi * (1.0 - s[None, :] * t))
        return np.exp(2j * np.pi * t) * kernel

    value, change = converged_quadrature(integrand, (0.0, 1.0), nodes, tol)
    return value, change
