"""Shared quadrature helpers used by the analytic modules."""

from __future__ import annotations

import numpy as np


class IntegrationError(RuntimeError):
    """A numerical integral failed its convergence check."""


def gauss_legendre_01(k: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights shifted to (0, 1)."""
    nodes, weights = np.polynomial.legendre.leggauss(k)
    return 0.5 * (nodes + 1.0), 0.5 * weights


def halfline_nodes(
    k: int, scale: float, lower: float = 0.0
) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for integrals over (lower, inf).

    Uses r = lower + scale*t/(1-t) with Gauss-Legendre points t in (0, 1);
    ``scale`` should match the integrand's decay length.
    """
    t, w = gauss_legendre_01(k)
    r = lower + scale * t / (1.0 - t)
    jac = scale / (1.0 - t) ** 2
    return r, w * jac


def tan_halfline_nodes(q: int, scale: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Chebyshev-based nodes for (0, inf) via the x = tan(pi/4*(t+1)) map."""
    idx = np.arange(1, q + 1)
    ct = np.cos((2.0 * idx - 1.0) * np.pi / (2.0 * q))
    st = np.sin((2.0 * idx - 1.0) * np.pi / (2.0 * q))
    arg = 0.25 * np.pi * ct + 0.25 * np.pi
    x = np.tan(arg)
    w = np.pi**2 * st / (4.0 * q * np.cos(arg) ** 2)
    return scale * x, scale * w
