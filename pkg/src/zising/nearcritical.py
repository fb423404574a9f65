"""Small-``k`` behaviour of the curve and the critical factorisation.

To first order in ``m = k**2``

    gamma_p(t, m) = gamma_p(t, 0) + m * Gamma2_p(t) + O(m^2),
    Gamma2_p(t)   = gamma_p(t, 0) / 4 * [ sum_{j in J_p} cos^2(t - alpha_j)
                                          + sum_{j <= 2 floor(p/2)} cos(2 (t - alpha_j)) ],

using ``sn(u) = sin u (1 + m/4 cos^2 u)`` and ``dn(u) / sqrt(k') = 1 + m/4 cos 2u``.

At ``m = 0`` every coordinate is a trigonometric polynomial of degree
``n - 1``, which gives ``Gamma(0) = V F`` with a Vandermonde-like ``V``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .correlations import basis_rows
from .curve import gamma_values
from .region import Region, RegionError, directions_distinct, lifted_j_set, require_valid

__all__ = [
    "ExpansionSample",
    "gamma_expansion",
    "critical_V_matrix",
    "critical_F_matrix",
    "fourier_F_matrix",
    "critical_B_matrix",
    "critical_factorization_checks",
]


@dataclass(frozen=True)
class ExpansionSample:
    t: float
    zeroth: np.ndarray
    second_order: np.ndarray  # coefficient of m = k^2


def gamma_expansion(region: Region, t: float, dn_weight: float = 1.0) -> ExpansionSample:
    """Zeroth and first order (in ``m``) terms of the curve at ``t``.

    ``dn_weight`` scales the cos(2u) sum; 1 is the correct value, other
    values exist only so the tests can show they break the O(m^2) decay.
    """
    t = float(t)
    lv = region.lifted
    zeroth = gamma_values(region, 0.0, t)
    second = np.empty(region.size)
    for p in range(1, region.size + 1):
        bracket = sum(math.cos(t - lv.alpha_lift(j)) ** 2 for j in lifted_j_set(region, p))
        bracket += dn_weight * sum(math.cos(2.0 * (t - region.a(j))) for j in range(1, 2 * (p // 2) + 1))
        second[p - 1] = 0.25 * zeroth[p - 1] * bracket
    return ExpansionSample(t, zeroth, second)


def critical_V_matrix(ts, n: int) -> np.ndarray:
    """``V[i, l] = (-cos t_i)^(l-1) sin(t_i)^(n-l)``, ``l = 1..n``."""
    ts = np.asarray(ts, dtype=float)
    l = np.arange(1, n + 1)
    return (-np.cos(ts))[:, None] ** (l - 1) * np.sin(ts)[:, None] ** (n - l)


def _subset_size(convention: str, l: int, n: int) -> int:
    if convention == "l-1":
        return l - 1
    if convention == "l+1":
        return l + 1
    if convention == "n-l":
        return n - l
    raise ValueError(f"unknown subset convention {convention!r}")


def critical_F_matrix(region: Region, convention: str = "l-1") -> np.ndarray:
    """``F[l, p] = sum_{H in J_p, |H| = l-1} prod_H sin(alpha_j) prod_{J_p - H} cos(alpha_j)``.

    Lifted angles are used so the sign of each coordinate comes out right.
    """
    n = region.n
    lv = region.lifted
    F = np.zeros((n, region.size))
    for p in range(1, region.size + 1):
        angles = [lv.alpha_lift(j) for j in lifted_j_set(region, p)]
        for l in range(1, n + 1):
            size = _subset_size(convention, l, n)
            if not 0 <= size <= len(angles):
                continue
            total = 0.0
            for H in combinations(range(len(angles)), size):
                term = 1.0
                for idx, a in enumerate(angles):
                    term *= math.sin(a) if idx in H else math.cos(a)
                total += term
            F[l - 1, p - 1] = total
    return F


def fourier_F_matrix(region: Region) -> np.ndarray:
    """Complex ``n x 2n`` matrix of coefficients of ``e^{i (n + 1 - 2l) t}`` in ``gamma(t, 0)``."""
    n = region.n
    N = 8 * n
    ts = 2.0 * math.pi * np.arange(N) / N
    coeffs = np.fft.fft(gamma_values(region, 0.0, ts), axis=0) / N
    return np.array([coeffs[(n + 1 - 2 * l) % N] for l in range(1, n + 1)])


def critical_B_matrix(n: int) -> np.ndarray:
    """``B[l, j] = z_l^(j-1)`` with ``z_l = exp(i pi (2l - n - 1) / (2n))``."""
    z = np.exp(1j * math.pi * (2 * np.arange(1, n + 1) - n - 1) / (2 * n))
    return z[:, None] ** np.arange(2 * n)[None, :]


def critical_factorization_checks(region: Region, convention: str = "l-1") -> dict:
    """Residuals of ``Gamma(0) = V F`` and of ``F_fourier = D B``.

    ``D`` is read off the first column of the Fourier matrix.  The second
    identity holds for regular polygons.
    """
    require_valid(region)
    if not directions_distinct(region):
        raise RegionError("critical factorisation needs distinct directions")
    n = region.n
    ts = np.array([region.a(j) for j in basis_rows(region)])
    gamma0 = gamma_values(region, 0.0, ts)
    vf = critical_V_matrix(ts, n) @ critical_F_matrix(region, convention)
    Phi = fourier_F_matrix(region)
    B = critical_B_matrix(n)
    D = Phi[:, 0] / B[:, 0]
    db = Phi - D[:, None] * B
    return {
        "vf": float(np.max(np.abs(gamma0 - vf))),
        "db": float(np.max(np.abs(db))),
        "db_imag": float(np.max(np.abs(db.imag))),
        "D": D,
    }
