"""Rescaled Jacobi elliptic functions.

The rescaled functions take an angle ``t`` and evaluate the classical Jacobi
function at ``2K(m) t / pi``, so that sn, cn have period ``2*pi`` and dn has
period ``pi`` for every parameter ``m = k**2 < 1``.  At ``m = 0`` they reduce
to ``sin``, ``cos`` and ``1``.

Parameters in ``[0, 1)`` are evaluated by descending Landen transformations
(the base level of the recursion is exactly the rescaled angle).  Negative
parameters are evaluated through the dual parameter ``m* = -m / (1 - m)``,
which lies in ``(0, 1)``, using

    sn(t; m) = k'_+ sd(t; m*),   cn(t; m) = cd(t; m*),   dn(t; m) = 1 / dn(t; m*)

with ``k'_+ = sqrt(1 - m*)``.  No rescaling factor appears because the
rescaled arguments of a parameter and of its dual agree.

Supported accuracy envelope: ``m`` in ``[-25, 0.99]``, absolute error below
1e-12 for ``|t| <= 4 pi``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend

__all__ = [
    "EllipticDomainError",
    "EllipticParameter",
    "agm",
    "complete_K",
    "dual_parameter",
    "as_parameter",
    "resc_sncndn",
    "resc_sn",
    "resc_cn",
    "resc_dn",
    "resc_sd",
    "resc_cd",
    "resc_sn_deriv",
    "resc_cn_deriv",
    "resc_dn_deriv",
    "resc_derivatives",
]

TWO_PI = 2.0 * math.pi
_LANDEN_STOP = 1e-17


class EllipticDomainError(ValueError):
    """Raised for parameters ``m >= 1`` or non-finite arguments."""


def agm(a: float, b: float) -> float:
    """Arithmetic-geometric mean of two positive numbers."""
    if a <= 0 or b <= 0:
        raise EllipticDomainError("agm needs positive arguments")
    for _ in range(64):
        if abs(a - b) <= 1e-16 * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def complete_K(m: float) -> float:
    """Complete elliptic integral of the first kind, parameter ``m = k**2 < 1``."""
    m = float(m)
    if not math.isfinite(m) or m >= 1.0:
        raise EllipticDomainError(f"complete_K needs m < 1, got {m}")
    return math.pi / (2.0 * agm(1.0, math.sqrt(1.0 - m)))


def _landen_chain(m: float) -> tuple:
    # descending moduli k_1, k_2, ... for 0 < m < 1
    if m == 0.0:
        return ()
    k = math.sqrt(m)
    kp = math.sqrt(1.0 - m)
    chain = []
    while k * k >= _LANDEN_STOP:
        k = (k / (1.0 + kp)) ** 2
        kp = 2.0 * math.sqrt(kp) / (1.0 + kp)
        chain.append(k)
    return tuple(chain)


@dataclass(frozen=True)
class EllipticParameter:
    """Elliptic parameter ``m = k**2`` together with its derived constants.

    ``kprime = sqrt(1 - m)``, ``m_dual = -m / (1 - m)`` (the Kramers-Wannier
    dual parameter) and ``scale = 2 K(m) / pi``.
    """

    m: float
    kprime: float = field(init=False)
    m_dual: float = field(init=False)
    scale: float = field(init=False)
    _chain: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        m = float(self.m)
        if not math.isfinite(m) or m >= 1.0:
            raise EllipticDomainError(f"elliptic parameter must satisfy m < 1, got {m}")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "kprime", math.sqrt(1.0 - m))
        object.__setattr__(self, "m_dual", -m / (1.0 - m) if m != 0.0 else 0.0)
        object.__setattr__(self, "scale", 2.0 * complete_K(m) / math.pi)
        # Landen chain of the parameter in [0, 1) used for evaluation
        object.__setattr__(self, "_chain", _landen_chain(m if m >= 0 else self.m_dual))

    @property
    def k(self) -> float:
        """Modulus; purely imaginary for ``m < 0`` so only ``|k|`` is returned."""
        return math.sqrt(abs(self.m))

    @property
    def chain(self) -> tuple:
        return self._chain


def as_parameter(p) -> EllipticParameter:
    if isinstance(p, EllipticParameter):
        return p
    return EllipticParameter(p)


def dual_parameter(p) -> EllipticParameter:
    """Parameter ``m* = -m / (1 - m)``; applying it twice returns ``m``."""
    return EllipticParameter(as_parameter(p).m_dual)


def _reduce(t):
    t = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t)):
        raise EllipticDomainError("rescaled elliptic functions need finite arguments")
    return t - TWO_PI * np.round(t / TWO_PI)


def _scalarize(x, like):
    return float(x) if np.ndim(like) == 0 else x


def resc_sncndn(t, p):
    """Return ``(sn, cn, dn)`` at angle(s) ``t`` for parameter ``p``."""
    p = as_parameter(p)
    tr = _reduce(t)
    s, c, d = _backend.landen_sncndn(tr, np.asarray(p.chain, dtype=float))
    if p.m < 0.0:
        # dual identities; k'_+ = 1 / kprime
        s, c, d = s / (d * p.kprime), c / d, 1.0 / d
    return _scalarize(s, t), _scalarize(c, t), _scalarize(d, t)


def resc_sn(t, p):
    return resc_sncndn(t, p)[0]


def resc_cn(t, p):
    return resc_sncndn(t, p)[1]


def resc_dn(t, p):
    return resc_sncndn(t, p)[2]


def resc_sd(t, p):
    s, _, d = resc_sncndn(t, p)
    return s / d


def resc_cd(t, p):
    _, c, d = resc_sncndn(t, p)
    return c / d


def resc_sn_deriv(t, p):
    p = as_parameter(p)
    _, c, d = resc_sncndn(t, p)
    return p.scale * c * d


def resc_cn_deriv(t, p):
    p = as_parameter(p)
    s, _, d = resc_sncndn(t, p)
    return -p.scale * s * d


def resc_dn_deriv(t, p):
    p = as_parameter(p)
    s, c, _ = resc_sncndn(t, p)
    return -p.scale * p.m * s * c


_KIND_MONOMIAL = {"sn": (1, 0, 0), "cn": (0, 1, 0), "dn": (0, 0, 1)}


def _differentiate(poly, scale, m):
    # poly: {(a, b, c): coef} standing for sum coef * sn^a cn^b dn^c
    out = {}

    def add(key, val):
        if val != 0.0:
            out[key] = out.get(key, 0.0) + val

    for (a, b, c), coef in poly.items():
        if a:
            add((a - 1, b + 1, c + 1), coef * scale * a)
        if b:
            add((a + 1, b - 1, c + 1), -coef * scale * b)
        if c:
            add((a + 1, b + 1, c - 1), -coef * scale * m * c)
    return out


def resc_derivatives(kind: str, t, p, order: int):
    """Derivatives ``f, f', ..., f^(order)`` of ``f = sn | cn | dn`` at ``t``.

    Returned as an array whose leading axis is the derivative order.
    Higher derivatives are polynomials in (sn, cn, dn); they are built
    symbolically from the first-derivative identities.
    """
    if kind not in _KIND_MONOMIAL:
        raise ValueError(f"kind must be one of sn, cn, dn; got {kind!r}")
    p = as_parameter(p)
    s, c, d = resc_sncndn(t, p)
    s, c, d = np.asarray(s), np.asarray(c), np.asarray(d)
    poly = {_KIND_MONOMIAL[kind]: 1.0}
    out = []
    for _ in range(order + 1):
        val = np.zeros_like(s)
        for (a, b, e), coef in poly.items():
            val = val + coef * s**a * c**b * d**e
        out.append(val)
        poly = _differentiate(poly, p.scale, p.m)
    return np.array(out)
