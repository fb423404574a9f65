"""The curve gamma_R(t) in R^{2n} and its derivatives.

Coordinate ``p`` of the curve is

    gamma_p(t) = Pi_p(t) * prod_{j in J~_p} sn(t - alpha~_j),
    Pi_p(t)    = prod_{j=1}^{2 floor(p/2)} dn(t - alpha~_j) / sqrt(k')

with the lifted index set ``J~_p`` (representatives in ``(p, p + 2n)``).
Because ``sn(u + pi) = -sn(u)`` the lifted angles only contribute signs, so
the evaluation below works with base indices plus a sign per coordinate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .elliptic import as_parameter, resc_derivatives, resc_sncndn
from .region import Region, lifted_j_set, require_valid

__all__ = [
    "CurveSample",
    "CurveLayout",
    "layout",
    "gamma",
    "gamma_values",
    "gamma_lifted",
    "pi_product",
    "gamma_derivative",
]


@dataclass(frozen=True)
class CurveSample:
    t: float
    values: np.ndarray


@dataclass(frozen=True)
class CurveLayout:
    """Per-coordinate factor bookkeeping for a region (0-based base indices)."""

    n: int
    sn_index: tuple  # sn_index[p-1]: base indices of the sn factors of gamma_p
    sign: np.ndarray  # (-1)^(number of lifted representatives beyond 2n)
    dn_count: tuple  # 2 * floor(p / 2)


@lru_cache(maxsize=256)
def _layout(tau: tuple, n: int) -> CurveLayout:
    from .region import Involution

    # J~_p depends only on tau; build a throwaway region with dummy angles
    region = Region(Involution(n, tau), tuple([0.0] * (2 * n)))
    size = 2 * n
    sn_index, sign, dn_count = [], [], []
    for p in range(1, size + 1):
        reps = lifted_j_set(region, p)
        sn_index.append(tuple((j - 1) % size for j in reps))
        sign.append(-1.0 if sum(1 for j in reps if j > size) % 2 else 1.0)
        dn_count.append(2 * (p // 2))
    return CurveLayout(n, tuple(sn_index), np.array(sign), tuple(dn_count))


def layout(region: Region) -> CurveLayout:
    return _layout(region.tau, region.n)


def _factor_values(region: Region, param, t):
    t = np.asarray(t, dtype=float)
    args = t[..., None] - np.asarray(region.alpha)
    s, _, d = resc_sncndn(args, param)
    return np.asarray(s), np.asarray(d)


def gamma_values(region: Region, p, ts) -> np.ndarray:
    """Curve values at every ``t`` in ``ts``; shape ``ts.shape + (2n,)``."""
    param = as_parameter(p)
    lay = layout(region)
    s, d = _factor_values(region, param, ts)
    dn_scaled = d / math.sqrt(param.kprime)
    cum = np.cumprod(dn_scaled, axis=-1)
    out = np.empty(s.shape)
    for q in range(region.size):
        val = lay.sign[q] * np.prod(s[..., list(lay.sn_index[q])], axis=-1)
        c = lay.dn_count[q]
        if c:
            val = val * cum[..., c - 1]
        out[..., q] = val
    return out


def gamma(region: Region, p, t: float) -> CurveSample:
    """The curve at a single ``t``."""
    return CurveSample(float(t), gamma_values(region, p, float(t)))


def pi_product(region: Region, p, q: int, t, form: str = "dn"):
    """``Pi_q(t)`` for ``q`` in ``[1, 2n]``.

    ``form="dn"`` multiplies ``dn / sqrt(k')`` over ``j <= 2 floor(q/2)``;
    ``form="ratio"`` uses ``prod dn(t - alpha_{2j}) / dn(t - alpha~_{tau(2j-1)})``.
    """
    param = as_parameter(p)
    t = np.asarray(t, dtype=float)
    half = q // 2
    if form == "dn":
        out = np.ones_like(t)
        for j in range(1, 2 * half + 1):
            out = out * resc_sncndn(t - region.a(j), param)[2] / math.sqrt(param.kprime)
        return out
    if form == "ratio":
        lv = region.lifted
        out = np.ones_like(t)
        for j in range(1, half + 1):
            num = resc_sncndn(t - region.a(2 * j), param)[2]
            den = resc_sncndn(t - lv.alpha_lift(lv.tau_lift(2 * j - 1)), param)[2]
            out = out * num / den
        return out
    raise ValueError(f"unknown form {form!r}")


def gamma_lifted(region: Region, p, q: int, t) -> float:
    """``gamma_q(t)`` for any integer ``q``, straight from the lifted formula.

    ``Pi_q`` for ``2 floor(q/2) < 0`` is the reciprocal product over
    ``2 floor(q/2) < j <= 0``, the convention that keeps the cumulative
    product consistent across the seam.
    """
    param = as_parameter(p)
    lv = region.lifted
    size = region.size
    rk = math.sqrt(param.kprime)
    upper = 2 * (q // 2)
    val = 1.0
    if upper >= 0:
        for j in range(1, upper + 1):
            val *= resc_sncndn(t - lv.alpha_lift(j), param)[2] / rk
    else:
        for j in range(upper + 1, 1):
            val /= resc_sncndn(t - lv.alpha_lift(j), param)[2] / rk
    # J~_q = { tau~(j) : j < q < tau~(j) }; any such j lies in (q - 2n, q)
    for j in range(q - size + 1, q):
        tj = lv.tau_lift(j)
        if tj > q:
            val *= resc_sncndn(t - lv.alpha_lift(tj), param)[0]
    return val


def _taylor_mul(a, b, order):
    out = np.zeros(order + 1)
    for i in range(order + 1):
        out[i:] += a[i] * b[: order + 1 - i]
    return out


def gamma_derivative(region: Region, p, order: int, t: float) -> np.ndarray:
    """``order``-th derivative of every curve coordinate at ``t``.

    Each coordinate is a constant times a product of shifted sn and dn
    factors, so the derivative is assembled by multiplying truncated Taylor
    series of the factors (analytic, no finite differences).
    """
    param = as_parameter(p)
    lay = layout(region)
    size = region.size
    fact = np.array([math.factorial(r) for r in range(order + 1)], dtype=float)
    sn_ser, dn_ser = [], []
    for j in range(size):
        u = t - region.alpha[j]
        sn_ser.append(np.asarray(resc_derivatives("sn", u, param, order)) / fact)
        dn_ser.append(np.asarray(resc_derivatives("dn", u, param, order)) / fact)
    out = np.empty(size)
    rk = math.sqrt(param.kprime)
    for q in range(size):
        ser = np.zeros(order + 1)
        ser[0] = lay.sign[q] / rk ** lay.dn_count[q]
        for j in lay.sn_index[q]:
            ser = _taylor_mul(ser, sn_ser[j], order)
        for j in range(lay.dn_count[q]):
            ser = _taylor_mul(ser, dn_ser[j], order)
        out[q] = ser[order] * fact[order]
    return out
