"""Boundary correlation matrices from the curve gamma_R.

The row span of the doubled matrix ``M~`` equals the span of the curve, so
any ``n`` independent curve vectors ``A`` give ``M~ = (A K_n)^{-1} A`` and the
correlations are read off the odd columns of ``M~``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .curve import gamma_derivative, gamma_values
from .elliptic import as_parameter, dual_parameter, resc_sncndn
from .region import (
    Region,
    RegionError,
    apply_descent,
    crossings,
    directions_distinct,
    j_set,
    multiplicity,
    require_valid,
    shift_labels,
    supp,
    tau_descents,
)

__all__ = [
    "NumericalError",
    "ConditionWarning",
    "RangeWarning",
    "TransferMatrix",
    "DoubledMatrix",
    "CorrelationMatrix",
    "basis_rows",
    "basis_matrix",
    "alternating_basis",
    "k_matrix",
    "doubled_matrix",
    "extract_correlations",
    "correlation_matrix",
    "transfer_matrix",
    "corner_factor",
    "descent_transport_residual",
    "descent_transport_check",
    "descent_chain",
    "transport_composition_check",
    "discrete_derivative",
    "dual_gamma",
    "shift_S",
    "duality_constant",
    "regular_duality_product",
    "dual_correlation_matrix",
    "duality_checks",
    "sample_matrix",
    "numerical_rank",
    "orthonormal_rows",
    "projector_distance",
    "principal_angles",
]

RANK_TOL = 1e-10
COND_WARN = 1e12
RANGE_TOL = 1e-9
SINGULAR_TOL = 1e-15


class NumericalError(ArithmeticError):
    """Singular or numerically unusable linear algebra."""


class ConditionWarning(RuntimeWarning):
    """``A K_n`` is badly conditioned."""


class RangeWarning(RuntimeWarning):
    """Correlations outside ``[0, 1]``; ferromagnetic couplings should not produce them."""


# ---------------------------------------------------------------- subspaces

def numerical_rank(mat, tol: float = RANK_TOL) -> int:
    s = np.linalg.svd(np.atleast_2d(mat), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))


def orthonormal_rows(mat, rank: int | None = None) -> np.ndarray:
    """Orthonormal basis (as rows) of the row span of ``mat``."""
    mat = np.atleast_2d(np.asarray(mat, dtype=float))
    _, s, vt = np.linalg.svd(mat, full_matrices=False)
    r = numerical_rank(mat) if rank is None else rank
    return vt[:r]


def projector_distance(a, b) -> float:
    """Frobenius distance between orthogonal projectors onto the row spans."""
    qa, qb = orthonormal_rows(a), orthonormal_rows(b)
    return float(np.linalg.norm(qa.T @ qa - qb.T @ qb))


def principal_angles(a, b) -> np.ndarray:
    """Principal angles (radians, ascending) between two row spans."""
    qa, qb = orthonormal_rows(a), orthonormal_rows(b)
    s = np.linalg.svd(qa @ qb.T, compute_uv=False)
    return np.sort(np.arccos(np.clip(s, -1.0, 1.0)))


def sample_matrix(region: Region, p, count: int | None = None, rng=None) -> np.ndarray:
    """Curve values at ``count`` (default ``4n``) random angles, one per row."""
    rng = np.random.default_rng(0) if rng is None else rng
    count = 4 * region.n if count is None else count
    ts = rng.uniform(-math.pi, math.pi, count)
    return gamma_values(region, p, ts)


# ------------------------------------------------------------------- bases

def basis_rows(region: Region) -> tuple:
    """Indices ``{1} u J_1`` in increasing order."""
    return tuple(sorted({1, *j_set(region, 1)}))


def _check_rank(mat, n, what):
    s = np.linalg.svd(mat, compute_uv=False)
    if s[0] == 0.0 or s[-1] / s[0] <= RANK_TOL or mat.shape[0] < n:
        raise NumericalError(f"{what} is rank deficient; singular values {s.tolist()}")


def basis_matrix(region: Region, p) -> np.ndarray:
    """Rows ``gamma_R(alpha_j)`` for ``j`` in ``{1} u J_1``.

    Needs pairwise distinct directions; otherwise use :func:`alternating_basis`.
    """
    require_valid(region)
    if not directions_distinct(region):
        raise RegionError("repeated directions: use alternating_basis for this region")
    ts = np.array([region.a(j) for j in basis_rows(region)])
    A = gamma_values(region, p, ts)
    _check_rank(A, region.n, "basis matrix")
    return A


def alternating_basis(region: Region, p) -> np.ndarray:
    """Rows ``gamma^(m_j)(alpha_j)`` restricted to ``supp(j)``, ``j`` in ``{1} u J_1``.

    ``m_j`` counts the chords in ``J_j`` pointing in the direction of ``v_j``.
    Valid for every region, alternating or not.
    """
    require_valid(region)
    rows = []
    for j in basis_rows(region):
        u = gamma_derivative(region, p, multiplicity(region, j), region.a(j))
        mask = np.zeros(region.size, dtype=bool)
        mask[[q - 1 for q in supp(region, j)]] = True
        rows.append(np.where(mask, u, 0.0))
    U = np.array(rows)
    _check_rank(U, region.n, "alternating basis")
    return U


def k_matrix(n: int) -> np.ndarray:
    """The ``2n x n`` matrix with ``1/2`` at rows ``2i-1, 2i`` of column ``i``."""
    if n < 1:
        raise ValueError("n must be positive")
    K = np.zeros((2 * n, n))
    for i in range(n):
        K[2 * i, i] = K[2 * i + 1, i] = 0.5
    return K


# ------------------------------------------------------- doubled matrices

@dataclass(frozen=True)
class DoubledMatrix:
    entries: np.ndarray  # n x 2n
    condition: float

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def structure_residual(self) -> float:
        """Largest violation of the row-pair pattern of a doubled matrix."""
        e = self.entries
        worst = 0.0
        for i in range(self.n):
            for j in range(self.n):
                a, b = e[i, 2 * j], e[i, 2 * j + 1]
                if i == j:
                    worst = max(worst, abs(a - 1.0), abs(b - 1.0))
                else:
                    worst = max(worst, abs(a + b))
        return worst


@dataclass(frozen=True)
class CorrelationMatrix:
    entries: np.ndarray  # n x n
    doubled: DoubledMatrix
    basis: str  # "distinct" | "alternating"

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def symmetry_residual(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.T)))

    def diagonal_residual(self) -> float:
        return float(np.max(np.abs(np.diag(self.entries) - 1.0)))


def doubled_matrix(A) -> DoubledMatrix:
    """``M~ = (A K_n)^{-1} A`` for any basis ``A`` of the curve span."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    AK = A @ k_matrix(n)
    s = np.linalg.svd(AK, compute_uv=False)
    cond = float(s[0] / s[-1]) if s[-1] > 0 else math.inf
    if not math.isfinite(cond) or s[-1] <= SINGULAR_TOL * s[0]:
        raise NumericalError(f"A K_n is numerically singular (condition estimate {cond:.3e})")
    if cond > COND_WARN:
        warnings.warn(f"A K_n condition number {cond:.3e}", ConditionWarning, stacklevel=2)
    return DoubledMatrix(np.linalg.solve(AK, A), cond)


def extract_correlations(doubled) -> np.ndarray:
    """Correlations from a doubled matrix: ``m_ij = (-1)^(i+j+[i<j]) m~_{i,2j-1}``."""
    e = doubled.entries if isinstance(doubled, DoubledMatrix) else np.asarray(doubled)
    n = e.shape[0]
    M = np.eye(n)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                sign = (-1) ** (i + j + (1 if i < j else 0))
                M[i - 1, j - 1] = sign * e[i - 1, 2 * j - 2]
    return M


def correlation_matrix(region: Region, p, basis: str = "auto") -> CorrelationMatrix:
    """Boundary spin correlations ``<sigma_{b_i} sigma_{b_j}>`` of the region."""
    if basis == "auto":
        basis = "distinct" if directions_distinct(region) else "alternating"
    if basis == "distinct":
        A = basis_matrix(region, p)
    elif basis == "alternating":
        A = alternating_basis(region, p)
    else:
        raise ValueError(f"unknown basis {basis!r}")
    D = doubled_matrix(A)
    M = extract_correlations(D)
    off = M[~np.eye(region.n, dtype=bool)]
    if off.size and (off.min() < -RANGE_TOL or off.max() > 1.0 + RANGE_TOL):
        warnings.warn(f"correlations outside [0, 1]: min {off.min():.3e}, max {off.max():.3e}",
                      RangeWarning, stacklevel=2)
    return CorrelationMatrix(M, D, basis)


# -------------------------------------------------------------- transport

@dataclass(frozen=True)
class TransferMatrix:
    j: int
    entries: np.ndarray

    def det(self) -> float:
        return float(np.linalg.det(self.entries))


def transfer_matrix(region: Region, j: int, p) -> TransferMatrix:
    """Transfer matrix ``g_j``: identity outside a symmetric 2x2 block.

    For ``j < 2n`` the block sits at rows/columns ``j, j+1`` and reads
    ``[[1/c, s/c], [s/c, 1/c]]`` with ``s, c`` the sn, cn of
    ``alpha_{j+1} - alpha_j``, taken at the dual parameter for odd ``j``.
    For ``j = 2n`` the block sits on the corners ``1, 2n``, uses
    ``alpha_1 + pi - alpha_{2n}`` at the primal parameter, and the
    off-diagonal entries carry ``(-1)^(n-1)``.
    """
    param = as_parameter(p)
    size = region.size
    if not 1 <= j <= size:
        raise RegionError(f"index {j} out of range [1, {size}]")
    lv = region.lifted
    if lv.tau_lift(j) == j + 1:
        raise RegionError(f"g_{j} is undefined: tau({j}) = {j} + 1")
    diff = lv.alpha_lift(j + 1) - lv.alpha_lift(j)
    use = dual_parameter(param) if (j % 2 and j < size) else param
    s, c, _ = resc_sncndn(diff, use)
    if abs(c) < 1e-300:
        raise NumericalError(f"cn vanishes in g_{j}")
    G = np.eye(size)
    if j < size:
        G[j - 1, j - 1] = G[j, j] = 1.0 / c
        G[j - 1, j] = G[j, j - 1] = s / c
    else:
        sign = (-1) ** (region.n - 1)
        G[0, 0] = G[-1, -1] = 1.0 / c
        G[0, -1] = G[-1, 0] = sign * s / c
    return TransferMatrix(j, G)


def corner_factor(region: Region, j: int, p, ts):
    """Scalar relating the two sides of the transport identity.

    One for ``j < 2n``.  For ``j = 2n`` the swap moves the first dn factor of
    every cumulative product across the seam, so the two curves differ by
    ``dn(t - alpha_1) / dn(t - alpha_{2n})``.
    """
    ts = np.asarray(ts, dtype=float)
    if j < region.size:
        return np.ones_like(ts)
    param = as_parameter(p)
    d1 = resc_sncndn(ts - region.a(1), param)[2]
    d2 = resc_sncndn(ts - region.a(region.size), param)[2]
    return np.asarray(d1) / np.asarray(d2)


def descent_transport_residual(region: Region, j: int, p, ts, with_factor: bool = True) -> float:
    """``max_t |gamma_R(t) - f(t) gamma_R'(t) g_j|`` with ``R' = R . t_j``.

    ``f`` is :func:`corner_factor` (or 1 when ``with_factor`` is false).
    """
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    R2 = apply_descent(region, j)
    G = transfer_matrix(region, j, p).entries
    lhs = gamma_values(region, p, ts)
    rhs = gamma_values(R2, p, ts) @ G
    if with_factor:
        rhs = rhs * corner_factor(region, j, p, ts)[:, None]
    return float(np.max(np.abs(lhs - rhs)))


def descent_transport_check(region: Region, j: int, p, ts) -> dict:
    """Pointwise residual plus the span distance between both sides."""
    R2 = apply_descent(region, j)
    G = transfer_matrix(region, j, p).entries
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    span_l = gamma_values(region, p, ts)
    span_r = gamma_values(R2, p, ts) @ G
    return {
        "j": j,
        "pointwise": descent_transport_residual(region, j, p, ts),
        "unscaled": descent_transport_residual(region, j, p, ts, with_factor=False),
        "span": projector_distance(span_l, span_r),
    }


def descent_chain(region: Region) -> list:
    """Apply descents greedily until no crossing is left (or no descent exists).

    Returns ``[(R_0, j_1), (R_1, j_2), ...]`` followed by the final region as
    ``(R_last, None)``.
    """
    chain = []
    cur = region
    for _ in range(len(crossings(region)) + 1):
        ds = tau_descents(cur)
        if not crossings(cur) or not ds:
            break
        chain.append((cur, ds[0]))
        cur = apply_descent(cur, ds[0])
    chain.append((cur, None))
    return chain


def transport_composition_check(region: Region, p, rng=None) -> float:
    """Largest principal angle between ``span(gamma_R)`` and the transported
    span of the final region of :func:`descent_chain`."""
    chain = descent_chain(region)
    final = chain[-1][0]
    G = np.eye(region.size)
    for R, j in reversed(chain[:-1]):
        G = G @ transfer_matrix(R, j, p).entries
    rng = np.random.default_rng(0) if rng is None else rng
    base = sample_matrix(final, p, rng=rng) @ G
    target = sample_matrix(region, p, rng=rng)
    return float(principal_angles(base, target).max())


# ------------------------------------------------------ discrete derivative

def discrete_derivative(f: Callable, anchors: Sequence[float]) -> Callable:
    """``x -> (d_{a_1} o ... o d_{a_m}) f (x)`` with ``d_a f(x) = (f(x) - f(a)) / (x - a)``.

    Collapsing all anchors and ``x`` onto ``a_0`` gives ``f^(m)(a_0) / m!``.
    """
    anchors = [float(a) for a in anchors]
    if len(set(anchors)) != len(anchors):
        raise ValueError("anchors must be distinct")

    def build(k):
        if k == len(anchors):
            return f
        inner = build(k + 1)
        a = anchors[k]
        fa = inner(a)

        def g(x):
            return (inner(x) - fa) / (x - a)

        return g

    return build(0)


# ---------------------------------------------------------------- duality

def dual_gamma(region: Region, p, ts) -> np.ndarray:
    """Curve of the Kramers-Wannier dual model.

    Built from ``sn*, dn*`` and ``sqrt((k*)')`` on the relabelled region
    :func:`~zising.region.shift_labels`, whose black faces are the white
    faces of ``region``.
    """
    return gamma_values(shift_labels(region), dual_parameter(p), ts)


def shift_S(v, n: int | None = None) -> np.ndarray:
    """``S(x) = ((-1)^(n-1) x_{2n}, x_1, ..., x_{2n-1})``, acting on the last axis."""
    v = np.asarray(v, dtype=float)
    size = v.shape[-1]
    n = size // 2 if n is None else n
    out = np.roll(v, 1, axis=-1)
    out[..., 0] *= (-1) ** (n - 1)
    return out


def duality_constant(region: Region, p, ts) -> np.ndarray:
    """Ratios ``gamma_p(t) / gamma*_{p+1}(t)`` for ``p = 1..2n``, shape ``(T, 2n)``.

    ``gamma*_{2n+1} = (-1)^(n-1) gamma*_1``.  Every column equals ``c(t)``.
    """
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    g = gamma_values(region, p, ts)
    nxt = np.roll(dual_gamma(region, p, ts), -1, axis=-1)
    nxt[..., -1] *= (-1) ** (region.n - 1)
    return g / nxt


def regular_duality_product(region: Region, p, ts) -> np.ndarray:
    """``prod_{j=n+1}^{2n-1} dn(t - alpha_j)``; equals ``1 / c(t)`` on a regular 2n-gon."""
    param = as_parameter(p)
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    out = np.ones_like(ts)
    for j in range(region.n + 1, region.size):
        out = out * np.asarray(resc_sncndn(ts - region.a(j), param)[2])
    return out


def dual_correlation_matrix(region: Region, p, basis: str = "auto") -> CorrelationMatrix:
    """Correlations of the dual model, label ``i`` sitting on white face ``w_{i-1}``."""
    return correlation_matrix(shift_labels(region), dual_parameter(p), basis)


def duality_checks(region: Region, p, samples: int = 50, rng=None, graph=None) -> dict:
    """Residuals of the duality relations.

    ``ratio_spread``: relative spread in ``p`` of ``gamma_p / gamma*_{p+1}``;
    ``projector``: distance between ``span(gamma) S`` and ``span(gamma*)``;
    ``kramers_wannier``: ``max |sinh(2 j_e) sinh(2 j*_e) - 1|`` when a black
    graph is supplied.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    ts = []
    while len(ts) < samples:
        t = float(rng.uniform(-math.pi, math.pi))
        gs = dual_gamma(region, p, t)
        if np.min(np.abs(gs)) > 1e-6 * np.max(np.abs(gs)):
            ts.append(t)
    ts = np.array(ts)
    ratios = duality_constant(region, p, ts)
    spread = np.max(np.abs(ratios - ratios[:, :1]) / np.abs(ratios[:, :1]))
    rows_t = rng.uniform(-math.pi, math.pi, 4 * region.n)
    out = {
        "ratio_spread": float(spread),
        "projector": projector_distance(
            shift_S(gamma_values(region, p, rows_t)), dual_gamma(region, p, rows_t)
        ),
        "constant": ratios[:, 0],
        "t": ts,
    }
    if graph is not None:
        from .arrangement import coupling_from_theta

        dual = dual_parameter(p)
        worst = 0.0
        for e in graph.edges:
            js = float(coupling_from_theta(0.5 * math.pi - e.theta, dual))
            worst = max(worst, abs(math.sinh(2 * e.coupling) * math.sinh(2 * js) - 1.0))
        out["kramers_wannier"] = worst
    return out
