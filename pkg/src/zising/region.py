"""Regions: a fixed-point-free involution of [2n] with a compatible angle
sequence, plus the combinatorics derived from them.

Indices are 1-based throughout the public interface.  A region is valid when

* ``alpha[tau(j)] == alpha[j] + pi/2`` for every ``j < tau(j)``, and
* ``alpha[j] < alpha[k] < alpha[tau(j)] < alpha[tau(k)]`` for every crossing
  ``j < k < tau(j) < tau(k)``.

The lifted view extends ``tau`` and ``alpha`` to all integers with
``tau~(j + 2n) = tau~(j) + 2n``, ``j < tau~(j) < j + 2n`` and
``alpha~(j + 2n) = alpha~(j) + pi``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

__all__ = [
    "RegionError",
    "Involution",
    "Region",
    "LiftedView",
    "validate",
    "require_valid",
    "cyclic_order",
    "j_set",
    "lifted_j_set",
    "crossings",
    "tau_descents",
    "apply_descent",
    "is_alternating",
    "directions_distinct",
    "supp",
    "multiplicity",
    "regular_region",
    "canonical_shape",
    "random_involution",
    "random_region",
    "perturb_region",
    "region_from_dict",
    "region_to_dict",
    "shift_labels",
    "all_involutions",
    "crossing_without_descent",
]

ANGLE_TOL = 1e-12
DIRECTION_TOL = 1e-9
HALF_PI = 0.5 * math.pi


class RegionError(ValueError):
    """Invalid region or violated precondition of a region operation."""


@dataclass(frozen=True)
class Involution:
    n: int
    tau: tuple

    def __post_init__(self):
        object.__setattr__(self, "tau", tuple(int(x) for x in self.tau))
        if self.n < 1 or len(self.tau) != 2 * self.n:
            raise RegionError(f"tau must have 2n = {2 * self.n} entries, got {len(self.tau)}")

    def __call__(self, j: int) -> int:
        return self.tau[j - 1]

    def violations(self) -> list:
        out = []
        size = 2 * self.n
        for j in range(1, size + 1):
            t = self.tau[j - 1]
            if not 1 <= t <= size:
                out.append(f"tau({j}) = {t} is out of range [1, {size}]")
                continue
            if t == j:
                out.append(f"fixed point at j = {j}")
            elif self.tau[t - 1] != j:
                out.append(f"not an involution: tau(tau({j})) = {self.tau[t - 1]} != {j}")
        return out

    def chords(self) -> list:
        """Pairs ``(j, tau(j))`` with ``j < tau(j)``, sorted by ``j``."""
        return [(j, t) for j, t in enumerate(self.tau, start=1) if j < t]


@dataclass(frozen=True)
class Region:
    inv: Involution
    alpha: tuple

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(float(a) for a in self.alpha))
        if len(self.alpha) != 2 * self.inv.n:
            raise RegionError(
                f"alpha must have 2n = {2 * self.inv.n} entries, got {len(self.alpha)}"
            )

    @classmethod
    def from_lists(cls, tau: Sequence[int], alpha: Sequence[float]) -> "Region":
        if len(tau) % 2:
            raise RegionError("tau must have an even number of entries")
        return cls(Involution(len(tau) // 2, tuple(tau)), tuple(alpha))

    @property
    def n(self) -> int:
        return self.inv.n

    @property
    def size(self) -> int:
        return 2 * self.inv.n

    @property
    def tau(self) -> tuple:
        return self.inv.tau

    def a(self, j: int) -> float:
        return self.alpha[j - 1]

    def t(self, j: int) -> int:
        return self.inv.tau[j - 1]

    @property
    def lifted(self) -> "LiftedView":
        return LiftedView(self)


@dataclass(frozen=True)
class LiftedView:
    region: Region

    def tau_lift(self, j: int) -> int:
        size = self.region.size
        r = (j - 1) % size + 1
        base = j - r
        t = self.region.t(r)
        return base + t if t > r else base + t + size

    def alpha_lift(self, j: int) -> float:
        size = self.region.size
        r = (j - 1) % size + 1
        return self.region.a(r) + ((j - r) // size) * math.pi


def _cross_list(inv: Involution) -> list:
    out = []
    for (j, tj), (k, tk) in combinations(inv.chords(), 2):
        if j < k < tj < tk:
            out.append((j, k))
    return out


def validate(region: Region) -> list:
    """List of human-readable violations; empty iff the region is valid."""
    out = region.inv.violations()
    if out:
        return out
    a = region.alpha
    if not all(math.isfinite(x) for x in a):
        return ["alpha contains non-finite values"]
    for j, tj in region.inv.chords():
        if abs(a[tj - 1] - a[j - 1] - HALF_PI) > ANGLE_TOL:
            out.append(
                f"cond_1 violated at j = {j}: alpha[{tj}] - alpha[{j}] = "
                f"{a[tj - 1] - a[j - 1]!r} != pi/2"
            )
    for j, k in _cross_list(region.inv):
        tj, tk = region.t(j), region.t(k)
        seq = (a[j - 1], a[k - 1], a[tj - 1], a[tk - 1])
        if not all(y - x > ANGLE_TOL for x, y in zip(seq, seq[1:])):
            out.append(
                f"cond_2 violated for crossing ({j}, {k}): need "
                f"alpha[{j}] < alpha[{k}] < alpha[{tj}] < alpha[{tk}]"
            )
    return out


def require_valid(region: Region) -> Region:
    problems = validate(region)
    if problems:
        raise RegionError("invalid region: " + "; ".join(problems))
    return region


def cyclic_order(a: int, b: int, c: int, size: int) -> bool:
    """True when ``a, b, c`` are distinct and met in this order going
    counterclockwise from ``a`` on ``[size]``."""
    if a == b or b == c or a == c:
        return False
    return (b - a) % size < (c - a) % size


def _check_index(region: Region, p: int):
    if not 1 <= p <= region.size:
        raise RegionError(f"index {p} out of range [1, {region.size}]")


def j_set(region: Region, p: int) -> tuple:
    """Indices ``j`` such that ``(p, j, tau(j))`` are in cyclic order.

    One endpoint of every chord other than the one through ``p``: the endpoint
    met first going counterclockwise from ``p``.  Returned in increasing order.
    """
    _check_index(region, p)
    size = region.size
    return tuple(j for j in range(1, size + 1) if cyclic_order(p, j, region.t(j), size))


def lifted_j_set(region: Region, p: int) -> tuple:
    """Lifted representatives of ``j_set``: integers in ``(p, p + 2n)``."""
    size = region.size
    r = (p - 1) % size + 1
    shift = p - r
    reps = []
    for j in j_set(region, r):
        reps.append(j + shift if j > r else j + shift + size)
    return tuple(sorted(reps))


def crossings(region: Region) -> list:
    """All pairs ``(j, k)`` with ``j < k < tau(j) < tau(k)``."""
    return _cross_list(region.inv)


def tau_descents(region: Region) -> list:
    """Indices ``j`` in ``[1, 2n]`` with ``j < j+1 < tau~(j) < tau~(j+1)``."""
    lv = region.lifted
    return [
        j for j in range(1, region.size + 1)
        if j + 1 < lv.tau_lift(j) < lv.tau_lift(j + 1)
    ]


def apply_descent(region: Region, j: int) -> Region:
    """The region ``R . t_j``: positions ``j`` and ``j + 1`` swapped.

    For ``j = 2n`` the swap is between ``2n`` and ``2n + 1`` in the lifted
    picture, so the angles moving across the seam pick up ``+-pi``.
    """
    if j not in tau_descents(region):
        raise RegionError(f"{j} is not a tau-descent of this region")
    size = region.size
    jn = j % size + 1

    def swap(x):
        return jn if x == j else j if x == jn else x

    tau = [swap(region.t(swap(x))) for x in range(1, size + 1)]
    alpha = list(region.alpha)
    if j < size:
        alpha[j - 1], alpha[j] = alpha[j], alpha[j - 1]
    else:
        alpha[size - 1], alpha[0] = region.alpha[0] + math.pi, region.alpha[size - 1] - math.pi
    return Region(Involution(region.n, tuple(tau)), tuple(alpha))


def _same_direction(x: float, y: float) -> bool:
    # v = exp(2i alpha): equal directions iff angles agree mod pi
    d = (x - y) % math.pi
    return min(d, math.pi - d) < DIRECTION_TOL


def _opposite_direction(x: float, y: float) -> bool:
    return _same_direction(x, y + HALF_PI)


def is_alternating(region: Region) -> tuple:
    """``(True, (i, j, k, l))`` when ``v_i = -v_j = v_k = -v_l`` for some
    ``i < j < k < l``; ``(False, None)`` otherwise."""
    a = region.alpha
    size = region.size
    for i in range(size):
        for j in range(i + 1, size):
            if not _opposite_direction(a[j], a[i]):
                continue
            for k in range(j + 1, size):
                if not _same_direction(a[k], a[i]):
                    continue
                for l in range(k + 1, size):
                    if _opposite_direction(a[l], a[i]):
                        return True, (i + 1, j + 1, k + 1, l + 1)
    return False, None


def directions_distinct(region: Region) -> bool:
    """True when no two boundary vectors point the same way."""
    a = region.alpha
    return not any(_same_direction(x, y) for x, y in combinations(a, 2))


def supp(region: Region, p: int) -> tuple:
    """Indices met going counterclockwise from ``p`` to ``tau(p)``, inclusive."""
    _check_index(region, p)
    size = region.size
    tp = region.t(p)
    length = (tp - p) % size
    return tuple((p - 1 + s) % size + 1 for s in range(length + 1))


def multiplicity(region: Region, p: int) -> int:
    """Number of ``j`` in ``J_p`` whose vector equals ``v_p``."""
    ap = region.a(p)
    return sum(1 for j in j_set(region, p) if _same_direction(region.a(j), ap))


def regular_region(n: int) -> Region:
    """Regular 2n-gon: ``tau(j) = j + n`` and ``alpha_j = (j - 1) pi / (2n)``."""
    if n < 1:
        raise RegionError("n must be positive")
    size = 2 * n
    tau = [(j - 1 + n) % size + 1 for j in range(1, size + 1)]
    alpha = [(j - 1) * math.pi / size for j in range(1, size + 1)]
    return Region(Involution(n, tuple(tau)), tuple(alpha))


def canonical_shape(inv: Involution) -> Region:
    """A valid angle sequence for ``inv``.

    Chord ``(j, tau(j))`` gets base angle ``(j - 1) pi / (4n)``: every
    crossing ``j < k`` then has ``0 < alpha_k - alpha_j < pi/2`` because
    ``k - j < 2n``.  Directions are pairwise distinct, so the result is
    never alternating.
    """
    problems = inv.violations()
    if problems:
        raise RegionError("invalid involution: " + "; ".join(problems))
    step = math.pi / (4 * inv.n)
    alpha = [0.0] * (2 * inv.n)
    for j, tj in inv.chords():
        alpha[j - 1] = (j - 1) * step
        alpha[tj - 1] = alpha[j - 1] + HALF_PI
    region = Region(inv, tuple(alpha))
    problems = validate(region)
    if problems:
        raise RegionError("could not synthesise a shape: " + "; ".join(problems))
    return region


def random_involution(n: int, rng: np.random.Generator) -> Involution:
    perm = rng.permutation(2 * n) + 1
    tau = [0] * (2 * n)
    for a, b in zip(perm[0::2], perm[1::2]):
        tau[a - 1], tau[b - 1] = int(b), int(a)
    return Involution(n, tuple(tau))


def _shape_from_bases(inv: Involution, bases: dict) -> Region:
    alpha = [0.0] * (2 * inv.n)
    for j, tj in inv.chords():
        alpha[j - 1] = bases[j]
        alpha[tj - 1] = bases[j] + HALF_PI
    return Region(inv, tuple(alpha))


def _min_direction_gap(region: Region) -> float:
    a = np.mod(np.asarray(region.alpha), math.pi)
    d = np.abs(a[:, None] - a[None, :])
    d = np.minimum(d, math.pi - d)
    d[np.diag_indices_from(d)] = math.pi
    return float(d.min())


def random_region(
    n: int,
    rng: np.random.Generator,
    inv: Optional[Involution] = None,
    min_gap: float = 0.05,
    min_crossings: int = 0,
    attempts: int = 2000,
) -> Region:
    """Random valid, non-alternating region with well separated directions.

    Chord base angles are drawn uniformly from ``[0, pi)`` and rejected until
    both shape conditions hold; crossing-free chords stay unconstrained.
    """
    for _ in range(attempts):
        cur = inv if inv is not None else random_involution(n, rng)
        if len(_cross_list(cur)) < min_crossings:
            continue
        bases = {j: float(rng.uniform(0.0, math.pi)) for j, _ in cur.chords()}
        region = _shape_from_bases(cur, bases)
        if not validate(region) and _min_direction_gap(region) >= min_gap:
            return region
    raise RegionError(f"no random region found for n = {n} after {attempts} attempts")


def perturb_region(region: Region, eps: float, rng: np.random.Generator) -> Region:
    """Move every chord's base angle by at most ``eps`` (keeps ``cond_1``)."""
    bases = {
        j: region.a(j) + eps * float(rng.uniform(-1.0, 1.0)) for j, _ in region.inv.chords()
    }
    return _shape_from_bases(region.inv, bases)


def region_from_dict(data: dict) -> Region:
    """Parse ``{"n": int, "tau": [...], "alpha": [...] (optional)}``."""
    if not isinstance(data, dict):
        raise RegionError("region description must be a JSON object")
    try:
        n = int(data["n"])
        tau = [int(x) for x in data["tau"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise RegionError(f"region needs integer 'n' and a list 'tau': {exc}") from None
    inv = Involution(n, tuple(tau))
    if data.get("alpha") is None:
        return canonical_shape(inv)
    try:
        alpha = [float(x) for x in data["alpha"]]
    except (TypeError, ValueError) as exc:
        raise RegionError(f"'alpha' must be a list of numbers: {exc}") from None
    return Region(inv, tuple(alpha))


def region_to_dict(region: Region) -> dict:
    return {"n": region.n, "tau": list(region.tau), "alpha": list(region.alpha)}


def shift_labels(region: Region) -> Region:
    """Relabel ``d_j -> d_{j+1}``: ``alpha*_j = alpha~_{j-1}``, ``tau*(j) = tau(j-1) + 1``.

    This is the region seen by the Kramers-Wannier dual model, whose black
    faces are the white faces of ``region``.
    """
    size = region.size
    tau = [region.t((j - 2) % size + 1) % size + 1 for j in range(1, size + 1)]
    alpha = [region.alpha[-1] - math.pi] + list(region.alpha[:-1])
    return Region(Involution(region.n, tuple(tau)), tuple(alpha))


def all_involutions(n: int):
    """Every fixed-point-free involution of ``[2n]`` (``(2n - 1)!!`` of them)."""

    def pairings(rest):
        if not rest:
            yield []
            return
        a = rest[0]
        for b in rest[1:]:
            remaining = [x for x in rest if x not in (a, b)]
            for tail in pairings(remaining):
                yield [(a, b)] + tail

    for pairs in pairings(list(range(1, 2 * n + 1))):
        tau = [0] * (2 * n)
        for a, b in pairs:
            tau[a - 1], tau[b - 1] = b, a
        yield Involution(n, tuple(tau))


def crossing_without_descent(max_n: int = 6) -> list:
    """Involutions with at least one crossing but no tau-descent, smallest ``n`` first.

    Returns every example at the first ``n <= max_n`` that has any.
    """
    for n in range(1, max_n + 1):
        found = []
        for inv in all_involutions(n):
            probe = Region(inv, tuple([0.0] * (2 * n)))
            if crossings(probe) and not tau_descents(probe):
                found.append(inv)
        if found:
            return found
    return []
