"""Catalog of fractal sets and relative drums, with exact tube volumes and distances.

Every set here lives inside a reference region (unit interval, unit square or
cube, unit disk, or a cusp region) and is described by a ``SetDescriptor``.
The two primitives everything else is built on are

* ``tube_volume(desc, t)``   -- |A_t ∩ Ω| (inner/relative) or |A_t| (full),
* ``distance(desc, x)``      -- d(x, A) for points of the ambient space,

both computed from closed forms, so they can serve as independent oracles for
the zeta-function and tube-formula machinery.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.integrate import quad

__all__ = [
    "FractalString",
    "GapLadder",
    "SetDescriptor",
    "cantor_set",
    "carpet",
    "a_string",
    "a_string_set",
    "string_set",
    "fractal_nest",
    "flat_drum",
    "box_boundary",
    "scaled",
    "region_volume",
    "tube_volume",
    "tube_volume_many",
    "log_tube_volume",
    "full_tube_volume",
    "distance",
    "distance_many",
    "tube_breakpoints",
    "saturation_threshold",
]

_LADDER_FAMILIES = ("cantor", "carpet")


@dataclass(frozen=True)
class FractalString:
    """A nonincreasing sequence of lengths with multiplicities.

    Entries are ``(length, multiplicity)`` pairs, lengths strictly decreasing,
    multiplicities positive integers.  Lengths may be ``Fraction`` for exact
    work; arithmetic stays rational in that case.
    """

    entries: tuple[tuple[float | Fraction, int], ...]

    def __post_init__(self) -> None:
        prev = None
        for length, mult in self.entries:
            if not length > 0:
                raise ValueError("string lengths must be positive")
            if not (isinstance(mult, int) and mult > 0):
                raise ValueError("multiplicities must be positive integers")
            if prev is not None and length >= prev:
                raise ValueError("lengths must be strictly decreasing")
            prev = length

    @property
    def total(self) -> float | Fraction:
        """Total length Σ ℓ_j·mult_j, exact for rational entries."""
        tot = sum(l * m for l, m in self.entries)
        return tot

    def __len__(self) -> int:
        return sum(m for _, m in self.entries)

    @cached_property
    def _arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        # ascending lengths, multiplicities, and suffix sums of length*mult
        lengths = np.array([float(l) for l, _ in self.entries])[::-1]
        mults = np.array([m for _, m in self.entries], dtype=float)[::-1]
        csum = np.cumsum(lengths * mults)
        return lengths, mults, csum

    def tube(self, t: float) -> float:
        """Inner tube volume Σ min(ℓ_j, 2t) of the string laid on a line."""
        if t <= 0:
            return 0.0
        lengths, mults, csum = self._arrays
        k = int(np.searchsorted(lengths, 2.0 * t, side="right"))
        short = csum[k - 1] if k > 0 else 0.0
        return float(short + 2.0 * t * mults[k:].sum())

    def geometric_partial(self, s: complex, nmax: int | None = None) -> complex:
        """Partial sum Σ mult_j ℓ_j^s over the stored entries."""
        lengths, mults, _ = self._arrays
        logs = np.log(lengths)
        vals = np.exp(np.multiply.outer(s, logs)) * mults
        return complex(vals.sum())


@dataclass(frozen=True)
class GapLadder:
    """Geometric ladder of deleted holes: level k holds ``count_k`` congruent
    holes of diameter ``gap_k`` (intervals, squares, or cubes).

    count_k = first_count * count_ratio**(k-1),
    gap_k   = first_gap   * gap_ratio**(k-1),       k = 1, 2, ...
    """

    first_count: int
    count_ratio: int
    first_gap: float
    gap_ratio: float
    hole_dim: int

    def __post_init__(self) -> None:
        assert self.first_count >= 1 and self.count_ratio >= 2
        assert 0 < self.gap_ratio < 1 and self.first_gap > 0
        # total deleted volume must converge
        assert self.count_ratio * self.gap_ratio**self.hole_dim < 1 + 1e-15

    def gap(self, k: int) -> float:
        return self.first_gap * self.gap_ratio ** (k - 1)

    def count(self, k: int) -> float:
        return self.first_count * float(self.count_ratio) ** (k - 1)

    def levels(self, depth: int) -> list[tuple[float, float]]:
        """First ``depth`` levels as (count, gap) pairs."""
        return [(self.count(k), self.gap(k)) for k in range(1, depth + 1)]

    @property
    def volume_ratio(self) -> float:
        """Level-to-level ratio of deleted volume, count_ratio·gap_ratio^N."""
        return self.count_ratio * self.gap_ratio**self.hole_dim

    @property
    def total_volume(self) -> float:
        """Σ_k count_k · gap_k^hole_dim (volume of all holes)."""
        first = self.first_count * self.first_gap**self.hole_dim
        return first / (1.0 - self.volume_ratio)

    @property
    def similarity_dim(self) -> float:
        """log(count_ratio) / log(1/gap_ratio)."""
        return math.log(self.count_ratio) / math.log(1.0 / self.gap_ratio)

    @property
    def oscillation_period(self) -> float:
        """Multiplicative period log(1/gap_ratio) of the ladder."""
        return math.log(1.0 / self.gap_ratio)

    def depth_for(self, tmin: float) -> int:
        """Smallest depth k0 with gap_{k0+1} <= 2*tmin (holes below resolution)."""
        if 2.0 * tmin >= self.first_gap:
            return 0
        k = int(math.ceil(math.log(self.first_gap / (2.0 * tmin)) / math.log(1.0 / self.gap_ratio)))
        while self.gap(k + 1) > 2.0 * tmin:
            k += 1
        while k > 0 and self.gap(k + 1) <= 2.0 * tmin * self.gap_ratio:
            k -= 1
        return k


@dataclass(frozen=True)
class SetDescriptor:
    """A catalog set A together with its reference region Ω.

    kind: ``cantor`` | ``carpet`` | ``aString`` | ``nest`` | ``flatDrum`` |
          ``customString`` | ``boxBoundary``
    ambient_dim: dimension N of the ambient space.
    scale: homothety factor applied to the unit construction (A -> λA, Ω -> λΩ).
    """

    kind: str
    ambient_dim: int
    scale: float = 1.0
    m: int | None = None
    a: float | None = None
    J: int | None = None
    K: int | None = None
    ladder: GapLadder | None = None
    string: FractalString | None = None

    def __post_init__(self) -> None:
        if self.scale <= 0:
            raise ValueError("scale must be positive")

    @property
    def gap_width(self) -> float:
        """First-level gap h of a ternary-type set (unit scale)."""
        if self.kind != "cantor":
            raise AttributeError("gap_width is only defined for cantor descriptors")
        return (1.0 - self.m * self.a) / (self.m - 1)

    @property
    def similarity_dim(self) -> float:
        if self.ladder is not None:
            return self.ladder.similarity_dim
        if self.kind == "aString":
            return 1.0 / (1.0 + self.a)
        if self.kind == "nest":
            return 2.0 / (1.0 + self.a)
        if self.kind == "boxBoundary":
            return float(self.ambient_dim - 1)
        raise AttributeError(f"no closed-form dimension for kind {self.kind!r}")


# ---------------------------------------------------------------------------
# constructors


def cantor_set(m: int, a: float) -> SetDescriptor:
    """Generalized ternary set C(m, a): m blocks of ratio a in [0, 1].

    Requires 1/m > a > 0 so that m-1 gaps of width h = (1-ma)/(m-1) remain.
    m = 2, a = 1/3 is the classical middle-thirds set.
    """
    if m < 2:
        raise ValueError("need at least two blocks")
    if not 0 < a < 1.0 / m:
        raise ValueError("block ratio must satisfy 0 < a < 1/m")
    h = (1.0 - m * a) / (m - 1)
    ladder = GapLadder(first_count=m - 1, count_ratio=m, first_gap=h, gap_ratio=a, hole_dim=1)
    return SetDescriptor(kind="cantor", ambient_dim=1, m=m, a=a, ladder=ladder)


def carpet(ambient_dim: int) -> SetDescriptor:
    """Ternary carpet: middle-cell removal in [0,1]^N, N = 2 or 3.

    N=2 keeps 8 of 9 subsquares per step, N=3 keeps 26 of 27 subcubes.
    """
    if ambient_dim not in (2, 3):
        raise ValueError("carpet is implemented for ambient dimension 2 and 3")
    keep = 3**ambient_dim - 1
    ladder = GapLadder(first_count=1, count_ratio=keep, first_gap=1.0 / 3.0,
                       gap_ratio=1.0 / 3.0, hole_dim=ambient_dim)
    return SetDescriptor(kind="carpet", ambient_dim=ambient_dim, ladder=ladder)


def _a_string_length(j: np.ndarray | float, a: float):
    # l_j = j^-a - (j+1)^-a, computed without cancellation for large j
    return j ** (-a) * (-np.expm1(-a * np.log1p(1.0 / j)))


def a_string(a: float, J: int) -> FractalString:
    """Explicit a-string: lengths ℓ_j = j^{-a} - (j+1)^{-a}, j = 1..J."""
    if a <= 0:
        raise ValueError("exponent must be positive")
    if J < 1:
        raise ValueError("need at least one length")
    j = np.arange(1, J + 1, dtype=float)
    lengths = _a_string_length(j, a)
    entries = tuple((float(l), 1) for l in lengths)
    return FractalString(entries=entries)


def a_string_set(a: float, J: int | None = None) -> SetDescriptor:
    """The a-string as a bounded subset {0} ∪ {j^{-a}} of [0, 1].

    J = None uses the full infinite string (tube volumes in closed form);
    finite J truncates at the J-th gap.
    """
    if a <= 0:
        raise ValueError("exponent must be positive")
    return SetDescriptor(kind="aString", ambient_dim=1, a=a, J=J)


def string_set(string: FractalString) -> SetDescriptor:
    """Wrap an explicit string as a 1-D descriptor (lengths laid end to end)."""
    return SetDescriptor(kind="customString", ambient_dim=1, string=string)


def fractal_nest(a: float, K: int) -> SetDescriptor:
    """Nest of K concentric circles of radii k^{-a} inside the unit disk."""
    if a <= 0:
        raise ValueError("exponent must be positive")
    if K < 1:
        raise ValueError("need at least one circle")
    return SetDescriptor(kind="nest", ambient_dim=2, a=a, K=K)


def flat_drum() -> SetDescriptor:
    """The origin relative to the cusp region {(x, y): 0 < x < 1, 0 < y < e^{-1/x}}."""
    return SetDescriptor(kind="flatDrum", ambient_dim=2)


def box_boundary(ambient_dim: int = 2) -> SetDescriptor:
    """Boundary of the unit box [0,1]^N relative to the box itself."""
    if ambient_dim < 1:
        raise ValueError("ambient dimension must be positive")
    return SetDescriptor(kind="boxBoundary", ambient_dim=ambient_dim)


def scaled(desc: SetDescriptor, lam: float) -> SetDescriptor:
    """Homothety: both the set and its region scaled by λ > 0."""
    if lam <= 0:
        raise ValueError("scaling factor must be positive")
    return SetDescriptor(
        kind=desc.kind, ambient_dim=desc.ambient_dim, scale=desc.scale * lam,
        m=desc.m, a=desc.a, J=desc.J, K=desc.K, ladder=desc.ladder, string=desc.string,
    )


# ---------------------------------------------------------------------------
# regions


_FLAT_REGION_VOLUME: float | None = None


def _flat_region_volume() -> float:
    global _FLAT_REGION_VOLUME
    if _FLAT_REGION_VOLUME is None:
        val, err = quad(lambda x: math.exp(-1.0 / x), 0.0, 1.0,
                        limit=200, epsabs=0.0, epsrel=1e-13)
        assert err < 1e-12
        _FLAT_REGION_VOLUME = val
    return _FLAT_REGION_VOLUME


def region_volume(desc: SetDescriptor) -> float:
    """|Ω| of the reference region, in closed form."""
    lam = desc.scale
    n = desc.ambient_dim
    if desc.kind in ("cantor", "carpet", "boxBoundary"):
        return lam**n
    if desc.kind == "aString":
        if desc.J is None:
            return lam
        return lam * (1.0 - float(desc.J + 1) ** (-desc.a))
    if desc.kind == "customString":
        return lam * float(desc.string.total)
    if desc.kind == "nest":
        return math.pi * lam**2
    if desc.kind == "flatDrum":
        return lam**2 * _flat_region_volume()
    raise ValueError(f"unknown descriptor kind {desc.kind!r}")


# ---------------------------------------------------------------------------
# tube volumes


def _ladder_tube_unit(ladder: GapLadder, t: float) -> float:
    """Inner tube volume of a ladder set at unit scale.

    Uses the positive-sum form: holes with gap <= 2t are fully covered and
    enter through the exact geometric tail, so there is no cancellation for
    arbitrarily small t.
    """
    if t <= 0:
        return 0.0
    n = ladder.hole_dim
    if 2.0 * t >= ladder.first_gap:
        return ladder.total_volume
    k0 = ladder.depth_for(t)
    ks = np.arange(1, k0 + 1, dtype=float)
    counts = ladder.first_count * float(ladder.count_ratio) ** (ks - 1)
    gaps = ladder.first_gap * ladder.gap_ratio ** (ks - 1)
    covered = gaps**n - np.maximum(gaps - 2.0 * t, 0.0) ** n
    partial = float(np.dot(counts, covered))
    tail = ladder.total_volume * ladder.volume_ratio**k0
    return partial + tail


def _a_string_count(a: float, t: float) -> int:
    """j* = #{ j >= 1 : ℓ_j > 2t } for the infinite a-string."""
    if t <= 0:
        raise ValueError("t must be positive")
    if _a_string_length(1.0, a) <= 2.0 * t:
        return 0
    # bracket by doubling from the asymptotic guess j ~ (a/2t)^{1/(1+a)}
    hi = max(2, int((a / (2.0 * t)) ** (1.0 / (1.0 + a))))
    while _a_string_length(float(hi), a) > 2.0 * t:
        hi *= 2
    lo = 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _a_string_length(float(mid), a) > 2.0 * t:
            lo = mid
        else:
            hi = mid
    return lo


def _a_string_tube_unit(a: float, J: int | None, t: float) -> float:
    if t <= 0:
        return 0.0
    jstar = _a_string_count(a, t)
    if J is not None and jstar >= J:
        # every stored gap is wider than 2t
        return 2.0 * t * J
    tail = float(jstar + 1) ** (-a)
    if J is not None:
        tail -= float(J + 1) ** (-a)
    return 2.0 * t * jstar + tail


def _nest_radii(desc: SetDescriptor) -> np.ndarray:
    k = np.arange(1, desc.K + 1, dtype=float)
    return k ** (-desc.a)


def _nest_tube_unit(desc: SetDescriptor, t: float) -> float:
    """Area of (∪_k circle(r_k))_t ∩ unit disk, by merging radial intervals."""
    if t <= 0:
        return 0.0
    r = _nest_radii(desc)[::-1]  # ascending
    lo = r - t
    hi = r + t
    # merge overlapping [lo, hi] runs (radii sorted ascending)
    breaks = np.flatnonzero(lo[1:] > hi[:-1])
    starts = np.concatenate(([0], breaks + 1))
    ends = np.concatenate((breaks, [len(r) - 1]))
    area = 0.0
    for s_idx, e_idx in zip(starts, ends):
        run_lo = max(lo[s_idx], 0.0)
        run_hi = min(hi[e_idx], 1.0)
        if run_hi > run_lo:
            area += run_hi**2 - run_lo**2
    return math.pi * area


def _flat_log_tube_unit(t: float) -> float:
    """log |B_t(0) ∩ Ω| for the cusp region, stable for tiny t.

    The tube is {(x,y): 0<x<1, 0<y<min(e^{-1/x}, sqrt(t²-x²))} for x < t plus
    nothing beyond (points with x >= t are at distance >= t).  Integration in
    u = 1/x - 1/t keeps every exponent nonpositive.
    """
    if t <= 0:
        return -math.inf
    inv_t = 1.0 / t

    def log_parts(x: float) -> tuple[float, float]:
        x2 = t * t - x * x
        if x2 <= 0.0:
            return -1.0 / x, -math.inf
        return -1.0 / x, 0.5 * math.log(x2)

    def integrand(u: float) -> float:
        x = 1.0 / (u + inv_t)
        cusp, circle = log_parts(x)
        if circle == -math.inf:
            return 0.0
        return math.exp(min(cusp, circle) + inv_t) / (u + inv_t) ** 2

    u_lo = max(0.0, 1.0 - inv_t)  # x <= 1 (the region ends there)
    u_hi = u_lo + 60.0
    # the integrand has a kink where the cusp graph meets the circle; split there
    kink = None
    glo, ghi = u_lo + 1e-13, u_hi
    def diff(u: float) -> float:
        cusp, circle = log_parts(1.0 / (u + inv_t))
        return cusp - circle
    if diff(glo) > 0 > diff(ghi):
        for _ in range(200):
            mid = 0.5 * (glo + ghi)
            if diff(mid) > 0:
                glo = mid
            else:
                ghi = mid
        kink = 0.5 * (glo + ghi)
    pts = [kink] if kink is not None else None
    val, _ = quad(integrand, u_lo, u_hi, limit=400, epsabs=0.0, epsrel=1e-11,
                  points=pts)
    if val <= 0.0:
        return -math.inf
    return math.log(val) - inv_t


def tube_volume(desc: SetDescriptor, t: float, full: bool = False) -> float:
    """Tube volume at distance t: |A_t ∩ Ω| (default) or |A_t| with ``full``.

    Closed/stable forms throughout; for the flat drum the value underflows for
    t below ~1.4e-3 (use ``log_tube_volume`` there).
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t == 0:
        return 0.0
    lam = desc.scale
    n = desc.ambient_dim
    u = t / lam  # unit-scale tube parameter
    if desc.kind in ("cantor", "carpet"):
        inner = lam**n * _ladder_tube_unit(desc.ladder, u)
        if not full:
            return inner
        return inner + _outer_collar(desc, t)
    if desc.kind == "aString":
        inner = lam * _a_string_tube_unit(desc.a, desc.J, u)
        if not full:
            return inner
        if desc.J is not None:
            raise ValueError("full tube is only defined for the infinite a-string")
        return inner + 2.0 * t
    if desc.kind == "customString":
        if full:
            raise ValueError("custom strings have no canonical full tube")
        return lam * desc.string.tube(u)
    if desc.kind == "nest":
        inner = lam**2 * _nest_tube_unit(desc, u)
        if not full:
            return inner
        # outer annulus beyond the unit disk around the largest circle
        return inner + math.pi * ((lam + t) ** 2 - lam**2)
    if desc.kind == "boxBoundary":
        if full:
            return (lam + 2.0 * t) ** n - max(lam - 2.0 * t, 0.0) ** n
        return lam**n - max(lam - 2.0 * t, 0.0) ** n
    if desc.kind == "flatDrum":
        if full:
            raise ValueError("the flat drum is a relative construction only")
        lv = log_tube_volume(desc, t)
        return math.exp(lv) if lv > -700 else 0.0
    raise ValueError(f"unknown descriptor kind {desc.kind!r}")


def _outer_collar(desc: SetDescriptor, t: float) -> float:
    """|A_t \\ Ω| for ladder sets whose region boundary lies in A."""
    lam = desc.scale
    if desc.ambient_dim == 1:
        return 2.0 * t
    if desc.ambient_dim == 2:
        return 4.0 * lam * t + math.pi * t**2
    # N = 3: faces, quarter-cylinder edges, octant-sphere corners
    return 6.0 * lam**2 * t + 3.0 * math.pi * lam * t**2 + (4.0 / 3.0) * math.pi * t**3


def full_tube_volume(desc: SetDescriptor, t: float) -> float:
    return tube_volume(desc, t, full=True)


def tube_volume_many(desc: SetDescriptor, ts: Sequence[float] | np.ndarray,
                     full: bool = False) -> np.ndarray:
    """Vectorized ``tube_volume`` over a grid of t values."""
    return np.array([tube_volume(desc, float(t), full=full) for t in np.asarray(ts, dtype=float)])


def log_tube_volume(desc: SetDescriptor, t: float, full: bool = False) -> float:
    """log of the tube volume; exact in log space for the flat drum."""
    if desc.kind == "flatDrum":
        if full:
            raise ValueError("the flat drum is a relative construction only")
        return _flat_log_tube_unit(t / desc.scale) + 2.0 * math.log(desc.scale)
    v = tube_volume(desc, t, full=full)
    return math.log(v) if v > 0 else -math.inf


def saturation_threshold(desc: SetDescriptor) -> float:
    """sup_{x∈Ω} d(x, A): beyond this t the inner tube fills Ω."""
    lam = desc.scale
    if desc.kind in ("cantor", "carpet"):
        return lam * desc.ladder.first_gap / 2.0
    if desc.kind == "aString":
        top = _a_string_length(1.0, desc.a) / 2.0
        if desc.J is None:
            return lam * top
        return lam * max(top, _a_string_length(float(desc.J), desc.a) / 2.0)
    if desc.kind == "customString":
        return lam * float(desc.string.entries[0][0]) / 2.0
    if desc.kind == "nest":
        r = _nest_radii(desc)
        gaps = np.diff(r[::-1])
        inner_disk = r[-1]
        return lam * max(float(gaps.max()) / 2.0 if len(gaps) else 0.0, float(inner_disk))
    if desc.kind == "boxBoundary":
        return lam / 2.0
    if desc.kind == "flatDrum":
        return math.hypot(1.0, math.exp(-1.0)) * lam
    raise ValueError(f"unknown descriptor kind {desc.kind!r}")


def tube_breakpoints(desc: SetDescriptor, tmin: float, tmax: float) -> np.ndarray:
    """Kinks of t ↦ tube_volume in (tmin, tmax), ascending.

    These are the half-gap scales g_k/2 (ladders) and ℓ_j/2 (strings); the
    tube volume is piecewise polynomial between consecutive breakpoints.
    """
    if tmin <= 0 or tmax <= tmin:
        raise ValueError("need 0 < tmin < tmax")
    lam = desc.scale
    pts: list[float] = []
    if desc.kind in ("cantor", "carpet"):
        g = lam * desc.ladder.first_gap / 2.0
        while g > tmax:
            g *= desc.ladder.gap_ratio
        while g > tmin:
            pts.append(g)
            g *= desc.ladder.gap_ratio
    elif desc.kind == "aString":
        j = 1
        jcap = desc.J if desc.J is not None else 200_000
        while j <= jcap:
            half = lam * float(_a_string_length(float(j), desc.a)) / 2.0
            if half <= tmin:
                break
            if half < tmax:
                pts.append(half)
            j += 1
    elif desc.kind == "customString":
        for length, _ in desc.string.entries:
            half = lam * float(length) / 2.0
            if half <= tmin:
                break
            if half < tmax:
                pts.append(half)
    elif desc.kind == "nest":
        r = _nest_radii(desc)[::-1]
        halves = np.diff(r) / 2.0
        for h in np.unique(halves)[::-1]:
            v = lam * float(h)
            if tmin < v < tmax:
                pts.append(v)
        pts.append(lam * float(r[0]))  # center disk fill-in
        pts = [p for p in pts if tmin < p < tmax]
    elif desc.kind == "boxBoundary":
        if tmin < lam / 2.0 < tmax:
            pts.append(lam / 2.0)
    elif desc.kind == "flatDrum":
        pass  # smooth
    else:
        raise ValueError(f"unknown descriptor kind {desc.kind!r}")
    return np.array(sorted(set(pts)))


# ---------------------------------------------------------------------------
# distances


def _cantor_distance_unit(desc: SetDescriptor, x: np.ndarray) -> np.ndarray:
    m, a = desc.m, desc.a
    h = desc.gap_width
    span = a + h
    d = np.zeros_like(x)
    below = x < 0
    above = x > 1
    d[below] = -x[below]
    d[above] = x[above] - 1.0
    y = x.copy()
    active = ~(below | above)
    length = 1.0
    while active.any() and length > 1e-300:
        ya = y[active]
        j = np.minimum(np.floor(ya / span), m - 1)
        off = ya - j * span
        in_gap = off > a
        gap_off = off - a
        d_active = d[active]
        d_active[in_gap] = length * np.minimum(gap_off[in_gap], h - gap_off[in_gap])
        d[active] = d_active
        # recurse into blocks
        idx = np.flatnonzero(active)
        keep = idx[~in_gap]
        y[keep] = off[~in_gap] / a
        newactive = np.zeros_like(active)
        newactive[keep] = True
        active = newactive
        length *= a
    return d


def _carpet_distance_unit(desc: SetDescriptor, pts: np.ndarray) -> np.ndarray:
    n = desc.ambient_dim
    clamped = np.clip(pts, 0.0, 1.0)
    outside = np.linalg.norm(pts - clamped, axis=1)
    d = outside.copy()
    y = clamped.copy()
    active = outside == 0.0
    length = 1.0
    while active.any() and length > 1e-300:
        ya = y[active]
        g = np.minimum(np.floor(3.0 * ya), 2.0)
        mid = np.all(g == 1.0, axis=1)
        rel = 3.0 * ya - g
        # interior of the removed middle cell: distance to its own boundary
        if mid.any():
            face = np.minimum(rel[mid], 1.0 - rel[mid]).min(axis=1)
            d_active = d[active]
            d_active[mid] = (length / 3.0) * face
            d[active] = d_active
        idx = np.flatnonzero(active)
        keep = idx[~mid]
        y[keep] = rel[~mid]
        newactive = np.zeros_like(active)
        newactive[keep] = True
        active = newactive
        length /= 3.0
    return d


def _a_string_distance_unit(desc: SetDescriptor, x: np.ndarray) -> np.ndarray:
    a = desc.a
    d = np.zeros_like(x)
    d[x < 0] = -x[x < 0]
    d[x > 1] = x[x > 1] - 1.0
    inside = (x > 0) & (x < 1)
    if inside.any():
        u = x[inside]
        j = np.floor(u ** (-1.0 / a)).astype(int)
        j = np.maximum(j, 1)
        # u in [(j+1)^-a, j^-a]; guard rounding on both sides
        hi = j ** (-a * 1.0)
        bad = u > hi
        j[bad] -= 1
        j = np.maximum(j, 1)
        hi = j.astype(float) ** (-a)
        lo = (j + 1.0) ** (-a)
        below = u < lo
        j[below] += 1
        hi = j.astype(float) ** (-a)
        lo = (j + 1.0) ** (-a)
        d[inside] = np.minimum(u - lo, hi - u)
        # points below the accumulation point 0 never occur (0 is in the set)
    return d


def _nest_distance_unit(desc: SetDescriptor, pts: np.ndarray) -> np.ndarray:
    rho = np.linalg.norm(pts, axis=1)
    r = _nest_radii(desc)[::-1]
    pos = np.searchsorted(r, rho)
    cands = []
    for p in (pos - 1, pos):
        pc = np.clip(p, 0, len(r) - 1)
        cands.append(np.abs(rho - r[pc]))
    return np.minimum(cands[0], cands[1])


def distance_many(desc: SetDescriptor, pts: np.ndarray) -> np.ndarray:
    """d(x, A) for an (n, N) array of points (or (n,) when N = 1)."""
    lam = desc.scale
    arr = np.asarray(pts, dtype=float)
    if desc.ambient_dim == 1:
        arr = arr.reshape(-1)
        u = arr / lam
        if desc.kind == "cantor":
            return lam * _cantor_distance_unit(desc, u)
        if desc.kind == "aString":
            if desc.J is not None:
                raise ValueError("distances are implemented for the infinite a-string")
            return lam * _a_string_distance_unit(desc, u)
        raise ValueError(f"no distance oracle for kind {desc.kind!r}")
    arr = arr.reshape(-1, desc.ambient_dim)
    u = arr / lam
    if desc.kind == "carpet":
        return lam * _carpet_distance_unit(desc, u)
    if desc.kind == "nest":
        return lam * _nest_distance_unit(desc, u)
    if desc.kind == "flatDrum":
        return lam * np.linalg.norm(u, axis=1)
    if desc.kind == "boxBoundary":
        interior = np.minimum(u, 1.0 - u).min(axis=1)
        clamped = np.clip(u, 0.0, 1.0)
        outside = np.linalg.norm(u - clamped, axis=1)
        inside = np.all((u >= 0) & (u <= 1), axis=1)
        return lam * np.where(inside, np.maximum(interior, 0.0), outside)
    raise ValueError(f"no distance oracle for kind {desc.kind!r}")


def distance(desc: SetDescriptor, x) -> float:
    """d(x, A) for a single point."""
    if desc.ambient_dim == 1:
        return float(distance_many(desc, np.array([float(x)]))[0])
    return float(distance_many(desc, np.array([x], dtype=float))[0])
