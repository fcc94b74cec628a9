"""Adaptive area integrals over planar regions, contour integrals and residues.

Two integration routes share the ``integrate`` entry point:

* regions with a *polar description* (for every ray from a center, the list
  of radial intervals inside the region) are integrated boundary-conformingly
  with nested, vectorized adaptive Gauss-Kronrod rules. Each integrable point
  singularity gets a small disk integrated in local polar coordinates, where
  the ``1/|zeta - p|`` behaviour is cancelled by the Jacobian.
* regions known only through a membership predicate fall back to an adaptive
  quadtree of tensor Gauss-Legendre cells.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .errors import NoConvergence, NonConvergence, ValidationError

TWO_PI = 2 * math.pi

# Gauss-Kronrod 7-15 on [-1, 1]
_XK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0])
_WK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714])
_WG = np.array([0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                0.381830050505118944950369775488975, 0.417959183673469387755102040816327])
GK_NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
GK_WEIGHTS = np.concatenate([_WK[:-1], _WK[::-1]])
_G_INDEX = np.array([1, 3, 5, 7, 9, 11, 13])
GAUSS_WEIGHTS = np.concatenate([_WG[:-1], _WG[::-1]])
_CHUNK = 2 ** 14
_EPS = float(np.finfo(float).eps)


def _default_max_cells() -> int:
    env = os.environ.get("QDTK_MAX_CELLS")
    return int(env) if env else 2 ** 22


@dataclass(frozen=True)
class QuadConfig:
    """Tolerances and budgets; ``max_cells`` honours ``QDTK_MAX_CELLS``."""

    tol: float = 1e-7
    max_cells: int = field(default_factory=_default_max_cells)
    boundary_tol: float = 1e-3
    max_levels: int = 60


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    error_estimate: float
    cells_used: int

    def __post_init__(self):
        if self.error_estimate < 0:
            raise ValueError("error estimate must be nonnegative")


Interval = tuple  # (lo, hi) or (lo, hi, weight)


@dataclass(frozen=True)
class PolarDescription:
    """Radial intervals ``[lo, hi)`` (``hi`` may be ``inf``) along each ray.

    ``intervals(theta)`` returns a list of ``(lo, hi, weight)``; ``breakpoints``
    are angles where the interval structure is not smooth.
    """

    center: complex
    intervals: Callable[[float], list]
    breakpoints: tuple[float, ...] = ()


@dataclass(frozen=True)
class Region:
    """A planar region: bounding box, membership predicate, excluded points.

    ``excluded`` lists integrable singular points of the integrand with an
    upper bound for the exclusion radius (``inf`` lets the integrator choose).
    """

    lower: complex
    upper: complex
    contains: Callable[[np.ndarray], np.ndarray]
    excluded: tuple[tuple[complex, float], ...] = ()
    polar: PolarDescription | None = None
    bounded: bool = True

    def __post_init__(self):
        for _, rad in self.excluded:
            if not rad > 0:
                raise ValidationError("exclusion radii must be positive")

    def with_excluded(self, points: Sequence[complex], radius: float = math.inf) -> "Region":
        extra = tuple((complex(p), radius) for p in points)
        return replace(self, excluded=self.excluded + extra)

    def membership(self, z) -> np.ndarray:
        return np.asarray(self.contains(np.asarray(z, dtype=complex)), dtype=bool)


# ---------------------------------------------------------------- region factories


def _const_intervals(lo: float, hi: float):
    def fn(theta):
        return [(lo, hi, 1.0)]
    return fn


def disk(center: complex = 0j, radius: float = 1.0) -> Region:
    c = complex(center)
    return Region(c - radius * (1 + 1j), c + radius * (1 + 1j),
                  lambda z: np.abs(z - c) < radius,
                  polar=PolarDescription(c, _const_intervals(0.0, radius)))


def disk_exterior(center: complex = 0j, radius: float = 1.0) -> Region:
    c = complex(center)
    return Region(complex(-np.inf, -np.inf), complex(np.inf, np.inf),
                  lambda z: np.abs(z - c) > radius,
                  polar=PolarDescription(c, _const_intervals(radius, math.inf)), bounded=False)


def whole_plane() -> Region:
    return Region(complex(-np.inf, -np.inf), complex(np.inf, np.inf),
                  lambda z: np.ones(np.shape(z), dtype=bool),
                  polar=PolarDescription(0j, _const_intervals(0.0, math.inf)), bounded=False)


def box(lower: complex, upper: complex) -> Region:
    lo, up = complex(lower), complex(upper)

    def contains(z):
        return (z.real >= lo.real) & (z.real <= up.real) & (z.imag >= lo.imag) & (z.imag <= up.imag)

    return Region(lo, up, contains)


def predicate_region(lower: complex, upper: complex, contains) -> Region:
    return Region(complex(lower), complex(upper), contains)


def polar_region(center: complex, intervals, contains, breakpoints=(), extent: float | None = None) -> Region:
    """Region from a polar description; ``extent`` bounds ``|z - center|`` if finite."""
    c = complex(center)
    if extent is None or not math.isfinite(extent):
        lower, upper, bounded = complex(-np.inf, -np.inf), complex(np.inf, np.inf), False
    else:
        lower, upper, bounded = c - extent * (1 + 1j), c + extent * (1 + 1j), True
    return Region(lower, upper, contains,
                  polar=PolarDescription(c, intervals, tuple(float(b) % TWO_PI for b in breakpoints)),
                  bounded=bounded)


# ---------------------------------------------------------------- interval utilities


def _normalize_intervals(raw) -> list[tuple[float, float, float]]:
    out = []
    for it in raw:
        lo, hi = float(it[0]), float(it[1])
        w = float(it[2]) if len(it) > 2 else 1.0
        if hi > lo and w != 0:
            out.append((max(lo, 0.0), hi, w))
    return out


def merge_weighted(lists: Sequence[list]) -> list[tuple[float, float, float]]:
    """Sum several weighted interval lists into disjoint weighted pieces."""
    events = []
    for lst in lists:
        for lo, hi, w in _normalize_intervals(lst):
            events.append((lo, w))
            events.append((hi, -w))
    if not events:
        return []
    pts = sorted({e[0] for e in events})
    out = []
    weight = 0.0
    for i, x in enumerate(pts):
        weight += sum(w for p, w in events if p == x)
        if i + 1 < len(pts) and abs(weight) > 1e-12:
            hi = pts[i + 1]
            if out and out[-1][1] == x and out[-1][2] == weight:
                out[-1] = (out[-1][0], hi, weight)
            else:
                out.append((x, hi, weight))
    return out


def _subtract(intervals, holes):
    out = list(intervals)
    for hlo, hhi in holes:
        nxt = []
        for lo, hi, w in out:
            if hhi <= lo or hlo >= hi:
                nxt.append((lo, hi, w))
                continue
            if hlo > lo:
                nxt.append((lo, hlo, w))
            if hhi < hi:
                nxt.append((hhi, hi, w))
        out = nxt
    return out


def _ray_disk(q: complex, delta: float, theta: float):
    """Radial interval of the ray ``r e^{i theta}`` inside ``|z - q| < delta``."""
    b = q.real * math.cos(theta) + q.imag * math.sin(theta)
    disc = b * b - (abs(q) ** 2 - delta * delta)
    if disc <= 0:
        return None
    s = math.sqrt(disc)
    hi = b + s
    if hi <= 0:
        return None
    return (max(0.0, b - s), hi)


# ---------------------------------------------------------------- batched adaptive Gauss-Kronrod


def _gk_batch(func, a, b, tol, owner_count, max_levels=60, budget=None):
    """Adaptive G7/K15 on many independent 1-D problems at once.

    ``func(x, owner)`` maps nodes ``x`` of shape ``(m, 15)`` belonging to
    problems ``owner`` (shape ``(m,)``) to complex values of the same shape.
    Returns per-owner ``(value, error, segments)`` for segments ``[a_k, b_k]``
    whose owner index is implicit in their order (``owner`` array passed in
    ``a``'s companion). ``tol`` is per owner (absolute).
    """
    a = np.asarray(a[0], dtype=float), np.asarray(a[1])
    seg_a, seg_own = a
    seg_b = np.asarray(b, dtype=float)
    tol = np.asarray(tol, dtype=float)
    total_len = np.zeros(owner_count)
    np.add.at(total_len, seg_own, seg_b - seg_a)
    total_len[total_len == 0] = 1.0
    value = np.zeros(owner_count, dtype=complex)
    error = np.zeros(owner_count)
    nseg = 0
    level = 0
    while seg_a.size:
        nseg += seg_a.size
        if budget is not None and nseg > budget:
            raise NoConvergence("cell budget exhausted", partial=complex(np.sum(value)),
                                error_estimate=float(np.sum(error)))
        half = 0.5 * (seg_b - seg_a)
        mid = 0.5 * (seg_b + seg_a)
        k = np.empty(seg_a.size, dtype=complex)
        g = np.empty(seg_a.size, dtype=complex)
        mag = np.empty(seg_a.size)
        for lo in range(0, seg_a.size, _CHUNK):
            sl = slice(lo, lo + _CHUNK)
            x = mid[sl, None] + half[sl, None] * GK_NODES[None, :]
            fx = func(x, seg_own[sl])
            k[sl] = half[sl] * (fx @ GK_WEIGHTS)
            g[sl] = half[sl] * (fx[:, _G_INDEX] @ GAUSS_WEIGHTS)
            mag[sl] = half[sl] * (np.abs(fx) @ GK_WEIGHTS)
        err = np.abs(k - g)
        # roundoff floor: no point refining below a few ulps of the segment's |f| integral
        allowed = np.maximum(tol[seg_own] * (2 * half) / total_len[seg_own], 50 * _EPS * mag)
        # global test per problem: stop once accepted plus pending error fits the tolerance;
        # the local test alone stalls at endpoint square-root behaviour
        pending = error.copy()
        np.add.at(pending, seg_own, err)
        settled = pending <= tol
        done = (err <= allowed) | settled[seg_own] | (level >= max_levels) | (half <= 1e-15 * (1 + np.abs(mid)))
        np.add.at(value, seg_own[done], k[done])
        np.add.at(error, seg_own[done], err[done])
        keep = ~done
        seg_a, seg_b, seg_own = (
            np.concatenate([seg_a[keep], mid[keep]]),
            np.concatenate([mid[keep], seg_b[keep]]),
            np.concatenate([seg_own[keep], seg_own[keep]]),
        )
        level += 1
    return value, error, nseg


def gk_integrate(fun, a: float, b: float, tol: float = 1e-10, points: Sequence[float] = ()) -> tuple[complex, float]:
    """Adaptive 1-D integral of a vectorized (complex) function."""
    cuts = sorted({a, b, *[p for p in points if a < p < b]})
    sa = np.array(cuts[:-1])
    sb = np.array(cuts[1:])
    val, err, _ = _gk_batch(lambda x, o: np.asarray(fun(x), dtype=complex),
                            (sa, np.zeros(len(sa), dtype=int)), sb, [tol], 1)
    return complex(val[0]), float(err[0])


# ---------------------------------------------------------------- polar route


@dataclass
class _Hole:
    point: complex
    radius: float
    weight: float


def _boundary_samples(polar: PolarDescription, n: int = 4096) -> np.ndarray:
    thetas = np.linspace(0, TWO_PI, n, endpoint=False)
    thetas = np.concatenate([thetas, np.asarray(polar.breakpoints, dtype=float)])
    pts = []
    for t in thetas:
        e = complex(math.cos(t), math.sin(t))
        prev = None
        for lo, hi, w in sorted(_normalize_intervals(polar.intervals(t))):
            if lo > 0 and (prev is None or lo > prev):
                pts.append(polar.center + lo * e)
            if math.isfinite(hi):
                pts.append(polar.center + hi * e)
            prev = hi
    return np.array(pts, dtype=complex)


def _weight_at(polar: PolarDescription, z: complex) -> float:
    q = z - polar.center
    r = abs(q)
    t = math.atan2(q.imag, q.real) % TWO_PI
    return sum(w for lo, hi, w in _normalize_intervals(polar.intervals(t)) if lo <= r < hi)


def _polar_integrate(polar: PolarDescription, integrand, singular: Sequence[tuple[complex, float]],
                     tol: float, config: QuadConfig) -> QuadratureResult:
    c = polar.center
    pts = [complex(p) for p, _ in singular]
    bsamp = _boundary_samples(polar)
    holes: list[_Hole] = []
    for i, (p, rmax) in enumerate(singular):
        p = complex(p)
        w = _weight_at(polar, p)
        if w == 0:
            continue
        d_other = min((abs(p - q) for j, q in enumerate(pts) if j != i), default=math.inf)
        d_bdry = float(np.min(np.abs(bsamp - p))) if bsamp.size else math.inf
        delta = min(0.45 * d_other, 0.45 * d_bdry, rmax, 1.0 + abs(p - c))
        if not delta > 1e-12:
            raise ValidationError(f"singular point {p} lies on a region boundary or on another singular point")
        holes.append(_Hole(p, delta, w))

    breaks = set(polar.breakpoints)
    for h in holes:
        q = h.point - c
        if abs(q) > h.radius:
            phi = math.atan2(q.imag, q.real)
            da = math.asin(h.radius / abs(q))
            breaks.update({(phi - da) % TWO_PI, (phi + da) % TWO_PI})
    far = max([abs(h.point - c) + h.radius for h in holes] + [1.0])
    inner_tol = tol / (20 * math.pi)
    used = 0

    def ray_values(thetas: np.ndarray) -> np.ndarray:
        nonlocal used
        seg_a, seg_b, own, kind, weight, base = [], [], [], [], [], []
        for k, t in enumerate(thetas):
            ivs = _normalize_intervals(polar.intervals(float(t)))
            hl = [iv for iv in (_ray_disk(h.point - c, h.radius, float(t)) for h in holes) if iv is not None]
            for lo, hi, w in _subtract(ivs, hl):
                if math.isfinite(hi):
                    seg_a.append(lo); seg_b.append(hi); own.append(k); kind.append(0); weight.append(w); base.append(0.0)
                else:
                    split = max(lo, far)
                    if split > lo:
                        seg_a.append(lo); seg_b.append(split); own.append(k); kind.append(0); weight.append(w); base.append(0.0)
                    seg_a.append(0.0); seg_b.append(1.0); own.append(k); kind.append(1); weight.append(w); base.append(split)
        if not seg_a:
            return np.zeros(len(thetas), dtype=complex)
        nprob = len(seg_a)
        kind_a = np.array(kind)
        weight_a = np.array(weight)
        base_a = np.array(base)
        ray = np.exp(1j * np.asarray(thetas, dtype=float))[np.array(own)]

        def f(x, o):
            tail = (kind_a[o] == 1)[:, None]
            safe = np.where(x > 0, x, 1.0)
            r = np.where(tail, base_a[o][:, None] / safe, x)
            jac = np.where(tail, r * base_a[o][:, None] / (safe * safe), r)
            vals = np.asarray(integrand(c + r * ray[o][:, None]), dtype=complex)
            return weight_a[o][:, None] * vals * jac

        val, _, n = _gk_batch(f, (np.array(seg_a), np.arange(nprob)), np.array(seg_b),
                              np.full(nprob, inner_tol), nprob, config.max_levels, budget=config.max_cells)
        used += n
        out = np.zeros(len(thetas), dtype=complex)
        np.add.at(out, np.array(own), val)
        return out

    cuts = sorted({0.0, TWO_PI, *[b for b in breaks if 0 < b < TWO_PI]})
    sa = np.array(cuts[:-1])
    sb = np.array(cuts[1:])

    def outer(x, o):
        return ray_values(x.ravel()).reshape(x.shape)

    val, err, nout = _gk_batch(outer, (sa, np.zeros(len(sa), dtype=int)), sb, [tol], 1,
                               config.max_levels, budget=config.max_cells)
    total = complex(val[0])
    total_err = float(err[0])
    used += nout

    for h in holes:
        sub = PolarDescription(h.point, _const_intervals(0.0, h.radius))
        res = _polar_disk(sub, integrand, tol / max(1, len(holes)), config)
        total += h.weight * res.value
        total_err += abs(h.weight) * res.error_estimate
        used += res.cells_used
    if used > config.max_cells:
        raise NoConvergence("cell budget exhausted", partial=total, error_estimate=total_err)
    return QuadratureResult(total, total_err, used)


def _polar_disk(polar: PolarDescription, integrand, tol: float, config: QuadConfig) -> QuadratureResult:
    """Disk about a singular point: no holes, singularity at the polar center."""
    c = polar.center
    radius = polar.intervals(0.0)[0][1]
    inner_tol = tol / (20 * math.pi)
    used = 0

    def outer(x, o):
        nonlocal used
        thetas = x.ravel()
        n = thetas.size
        ray = np.exp(1j * thetas)

        def f(r, own):
            return np.asarray(integrand(c + r * ray[own][:, None]), dtype=complex) * r

        val, _, k = _gk_batch(f, (np.zeros(n), np.arange(n)), np.full(n, radius), np.full(n, inner_tol), n,
                              config.max_levels, budget=config.max_cells)
        used += k
        return val.reshape(x.shape)

    cuts = np.linspace(0, TWO_PI, 5)
    val, err, nout = _gk_batch(outer, (cuts[:-1], np.zeros(4, dtype=int)), cuts[1:], [tol], 1, config.max_levels,
                               budget=config.max_cells)
    return QuadratureResult(complex(val[0]), float(err[0]), used + nout)


# ---------------------------------------------------------------- cell route


_G7 = np.polynomial.legendre.leggauss(7)
_G5 = np.polynomial.legendre.leggauss(5)


def _tensor(rule, x0, x1, y0, y1):
    xs, ws = rule
    hx, hy = 0.5 * (x1 - x0), 0.5 * (y1 - y0)
    X = 0.5 * (x0 + x1)[:, None] + hx[:, None] * xs[None, :]
    Y = 0.5 * (y0 + y1)[:, None] + hy[:, None] * xs[None, :]
    Z = X[:, :, None] + 1j * Y[:, None, :]
    W = (hx * hy)[:, None, None] * ws[None, :, None] * ws[None, None, :]
    return Z, W


def _cell_integrate(region: Region, integrand, tol: float, config: QuadConfig, cut: Sequence[tuple[complex, float]]):
    lo, up = region.lower, region.upper
    if not (np.isfinite(lo) and np.isfinite(up)):
        raise ValidationError("predicate-only regions need a finite bounding box")
    size = max(up.real - lo.real, up.imag - lo.imag)
    min_cell = config.boundary_tol * size
    x0 = np.array([lo.real]); x1 = np.array([up.real])
    y0 = np.array([lo.imag]); y1 = np.array([up.imag])
    area = (up.real - lo.real) * (up.imag - lo.imag)
    value = 0j
    error = 0.0
    used = 0

    def masked(Z):
        m = region.membership(Z)
        for p, eps in cut:
            m &= np.abs(Z - p) >= eps
        F = np.zeros(Z.shape, dtype=complex)
        if np.any(m):
            F[m] = np.asarray(integrand(Z[m]), dtype=complex)
        return F, m

    while x0.size:
        used += x0.size
        if used > config.max_cells:
            raise NoConvergence("cell budget exhausted", partial=value, error_estimate=error)
        Z7, W7 = _tensor(_G7, x0, x1, y0, y1)
        Z5, W5 = _tensor(_G5, x0, x1, y0, y1)
        F7, m7 = masked(Z7)
        F5, m5 = masked(Z5)
        I7 = np.sum(F7 * W7, axis=(1, 2))
        I5 = np.sum(F5 * W5, axis=(1, 2))
        err = np.abs(I7 - I5)
        cell_area = (x1 - x0) * (y1 - y0)
        mixed = ~(np.all(m7, axis=(1, 2)) | ~np.any(m7, axis=(1, 2))) | (
            np.all(m5, axis=(1, 2)) != np.all(m7, axis=(1, 2)))
        small = np.maximum(x1 - x0, y1 - y0) <= min_cell
        ok = ((err <= tol * cell_area / area) & ~mixed) | small
        value += np.sum(I7[ok])
        error += float(np.sum(err[ok]))
        keep = ~ok
        xm = 0.5 * (x0 + x1)[keep]
        ym = 0.5 * (y0 + y1)[keep]
        a0, a1, b0, b1 = x0[keep], x1[keep], y0[keep], y1[keep]
        x0 = np.concatenate([a0, xm, a0, xm]); x1 = np.concatenate([xm, a1, xm, a1])
        y0 = np.concatenate([b0, b0, ym, ym]); y1 = np.concatenate([ym, ym, b1, b1])
    return complex(value), error, used


def _cell_route(region: Region, integrand, tol: float, config: QuadConfig) -> QuadratureResult:
    pts = [(complex(p), r) for p, r in region.excluded]
    if not pts:
        v, e, n = _cell_integrate(region, integrand, tol, config, ())
        return QuadratureResult(v, e, n)
    size = max(region.upper.real - region.lower.real, region.upper.imag - region.lower.imag)
    eps = min([r for _, r in pts if math.isfinite(r)] + [0.05 * size])
    prev_v, prev_extrap = None, None
    used = 0
    err_sum = 0.0
    for _ in range(8):
        cut = [(p, eps) for p, _ in pts]
        v, e, n = _cell_integrate(region, integrand, tol, config, cut)
        used += n
        err_sum = e
        if prev_v is not None:
            # the excised disks contribute O(eps): linear extrapolation in eps
            extrap = 2 * v - prev_v
            if prev_extrap is not None and abs(extrap - prev_extrap) < tol / 10:
                return QuadratureResult(extrap, err_sum + abs(extrap - prev_extrap), used)
            prev_extrap = extrap
        prev_v = v
        eps /= 2
    raise NoConvergence("exclusion-disk extrapolation did not settle", partial=prev_extrap,
                        error_estimate=err_sum)


# ---------------------------------------------------------------- public API


def integrate(region: Region, integrand, tol: float | None = None, config: QuadConfig | None = None) -> QuadratureResult:
    """Integrate ``integrand(z) dx dy`` over ``region``.

    ``integrand`` must accept complex arrays. Points listed in
    ``region.excluded`` are treated as integrable singularities.
    """
    config = config or QuadConfig()
    tol = config.tol if tol is None else tol
    if region.polar is not None:
        return _polar_integrate(region.polar, integrand, region.excluded, tol, config)
    return _cell_route(region, integrand, tol, config)


def integrate_pieces(pieces: Sequence[tuple[Region, float]], integrand, singular: Sequence[complex] = (),
                     tol: float | None = None, config: QuadConfig | None = None) -> QuadratureResult:
    """Integrate ``sum_k weight_k * chi_{region_k} * integrand``.

    Polar pieces sharing a center are merged into one weighted description so
    that each ray is integrated once.
    """
    config = config or QuadConfig()
    tol = config.tol if tol is None else tol
    groups: dict[complex, list] = {}
    order: list[complex] = []
    others = []
    for region, weight in pieces:
        if weight == 0:
            continue
        if region.polar is None:
            others.append((region, weight))
            continue
        c = region.polar.center
        if c not in groups:
            groups[c] = []
            order.append(c)
        groups[c].append((region.polar, float(weight)))
    sing = tuple((complex(p), math.inf) for p in singular)
    n_jobs = max(1, len(order) + len(others))
    total, err, used = 0j, 0.0, 0
    for c in order:
        members = groups[c]

        def intervals(theta, members=members):
            return merge_weighted([[(lo, hi, w * wt) for lo, hi, w in _normalize_intervals(p.intervals(theta))]
                                   for p, wt in members])

        brk = tuple(sorted({b for p, _ in members for b in p.breakpoints}))
        res = _polar_integrate(PolarDescription(c, intervals, brk), integrand, sing, tol / n_jobs, config)
        total += res.value
        err += res.error_estimate
        used += res.cells_used
    for region, weight in others:
        res = integrate(region.with_excluded(singular), integrand, tol / n_jobs, config)
        total += weight * res.value
        err += abs(weight) * res.error_estimate
        used += res.cells_used
    return QuadratureResult(total, err, used)


def integrate_pullback(domain: str, f, kernel, tol: float | None = None, singular_values: Sequence[complex] = (),
                       config: QuadConfig | None = None) -> QuadratureResult:
    """Integrate the pull-back of ``kernel(z) dx dy`` under ``f`` over the unit disk or its exterior.

    The integrand in the parameter plane is ``kernel(f(zeta)) |f'(zeta)|**2``;
    the exterior ``|zeta| > 1`` is handled as the disk in ``eta = 1/zeta``.
    Fibers of ``singular_values`` inside the domain are excluded points.
    """
    from .sphere import is_inf

    if domain not in ("disk", "exterior"):
        raise ValidationError("domain must be 'disk' or 'exterior'")
    F = f if domain == "disk" else f.inverted_argument()
    excl = []
    for v in singular_values:
        for p, _ in F.preimages(v):
            if not is_inf(p) and abs(p) < 1:
                excl.append(p)

    def pulled(eta):
        z = F(eta)
        d = F.derivative(eta)
        return np.asarray(kernel(z), dtype=complex) * (d.real ** 2 + d.imag ** 2)

    region = disk(0j, 1.0).with_excluded(excl)
    return integrate(region, pulled, tol, config)


def contour_residue(g, center: complex, radius: float, tol: float = 1e-12, max_nodes: int = 2 ** 16) -> complex:
    """``(1/2 pi i) * contour integral of g`` over ``|z - center| = radius`` (trapezoidal rule)."""
    def evaluate(z):
        try:
            out = np.asarray(g(z), dtype=complex)
            if out.shape == z.shape:
                return out
        except (TypeError, ValueError):
            pass
        return np.array([complex(g(complex(v))) for v in z])

    n = 16
    prev = None
    while n <= max_nodes:
        e = np.exp(2j * np.pi * np.arange(n) / n)
        val = complex(radius * np.mean(evaluate(center + radius * e) * e))
        if prev is not None and abs(val - prev) <= tol * (1 + abs(val)):
            return val
        prev = val
        n *= 2
    raise NonConvergence(f"trapezoidal rule did not converge on circle |z-{center}|={radius}")
