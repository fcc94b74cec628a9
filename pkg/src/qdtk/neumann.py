"""The ellipse and Neumann's oval: quadrature nodes, the level family and its regimes.

The level family is ``Q(z, zbar) = alpha`` with
``Q(z, w) = z^2 w^2 - z^2 - w^2 - 2 r^2 z w`` (the oval scaled so its
quadrature nodes sit at ``+-1``). In polar form, with ``s = |z|^2`` and
``u = cos(2 theta) + r^2``, the level equation reads ``s^2 - 2 u s = alpha``.
"""

from __future__ import annotations

import cmath
import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np
from scipy import optimize

from . import quad2d
from .cpoly import BiPoly, ComplexPoly, roots_companion
from .errors import EmptyLocus, NonConvergence, ValidationError
from .quad2d import QuadConfig
from .schwarz import (ellipse_schwarz, level_value, neumann_rho, qalpha_poly, regime_levels)
from .sphere import RationalMap, conjugate_map

LEVEL_TOL = 1e-10


# ---------------------------------------------------------------- the ellipse


@dataclass(frozen=True)
class EllipseParams:
    """Semiaxes ``a > b > 0``."""

    a: float
    b: float

    def __post_init__(self):
        if not (self.a > self.b > 0) or not math.isfinite(self.a):
            raise ValidationError("need finite semiaxes a > b > 0")

    @property
    def c(self) -> float:
        return math.sqrt(self.a ** 2 - self.b ** 2)

    @property
    def r(self) -> float:
        return math.sqrt(self.a ** 2 + self.b ** 2) / self.c

    def boundary_radius(self, theta):
        return self.a * self.b / np.hypot(self.b * np.cos(theta), self.a * np.sin(theta))

    def inside(self, z):
        z = np.asarray(z, dtype=complex)
        return (z.real / self.a) ** 2 + (z.imag / self.b) ** 2 < 1


def joukowski(p: EllipseParams) -> RationalMap:
    """``(c^2 zeta^2 + (a+b)^2) / (2 (a+b) zeta)``; maps the unit disk onto the ellipse exterior."""
    s = p.a + p.b
    return RationalMap(ComplexPoly([s * s, 0, p.c ** 2]), ComplexPoly([0, 2 * s]))


def _node_closed_form(p: EllipseParams, outer: bool) -> complex:
    a, b, c = p.a, p.b, p.c
    k = 2 * a * b * math.sqrt(1 + a * a + b * b + a * a * b * b)
    inner = a * a + b * b + 2 * a * a * b * b + (k if outer else -k)
    return cmath.sqrt(inner) / (1j * c)


def _nodes_from_map(p: EllipseParams, outside: bool) -> list[complex]:
    """Images of the zeros of ``1 + f f*`` in the disk (or its exterior)."""
    f = joukowski(p)
    fs = conjugate_map(f)
    poly = f.num * fs.num + f.den * fs.den
    out = []
    for zeta in roots_companion(poly).roots:
        if (abs(zeta) > 1) == outside:
            out.append(complex(f(zeta)))
    return out


def _schwarz_residue(p: EllipseParams, node: complex) -> complex:
    sign = min((1, -1), key=lambda s: abs(1 + node * ellipse_schwarz(p.a, p.b, node, s)))
    if abs(1 + node * ellipse_schwarz(p.a, p.b, node, sign)) > 1e-9 * (1 + abs(node)) ** 2:
        raise NonConvergence(f"{node} is not a zero of 1 + z S(z)")
    cut_dist = abs(node.imag) if abs(node.real) <= p.c else abs(node - math.copysign(p.c, node.real))
    radius = 0.4 * min(cut_dist, abs(node))

    def g(z):
        z = np.atleast_1d(z)
        s = np.array([ellipse_schwarz(p.a, p.b, v, sign) for v in z])
        return s / (1 + z * s)

    return quad2d.contour_residue(g, node, radius)


def _nodes(p: EllipseParams, outer: bool) -> tuple[complex, complex]:
    z = _node_closed_form(p, outer)
    located = _nodes_from_map(p, outside=not outer)
    if not located or min(abs(z - v) for v in located) > 1e-9 * (1 + abs(z)):
        raise NonConvergence("closed-form node does not match a zero of 1 + f f*")
    return z, _schwarz_residue(p, z)


def ellipse_spherical_nodes(p: EllipseParams) -> tuple[complex, complex]:
    """Node ``z0`` and weight ``c0`` of the spherical quadrature identity of the ellipse exterior."""
    return _nodes(p, outer=True)


def multi_sheet_nodes(p: EllipseParams) -> tuple[complex, complex]:
    """Node ``z1`` and weight ``c1`` of the weak identity for the doubly covered ellipse."""
    return _nodes(p, outer=False)


def located_nodes(p: EllipseParams, outer: bool = True) -> list[complex]:
    """Both nodes as images of zeros of ``1 + f f*`` (independent of the closed form)."""
    return _nodes_from_map(p, outside=not outer)


# ---------------------------------------------------------------- the level family


def q_polarized(r: float) -> BiPoly:
    """``Q(z, w) = z^2 w^2 - z^2 - w^2 - 2 r^2 z w``."""
    return qalpha_poly(r, 0.0)


def qalpha(r: float, alpha: float) -> BiPoly:
    """``Q(z, w) - alpha``."""
    return qalpha_poly(r, alpha)


def oval_level(p: EllipseParams, z):
    """Left member ``a^2 b^2 (x^2 + y^2)^2 - a^2 x^2 - b^2 y^2`` of the oval equation."""
    z = np.asarray(z, dtype=complex)
    x, y = z.real, z.imag
    return p.a ** 2 * p.b ** 2 * (x * x + y * y) ** 2 - p.a ** 2 * x * x - p.b ** 2 * y * y


def neumann_generator(r: float) -> RationalMap:
    """A rational map whose elimination polynomial with its reflection is ``Q``.

    It is the reciprocal of ``i`` times the Joukowski map of the ellipse with
    ``2ab = c`` and ``r = sqrt(a^2 + b^2)/c``; it maps the unit disk onto
    ``{Q(z, zbar) < 0}``.
    """
    c2 = 1.0 / (r ** 4 - 1)
    A = math.sqrt(c2 * (r * r + 1) / 2)
    B = math.sqrt(c2 * (r * r - 1) / 2)
    s = A + B
    return RationalMap(ComplexPoly([0, -2j * s]), ComplexPoly([s * s, 0, c2]))


def _gradient(r: float, x: float, y: float) -> tuple[float, float]:
    s = x * x + y * y
    return 4 * x * (s - 1 - r * r), 4 * y * (s + 1 - r * r)


def stationary_points(r: float) -> list[complex]:
    """The five stationary points of ``z -> Q(z, zbar)``, located numerically."""
    seeds = [0j, 1.3 * r, -1.3 * r, 0.8j * r, -0.8j * r]
    out = []
    for z0 in seeds:
        sol = optimize.root(lambda v: _gradient(r, v[0], v[1]), [z0.real, z0.imag], tol=1e-14)
        out.append(complex(sol.x[0], sol.x[1]))
    return out


def stationary_levels(r: float) -> tuple[float, float, float]:
    """Levels of the minima, saddles and local maximum: ``(-(r^2+1)^2, -(r^2-1)^2, 0)``.

    The levels are confirmed at the numerically located stationary points.
    """
    if not r > 1:
        raise ValidationError("need r > 1")
    levels = regime_levels(r)
    for z in stationary_points(r):
        val = float(level_value(r, z))
        if min(abs(val - lv) for lv in levels) > 1e-9 * (1 + r) ** 4:
            raise NonConvergence(f"stationary point {z} has unexpected level {val}")
    return levels


@dataclass(frozen=True)
class RegimeReport:
    r: float
    alpha: float
    label: str
    genus: int
    components: int
    reducible: bool
    admits_algebraic_domain: bool
    multi_sheeted: bool
    singular_contribution: int | None
    isolated_points: tuple[complex, ...] = ()

    def to_json(self) -> dict:
        d = asdict(self)
        d["regime"] = d.pop("label")
        d["isolated_points"] = [[z.real, z.imag] for z in self.isolated_points]
        return d


def classify(r: float, alpha: float) -> RegimeReport:
    """Topological regime of the level ``alpha``, keyed on the stationary levels."""
    if not r > 1:
        raise ValidationError("need r > 1")
    lo, mid, _ = regime_levels(r)
    tol = LEVEL_TOL
    if alpha > tol:
        return RegimeReport(r, alpha, "MobiusBand", 1, 1, False, False, False, 0)
    if abs(alpha) <= tol:
        return RegimeReport(r, alpha, "Disk", 0, 1, False, True, False, 1, (0j,))
    if alpha > mid + tol:
        return RegimeReport(r, alpha, "Annulus", 1, 2, False, True, True, 0)
    if abs(alpha - mid) <= tol:
        return RegimeReport(r, alpha, "TwoDisks", 0, 2, True, True, False, None)
    if alpha > lo + tol:
        return RegimeReport(r, alpha, "Cylinder", 1, 2, False, True, True, 0)
    if abs(alpha - lo) <= tol:
        x = math.sqrt(r * r + 1)
        return RegimeReport(r, alpha, "Sphere", 0, 0, True, False, False, None, (complex(-x), complex(x)))
    return RegimeReport(r, alpha, "KleinBottle", 1, 0, False, False, False, 0)


def factorize_reducible(r: float, alpha: float) -> tuple[BiPoly, BiPoly] | None:
    """Factor pair of ``Q - alpha`` at the two reducible levels, else ``None``."""
    lo, mid, _ = regime_levels(r)
    r2 = r * r
    if abs(alpha - mid) <= LEVEL_TOL:
        f1 = BiPoly([[1 - r2, 1], [1, 1]])    # (z+1)(w+1) - r^2
        f2 = BiPoly([[1 - r2, -1], [-1, 1]])  # (z-1)(w-1) - r^2
    elif abs(alpha - lo) <= LEVEL_TOL:
        f1 = BiPoly([[-1 - r2, 1], [-1, 1]])  # (z+1)(w-1) - r^2
        f2 = BiPoly([[-1 - r2, -1], [1, 1]])  # (z-1)(w+1) - r^2
    else:
        return None
    resid = np.max(np.abs((f1 * f2 - qalpha(r, alpha)).coeffs))
    if resid > 1e-10 * (1 + r2) ** 2:
        raise NonConvergence(f"factorization residual {resid}")
    return f1, f2


def factor_intersections(f1: BiPoly, f2: BiPoly) -> list[tuple[complex, complex]]:
    """Common zeros ``(z, w)`` of two factors of degree one in ``w``."""
    a1, a0 = f1.w_coefficient(1), f1.w_coefficient(0)
    b1, b0 = f2.w_coefficient(1), f2.w_coefficient(0)
    elim = a0 * b1 - a1 * b0
    out = []
    for z in roots_companion(elim).roots:
        d = a1(z)
        w = -a0(z) / d if abs(d) > 1e-12 else -b0(z) / b1(z)
        out.append((complex(z), complex(w)))
    return out


def real_intersection_points(r: float, alpha: float) -> list[complex]:
    """Intersections of the two factor curves that lie on the real locus (``w = zbar``)."""
    pair = factorize_reducible(r, alpha)
    if pair is None:
        return []
    return [z for z, w in factor_intersections(*pair) if abs(w - z.conjugate()) < 1e-8 * (1 + abs(z))]


# ---------------------------------------------------------------- level curves


@dataclass
class LevelCurveSample:
    r: float
    alpha: float
    components: list = field(default_factory=list)
    isolated: list = field(default_factory=list)

    @property
    def component_count(self) -> int:
        return len(self.components)

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["component", "x", "y"])
        for k, comp in enumerate(self.components):
            for z in comp:
                wr.writerow([k, repr(float(z.real)), repr(float(z.imag))])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "alpha": self.alpha,
            "component_count": self.component_count,
            "components": [[[float(z.real), float(z.imag)] for z in comp] for comp in self.components],
            "isolated_points": [[float(z.real), float(z.imag)] for z in self.isolated],
        }


def _level_and_grad(r, z):
    s = abs(z) ** 2
    gx, gy = _gradient(r, z.real, z.imag)
    return float(level_value(r, z)), complex(gx, gy)


def _correct(r, alpha, z, iters=30):
    for _ in range(iters):
        val, g = _level_and_grad(r, z)
        dz = (val - alpha) * g / abs(g) ** 2
        z = z - dz
        if abs(dz) < 1e-15 * (1 + abs(z)):
            break
    return z


def _trace(r: float, alpha: float, seed: complex, h: float, max_steps: int = 200000) -> np.ndarray:
    """Closed-curve continuation: tangent predictor, gradient Newton corrector."""
    z = _correct(r, alpha, seed)
    start = z
    pts = [z]
    travelled = 0.0
    for _ in range(max_steps):
        _, g = _level_and_grad(r, z)
        t = 1j * g / abs(g)
        step = h
        while True:
            znew = _correct(r, alpha, z + step * t)
            if abs(znew - z) < 2 * step and abs(znew - (z + step * t)) < 0.2 * step:
                break
            step /= 2
            if step < 1e-10:
                raise NonConvergence(f"continuation stalled near {z}")
        travelled += abs(znew - z)
        z = znew
        if travelled > 4 * h and abs(z - start) < 1.5 * h:
            return np.array(pts)
        pts.append(z)
    raise NonConvergence("level curve did not close")


def _resample(r, alpha, poly: np.ndarray, n: int) -> np.ndarray:
    closed = np.concatenate([poly, poly[:1]])
    seg = np.abs(np.diff(closed))
    s = np.concatenate([[0.0], np.cumsum(seg)])
    targets = np.linspace(0, s[-1], n, endpoint=False)
    x = np.interp(targets, s, closed.real)
    y = np.interp(targets, s, closed.imag)
    return np.array([_correct(r, alpha, complex(a, b)) for a, b in zip(x, y)])


def _axis_seeds(r: float, alpha: float) -> list[complex]:
    seeds = []
    for base, axis in ((1 + r * r, 1.0), (r * r - 1, 1j)):
        disc = base * base + alpha
        if disc < 0:
            continue
        for sq in (base + math.sqrt(disc), base - math.sqrt(disc)):
            if abs(sq) <= 1e-12 * base:
                seeds.append(0j)
            elif sq > 0:
                x = math.sqrt(sq)
                seeds += [x * axis, -x * axis]
    return seeds


def _circle(center: complex, radius: float, n: int) -> np.ndarray:
    t = 2 * np.pi * np.arange(n) / n
    return center + radius * np.exp(1j * t)


def levelcurve(r: float, alpha: float, n: int = 400) -> LevelCurveSample:
    """Sample each component of ``{Q(z, zbar) = alpha}`` with ``n`` points."""
    if not r > 1:
        raise ValidationError("need r > 1")
    if n < 3:
        raise ValidationError("need at least 3 points per component")
    lo, mid, _ = regime_levels(r)
    if alpha < lo - LEVEL_TOL:
        raise EmptyLocus("the level lies below the global minimum; there is no real locus")
    out = LevelCurveSample(r, alpha)
    if abs(alpha - lo) <= LEVEL_TOL:
        x = math.sqrt(r * r + 1)
        out.isolated = [complex(-x), complex(x)]
        return out
    if abs(alpha - mid) <= LEVEL_TOL:
        out.components = [_circle(-1, r, n), _circle(1, r, n)]
        return out
    scale = math.sqrt(2 * (1 + r * r))
    h = 2e-3 * scale
    for seed in _axis_seeds(r, alpha):
        _, g = _level_and_grad(r, seed)
        if abs(g) < 1e-9:
            out.isolated.append(seed)
            continue
        if any(np.min(np.abs(comp - seed)) < 5 * h for comp in out.components):
            continue
        poly = _trace(r, alpha, seed, h)
        out.components.append(poly)
    out.components = [_resample(r, alpha, c, n) for c in out.components]
    out.isolated = sorted({complex(round(z.real, 14), round(z.imag, 14)) for z in out.isolated},
                          key=lambda z: (z.real, z.imag))
    return out


# ---------------------------------------------------------------- regions and densities


def neumann_density(r: float, alpha: float, circle: int = 1):
    """Counting function of the level ``alpha`` as a ``Density`` of polar pieces about 0."""
    from .transforms import Density

    lo, mid, _ = regime_levels(r)
    r2 = r * r

    def g(z):
        return level_value(r, z) - alpha

    def below_mid(z):
        z = np.asarray(z, dtype=complex)
        s = (z * np.conj(z)).real
        with np.errstate(invalid="ignore", divide="ignore"):
            u = np.where(s > 0, (z * z).real / np.where(s > 0, s, 1) + r2, r2)
        return s < u

    if abs(alpha - mid) <= LEVEL_TOL:
        reg = quad2d.disk(complex(circle), r)
        return Density(((reg, 1),))
    if abs(alpha) <= LEVEL_TOL:
        def iv(t):
            return [(0.0, math.sqrt(2 * (math.cos(2 * t) + r2)))]
        reg = quad2d.polar_region(0j, iv, lambda z: level_value(r, z) < 0, extent=math.sqrt(2 * (1 + r2)))
        return Density(((reg, 1),))
    if mid < alpha < 0:
        def inner(t):
            u = math.cos(2 * t) + r2
            return [(0.0, math.sqrt(u - math.sqrt(u * u + alpha)))]

        def ring(t):
            u = math.cos(2 * t) + r2
            d = math.sqrt(u * u + alpha)
            return [(math.sqrt(u - d), math.sqrt(u + d))]

        ext = math.sqrt(1 + r2 + math.sqrt((1 + r2) ** 2 + alpha))
        return Density(((quad2d.polar_region(0j, inner, lambda z: (g(z) > 0) & below_mid(z), extent=ext), 2),
                        (quad2d.polar_region(0j, ring, lambda z: g(z) < 0, extent=ext), 1)))
    if lo < alpha < mid:
        # ovals around +-sqrt(r^2+1); rays meet them when u^2 + alpha >= 0
        tmax = 0.5 * math.acos(math.sqrt(-alpha) - r2)
        brk = [tmax, math.pi - tmax, math.pi + tmax, 2 * math.pi - tmax]

        def both(t):
            u = math.cos(2 * t) + r2
            d = u * u + alpha
            if d <= 0 or u <= 0:
                return []
            d = math.sqrt(d)
            return [(math.sqrt(u - d), math.sqrt(u + d))]

        # the selected oval is covered twice, the other one not at all
        def ovals(t):
            return both(t) if math.cos(t) * circle > 0 else []

        def outside(t):
            ivs = both(t)
            if not ivs:
                return [(0.0, math.inf)]
            a, b = ivs[0]
            return [(0.0, a), (b, math.inf)]

        return Density(((quad2d.polar_region(0j, ovals, lambda z: (g(z) < 0) & (np.real(z) * circle > 0),
                                              breakpoints=brk,
                                              extent=math.sqrt(1 + r2 + math.sqrt((1 + r2) ** 2 + alpha))), 2),
                        (quad2d.polar_region(0j, outside, lambda z: g(z) > 0, breakpoints=brk), 1)))
    neumann_rho(r, alpha, 0j)  # raises UnsupportedRegime
    raise ValidationError("unsupported level")


# ---------------------------------------------------------------- quadrature identities


@dataclass(frozen=True)
class QuadratureCheck:
    lhs: complex
    rhs: complex
    defect: float
    error_estimate: float = 0.0


def _check(lhs: complex, rhs: complex, err: float = 0.0) -> QuadratureCheck:
    return QuadratureCheck(complex(lhs), complex(rhs), abs(lhs - rhs) / (1 + abs(rhs)), err)


def _vec(h: Callable) -> Callable:
    def hv(z):
        return np.asarray(h(z), dtype=complex) * np.ones(np.shape(z))
    return hv


def check_twopoint(r: float, h: Callable, tol: float = 1e-10, config: QuadConfig | None = None) -> QuadratureCheck:
    """``int_Omega h dx dy`` against ``pi r^2 (h(-1) + h(1))``."""
    rho = neumann_density(r, 0.0)
    hv = _vec(h)
    res = quad2d.integrate_pieces(list(rho.pieces), hv, (), tol, config)
    return _check(res.value, math.pi * r * r * (complex(h(-1.0)) + complex(h(1.0))), res.error_estimate)


def check_euclidean(p: EllipseParams, h: Callable, tol: float = 1e-10, config: QuadConfig | None = None) -> QuadratureCheck:
    """Neumann's oval ``a^2 b^2 |z|^4 < a^2 x^2 + b^2 y^2``: ``(1/pi) int h`` against the two-node rule."""
    a, b, c = p.a, p.b, p.c

    def iv(t):
        return [(0.0, math.sqrt(a * a * math.cos(t) ** 2 + b * b * math.sin(t) ** 2) / (a * b))]

    reg = quad2d.polar_region(0j, iv, lambda z: oval_level(p, z) < 0, extent=1 / b)
    hv = _vec(h)
    res = quad2d.integrate(reg, lambda z: hv(z) / math.pi, tol, config)
    node = c / (2 * a * b)
    rhs = (a * a + b * b) / (4 * a * a * b * b) * (complex(h(-node)) + complex(h(node)))
    return _check(res.value, rhs, res.error_estimate)


def _spherical(z):
    return 1.0 / (math.pi * (1 + (z * np.conj(z)).real) ** 2)


def check_spherical(p: EllipseParams, h: Callable, tol: float = 1e-10, config: QuadConfig | None = None) -> QuadratureCheck:
    """Spherical identity on the ellipse exterior with the computed node ``z0`` and weight ``c0``."""
    z0, c0 = ellipse_spherical_nodes(p)
    reg = quad2d.polar_region(0j, lambda t: [(float(p.boundary_radius(t)), math.inf)], lambda z: ~p.inside(z))
    hv = _vec(h)
    res = quad2d.integrate(reg, lambda z: hv(z) * _spherical(z), tol, config)
    return _check(res.value, c0 * (complex(h(z0)) + complex(h(-z0))), res.error_estimate)


def check_weak_multisheet(p: EllipseParams, h: Callable, tol: float = 1e-10,
                          config: QuadConfig | None = None) -> QuadratureCheck:
    """``(1/pi) int rho h dsigma`` (``rho`` = 2 on the ellipse, 1 outside) against ``c1 (h(z1) + h(-z1))``.

    ``h`` must be analytic on the whole sphere, so only constants are admissible.
    """
    from .transforms import ellipse_density

    z1, c1 = multi_sheet_nodes(p)
    rho = ellipse_density(p.a, p.b, 2, 1)
    hv = _vec(h)
    res = quad2d.integrate_pieces(list(rho.pieces), lambda z: hv(z) * _spherical(z), (), tol, config)
    return _check(res.value, c1 * (complex(h(z1)) + complex(h(-z1))), res.error_estimate)


def pullback_nodes(f: RationalMap, domain: str) -> tuple[list[complex], list[complex]]:
    """Zeros of ``1 + f f*`` and poles of ``f`` or ``f*`` inside the half.

    Points are given in the disk coordinate (``eta = 1/zeta`` for the exterior).
    """
    F = f if domain == "disk" else f.inverted_argument()
    Fs = conjugate_map(F)

    def inside(poly):
        if poly.degree < 1:
            return []
        return [complex(v) for v in roots_companion(poly).roots if abs(v) < 1]

    zeros = inside(F.num * Fs.num + F.den * Fs.den)
    poles: list[complex] = []
    for v in inside(F.den) + inside(Fs.den):
        if all(abs(v - u) > 1e-9 for u in poles + zeros):
            poles.append(v)
    return zeros, poles


def check_multisheet(f: RationalMap, domain: str, h: Callable, tol: float = 1e-10,
                     config: QuadConfig | None = None) -> QuadratureCheck:
    """Pulled-back spherical identity on the half ``M+``.

    ``h`` is a function of the parameter ``zeta``, holomorphic on the closure of
    ``M+``. The left side is ``(1/pi) int h |f'|^2 / (1 + |f|^2)^2``; the right side
    sums residues of ``h f* f' dzeta / (1 + f f*)`` at the located zeros of
    ``1 + f f*`` and the poles of ``f`` and ``f*`` inside ``M+``.
    """
    if domain not in ("disk", "exterior"):
        raise ValidationError("domain must be 'disk' or 'exterior'")
    F = f if domain == "disk" else f.inverted_argument()
    Fs = conjugate_map(F)
    H = h if domain == "disk" else (lambda eta: h(1 / eta))

    def integrand(eta):
        v = F(eta)
        d = F.derivative(eta)
        return np.asarray(H(eta), dtype=complex) * (d * np.conj(d)).real / (math.pi * (1 + (v * np.conj(v)).real) ** 2)

    res = quad2d.integrate(quad2d.disk(), integrand, tol, config)
    zeros, poles = pullback_nodes(f, domain)

    def form(eta):
        eta = np.atleast_1d(np.asarray(eta, dtype=complex))
        fn, fd = F.num(eta), F.den(eta)
        gn, gd = Fs.num(eta), Fs.den(eta)
        dn, dd = F.num.deriv()(eta), F.den.deriv()(eta)
        # h f* f' / (1 + f f*) with f = fn/fd, f* = gn/gd
        return np.asarray(H(eta), dtype=complex) * gn * (dn * fd - fn * dd) / (fd * (fd * gd + fn * gn))

    def form_at_pole(eta):
        # near a pole of f the boundary form is h f'/f, which carries its own residue
        eta = np.atleast_1d(np.asarray(eta, dtype=complex))
        fn, fd = F.num(eta), F.den(eta)
        dn, dd = F.num.deriv()(eta), F.den.deriv()(eta)
        return form(eta) - np.asarray(H(eta), dtype=complex) * (dn * fd - fn * dd) / (fd * fn)

    pts = zeros + poles
    rhs = 0j
    for k, v in enumerate(pts):
        others = [abs(v - u) for j, u in enumerate(pts) if j != k]
        rad = 0.3 * min(others + [1 - abs(v)])
        is_f_pole = k >= len(zeros) and abs(F.den(v)) < 1e-12 * (1 + abs(F.num(v)))
        rhs += quad2d.contour_residue(form_at_pole if is_f_pole else form, v, rad)
    return _check(res.value, rhs, res.error_estimate)


QUADRATURE_KINDS = ("twopoint", "euclidean", "spherical", "weak-multisheet", "multisheet")


def check_quadrature(kind: str, h: Callable, *, r: float | None = None, params: EllipseParams | None = None,
                     f: RationalMap | None = None, domain: str = "exterior", tol: float = 1e-10,
                     config: QuadConfig | None = None) -> QuadratureCheck:
    """Dispatch to one of the quadrature-identity checks.

    ``twopoint`` needs ``r``; ``euclidean``, ``spherical`` and ``weak-multisheet``
    need ``params``; ``multisheet`` needs ``f`` (default: the Joukowski map of
    ``params``) and ``domain``.
    """
    if kind == "twopoint":
        if r is None:
            raise ValidationError("twopoint needs r")
        return check_twopoint(r, h, tol, config)
    if kind == "multisheet":
        if f is None:
            if params is None:
                raise ValidationError("multisheet needs a map or ellipse parameters")
            f = joukowski(params)
        return check_multisheet(f, domain, h, tol, config)
    if kind not in QUADRATURE_KINDS:
        raise ValidationError(f"unknown quadrature kind {kind!r}")
    if params is None:
        raise ValidationError(f"{kind} needs ellipse parameters")
    fn = {"euclidean": check_euclidean, "spherical": check_spherical, "weak-multisheet": check_weak_multisheet}[kind]
    return fn(params, h, tol, config)
