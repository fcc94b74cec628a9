"""Cauchy, double Cauchy and extended Cauchy/exponential transforms.

Densities are integer counting functions given as weighted regions. Area
integrals use the orientation ``dzeta ^ dzetabar = -2i dx dy``, so the Cauchy
transform is ``C(z) = -(1/pi) * integral rho(zeta) / (zeta - z) dx dy`` and
satisfies ``dC/dzbar = rho``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import quad2d
from .errors import OnBoundary, ValidationError
from .quad2d import QuadConfig, Region
from .sphere import INF, RationalMap, is_inf

BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class Density:
    """Piecewise constant nonnegative integer density ``sum weight * chi_region``."""

    pieces: tuple[tuple[Region, int], ...]

    def __post_init__(self):
        for _, wt in self.pieces:
            if int(wt) != wt or wt < 0:
                raise ValidationError("density weights must be nonnegative integers")

    @classmethod
    def zero(cls) -> "Density":
        return cls(())

    @classmethod
    def disk(cls, center: complex = 0j, radius: float = 1.0, weight: int = 1) -> "Density":
        return cls(((quad2d.disk(center, radius), weight),))

    @classmethod
    def whole_plane(cls, weight: int = 1) -> "Density":
        return cls(((quad2d.whole_plane(), weight),))

    @property
    def bounded(self) -> bool:
        return all(reg.bounded for reg, wt in self.pieces if wt)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=int)
        for reg, wt in self.pieces:
            out = out + wt * reg.membership(z)
        return out

    def check_disjoint(self, n: int = 2000, seed: int = 0, extent: float = 10.0) -> bool:
        """Spot-check that no random point lies in two pieces."""
        rng = np.random.default_rng(seed)
        z = extent * (rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n))
        hits = sum(reg.membership(z).astype(int) for reg, _ in self.pieces) if self.pieces else np.zeros(n)
        return bool(np.all(hits <= 1))


@dataclass(frozen=True)
class TransformPoint:
    """The four arguments ``z, w; a, b`` of the extended transforms."""

    z: complex
    w: complex
    a: complex = INF
    b: complex = INF

    def finite(self) -> list[complex]:
        return [complex(p) for p in (self.z, self.w, self.a, self.b) if not is_inf(p)]

    def as_tuple(self):
        return (self.z, self.w, self.a, self.b)


def _same(p, q) -> bool:
    if is_inf(p) or is_inf(q):
        return is_inf(p) and is_inf(q)
    return complex(p) == complex(q)


def kernel_difference(x, p, q):
    """``1/(x - p) - 1/(x - q)``, with a point at infinity dropping its term."""
    if is_inf(q):
        return 1.0 / (x - p)
    if is_inf(p):
        return -1.0 / (x - q)
    return (p - q) / ((x - p) * (x - q))


def extended_kernel(pts: TransformPoint):
    """Integrand of the extended Cauchy transform, without the density."""
    z, w, a, b = pts.as_tuple()

    def kern(x):
        return -(kernel_difference(x, z, a) * np.conj(kernel_difference(x, w, b))) / math.pi

    return kern


def cauchy(rho: Density, z: complex, tol: float = 1e-9, config: QuadConfig | None = None) -> complex:
    """Cauchy transform ``-(1/pi) * integral rho/(zeta - z)`` of a compactly supported density."""
    if not rho.bounded:
        raise ValidationError("the Cauchy transform needs a density with bounded support")
    if not rho.pieces:
        return 0j
    z = complex(z)
    res = quad2d.integrate_pieces(list(rho.pieces), lambda x: -1.0 / (math.pi * (x - z)), [z], tol, config)
    return res.value


def _check_points(pts: TransformPoint):
    names = "zwab"
    vals = pts.as_tuple()
    for i in range(4):
        for j in range(i + 1, 4):
            if (i, j) in ((0, 2), (1, 3)):
                continue
            if not is_inf(vals[i]) and _same(vals[i], vals[j]):
                raise ValidationError(f"points {names[i]} and {names[j]} coincide")


def extended_cauchy_result(rho: Density, pts: TransformPoint, tol: float = 1e-9,
                           config: QuadConfig | None = None) -> quad2d.QuadratureResult:
    if _same(pts.z, pts.a) or _same(pts.w, pts.b) or not rho.pieces:
        return quad2d.QuadratureResult(0j, 0.0, 0)
    _check_points(pts)
    if (is_inf(pts.z) and is_inf(pts.a)) or (is_inf(pts.w) and is_inf(pts.b)):
        return quad2d.QuadratureResult(0j, 0.0, 0)
    if not rho.bounded and (is_inf(pts.a) or is_inf(pts.b)):
        raise ValidationError("unbounded densities need all four points finite")
    return quad2d.integrate_pieces(list(rho.pieces), extended_kernel(pts), pts.finite(), tol, config)


def extended_cauchy(rho: Density, pts: TransformPoint, tol: float = 1e-9, config: QuadConfig | None = None) -> complex:
    """``C_rho(z, w; a, b)``; equals the double Cauchy transform when ``a = b = inf``."""
    return extended_cauchy_result(rho, pts, tol, config).value


def double_cauchy(rho: Density, z: complex, w: complex, tol: float = 1e-9, config: QuadConfig | None = None) -> complex:
    return extended_cauchy(rho, TransformPoint(z, w), tol, config)


def extended_exponential(rho: Density, pts: TransformPoint, tol: float = 1e-9, config: QuadConfig | None = None) -> complex:
    """``E_rho(z, w; a, b) = exp C_rho(z, w; a, b)``."""
    return cmath.exp(extended_cauchy(rho, pts, tol, config))


def disk_exponential_closed_form(z: complex, w: complex) -> complex:
    """Exponential transform ``E(z, w)`` of the unit disk in closed form."""
    z, w = complex(z), complex(w)
    for p in (z, w):
        if abs(abs(p) - 1.0) < BOUNDARY_TOL:
            raise OnBoundary(f"{p} lies on the unit circle")
    zin, win = abs(z) < 1, abs(w) < 1
    if not zin and not win:
        return 1 - 1 / (z * w.conjugate())
    if zin and not win:
        return 1 - z.conjugate() / w.conjugate()
    if not zin and win:
        return 1 - w / z
    return abs(z - w) ** 2 / (1 - z * w.conjugate())


def disk_extended_closed_form(z, w, a, b) -> complex:
    """Extended exponential transform of the unit disk from the two-variable closed form."""
    E = disk_exponential_closed_form
    return E(z, w) * E(a, b) / (E(z, b) * E(a, w))


def cross_ratio_modulus(z, w, a, b) -> float:
    """``|(z - w)(a - b) / ((z - b)(a - w))|**2``, the transform of the density 1 on the sphere."""
    return abs((z - w) * (a - b) / ((z - b) * (a - w))) ** 2


def exp_transform_pullback_result(f: RationalMap, domain: str, pts: TransformPoint, tol: float = 1e-9,
                                  config: QuadConfig | None = None) -> quad2d.QuadratureResult:
    if _same(pts.z, pts.a) or _same(pts.w, pts.b):
        return quad2d.QuadratureResult(0j, 0.0, 0)
    _check_points(pts)
    return quad2d.integrate_pullback(domain, f, extended_kernel(pts), tol, pts.finite(), config)


def exp_transform_pullback(f: RationalMap, domain: str, pts: TransformPoint, tol: float = 1e-9,
                           config: QuadConfig | None = None) -> complex:
    """Extended exponential transform of the counting function of ``f`` on the disk or its exterior,
    integrated in the parameter plane."""
    return cmath.exp(exp_transform_pullback_result(f, domain, pts, tol, config).value)


def dbar(fun, z: complex, h: float = 1e-4) -> complex:
    """Central-difference ``d/dzbar = (d/dx + i d/dy) / 2``."""
    fx = (fun(z + h) - fun(z - h)) / (2 * h)
    fy = (fun(z + 1j * h) - fun(z - 1j * h)) / (2 * h)
    return 0.5 * (fx + 1j * fy)


def ellipse_density(a: float, b: float, inside: int, outside: int) -> Density:
    """Weight ``inside`` on the ellipse ``x^2/a^2 + y^2/b^2 < 1``, ``outside`` elsewhere."""
    def radius(theta):
        return a * b / math.hypot(b * math.cos(theta), a * math.sin(theta))

    def inner(z):
        return (z.real / a) ** 2 + (z.imag / b) ** 2 < 1

    pieces = []
    if inside:
        pieces.append((quad2d.polar_region(0j, lambda t: [(0.0, radius(t))], inner, extent=a), inside))
    if outside:
        pieces.append((quad2d.polar_region(0j, lambda t: [(radius(t), math.inf)], lambda z: ~inner(z)), outside))
    return Density(tuple(pieces))


def points_from(seq: Sequence[complex]) -> TransformPoint:
    if len(seq) == 2:
        return TransformPoint(seq[0], seq[1])
    if len(seq) != 4:
        raise ValidationError("expected two or four points")
    return TransformPoint(*seq)
