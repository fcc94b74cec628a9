"""Counting functions, fibers, Schwarz-function branches and the Neumann-oval densities.

For a rational map ``f`` and the half ``M+`` (unit disk or its exterior) the
counting function ``rho(z)`` is the number of ``M+``-preimages of ``z``. The
fiber product ``(S(z) - wbar)^rho(z)`` is the product of ``f*(zeta) - wbar``
over that fiber.

The level family ``Q(z, w) - alpha`` with
``Q(z, w) = z^2 w^2 - z^2 - w^2 - 2 r^2 z w`` is handled without an explicit
parametrization: ``rho`` comes from the sign pattern of ``Q(z, zbar) - alpha``
and single-sheet points take a Schwarz branch fixed by continuation from the
level curve.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cpoly import BiPoly, RootSet, branch_points, solve_quadratic_in_w
from .errors import (BranchTrackFailure, OnBoundary, OnBoundaryFiber, OnBranchCut, PoleAtFiber,
                     UnsupportedRegime, ValidationError)
from .sphere import RationalMap, SymmetricPair, is_inf

FIBER_TOL = 1e-7
LEVEL_TOL = 1e-10


# ---------------------------------------------------------------- fibers of rational maps


@dataclass(frozen=True)
class Fiber:
    """``M+``-preimages of ``base`` with multiplicities."""

    base: complex
    points: tuple[tuple[complex, int], ...]

    @property
    def count(self) -> int:
        return sum(m for _, m in self.points)


def _check_domain(domain: str):
    if domain not in ("disk", "exterior"):
        raise ValidationError("domain must be 'disk' or 'exterior'")


def fiber(f: RationalMap, domain: str, z: complex) -> Fiber:
    """Preimages of ``z`` in the unit disk (``domain='disk'``) or in ``|zeta| > 1``."""
    _check_domain(domain)
    pts = []
    for p, m in f.preimages(z):
        if is_inf(p):
            if domain == "exterior":
                pts.append((p, m))
            continue
        d = abs(p)
        if abs(d - 1) < FIBER_TOL:
            raise OnBoundaryFiber(f"preimage {p} of {z} lies on the unit circle")
        if (d < 1) == (domain == "disk"):
            pts.append((p, m))
    return Fiber(complex(z), tuple(pts))


def counting_function(f: RationalMap, domain: str, z: complex) -> int:
    """``rho(z)``: number of preimages of ``z`` in the chosen half, with multiplicity."""
    return fiber(f, domain, z).count


def fiber_product(pair: SymmetricPair, domain: str, z: complex, wbar: complex) -> complex:
    """``prod (f*(zeta_i) - wbar)`` over the ``M+``-fiber of ``z``; 1 for an empty fiber."""
    out = 1 + 0j
    for p, m in fiber(pair.f, domain, z).points:
        v = pair.fstar(p)
        if is_inf(v):
            raise PoleAtFiber(f"f* has a pole at the fiber point {p}")
        out *= (complex(v) - wbar) ** m
    return out


# ---------------------------------------------------------------- the ellipse


def ellipse_schwarz(a: float, b: float, z: complex, sign: int = 1) -> complex:
    """A branch of the Schwarz function of the ellipse ``x^2/a^2 + y^2/b^2 = 1``.

    ``S(z) = ((a^2 + b^2) z + sign * 2ab sqrt(z^2 - c^2)) / c^2``.

    ``sqrt(z^2 - c^2)`` is taken as ``z * sqrt(1 - c^2/z^2)``, which behaves
    like ``z`` at infinity and is cut along the focal segment ``[-c, c]``.
    """
    if not a > b > 0:
        raise ValidationError("need a > b > 0")
    if sign not in (1, -1):
        raise ValidationError("sign must be +1 or -1")
    c = math.sqrt(a * a - b * b)
    z = complex(z)
    if abs(z.imag) <= 1e-14 * (1 + abs(z)) and abs(z.real) < c * (1 - 1e-14):
        raise OnBranchCut(f"{z} lies on the focal segment")
    root = 0j if z == 0 else z * cmath.sqrt(1 - (c / z) ** 2)
    return (a * a + b * b) / (c * c) * z + sign * (2 * a * b / (c * c)) * root


# ---------------------------------------------------------------- the level family


def qalpha_poly(r: float, alpha: float) -> BiPoly:
    """``Q(z, w) - alpha`` as a coefficient matrix."""
    if not r > 1:
        raise ValidationError("need r > 1")
    return BiPoly.from_terms({(2, 2): 1, (2, 0): -1, (0, 2): -1, (1, 1): -2 * r * r, (0, 0): -alpha})


def level_value(r: float, z):
    """``Q(z, zbar)``, a real number."""
    z = np.asarray(z, dtype=complex)
    s = (z * np.conj(z)).real
    return s * s - 2 * (z * z).real - 2 * r * r * s


@dataclass(frozen=True)
class SchwarzBranches:
    z: complex
    plus: complex
    minus: complex
    branch_points: RootSet

    def values(self) -> tuple[complex, complex]:
        return (self.plus, self.minus)


def qalpha_branches(r: float, alpha: float, z: complex) -> SchwarzBranches:
    """Both roots ``w`` of ``Q(z, w) = alpha``."""
    Q = qalpha_poly(r, alpha)
    sp, sm = solve_quadratic_in_w(Q, z)
    return SchwarzBranches(complex(z), sp, sm, branch_points(Q))


def _branch_pair(r, alpha, z):
    return solve_quadratic_in_w(qalpha_poly(r, alpha), z)


def regime_levels(r: float) -> tuple[float, float, float]:
    return (-(r * r + 1) ** 2, -(r * r - 1) ** 2, 0.0)


def _regime(r: float, alpha: float) -> str:
    lo, mid, _ = regime_levels(r)
    if abs(alpha) <= LEVEL_TOL:
        return "disk"
    if abs(alpha - mid) <= LEVEL_TOL:
        return "circles"
    if alpha > 0:
        raise UnsupportedRegime("alpha > 0: the surface has no separating real locus")
    if alpha <= lo + LEVEL_TOL:
        raise UnsupportedRegime("alpha <= -(r^2+1)^2: no algebraic domain")
    return "annulus" if alpha > mid else "cylinder"


def neumann_rho(r: float, alpha: float, z: complex, circle: int = 1) -> int:
    """Sheet count over ``z`` for the level ``alpha``.

    At ``alpha = -(r^2-1)^2`` the curve is two circles ``|z -+ 1| = r``;
    ``circle`` (``+1`` or ``-1``) selects which single-sheeted disk is used.
    In the cylinder regime it selects the oval that is covered twice; the
    oval on the other side is not covered.
    """
    kind = _regime(r, alpha)
    z = complex(z)
    if kind == "circles":
        if circle not in (1, -1):
            raise ValidationError("circle must be +1 or -1")
        d = abs(z - circle)
        if abs(d - r) < 1e-12 * (1 + r):
            raise OnBoundary(f"{z} lies on the circle")
        return int(d < r)
    g = float(level_value(r, z)) - alpha
    if abs(g) < LEVEL_TOL * (1 + abs(z) ** 4):
        if kind == "disk" and z == 0:
            return 1
        raise OnBoundary(f"{z} lies on the level curve")
    if kind == "disk":
        return int(g < 0 or z == 0)
    if kind == "cylinder":
        # only the oval on the ``circle`` side is covered (twice); the other is uncovered
        if g > 0:
            return 1
        return 2 if z.real * circle > 0 else 0
    # annulus: inside the inner curve when |z|^2 is below the ray's midpoint u
    if g < 0:
        return 1
    s = abs(z) ** 2
    u = (z * z).real / s + r * r if s > 0 else r * r
    return 2 if s < u else 0


def _chordal(p: complex, q: complex) -> float:
    return abs(p - q) / math.sqrt((1 + abs(p) ** 2) * (1 + abs(q) ** 2))


def branch_track(r: float, alpha: float, path, start_value: complex, min_step: float = 1e-12) -> complex:
    """Continue a root of ``Q(z, w) = alpha`` along ``path`` by nearest-value selection.

    Steps are halved while the nearer candidate is not clearly separated
    from the other one; the branch is lost when halving no longer helps.
    """
    path = [complex(p) for p in path]
    if not path:
        raise ValidationError("empty path")
    cur = complex(start_value)
    s0 = _branch_pair(r, alpha, path[0])
    if min(_chordal(cur, v) for v in s0) > 1e-6:
        raise BranchTrackFailure("start value is not a root at the start of the path")
    cur = min(s0, key=lambda v: _chordal(cur, v))
    for p0, p1 in zip(path[:-1], path[1:]):
        t, dt = 0.0, 1.0
        while t < 1.0:
            dt = min(dt, 1.0 - t)
            z = p0 + (t + dt) * (p1 - p0)
            cands = _branch_pair(r, alpha, z)
            d = sorted((_chordal(cur, v), k) for k, v in enumerate(cands))
            sep = _chordal(*cands)
            if d[0][0] * 10 < d[1][0] and d[0][0] < 0.25 * sep + 1e-300:
                cur = cands[d[0][1]]
                t += dt
                dt *= 2
            else:
                dt /= 2
                if dt * abs(p1 - p0) < min_step:
                    raise BranchTrackFailure(f"branches are not separated near {z}")
    return cur


@lru_cache(maxsize=32)
def _levelcurve_points(r: float, alpha: float) -> np.ndarray:
    from .neumann import levelcurve

    sample = levelcurve(r, alpha, 2000)
    return np.concatenate([np.asarray(c) for c in sample.components])


def select_branch(r: float, alpha: float, z: complex, boundary: np.ndarray | None = None,
                  circle: int = 1) -> complex:
    """Value at ``z`` of the Schwarz branch belonging to a single-sheet point.

    The branch is fixed at the nearest level-curve point ``q``: where the sheet
    count drops across the curve it is the branch equal to ``conj(q)``, where it
    rises it is the other one. It is then continued along the segment to ``z``.
    """
    z = complex(z)
    rho = neumann_rho(r, alpha, z, circle)
    if rho != 1:
        raise ValidationError("branch selection applies to single-sheet points")
    pts = _levelcurve_points(r, alpha) if boundary is None else boundary
    q = complex(pts[np.argmin(np.abs(pts - z))])
    for t in np.linspace(0.02, 0.98, 25):
        if neumann_rho(r, alpha, z + t * (q - z), circle) != rho:
            raise BranchTrackFailure("segment to the nearest level-curve point leaves the component")
    step = (q - z) / abs(q - z)
    h = 1e-3 * max(abs(q - z), 1e-3)
    beyond = neumann_rho(r, alpha, q + h * step, circle)
    cands = _branch_pair(r, alpha, q)
    gap = [abs(v - q.conjugate()) for v in cands]
    k = int(np.argmin(gap)) if beyond < rho else int(np.argmax(gap))
    return branch_track(r, alpha, [q, z], cands[k])


def neumann_power(r: float, alpha: float, z: complex, wbar: complex, circle: int = 1,
                  branch_value: complex | None = None) -> complex:
    """``(S(z) - wbar)^rho(z)`` for the level family.

    ``branch_value`` may supply ``S(z)`` for single-sheet points (otherwise it is
    found by ``select_branch``).
    """
    kind = _regime(r, alpha)
    z = complex(z)
    rho = neumann_rho(r, alpha, z, circle)
    if rho == 0:
        return 1 + 0j
    if kind == "circles":
        return 1 + r * r / (z - circle) - wbar
    if kind == "disk" and z == 0:
        return -wbar
    if rho == 2:
        return complex(qalpha_poly(r, alpha)(z, wbar)) / (z * z - 1)
    s = select_branch(r, alpha, z, circle=circle) if branch_value is None else branch_value
    return s - wbar


def schwarz_value(r: float, alpha: float, z: complex, circle: int = 1) -> complex:
    """The single-sheet Schwarz value used by ``neumann_power``."""
    if _regime(r, alpha) == "circles":
        return 1 + r * r / (complex(z) - circle)
    return select_branch(r, alpha, z, circle=circle)
