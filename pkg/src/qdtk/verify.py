"""Numerical verification of the exponential-transform factorization.

For a multi-sheeted algebraic domain with counting function ``rho`` the
extended exponential transform ``E_rho(z, w; a, b)`` factors into the extended
elimination function of ``(f, f*)`` and eight powers of Schwarz-function
differences. ``theorem_rhs`` evaluates that product; ``verify_theorem``
compares it with the area integral (plane side, and parameter side when a
generating map is known).
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import transforms
from .cpoly import BiPoly
from .errors import FactorUndefined, QdtkError, ValidationError
from .neumann import EllipseParams, factorize_reducible, joukowski, neumann_density, neumann_generator
from .quad2d import QuadConfig
from .schwarz import fiber_product, neumann_power, neumann_rho, qalpha_poly, schwarz_value
from .schwarz import counting_function
from .sphere import RationalMap, SymmetricPair, conjugate_map, elimination_Q, is_inf
from .transforms import Density, TransformPoint

FACTOR_NAMES = ("elimination", "z_num", "z_den", "w_num", "w_den", "a_num", "a_den", "b_num", "b_den")


@dataclass(frozen=True)
class TheoremCase:
    """A generator (rational map on a half, or a level ``alpha`` of the oval family) and four points."""

    z: complex
    w: complex
    a: complex
    b: complex
    f: RationalMap | None = None
    domain: str = "disk"
    r: float | None = None
    alpha: float | None = None
    circle: int = 1
    density: Density | None = None
    tol: float = 1e-9
    label: str = ""

    def __post_init__(self):
        if (self.f is None) == (self.r is None):
            raise ValidationError("give either a rational map or an oval level")
        for p in self.points:
            if is_inf(p):
                raise ValidationError("all four points must be finite")
        names = "zwab"
        pts = self.points
        for i in range(4):
            for j in range(i + 1, 4):
                if (i, j) not in ((0, 2), (1, 3)) and pts[i] == pts[j]:
                    raise ValidationError(f"points {names[i]} and {names[j]} coincide")

    @property
    def points(self) -> tuple[complex, complex, complex, complex]:
        return (complex(self.z), complex(self.w), complex(self.a), complex(self.b))

    # -- constructors for the supported families

    @classmethod
    def disk(cls, z, w, a, b, tol: float = 1e-9, label: str = "disk") -> "TheoremCase":
        return cls(z, w, a, b, f=RationalMap.identity(), domain="disk", density=Density.disk(), tol=tol, label=label)

    @classmethod
    def joukowski(cls, params: EllipseParams, z, w, a, b, domain: str = "exterior", tol: float = 1e-9,
                  label: str = "joukowski") -> "TheoremCase":
        inside, outside = (2, 1) if domain == "exterior" else (0, 1)
        dens = transforms.ellipse_density(params.a, params.b, inside, outside)
        return cls(z, w, a, b, f=joukowski(params), domain=domain, density=dens, tol=tol, label=label)

    @classmethod
    def neumann(cls, r: float, alpha: float, z, w, a, b, circle: int = 1, tol: float = 1e-9,
                label: str = "neumann") -> "TheoremCase":
        return cls(z, w, a, b, r=r, alpha=alpha, circle=circle, density=neumann_density(r, alpha, circle),
                   tol=tol, label=label)

    def rho(self, p: complex) -> int:
        if self.f is not None:
            return counting_function(self.f, self.domain, p)
        return neumann_rho(self.r, self.alpha, p, self.circle)


@dataclass
class VerificationReport:
    label: str
    points: tuple
    lhs: complex | None
    rhs: complex | None
    defect: float
    rho: tuple = ()
    factors: dict = field(default_factory=dict)
    error_estimate: float = 0.0
    lhs_pullback: complex | None = None
    defect_pullback: float | None = None
    timings: dict = field(default_factory=dict)
    errors: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def max_defect(self) -> float:
        vals = [self.defect] + ([self.defect_pullback] if self.defect_pullback is not None else [])
        return max(vals)

    def to_json(self) -> dict:
        def c(v):
            return None if v is None else [float(complex(v).real), float(complex(v).imag)]

        return {
            "label": self.label,
            "points": [c(p) for p in self.points],
            "rho": list(self.rho),
            "lhs": c(self.lhs),
            "lhs_pullback": c(self.lhs_pullback),
            "rhs": c(self.rhs),
            "defect": self.defect,
            "defect_pullback": self.defect_pullback,
            "max_defect": self.max_defect,
            "factors": {k: c(v) for k, v in self.factors.items()},
            "error_estimate": self.error_estimate,
            "timings": self.timings,
            "errors": self.errors,
            "extra": self.extra,
        }


def relative_defect(lhs: complex, rhs: complex) -> float:
    return abs(lhs - rhs) / (1 + abs(rhs))


# ---------------------------------------------------------------- right-hand side


_ELIMINATION_CACHE: dict = {}


def _elimination_poly(case: TheoremCase) -> BiPoly:
    if case.f is not None:
        key = (case.f.num.coeffs.tobytes(), case.f.den.coeffs.tobytes())
        if key not in _ELIMINATION_CACHE:
            _ELIMINATION_CACHE[key] = elimination_Q(case.f, conjugate_map(case.f)).Q
        return _ELIMINATION_CACHE[key]
    pair = factorize_reducible(case.r, case.alpha)
    if pair is not None and abs(case.alpha + (case.r ** 2 - 1) ** 2) < 1e-10:
        # each circle is its own single-sheeted domain: (z-1)(w-1) - r^2 belongs to circle +1
        return pair[1] if case.circle == 1 else pair[0]
    return qalpha_poly(case.r, case.alpha)


def _power_function(case: TheoremCase) -> Callable[[complex, complex], complex]:
    """``(p, x) -> (S(p) - x)^rho(p)`` for the case's generator."""
    if case.f is not None:
        pair = SymmetricPair.from_map(case.f)
        return lambda p, x: fiber_product(pair, case.domain, p, x)
    cache: dict = {}

    def power(p, x):
        if neumann_rho(case.r, case.alpha, p, case.circle) == 1:
            if p not in cache:
                cache[p] = schwarz_value(case.r, case.alpha, p, case.circle)
            return neumann_power(case.r, case.alpha, p, x, case.circle, branch_value=cache[p])
        return neumann_power(case.r, case.alpha, p, x, case.circle)

    return power


def theorem_factors(case: TheoremCase) -> dict:
    """The elimination factor and the eight Schwarz-power factors, keyed by name."""
    z, w, a, b = case.points
    cz, cw, ca, cb = (p.conjugate() for p in case.points)
    rz, rw, ra, rb = (case.rho(p) for p in case.points)
    Q = _elimination_poly(case)
    P = _power_function(case)

    absQ = BiPoly(np.abs(Q.coeffs))

    def ratio(name, num, den, scale):
        # relative test: an exact 0/0 is usually a rounded tiny denominator
        if not np.isfinite(den) or abs(den) <= 1e-12 * scale:
            raise FactorUndefined(f"factor {name} has a vanishing or infinite denominator", factor=name)
        return num / den

    def sz(p, x, rho):
        return (1 + abs(p) + abs(x)) ** rho

    qzb, qaw = complex(Q(z, cb)), complex(Q(a, cw))
    qscale = float(absQ(abs(z), abs(b)).real * absQ(abs(a), abs(w)).real)
    out = {"elimination": ratio("elimination", complex(Q(z, cw)) * complex(Q(a, cb)), qzb * qaw, qscale)}
    out["z_num"] = ratio("z_num", (cz - cw) ** rz, P(z, cw), sz(z, w, rz))
    out["z_den"] = ratio("z_den", P(z, cb), (cz - cb) ** rz, sz(z, b, rz))
    out["w_num"] = ratio("w_num", (w - z) ** rw, np.conj(P(w, cz)), sz(w, z, rw))
    out["w_den"] = ratio("w_den", np.conj(P(w, ca)), (w - a) ** rw, sz(w, a, rw))
    out["a_num"] = ratio("a_num", (ca - cb) ** ra, P(a, cb), sz(a, b, ra))
    out["a_den"] = ratio("a_den", P(a, cw), (ca - cw) ** ra, sz(a, w, ra))
    out["b_num"] = ratio("b_num", (b - a) ** rb, np.conj(P(b, ca)), sz(b, a, rb))
    out["b_den"] = ratio("b_den", np.conj(P(b, cz)), (b - z) ** rb, sz(b, z, rb))
    return {k: complex(v) for k, v in out.items()}


def theorem_rhs(case: TheoremCase) -> complex:
    """Product of the elimination factor and the eight Schwarz-power factors."""
    z, w, a, b = case.points
    if z == a or w == b:
        return 1 + 0j
    return complex(np.prod(list(theorem_factors(case).values())))


# ---------------------------------------------------------------- verification


def verify_theorem(case: TheoremCase, config: QuadConfig | None = None, pullback: bool = True) -> VerificationReport:
    """Compare the area integral(s) with ``theorem_rhs``; errors are recorded, not raised."""
    pts = TransformPoint(*case.points)
    rep = VerificationReport(case.label, case.points, None, None, math.inf)
    try:
        rep.rho = tuple(case.rho(p) for p in case.points)
        t = time.perf_counter()
        if case.points[0] == case.points[2] or case.points[1] == case.points[3]:
            rep.factors = {}
        else:
            rep.factors = theorem_factors(case)
        rep.rhs = theorem_rhs(case)
        rep.timings["rhs"] = time.perf_counter() - t
    except QdtkError as exc:
        rep.errors.append(f"rhs: {type(exc).__name__}: {exc}")
        return rep
    try:
        if case.density is not None:
            t = time.perf_counter()
            res = transforms.extended_cauchy_result(case.density, pts, case.tol, config)
            rep.lhs = complex(np.exp(res.value))
            rep.error_estimate = res.error_estimate * abs(rep.lhs)
            rep.defect = relative_defect(rep.lhs, rep.rhs)
            rep.timings["lhs_plane"] = time.perf_counter() - t
        gen = case.f
        domain = case.domain
        if gen is None and case.alpha is not None and abs(case.alpha) <= 1e-10:
            gen, domain = neumann_generator(case.r), "disk"
        if pullback and gen is not None:
            t = time.perf_counter()
            res = transforms.exp_transform_pullback_result(gen, domain, pts, case.tol, config)
            rep.lhs_pullback = complex(np.exp(res.value))
            rep.defect_pullback = relative_defect(rep.lhs_pullback, rep.rhs)
            rep.error_estimate = max(rep.error_estimate, res.error_estimate * abs(rep.lhs_pullback))
            rep.timings["lhs_pullback"] = time.perf_counter() - t
            if rep.lhs is None:
                rep.lhs = rep.lhs_pullback
                rep.defect = rep.defect_pullback
    except QdtkError as exc:
        rep.errors.append(f"lhs: {type(exc).__name__}: {exc}")
    return rep


def verify_many(cases: Sequence[TheoremCase], workers: int | None = None,
                config: QuadConfig | None = None) -> list[VerificationReport]:
    """Run independent cases, in a thread pool unless ``workers == 1``."""
    if workers == 1:
        return [verify_theorem(c, config) for c in cases]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda c: verify_theorem(c, config), cases))


DISK_SAMPLES = (
    ("outside-outside", 2.0, 3.0),
    ("inside-outside", 0.5, 2.0),
    ("outside-inside", 2.0 + 1.0j, 0.3 - 0.4j),
    ("inside-inside", 0.5, 0.25),
)

# the factorized form is 0/0 where S(z) = wbar, so it is checked at generic points
FACTOR_SAMPLES = ((2.0, 3.0 - 1.0j), (0.5, 2.0 + 1.0j), (2.0 + 1.0j, 0.3 - 0.4j), (0.5, 0.25 + 0.1j))


def disk_factorized(z: complex, w: complex) -> complex:
    """Two-variable disk transform rebuilt from ``S(z) = 1/z``, ``rho = chi_disk`` and ``(z wbar - 1)/(z wbar)``."""
    z, w = complex(z), complex(w)
    rz, rw = int(abs(z) < 1), int(abs(w) < 1)
    cz, cw = z.conjugate(), w.conjugate()
    out = (z * cw - 1) / (z * cw)
    if rz:
        out *= (cz - cw) / (1 / z - cw)
    if rw:
        out *= (z - w) / (z - 1 / cw)
    return out


def verify_disk_closed_form(tol: float = 1e-11, config: QuadConfig | None = None) -> VerificationReport:
    """Numeric disk transform against the closed form in all four regimes, plus the factorized form."""
    rho = Density.disk()
    regimes = {}
    worst = 0.0
    err = 0.0
    t = time.perf_counter()
    for name, z, w in DISK_SAMPLES:
        res = transforms.extended_cauchy_result(rho, TransformPoint(z, w), tol, config)
        num = complex(np.exp(res.value))
        ref = transforms.disk_exponential_closed_form(z, w)
        d = relative_defect(num, ref)
        worst = max(worst, d)
        err = max(err, res.error_estimate)
        regimes[name] = {"z": [z.real if isinstance(z, complex) else z, complex(z).imag],
                         "w": [complex(w).real, complex(w).imag],
                         "numeric": [num.real, num.imag], "closed_form": [ref.real, ref.imag],
                         "defect": d}
    fac = max(relative_defect(disk_factorized(z, w), transforms.disk_exponential_closed_form(z, w))
              for z, w in FACTOR_SAMPLES)
    rep = VerificationReport("disk-closed-form", (), None, None, max(worst, fac), error_estimate=err)
    rep.extra["regimes"] = regimes
    rep.extra["factorization_defect"] = fac
    rep.timings["total"] = time.perf_counter() - t
    return rep
