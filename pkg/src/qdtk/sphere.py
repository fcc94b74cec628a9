"""Rational maps on the Riemann sphere, divisors and elimination functions.

The point at infinity is represented by ``INF = complex(inf, 0)``. The
anticonformal involution is fixed to ``J(zeta) = 1/conj(zeta)``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .cpoly import BiPoly, ComplexPoly, RootSet, roots_companion, sylvester_matrix
from .errors import DivisionByZero, IndeterminateResultant, ValidationError, ZeroFunction

INF = complex(np.inf, 0.0)
POINT_ATOL = 1e-9


def is_inf(p) -> bool:
    return cmath.isinf(complex(p))


def same_point(p, q, atol: float = POINT_ATOL) -> bool:
    if is_inf(p) or is_inf(q):
        return is_inf(p) and is_inf(q)
    return abs(p - q) <= atol * (1 + abs(p))


class Divisor:
    """Finite formal sum of sphere points with nonzero integer multiplicities."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Iterable[tuple[complex, int]] = ()):
        merged: list[list] = []
        for p, m in entries:
            p = INF if is_inf(p) else complex(p)
            for e in merged:
                if same_point(e[0], p):
                    e[1] += int(m)
                    break
            else:
                merged.append([p, int(m)])
        self._entries = tuple((p, m) for p, m in merged if m != 0)

    @property
    def entries(self) -> tuple[tuple[complex, int], ...]:
        return self._entries

    @property
    def degree(self) -> int:
        return sum(m for _, m in self._entries)

    @property
    def support(self) -> list[complex]:
        return [p for p, _ in self._entries]

    def multiplicity(self, p) -> int:
        for q, m in self._entries:
            if same_point(p, q):
                return m
        return 0

    def __add__(self, other: "Divisor") -> "Divisor":
        return Divisor(self._entries + other._entries)

    def __neg__(self) -> "Divisor":
        return Divisor((p, -m) for p, m in self._entries)

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)

    def __len__(self):
        return len(self._entries)

    def __repr__(self):
        terms = " ".join(f"{m:+d}*({'oo' if is_inf(p) else p})" for p, m in self._entries)
        return f"Divisor({terms or '0'})"


def _fmt_roots(rs: RootSet) -> list[tuple[complex, int]]:
    return list(zip(rs.roots, rs.multiplicities))


class RationalMap:
    """``num(zeta) / den(zeta)`` with ``num``, ``den`` coprime."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, check: bool = True):
        num = num if isinstance(num, ComplexPoly) else ComplexPoly(num)
        den = ComplexPoly([1]) if den is None else den
        den = den if isinstance(den, ComplexPoly) else ComplexPoly(den)
        if den.is_zero():
            raise ValidationError("denominator is identically zero")
        if check and num.degree >= 1 and den.degree >= 1:
            zn = roots_companion(num).roots
            zd = roots_companion(den).roots
            for a in zn:
                for b in zd:
                    if abs(a - b) < POINT_ATOL * (1 + abs(a)):
                        raise ValidationError(f"numerator and denominator share the root {a}")
        self.num = num
        self.den = den

    @classmethod
    def constant(cls, c: complex) -> "RationalMap":
        return cls(ComplexPoly([c]))

    @classmethod
    def identity(cls) -> "RationalMap":
        return cls(ComplexPoly([0, 1]))

    @property
    def order(self) -> int:
        if self.num.is_zero():
            return 0
        return max(self.num.degree, self.den.degree)

    def is_constant(self) -> bool:
        return self.num.is_zero() or (self.num.degree == 0 and self.den.degree == 0)

    def value_at_infinity(self) -> complex:
        dn, dd = self.num.degree, self.den.degree
        if self.num.is_zero() or dn < dd:
            return 0j
        if dn > dd:
            return INF
        return self.num.lead / self.den.lead

    def __call__(self, zeta):
        if np.ndim(zeta) == 0 and is_inf(zeta):
            return self.value_at_infinity()
        zeta = np.asarray(zeta, dtype=complex)
        n = self.num(zeta)
        d = self.den(zeta)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(d == 0, INF, n / np.where(d == 0, 1, d))
        return complex(out) if out.ndim == 0 else out

    def derivative(self, zeta):
        """``f'(zeta)`` (vectorized, finite points only)."""
        zeta = np.asarray(zeta, dtype=complex)
        n, d = self.num(zeta), self.den(zeta)
        dn, dd = self.num.deriv()(zeta), self.den.deriv()(zeta)
        out = (dn * d - n * dd) / (d * d)
        return complex(out) if np.ndim(out) == 0 else out

    def inverted_argument(self) -> "RationalMap":
        """The map ``eta -> f(1/eta)``."""
        N = max(self.num.degree, self.den.degree)
        return RationalMap(self.num.reversed(N), self.den.reversed(N), check=False)

    def preimages(self, z: complex) -> list[tuple[complex, int]]:
        """Points of ``f^{-1}(z)`` with multiplicity (``INF`` included when hit)."""
        if is_inf(z):
            out = _fmt_roots(roots_companion(self.den)) if self.den.degree >= 1 else []
            k = self.num.degree - self.den.degree
        else:
            p = self.num - z * self.den
            if p.is_zero():
                raise ValidationError("f is constant and equal to z")
            out = _fmt_roots(roots_companion(p)) if p.degree >= 1 else []
            k = self.order - p.degree
        if k > 0:
            out.append((INF, k))
        return out

    def _coerce(self, other) -> "RationalMap":
        return other if isinstance(other, RationalMap) else RationalMap.constant(other)

    def __mul__(self, other):
        other = self._coerce(other)
        return RationalMap(self.num * other.num, self.den * other.den, check=False)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.num.is_zero():
            raise ZeroDivisionError("division by the zero function")
        return RationalMap(self.num * other.den, self.den * other.num, check=False)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __add__(self, other):
        other = self._coerce(other)
        return RationalMap(self.num * other.den + other.num * self.den, self.den * other.den, check=False)

    __radd__ = __add__

    def __neg__(self):
        return RationalMap(-self.num, self.den, check=False)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __repr__(self):
        return f"RationalMap(num={self.num.coeffs!r}, den={self.den.coeffs!r})"


@dataclass(frozen=True)
class SymmetricPair:
    """A rational map together with its reflection ``f* = conj(f(1/conj(zeta)))``."""

    f: RationalMap
    fstar: RationalMap

    @classmethod
    def from_map(cls, f: RationalMap) -> "SymmetricPair":
        return cls(f, conjugate_map(f))

    def check(self, n: int = 20, seed: int = 0, rtol: float = 1e-10) -> float:
        rng = np.random.default_rng(seed)
        zeta = rng.uniform(0.3, 2.5, n) * np.exp(2j * np.pi * rng.random(n))
        lhs = self.fstar(zeta)
        rhs = np.conj(self.f(1 / np.conj(zeta)))
        err = float(np.max(np.abs(lhs - rhs) / (1 + np.abs(rhs))))
        if err > rtol:
            raise ValidationError(f"f* does not match conj(f(1/conj(zeta))): {err:.3g}")
        return err


def divisor_of(f: RationalMap) -> Divisor:
    """Zeros minus poles of ``f``, including the point at infinity."""
    if f.num.is_zero():
        raise ZeroFunction("the zero function has no divisor")
    entries: list[tuple[complex, int]] = []
    if f.num.degree >= 1:
        entries += _fmt_roots(roots_companion(f.num))
    if f.den.degree >= 1:
        entries += [(p, -m) for p, m in _fmt_roots(roots_companion(f.den))]
    k = f.den.degree - f.num.degree
    if k:
        entries.append((INF, k))
    return Divisor(entries)


def conjugate_map(f: RationalMap) -> RationalMap:
    """``f*(zeta) = conj(f(1/conj(zeta)))`` as a rational map."""
    N = max(f.num.degree, f.den.degree)
    return RationalMap(f.num.conj_coeffs().reversed(N), f.den.conj_coeffs().reversed(N), check=False)


def meromorphic_resultant(f: RationalMap, g: RationalMap) -> complex:
    """``Res(f, g) = g((f))``: the multiplicative action of ``g`` on the divisor of ``f``."""
    Df = divisor_of(f)
    if g.num.is_zero():
        raise IndeterminateResultant("g vanishes identically")
    Dg = divisor_of(g)
    for p in Df.support:
        for q in Dg.support:
            if same_point(p, q):
                raise IndeterminateResultant(f"zero/pole of g meets supp(f) at {p}")
    out = 1 + 0j
    for p, m in Df.entries:
        v = g(p)
        out *= complex(v) ** m
    return out


def _interpolate_bivariate(fun, nz: int, nw: int) -> np.ndarray:
    """Coefficients of a polynomial of degree < nz in z, < nw in w from samples."""
    zs = np.exp(2j * np.pi * np.arange(nz) / nz)
    ws = np.exp(2j * np.pi * np.arange(nw) / nw)
    vals = np.array([[fun(z, w) for w in ws] for z in zs])
    return np.fft.fft2(vals) / (nz * nw)


def _common_roots(polys: list[ComplexPoly], rtol: float = 1e-8) -> list[complex]:
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return []
    base = min(polys, key=lambda p: p.degree)
    if base.degree == 0:
        return []
    out = []
    for r in roots_companion(base).expanded():
        if all(abs(p(r)) <= rtol * np.sum(np.abs(p.coeffs) * np.abs(r) ** np.arange(p.degree + 1)) for p in polys):
            out.append(complex(r))
    return out


def _strip_content(C: np.ndarray, axis: int) -> tuple[np.ndarray, list[complex]]:
    """Divide out common roots of the coefficient polynomials along ``axis``."""
    removed: list[complex] = []
    while True:
        cols = C if axis == 0 else C.T
        polys = [ComplexPoly(cols[:, j]) for j in range(cols.shape[1])]
        roots = _common_roots(polys)
        if not roots:
            return C, removed
        r = roots[0]
        lin = ComplexPoly([-r, 1])
        new = []
        for p in polys:
            q, _ = p.divmod(lin) if not p.is_zero() else (p, None)
            new.append(q.padded(cols.shape[0] - 2) if cols.shape[0] >= 2 else q.coeffs)
        cols = np.array(new).T
        C = cols if axis == 0 else cols.T
        removed.append(r)


@dataclass(frozen=True)
class Elimination:
    """``E_{f,g}(z, w) = Q(z, w) / (P(z) R(w))``."""

    Q: BiPoly
    P: ComplexPoly
    R: ComplexPoly
    determinate: bool

    def __call__(self, z, w):
        return self.Q(z, w) / (self.P(z) * self.R(w))

    def __iter__(self):
        return iter((self.Q, self.P, self.R))


def elimination_Q(f: RationalMap, g: RationalMap) -> Elimination:
    """Eliminate ``zeta`` from ``z = f(zeta)``, ``w = g(zeta)``.

    ``Q`` is the Sylvester resultant of ``num_f - z den_f`` and
    ``num_g - w den_g`` with pure ``z`` and pure ``w`` content divided out,
    scaled so its leading term is 1. ``P`` and ``R`` are monic with roots
    ``f(poles of g)`` and ``g(poles of f)``; the overall constant sits in ``R``
    whenever the meromorphic resultant is determinate.
    """
    if f.is_constant() or g.is_constant():
        raise ValidationError("elimination needs nonconstant maps")
    Nf = max(f.num.degree, f.den.degree)
    Ng = max(g.num.degree, g.den.degree)
    fn, fd = f.num.padded(Nf), f.den.padded(Nf)
    gn, gd = g.num.padded(Ng), g.den.padded(Ng)

    def det(z, w):
        return np.linalg.det(sylvester_matrix((fn - z * fd)[::-1], (gn - w * gd)[::-1]))

    C = _interpolate_bivariate(det, Ng + 1, Nf + 1)
    scale = np.max(np.abs(C))
    C[np.abs(C) < 1e-13 * scale] = 0
    C, _ = _strip_content(C, axis=0)
    C, _ = _strip_content(C, axis=1)
    Q = BiPoly(C).normalized()
    Q = BiPoly(np.where(np.abs(Q.coeffs) < 1e-13 * np.max(np.abs(Q.coeffs)), 0, Q.coeffs))

    p_roots = []
    for q, m in divisor_of(g).entries:
        if m < 0:
            v = f(q)
            if not is_inf(v):
                p_roots += [v] * (-m)
    r_roots = []
    for p, m in divisor_of(f).entries:
        if m < 0:
            v = g(p)
            if not is_inf(v):
                r_roots += [v] * (-m)
    P = ComplexPoly.from_roots(p_roots)
    R = ComplexPoly.from_roots(r_roots)

    rng = np.random.default_rng(12345)
    determinate = True
    for _ in range(5):
        z0 = complex(*rng.normal(size=2))
        w0 = complex(*rng.normal(size=2))
        try:
            ref = meromorphic_resultant(f - z0, g - w0)
        except IndeterminateResultant:
            determinate = False
            break
        denom = P(z0) * R(w0) * ref
        if abs(denom) > 1e-8 and abs(Q(z0, w0)) > 1e-8:
            R = R * (Q(z0, w0) / denom)
            break
    return Elimination(Q, P, R, determinate)


def elimination_extended(f_or_Q, g: RationalMap | None = None, z=0j, w=0j, a=0j, b=0j) -> complex:
    """``Q(z,w) Q(a,b) / (Q(z,b) Q(a,w))``; accepts ``(f, g, ...)`` or a ready ``Q``."""
    if isinstance(f_or_Q, BiPoly):
        Q = f_or_Q
    elif isinstance(f_or_Q, Elimination):
        Q = f_or_Q.Q
    else:
        Q = elimination_Q(f_or_Q, g).Q
    num = Q(z, w) * Q(a, b)
    qzb, qaw = Q(z, b), Q(a, w)
    scale = float(np.max(np.abs(Q.coeffs))) * (1 + max(abs(z), abs(w), abs(a), abs(b))) ** (Q.deg_z + Q.deg_w)
    for name, v in (("Q(z,b)", qzb), ("Q(a,w)", qaw)):
        if abs(v) <= 1e-14 * scale:
            raise DivisionByZero(f"{name} vanishes", factor=name)
    return complex(num / (qzb * qaw))
