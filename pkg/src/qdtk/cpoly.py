"""Complex-coefficient polynomials in one and two variables.

Coefficients are stored in *ascending* order of degree. ``BiPoly`` stores
``coeffs[i, j]`` as the coefficient of ``z**i * w**j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import DegenerateLeading, NonConvergence, ZeroPolynomial

TRIM_RTOL = 1e-14
CLUSTER_RTOL = 1e-7
RESIDUAL_RTOL = 1e-8


def _trim(c: np.ndarray) -> np.ndarray:
    c = np.atleast_1d(np.asarray(c, dtype=complex)).copy()
    if c.size == 0:
        return np.zeros(1, dtype=complex)
    scale = np.max(np.abs(c))
    if scale == 0:
        return np.zeros(1, dtype=complex)
    c[np.abs(c) < TRIM_RTOL * scale] = 0
    nz = np.nonzero(c)[0]
    return c[: nz[-1] + 1]


class ComplexPoly:
    """Immutable univariate polynomial with complex coefficients."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Sequence[complex] | np.ndarray):
        c = _trim(coeffs)
        c.flags.writeable = False
        self._c = c

    @classmethod
    def from_roots(cls, roots, lead: complex = 1.0) -> "ComplexPoly":
        c = np.array([lead], dtype=complex)
        for r in roots:
            c = np.convolve(c, [-r, 1.0])
        return cls(c)

    @classmethod
    def monomial(cls, k: int, c: complex = 1.0) -> "ComplexPoly":
        out = np.zeros(k + 1, dtype=complex)
        out[k] = c
        return cls(out)

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def degree(self) -> int:
        return len(self._c) - 1

    @property
    def lead(self) -> complex:
        return complex(self._c[-1])

    def is_zero(self) -> bool:
        return self.degree == 0 and self._c[0] == 0

    def __call__(self, z):
        # Horner
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, self._c[-1], dtype=complex)
        for a in self._c[-2::-1]:
            out = out * z + a
        return out[()] if out.ndim == 0 else out

    def deriv(self) -> "ComplexPoly":
        if self.degree == 0:
            return ComplexPoly([0])
        k = np.arange(1, len(self._c))
        return ComplexPoly(self._c[1:] * k)

    def conj_coeffs(self) -> "ComplexPoly":
        return ComplexPoly(np.conj(self._c))

    def reversed(self, n: int | None = None) -> "ComplexPoly":
        """Return ``z**n * p(1/z)`` (``n`` defaults to the degree)."""
        n = self.degree if n is None else n
        if n < self.degree:
            raise ValueError("formal degree smaller than actual degree")
        padded = np.zeros(n + 1, dtype=complex)
        padded[: len(self._c)] = self._c
        return ComplexPoly(padded[::-1])

    def padded(self, n: int) -> np.ndarray:
        out = np.zeros(n + 1, dtype=complex)
        out[: len(self._c)] = self._c
        return out

    def _coerce(self, other) -> "ComplexPoly":
        if isinstance(other, ComplexPoly):
            return other
        return ComplexPoly([complex(other)])

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self._c), len(other._c))
        return ComplexPoly(self.padded(n - 1) + other.padded(n - 1))

    __radd__ = __add__

    def __neg__(self):
        return ComplexPoly(-self._c)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return ComplexPoly(np.convolve(self._c, other._c))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = ComplexPoly([1])
        for _ in range(k):
            out = out * self
        return out

    def divmod(self, other: "ComplexPoly") -> tuple["ComplexPoly", "ComplexPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        num = self._c.astype(complex).copy()
        den = other._c
        dq = len(num) - len(den)
        if dq < 0:
            return ComplexPoly([0]), self
        q = np.zeros(dq + 1, dtype=complex)
        for k in range(dq, -1, -1):
            q[k] = num[k + len(den) - 1] / den[-1]
            num[k : k + len(den)] -= q[k] * den
        return ComplexPoly(q), ComplexPoly(num[: len(den) - 1] if len(den) > 1 else [0])

    def __eq__(self, other):
        if not isinstance(other, ComplexPoly):
            return NotImplemented
        return self._c.shape == other._c.shape and bool(np.all(self._c == other._c))

    def __hash__(self):
        return hash(self._c.tobytes())

    def __repr__(self):
        return f"ComplexPoly({np.array2string(self._c, precision=6)})"


@dataclass(frozen=True)
class RootSet:
    """Distinct roots with multiplicities; ``residual`` is ``max |p(root)|``."""

    roots: tuple[complex, ...]
    multiplicities: tuple[int, ...]
    residual: float

    def __len__(self):
        return len(self.roots)

    @property
    def total(self) -> int:
        return sum(self.multiplicities)

    def expanded(self) -> np.ndarray:
        """All roots repeated according to multiplicity."""
        out = [r for r, m in zip(self.roots, self.multiplicities) for _ in range(m)]
        return np.array(out, dtype=complex)


def _cluster(values: np.ndarray) -> tuple[list[complex], list[int]]:
    values = list(np.asarray(values, dtype=complex))
    groups: list[list[complex]] = []
    for v in values:
        for g in groups:
            c = np.mean(g)
            if abs(v - c) <= CLUSTER_RTOL * (1 + abs(c)):
                g.append(v)
                break
        else:
            groups.append([v])
    return [complex(np.mean(g)) for g in groups], [len(g) for g in groups]


def _relative_residual(p: ComplexPoly, r: complex) -> float:
    absc = np.abs(p.coeffs)
    # floor keeps roots at the origin from dividing roundoff by roundoff
    scale = float(np.sum(absc * np.abs(r) ** np.arange(len(absc)))) + 1e-14 * float(np.max(absc))
    return abs(p(r)) / scale


def _finish(p: ComplexPoly, raw: np.ndarray, method: str) -> RootSet:
    roots, mult = _cluster(raw)
    residual = max((abs(p(r)) for r in roots), default=0.0)
    worst = max((_relative_residual(p, r) for r in roots), default=0.0)
    if worst > RESIDUAL_RTOL:
        raise NonConvergence(f"{method}: relative residual {worst:.3g} exceeds {RESIDUAL_RTOL}")
    return RootSet(tuple(roots), tuple(mult), float(residual))


def _check_degree(p: ComplexPoly):
    if p.is_zero():
        raise ZeroPolynomial("the zero polynomial has no finite root set")


def _leading_zero_roots(p: ComplexPoly) -> tuple[int, ComplexPoly]:
    nz = np.nonzero(p.coeffs)[0][0]
    return int(nz), ComplexPoly(p.coeffs[nz:])


def roots_companion(p: ComplexPoly) -> RootSet:
    """Roots from the eigenvalues of the companion matrix, Newton-polished."""
    _check_degree(p)
    if p.degree == 0:
        return RootSet((), (), 0.0)
    k0, core = _leading_zero_roots(p)
    raw = [0j] * k0
    n = core.degree
    if n >= 1:
        c = core.coeffs / core.lead
        comp = np.zeros((n, n), dtype=complex)
        comp[1:, :-1] = np.eye(n - 1)
        comp[:, -1] = -c[:-1]
        eig = np.linalg.eigvals(comp)
        dp = core.deriv()
        for i, r in enumerate(eig):
            for _ in range(2):
                d = dp(r)
                if d == 0:
                    break
                cand = r - core(r) / d
                if abs(core(cand)) < abs(core(r)):
                    r = cand
                else:
                    break
            eig[i] = r
        raw.extend(eig)
    return _finish(p, np.array(raw, dtype=complex), "roots_companion")


def roots_iterative(p: ComplexPoly, maxiter: int = 2000) -> RootSet:
    """Durand-Kerner simultaneous iteration from a perturbed circle."""
    _check_degree(p)
    if p.degree == 0:
        return RootSet((), (), 0.0)
    c = p.coeffs / p.lead
    n = p.degree
    radius = 1 + np.max(np.abs(c[:-1]))  # Cauchy bound
    z = radius * 0.5 * (0.4 + 0.9j) ** np.arange(n)
    z = z + 0.5 * radius * np.exp(2j * np.pi * (np.arange(n) + 0.25) / n)
    monic = ComplexPoly(c)
    for _ in range(maxiter):
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        step = monic(z) / np.prod(diff, axis=1)
        z = z - step
        if np.all(np.abs(step) <= 1e-15 * (1 + np.abs(z))):
            break
    return _finish(p, z, "roots_iterative")


def match_roots(a, b) -> float:
    """Largest distance after optimally pairing two equal-size root multisets."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError("root multisets differ in size")
    if a.size == 0:
        return 0.0
    cost = np.abs(a[:, None] - b[None, :])
    i, j = linear_sum_assignment(cost)
    return float(np.max(cost[i, j]))


def sylvester_matrix(p_desc: np.ndarray, q_desc: np.ndarray) -> np.ndarray:
    """Sylvester matrix from *descending* coefficient vectors (formal degrees)."""
    m = len(p_desc) - 1
    n = len(q_desc) - 1
    size = m + n
    S = np.zeros((size, size), dtype=complex)
    for i in range(n):
        S[i, i : i + m + 1] = p_desc
    for i in range(m):
        S[n + i, i : i + n + 1] = q_desc
    return S


def sylvester_resultant(p: ComplexPoly, q: ComplexPoly) -> complex:
    """Determinant of the Sylvester matrix, ``lead(p)**deg(q) * prod q(roots of p)``."""
    if p.is_zero() and q.is_zero():
        raise ZeroPolynomial("resultant of two zero polynomials")
    if p.is_zero() or q.is_zero():
        return 0j
    if p.degree == 0 and q.degree == 0:
        return 1 + 0j
    S = sylvester_matrix(p.coeffs[::-1], q.coeffs[::-1])
    return complex(np.linalg.det(S))


class BiPoly:
    """Immutable polynomial in ``(z, w)``; ``coeffs[i, j]`` multiplies ``z**i w**j``."""

    __slots__ = ("_c",)

    def __init__(self, coeffs):
        c = np.atleast_2d(np.asarray(coeffs, dtype=complex)).copy()
        scale = np.max(np.abs(c)) if c.size else 0.0
        if scale == 0:
            c = np.zeros((1, 1), dtype=complex)
        else:
            c[np.abs(c) < TRIM_RTOL * scale] = 0
            rows = np.nonzero(np.any(c != 0, axis=1))[0]
            cols = np.nonzero(np.any(c != 0, axis=0))[0]
            c = c[: rows[-1] + 1, : cols[-1] + 1]
        c.flags.writeable = False
        self._c = c

    @classmethod
    def from_terms(cls, terms: dict[tuple[int, int], complex]) -> "BiPoly":
        dz = max(i for i, _ in terms) + 1
        dw = max(j for _, j in terms) + 1
        c = np.zeros((dz, dw), dtype=complex)
        for (i, j), v in terms.items():
            c[i, j] += v
        return cls(c)

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def deg_z(self) -> int:
        return self._c.shape[0] - 1

    @property
    def deg_w(self) -> int:
        return self._c.shape[1] - 1

    def __call__(self, z, w):
        z = np.asarray(z, dtype=complex)
        w = np.asarray(w, dtype=complex)
        zi = z[..., None] ** np.arange(self._c.shape[0])
        wj = w[..., None] ** np.arange(self._c.shape[1])
        out = np.einsum("...i,ij,...j->...", zi, self._c, wj)
        return out[()] if np.ndim(out) == 0 else out

    def in_w(self, z: complex) -> ComplexPoly:
        """Substitute ``z`` and return the polynomial in ``w``."""
        zi = complex(z) ** np.arange(self._c.shape[0])
        return ComplexPoly(zi @ self._c)

    def in_z(self, w: complex) -> ComplexPoly:
        wj = complex(w) ** np.arange(self._c.shape[1])
        return ComplexPoly(self._c @ wj)

    def w_coefficient(self, j: int) -> ComplexPoly:
        """Coefficient of ``w**j`` as a polynomial in ``z``."""
        if j > self.deg_w:
            return ComplexPoly([0])
        return ComplexPoly(self._c[:, j])

    def swap(self) -> "BiPoly":
        return BiPoly(self._c.T)

    def conj_coeffs(self) -> "BiPoly":
        return BiPoly(np.conj(self._c))

    def _binop(self, other, sign):
        if not isinstance(other, BiPoly):
            other = BiPoly([[complex(other)]])
        n = max(self._c.shape[0], other._c.shape[0])
        m = max(self._c.shape[1], other._c.shape[1])
        out = np.zeros((n, m), dtype=complex)
        out[: self._c.shape[0], : self._c.shape[1]] += self._c
        out[: other._c.shape[0], : other._c.shape[1]] += sign * other._c
        return BiPoly(out)

    def __add__(self, other):
        return self._binop(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, -1)

    def __neg__(self):
        return BiPoly(-self._c)

    def __mul__(self, other):
        if not isinstance(other, BiPoly):
            return BiPoly(self._c * complex(other))
        a, b = self._c, other._c
        out = np.zeros((a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1), dtype=complex)
        for i in range(b.shape[0]):
            for j in range(b.shape[1]):
                if b[i, j] != 0:
                    out[i : i + a.shape[0], j : j + a.shape[1]] += b[i, j] * a
        return BiPoly(out)

    __rmul__ = __mul__

    def leading_term(self) -> tuple[int, int]:
        """Index of the highest total-degree term, ties broken by ``z``-degree."""
        idx = [(i + j, i, j) for i, j in zip(*np.nonzero(self._c))]
        if not idx:
            return (0, 0)
        _, i, j = max(idx)
        return int(i), int(j)

    def normalized(self) -> "BiPoly":
        """Scale so that the leading term has coefficient 1."""
        i, j = self.leading_term()
        c = self._c[i, j]
        return self if c == 0 else BiPoly(self._c / c)

    def __repr__(self):
        return f"BiPoly(deg_z={self.deg_z}, deg_w={self.deg_w})"


def solve_quadratic_in_w(Q: BiPoly, z: complex, rtol: float = 1e-13) -> tuple[complex, complex]:
    """The two roots ``(S+, S-)`` of ``Q(z, w) = 0`` in ``w``.

    ``S+`` is ``(-c1 + sqrt(c1**2 - 4 c0 c2)) / (2 c2)`` with the principal
    square root; both roots are formed without cancellation.
    """
    if Q.deg_w != 2:
        raise ValueError("Q must be quadratic in w")
    p = Q.in_w(z).padded(2)
    c0, c1, c2 = (complex(v) for v in p)
    scale = max(abs(c0), abs(c1), abs(c2), 1e-300)
    if abs(c2) <= rtol * scale:
        raise DegenerateLeading(f"coefficient of w**2 vanishes at z={z}")
    d = np.sqrt(complex(c1 * c1 - 4 * c0 * c2))
    minus = -c1 - d
    plus = -c1 + d
    if abs(minus) >= abs(plus):
        s_minus = minus / (2 * c2)
        s_plus = 2 * c0 / minus if minus != 0 else 0j
    else:
        s_plus = plus / (2 * c2)
        s_minus = 2 * c0 / plus
    return complex(s_plus), complex(s_minus)


def w_discriminant(Q: BiPoly) -> ComplexPoly:
    """``c1(z)**2 - 4 c0(z) c2(z)`` for ``Q`` quadratic in ``w``."""
    if Q.deg_w != 2:
        raise ValueError("Q must be quadratic in w")
    c0, c1, c2 = (Q.w_coefficient(j) for j in range(3))
    return c1 * c1 - 4 * c0 * c2


def branch_points(Q: BiPoly) -> RootSet:
    """Zeros of the ``w``-discriminant of ``Q``."""
    return roots_companion(w_discriminant(Q))
