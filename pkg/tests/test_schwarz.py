import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qdtk.cpoly import ComplexPoly
from qdtk.errors import BranchTrackFailure, OnBoundary, OnBoundaryFiber, OnBranchCut, PoleAtFiber, UnsupportedRegime
from qdtk.neumann import EllipseParams, joukowski, levelcurve
from qdtk.schwarz import (branch_track, counting_function, ellipse_schwarz, fiber, fiber_product, level_value,
                          neumann_power, neumann_rho, qalpha_branches, qalpha_poly, select_branch)
from qdtk.sphere import RationalMap, SymmetricPair, elimination_Q, conjugate_map

from strategies import plane_point

R2 = math.sqrt(2)
ident = RationalMap.identity()


def test_counting_identity():
    assert counting_function(ident, "disk", 0.5) == 1
    assert counting_function(ident, "disk", 2.0) == 0
    with pytest.raises(OnBoundaryFiber):
        counting_function(ident, "disk", 1.0)


def test_counting_joukowski():
    f = joukowski(EllipseParams(2, 1))
    assert counting_function(f, "exterior", 0.0) == 2
    assert counting_function(f, "exterior", 10 + 3j) == 1
    assert counting_function(f, "disk", 10 + 3j) == 1


@settings(max_examples=40)
@given(st.integers(0, 10 ** 6), plane_point(0, 3))
def test_degree_conservation(seed, z):
    rng = np.random.default_rng(seed)
    num = ComplexPoly(rng.normal(size=4) + 1j * rng.normal(size=4))
    den = ComplexPoly(rng.normal(size=3) + 1j * rng.normal(size=3))
    f = RationalMap(num, den, check=False)
    try:
        a = counting_function(f, "disk", z)
        b = counting_function(f, "exterior", z)
    except OnBoundaryFiber:
        return
    assert a + b == f.order
    for p, _ in fiber(f, "disk", z).points:
        assert abs(f(p) - z) < 1e-8 * (1 + abs(z))


def test_fiber_product_disk():
    pair = SymmetricPair.from_map(ident)
    assert fiber_product(pair, "disk", 0.5, 3.0) == pytest.approx(-1)
    assert fiber_product(pair, "disk", 2.0, 3.0) == 1


def test_fiber_product_pole():
    pair = SymmetricPair.from_map(ident)
    with pytest.raises(PoleAtFiber):
        fiber_product(pair, "disk", 0.0, 1.0)


@given(plane_point(0, 3), plane_point(0, 3))
def test_fiber_product_disk_property(z, wb):
    if abs(abs(z) - 1) < 1e-3 or abs(z) < 1e-6:
        return
    pair = SymmetricPair.from_map(ident)
    ref = 1 / z - wb if abs(z) < 1 else 1
    assert abs(fiber_product(pair, "disk", z, wb) - ref) < 1e-9 * (1 + abs(ref))


def test_fiber_product_joukowski_vieta():
    # two-point fiber: product of (f*(zeta_i) - wbar) equals Q(z, wbar)/(lead in w)
    f = joukowski(EllipseParams(2, 1))
    pair = SymmetricPair.from_map(f)
    Q = elimination_Q(f, conjugate_map(f)).Q
    for z, wb in [(0.0, 0.0), (0.5 + 0.2j, 1 - 1j)]:
        got = fiber_product(pair, "exterior", z, wb)
        lead = Q.w_coefficient(Q.deg_w)(z)
        assert abs(got - Q(z, wb) / lead) < 1e-9 * (1 + abs(got))


def test_ellipse_schwarz_boundary():
    a, b = 2.0, 1.0
    for t in np.linspace(0.1, 6.2, 13):
        z = complex(a * math.cos(t), b * math.sin(t))
        vals = [ellipse_schwarz(a, b, z, s) for s in (1, -1)]
        assert min(abs(v - z.conjugate()) for v in vals) < 1e-8


def test_ellipse_schwarz_focus_and_cut():
    a, b = 2.0, 1.0
    c = math.sqrt(3)
    assert ellipse_schwarz(a, b, c, 1) == pytest.approx(ellipse_schwarz(a, b, c, -1))
    assert ellipse_schwarz(a, b, c, 1) == pytest.approx((a * a + b * b) / c)
    with pytest.raises(OnBranchCut):
        ellipse_schwarz(a, b, 0.5, 1)


def test_ellipse_schwarz_quadratic_relation():
    a, b, z = 2.0, 1.0, 3j
    c2 = a * a - b * b
    for s in (1, -1):
        S = ellipse_schwarz(a, b, z, s)
        assert abs((c2 * S - (a * a + b * b) * z) ** 2 - 4 * a * a * b * b * (z * z - c2)) < 1e-9


def test_qalpha_branches_examples():
    br = qalpha_branches(R2, -1.0, 0.0)
    assert sorted(v.real for v in br.values()) == pytest.approx([-1, 1])
    sample = levelcurve(R2, -0.5, 200)
    for comp in sample.components:
        for z in comp[::17]:
            vals = qalpha_branches(R2, -0.5, z).values()
            assert min(abs(v - np.conj(z)) for v in vals) < 1e-7


@settings(max_examples=100)
@given(plane_point(0, 3), plane_point(0, 3), st.floats(-10, 1))
def test_vieta_reconstruction(z, w, alpha):
    if abs(z * z - 1) < 1e-2:
        return
    sp, sm = qalpha_branches(R2, alpha, z).values()
    Q = qalpha_poly(R2, alpha)
    recon = (z * z - 1) * (w - sp) * (w - sm)
    assert abs(recon - Q(z, w)) < 1e-9 * (1 + abs(Q(z, w)) + abs(z) ** 4 + abs(w) ** 4)


def test_neumann_rho_examples():
    assert neumann_rho(R2, 0.0, 0.0) == 1
    assert neumann_rho(R2, 0.0, 10.0) == 0
    assert neumann_rho(R2, 0.0, 1.0) == 1
    # annulus: inner piece doubly covered, main piece once, far away not at all
    assert neumann_rho(R2, -0.5, 0.0) == 2
    assert neumann_rho(R2, -0.5, 1.0) == 1
    assert neumann_rho(R2, -0.5, 5.0) == 0
    # cylinder: one oval twice, the other not at all, the unbounded region once
    assert neumann_rho(R2, -1.5, 1.7) == 2
    assert neumann_rho(R2, -1.5, -1.7) == 0
    assert neumann_rho(R2, -1.5, -1.7, circle=-1) == 2
    assert neumann_rho(R2, -1.5, 5.0) == 1
    assert neumann_rho(R2, -1.5, 0.0) == 1
    # two circles |z -+ 1| = r
    assert neumann_rho(R2, -1.0, 1.5, circle=1) == 1
    assert neumann_rho(R2, -1.0, 1.5, circle=-1) == 0


def test_neumann_rho_errors():
    with pytest.raises(UnsupportedRegime):
        neumann_rho(R2, 1.0, 0.0)
    with pytest.raises(UnsupportedRegime):
        neumann_rho(R2, -9.0, 0.0)
    with pytest.raises(OnBoundary):
        neumann_rho(R2, -1.0, 1 + R2, circle=1)


def test_neumann_power_cases():
    assert neumann_power(R2, -0.5, 5.0, 1.0) == 1
    z, wb = 0.1 + 0.1j, 0.7 - 0.2j
    sp, sm = qalpha_branches(R2, -0.5, z).values()
    assert abs(neumann_power(R2, -0.5, z, wb) - (sp - wb) * (sm - wb)) < 1e-12


def test_neumann_power_vanishes_on_curve():
    sample = levelcurve(R2, -0.5, 400)
    q = sample.components[0][37]
    z = q * 0.999 if neumann_rho(R2, -0.5, q * 0.999) == 1 else q * 1.001
    assert abs(neumann_power(R2, -0.5, z, np.conj(z))) < 1e-2


def test_select_branch_continuity():
    # values at two nearby single-sheet points belong to the same branch
    a = select_branch(R2, -0.5, 1.5 + 0.3j)
    b = select_branch(R2, -0.5, 1.5 + 0.3001j)
    other = [v for v in qalpha_branches(R2, -0.5, 1.5 + 0.3001j).values() if abs(v - b) > 1e-12]
    assert abs(a - b) < 1e-2
    assert all(abs(a - b) < abs(a - v) for v in other)


def test_branch_track_constant_path():
    v = qalpha_branches(R2, -0.5, 2.0).plus
    assert branch_track(R2, -0.5, [2.0, 2.0], v) == pytest.approx(v)


def _loop(center, radius, n=200):
    t = np.linspace(0, 2 * np.pi, n)
    return list(center + radius * np.exp(1j * t))


def test_branch_track_monodromy():
    alpha = -0.5
    bp = qalpha_branches(R2, alpha, 2.0).branch_points.roots
    p = bp[0]
    others = min(abs(p - q) for q in bp[1:])
    rad = 0.3 * min(others, abs(p - 1), abs(p + 1))
    # no branch point inside
    start = p + 3 * rad + 0.5
    v = qalpha_branches(R2, alpha, start).plus
    back = branch_track(R2, alpha, _loop(start - rad, rad), v)
    assert abs(back - v) < 1e-8
    # exactly one branch point inside: the branches are exchanged
    z0 = p + rad
    vals = qalpha_branches(R2, alpha, z0).values()
    back = branch_track(R2, alpha, _loop(p, rad), vals[0])
    assert abs(back - vals[1]) < 1e-8


def test_branch_track_bad_start():
    with pytest.raises(BranchTrackFailure):
        branch_track(R2, -0.5, [2.0, 2.5], 100.0)
