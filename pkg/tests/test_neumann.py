import csv
import io
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qdtk.errors import EmptyLocus, ValidationError
from qdtk.neumann import (EllipseParams, check_euclidean, check_multisheet, check_quadrature, check_spherical,
                          check_twopoint, check_weak_multisheet, classify, ellipse_spherical_nodes, factorize_reducible,
                          joukowski, located_nodes, levelcurve, neumann_generator, multi_sheet_nodes, oval_level, q_polarized, qalpha,
                          real_intersection_points, stationary_levels, stationary_points)
from qdtk.schwarz import ellipse_schwarz, level_value, qalpha_branches, regime_levels

R2 = math.sqrt(2)
P21 = EllipseParams(2, 1)


def test_ellipse_params():
    assert P21.c == pytest.approx(math.sqrt(3))
    assert P21.r == pytest.approx(math.sqrt(5 / 3))
    with pytest.raises(ValidationError):
        EllipseParams(1, 1)


def test_spherical_node_a2_b1():
    z0, c0 = ellipse_spherical_nodes(P21)
    assert z0 == pytest.approx(-1j * math.sqrt(13 + 4 * math.sqrt(10)) / math.sqrt(3), abs=1e-12)
    assert abs(1 + z0 * ellipse_schwarz(2, 1, z0, -1)) < 1e-9
    # the area identity with h = 1 fixes 2 c0 as the spherical area of the exterior
    assert check_spherical(P21, lambda z: 1.0).defect < 1e-9
    assert abs(c0.imag) < 1e-12


def test_multi_sheet_node_a2_b1():
    z1, c1 = multi_sheet_nodes(P21)
    z0, _ = ellipse_spherical_nodes(P21)
    assert z1 == pytest.approx(-1j * math.sqrt(13 - 4 * math.sqrt(10)) / math.sqrt(3), abs=1e-12)
    assert abs(z1.real) < 1e-14 and abs(z1) < abs(z0)
    assert abs(1 + z1 * ellipse_schwarz(2, 1, z1, 1)) < 1e-9


def test_nodes_symmetric_pairs():
    for outer in (True, False):
        pts = located_nodes(P21, outer)
        assert len(pts) == 2
        assert abs(pts[0] + pts[1]) < 1e-9


@settings(max_examples=20)
@given(st.floats(0.3, 3), st.floats(0.1, 0.9))
def test_node_closed_forms_match_map(b, ratio):
    p = EllipseParams(b / ratio, b)
    for outer, fn in ((True, ellipse_spherical_nodes), (False, multi_sheet_nodes)):
        z, _ = fn(p)
        assert min(abs(z - v) for v in located_nodes(p, outer)) < 1e-9 * (1 + abs(z))


def test_joukowski_boundary_and_poles():
    f = joukowski(P21)
    t = np.linspace(0, 2 * np.pi, 50)
    z = f(np.exp(1j * t))
    assert np.max(np.abs((z.real / 2) ** 2 + z.imag ** 2 - 1)) < 1e-9
    assert f.den(0) == 0 and f.order == 2


def test_q_polarized_examples():
    Q = q_polarized(R2)
    assert Q(1, 1) == pytest.approx(-1 - 2 * R2 ** 2)
    # the minima of Q(z, zbar) sit at +-sqrt(r^2+1), on the level -(r^2+1)^2
    lo = -(R2 ** 2 + 1) ** 2
    x = math.sqrt(R2 ** 2 + 1)
    assert qalpha(R2, lo)(x, x) == pytest.approx(0, abs=1e-12)
    assert qalpha(R2, lo)(-x, -x) == pytest.approx(0, abs=1e-12)


def test_polarization_matches_oval():
    # when 2ab = c the oval and the zero level of Q(z, zbar) coincide
    a = 1.3
    b = a / math.sqrt(4 * a * a + 1)
    ep = EllipseParams(a, b)
    assert abs(2 * a * b - ep.c) < 1e-12
    for t in np.linspace(0.05, 3.1, 9):
        rho = math.sqrt(math.cos(t) ** 2 / b ** 2 + math.sin(t) ** 2 / a ** 2)
        z = rho * np.exp(1j * t)
        assert abs(oval_level(ep, z)) < 1e-12
        assert abs(level_value(ep.r, z)) < 1e-10


def test_generator_boundary():
    f = neumann_generator(R2)
    z = f(np.exp(1j * np.linspace(0.1, 6.2, 31)))
    assert np.max(np.abs(level_value(R2, z))) < 1e-10
    assert f.order == 2


def test_stationary():
    assert stationary_levels(R2) == pytest.approx((-9, -1, 0))
    pts = stationary_points(R2)
    ref = [0, math.sqrt(3), -math.sqrt(3), 1j, -1j]
    for p, q in zip(pts, ref):
        assert abs(p - q) < 1e-8
    for p in pts:
        x, y = p.real, p.imag
        s = x * x + y * y
        grad = (4 * x * (s - 1 - 2), 4 * y * (s + 1 - 2))
        assert max(abs(g) for g in grad) < 1e-8


TABLE = [
    (3.0, "MobiusBand", 1, 1, False, False, False),
    (0.0, "Disk", 0, 1, False, True, False),
    (-0.5, "Annulus", 1, 2, False, True, True),
    (-1.0, "TwoDisks", 0, 2, True, True, False),
    (-1.5, "Cylinder", 1, 2, False, True, True),
    (-9.0, "Sphere", 0, 0, True, False, False),
    (-10.0, "KleinBottle", 1, 0, False, False, False),
]


@pytest.mark.parametrize("alpha,label,genus,comps,red,adm,multi", TABLE)
def test_classify_table(alpha, label, genus, comps, red, adm, multi):
    rep = classify(R2, alpha)
    assert (rep.label, rep.genus, rep.components, rep.reducible, rep.admits_algebraic_domain,
            rep.multi_sheeted) == (label, genus, comps, red, adm, multi)


def test_classify_jumps_at_stationary_levels():
    levels = regime_levels(R2)
    for lv in levels:
        assert classify(R2, lv - 1e-9).label != classify(R2, lv + 1e-9).label
    # bisection on the label change between two regimes lands on a stationary level
    for lo, hi in [(-5.0, -0.7), (-0.7, 0.4), (-12.0, -5.0)]:
        target = classify(R2, lo).label
        while hi - lo > 1e-10:
            m = 0.5 * (lo + hi)
            if classify(R2, m).label == target:
                lo = m
            else:
                hi = m
        assert min(abs(hi - lv) for lv in levels) < 1e-9


@settings(max_examples=50)
@given(st.floats(-12, 5))
def test_classify_piecewise_constant(alpha):
    lv = regime_levels(R2)
    if min(abs(alpha - x) for x in lv) < 1e-6:
        return
    assert classify(R2, alpha).label == classify(R2, alpha + 1e-7).label


def test_factorizations():
    for alpha in (-1.0, -9.0):
        f1, f2 = factorize_reducible(R2, alpha)
        assert np.max(np.abs((f1 * f2 - qalpha(R2, alpha)).coeffs)) < 1e-10
    assert factorize_reducible(R2, -0.3) is None


def test_factor_symmetry_types():
    # case (i): each factor is invariant under (z, w) -> (conj w, conj z); case (ii): they are swapped
    f1, f2 = factorize_reducible(R2, -1.0)
    for f in (f1, f2):
        assert np.allclose(f.swap().conj_coeffs().coeffs, f.coeffs)
    g1, g2 = factorize_reducible(R2, -9.0)
    assert np.allclose(g1.swap().conj_coeffs().coeffs, g2.coeffs)
    assert not np.allclose(g1.swap().conj_coeffs().coeffs, g1.coeffs)


def test_real_intersections():
    got = sorted(real_intersection_points(R2, -1.0), key=lambda z: z.imag)
    assert np.allclose(got, [-1j, 1j], atol=1e-8)
    got = sorted(real_intersection_points(R2, -9.0), key=lambda z: z.real)
    assert np.allclose(got, [-math.sqrt(3), math.sqrt(3)], atol=1e-8)


@pytest.mark.parametrize("alpha,count", [(3.0, 1), (0.0, 1), (-0.5, 2), (-1.0, 2), (-1.5, 2), (-9.0, 0)])
def test_levelcurve_components(alpha, count):
    s = levelcurve(R2, alpha, 300)
    assert s.component_count == count
    for comp in s.components:
        comp = np.asarray(comp)
        assert np.max(np.abs(level_value(R2, comp) - alpha)) < 1e-8 * (1 + abs(alpha))
        for z in comp[::29]:
            vals = qalpha_branches(R2, alpha, z).values() if abs(z * z - 1) > 1e-6 else (np.conj(z),)
            assert min(abs(v - np.conj(z)) for v in vals) < 1e-6


def test_levelcurve_isolated_and_empty():
    assert levelcurve(R2, 0.0, 100).isolated == [0j]
    assert len(levelcurve(R2, -9.0, 100).isolated) == 2
    with pytest.raises(EmptyLocus):
        levelcurve(R2, -10.0, 100)


def test_levelcurve_csv():
    text = levelcurve(R2, -0.5, 50).to_csv()
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["component", "x", "y"]
    assert {r[0] for r in rows[1:]} == {"0", "1"}


TWO_POINT_H = [lambda z: 1.0, lambda z: z, lambda z: z ** 2, lambda z: 1 / (z - 3)]


@pytest.mark.parametrize("h", TWO_POINT_H)
def test_twopoint(h):
    assert check_twopoint(R2, h).defect < 1e-8


def test_twopoint_area():
    chk = check_twopoint(R2, lambda z: 1.0)
    assert chk.lhs.real == pytest.approx(2 * math.pi * 2, rel=1e-9)
    assert abs(check_twopoint(R2, lambda z: z).rhs) == 0


SPHERICAL_H = [lambda z: 1.0, lambda z: 1 / (z - 0.1), lambda z: 1 / z ** 2, lambda z: 1 / (z - 0.3j) ** 2]


@pytest.mark.parametrize("h", SPHERICAL_H)
def test_spherical_identity(h):
    assert check_spherical(P21, h).defect < 1e-8


@pytest.mark.parametrize("h", [lambda z: 1.0, lambda z: z, lambda z: np.exp(z), lambda z: 1 / (z - 2)])
def test_euclidean_identity(h):
    assert check_euclidean(P21, h).defect < 1e-8


def test_weak_multisheet_constant():
    chk = check_weak_multisheet(P21, lambda z: 1.0)
    assert chk.defect < 1e-8
    _, c1 = multi_sheet_nodes(P21)
    assert chk.rhs.real == pytest.approx(2 * c1.real)


@pytest.mark.parametrize("h", [lambda t: 1.0, lambda t: t, lambda t: 1 / (t - 0.3), lambda t: 1 / (t - 0.3) ** 2 + 2])
def test_pulled_back_multisheet(h):
    chk = check_multisheet(joukowski(P21), "exterior", h)
    assert chk.defect < 1e-8


def test_check_quadrature_dispatch():
    assert check_quadrature("twopoint", lambda z: 1.0, r=R2).defect < 1e-8
    assert check_quadrature("spherical", lambda z: 1.0, params=P21).defect < 1e-8
    assert check_quadrature("multisheet", lambda t: 1.0, params=P21).defect < 1e-8
    with pytest.raises(ValidationError):
        check_quadrature("euclidean", lambda z: 1.0)
    with pytest.raises(ValidationError):
        check_quadrature("bogus", lambda z: 1.0, r=R2)
