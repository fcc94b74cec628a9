import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qdtk.errors import OnBoundary, ValidationError
from qdtk.neumann import EllipseParams, joukowski
from qdtk.sphere import INF, RationalMap
from qdtk.transforms import (Density, TransformPoint, cauchy, cross_ratio_modulus, dbar, disk_exponential_closed_form,
                             disk_extended_closed_form, double_cauchy, ellipse_density, exp_transform_pullback,
                             extended_cauchy, extended_exponential)

D = Density.disk()


def test_cauchy_dbar_recovers_density():
    # d/dzbar of the Cauchy transform is the density: C = zbar inside the unit disk
    assert abs(dbar(lambda z: cauchy(D, z, 1e-11), 0.1 + 0.05j, 1e-3) - 1) < 1e-3
    assert abs(dbar(lambda z: cauchy(D, z, 1e-11), 2.0 + 0.5j, 1e-3)) < 1e-3


def test_cauchy_examples():
    assert cauchy(Density.zero(), 0.3) == 0
    assert cauchy(D, 2.0, 1e-11) == pytest.approx(0.5, abs=1e-10)
    assert cauchy(D, 0.3 + 0.2j, 1e-11) == pytest.approx(0.3 - 0.2j, abs=1e-10)


def test_cauchy_rejects_unbounded():
    with pytest.raises(ValidationError):
        cauchy(Density.whole_plane(), 0.5)


def test_extended_trivial_cases():
    assert extended_cauchy(Density.zero(), TransformPoint(1, 2, 3, 4)) == 0
    assert extended_cauchy(D, TransformPoint(2, 3, 2, 7)) == 0
    assert extended_exponential(D, TransformPoint(0.5, 3, 0.5, 7)) == 1


def test_extended_disk_outside():
    pts = (2, 3, 5, 7)
    got = extended_exponential(D, TransformPoint(*pts), 1e-11)
    E = lambda z, w: 1 - 1 / (z * np.conj(w))
    ref = E(2, 3) * E(5, 7) / (E(2, 7) * E(5, 3))
    assert abs(got - ref) < 1e-10
    assert abs(got - disk_extended_closed_form(*pts)) < 1e-10


def test_closed_form_examples():
    assert disk_exponential_closed_form(2, 3) == pytest.approx(5 / 6)
    assert disk_exponential_closed_form(0.5, 0.5) == 0
    assert disk_exponential_closed_form(0.5, 2) == pytest.approx(0.75)
    with pytest.raises(OnBoundary):
        disk_exponential_closed_form(1j, 2)


@pytest.mark.parametrize("z,w", [(2, 3), (0.5, 2), (2 + 1j, 0.3 - 0.4j), (0.5, 0.25), (-0.2 + 0.7j, 0.6 - 0.1j)])
def test_double_transform_matches_closed_form(z, w):
    got = cmath.exp(double_cauchy(D, z, w, 1e-11))
    assert abs(got - disk_exponential_closed_form(z, w)) < 1e-9


def test_cross_ratio_example():
    got = extended_exponential(Density.whole_plane(), TransformPoint(0, 1, 2, -1j), 1e-9)
    assert abs(got - cross_ratio_modulus(0, 1, 2, -1j)) < 1e-8


def test_unbounded_needs_finite_points():
    with pytest.raises(ValidationError):
        extended_cauchy(Density.whole_plane(), TransformPoint(0, 1))


pt = st.builds(complex, st.floats(-3, 3), st.floats(-3, 3))


def _separated(ps, d=0.2, ring=0.05):
    for i in range(len(ps)):
        if abs(abs(ps[i]) - 1) < ring:
            return False
        for j in range(i + 1, len(ps)):
            if abs(ps[i] - ps[j]) < d:
                return False
    return True


@settings(max_examples=15)
@given(st.lists(pt, min_size=4, max_size=4))
def test_conjugation_symmetry(ps):
    if not _separated(ps):
        return
    z, w, a, b = ps
    tol = 1e-9
    lhs = extended_cauchy(D, TransformPoint(z, w, a, b), tol)
    rhs = np.conj(extended_cauchy(D, TransformPoint(w, z, b, a), tol))
    assert abs(lhs - rhs) < 5 * tol


@settings(max_examples=15)
@given(st.lists(pt, min_size=4, max_size=4))
def test_reciprocal_symmetry(ps):
    if not _separated(ps):
        return
    z, w, a, b = ps
    tol = 1e-9
    e1 = extended_exponential(D, TransformPoint(z, w, a, b), tol)
    e2 = extended_exponential(D, TransformPoint(a, w, z, b), tol)
    assert abs(e1 * e2 - 1) < 5 * tol * (1 + abs(e1) + abs(e2))


@settings(max_examples=10)
@given(st.lists(pt, min_size=4, max_size=4))
def test_matches_extended_closed_form(ps):
    if not _separated(ps):
        return
    got = extended_exponential(D, TransformPoint(*ps), 1e-10)
    ref = disk_extended_closed_form(*ps)
    assert abs(got - ref) / (1 + abs(ref)) < 1e-8


@pytest.mark.parametrize("z", [0.3 + 0.1j, -0.5j, 1.6 + 0.4j])
def test_dbar_of_double_transform(z):
    # d/dzbar C(z, w) = rho(z) / (zbar - wbar)
    w = 2.5 - 1j
    got = dbar(lambda x: double_cauchy(D, x, w, 1e-12), z, 1e-4)
    ref = (abs(z) < 1) / np.conj(z - w)
    assert abs(got - ref) < 1e-3 * (1 + abs(ref))


def test_pullback_identity_disk():
    pts = TransformPoint(0.3 + 0.1j, 2, -1.5j, 0.5)
    got = exp_transform_pullback(RationalMap.identity(), "disk", pts, 1e-10)
    assert abs(got - disk_extended_closed_form(*pts.as_tuple())) < 1e-8
    assert exp_transform_pullback(RationalMap.identity(), "disk", TransformPoint(0.3, 2, 0.3, 3)) == 1


def test_pullback_joukowski_matches_density():
    p = EllipseParams(2, 1)
    pts = TransformPoint(0.3, 3 + 1j, -2.5, 0.5j)
    a = exp_transform_pullback(joukowski(p), "exterior", pts, 1e-9)
    b = extended_exponential(ellipse_density(p.a, p.b, 2, 1), pts, 1e-9)
    assert abs(a - b) < 1e-7 * (1 + abs(b))


def test_density_checks():
    rho = ellipse_density(2, 1, 2, 1)
    assert rho.check_disjoint()
    assert list(rho(np.array([0, 3, 1.9]))) == [2, 1, 2]
    with pytest.raises(ValidationError):
        Density(((Density.disk().pieces[0][0], -1),))
