"""The doubly covered ellipse.

The Joukowski map of the exterior of the unit disk covers the inside of an
ellipse twice and the outside once. Its reflection pair gives an algebraic
relation Q(z, w) = 0 whose real trace is the ellipse. We print that relation,
the quadrature nodes of the spherical identities and check the identities
themselves.

Run:  python demos/ellipse_double_cover.py
"""

import numpy as np

from qdtk.neumann import (EllipseParams, check_multisheet, check_spherical, check_weak_multisheet,
                          ellipse_spherical_nodes, joukowski, multi_sheet_nodes)
from qdtk.schwarz import counting_function
from qdtk.sphere import conjugate_map, elimination_Q

p = EllipseParams(2.0, 1.0)
f = joukowski(p)
print(f"ellipse a={p.a}, b={p.b}, focal distance c={p.c:.6f}")

Q = elimination_Q(f, conjugate_map(f)).Q.normalized()
print("\nelimination polynomial, nonzero terms z^i w^j:")
for (i, j), v in np.ndenumerate(Q.coeffs):
    if abs(v) > 1e-12:
        print(f"  z^{i} w^{j}: {v.real:+.6f}")

print("\nsheet count of the exterior map:")
for z in (0, 1 + 0.5j, 3j):
    print(f"  rho({z}) = {counting_function(f, 'exterior', z)}")

z0, c0 = ellipse_spherical_nodes(p)
z1, c1 = multi_sheet_nodes(p)
print(f"\nnodes: z0={z0:.6f} c0={c0.real:.6f}   z1={z1:.6f} c1={c1.real:.6f}")

print("\nspherical identity on the exterior, defects:")
for name, h in [("1", lambda z: 1.0), ("1/(z-0.1)", lambda z: 1 / (z - 0.1)), ("1/z^2", lambda z: 1 / z ** 2)]:
    print(f"  h={name:10s} {check_spherical(p, h).defect:.2e}")

# on the doubly covered part only constants satisfy the node identity
print("\nweak identity with h=1:", f"{check_weak_multisheet(p, lambda z: 1.0).defect:.2e}")
print("pulled back to the parameter disk, h=zeta:", f"{check_multisheet(f, 'exterior', lambda t: t).defect:.2e}")
