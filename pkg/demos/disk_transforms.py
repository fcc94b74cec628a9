"""Exponential transforms of the unit disk.

The transform of the characteristic function of the disk has a closed form in
each of the four inside/outside regimes of (z, w). Here we compute it by 2D
quadrature and compare, then look at the four-point version and at the
density 1 on the whole sphere, where the transform is a squared cross-ratio.

Run:  python demos/disk_transforms.py
"""

import numpy as np

from qdtk import Density, TransformPoint
from qdtk.transforms import (cross_ratio_modulus, disk_exponential_closed_form, disk_extended_closed_form,
                             extended_exponential)

disk = Density.disk()

print("two-point transform E(z, w) of the unit disk")
for z, w in [(2.0, 3.0), (0.5, 2.0), (2 + 1j, 0.3 - 0.4j), (0.5, 0.25)]:
    num = extended_exponential(disk, TransformPoint(z, w), tol=1e-10)
    ref = disk_exponential_closed_form(z, w)
    where = "".join("i" if abs(p) < 1 else "o" for p in (z, w))
    print(f"  [{where}] z={z!s:>10} w={w!s:>12}  numeric={num:.10f}  closed={ref:.10f}")

# with a and b finite the transform is a ratio of two-point values
z, w, a, b = 0.5, 0.25, -0.3 + 0.1j, 0.6j
print("\nfour-point transform, all points inside")
print("  numeric ", extended_exponential(disk, TransformPoint(z, w, a, b), tol=1e-10))
print("  ratio   ", disk_extended_closed_form(z, w, a, b))

# density 1 on the sphere: the kernel decays fast enough to integrate over the plane
rng = np.random.default_rng(0)
q = tuple(complex(*v) for v in rng.uniform(-2, 2, size=(4, 2)))
print("\ndensity 1 on the sphere")
print("  numeric       ", extended_exponential(Density.whole_plane(), TransformPoint(*q), tol=1e-8).real)
print("  |cross-ratio|^2", cross_ratio_modulus(*q))
