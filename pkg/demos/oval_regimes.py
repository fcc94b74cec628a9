"""Level sets of Q(z, zbar) = |z|^4 - 2 Re z^2 - 2 r^2 |z|^2.

The real surface Q(z, w) = alpha changes type at the three stationary values
of Q(z, zbar). For each regime we print the classification and the traced
level curve, and write CSV files that can be plotted with any external tool.

Run:  python demos/oval_regimes.py [output_dir]
"""

import math
import sys
from pathlib import Path

from qdtk.errors import EmptyLocus
from qdtk.neumann import classify, factorize_reducible, levelcurve, stationary_levels, stationary_points

r = math.sqrt(2)
out = Path(sys.argv[1]) if len(sys.argv) > 1 else None

print("stationary values:", [round(v, 12) for v in stationary_levels(r)])
print("stationary points:", [complex(round(p.real, 12), round(p.imag, 12)) for p in stationary_points(r)])
print()
print(f"{'alpha':>6}  {'regime':12} genus comps reducible multi-sheeted traced")
for alpha in (3.0, 0.0, -0.5, -1.0, -1.5, -9.0, -10.0):
    rep = classify(r, alpha)
    try:
        sample = levelcurve(r, alpha, 400)
        traced = sample.component_count
        if out is not None:
            out.mkdir(parents=True, exist_ok=True)
            (out / f"level_{alpha:+.1f}.csv").write_text(sample.to_csv())
    except EmptyLocus:
        traced = "-"
    print(f"{alpha:6.1f}  {rep.label:12} {rep.genus:5d} {rep.components:5d} {str(rep.reducible):9} "
          f"{str(rep.multi_sheeted):13} {traced}")

# at the two reducible levels the polynomial splits into two quadratic factors
for alpha in (-1.0, -9.0):
    f1, f2 = factorize_reducible(r, alpha)
    print(f"\nalpha={alpha}: factors with coefficient matrices\n{f1.coeffs.real}\n{f2.coeffs.real}")
