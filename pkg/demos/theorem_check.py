"""Area integral versus algebraic right-hand side.

For a density given by a sheet-counting function, the four-point exponential
transform equals a ratio of elimination-polynomial values times powers of
Schwarz-function differences. This script compares the two sides for the
disk, the doubly covered ellipse and two levels of the oval family.

Run:  python demos/theorem_check.py
"""

import math

from qdtk.neumann import EllipseParams
from qdtk.verify import TheoremCase, verify_many

r = math.sqrt(2)
ell = EllipseParams(2.0, 1.0)
cases = [
    TheoremCase.disk(2, 3, 5, 7, label="disk, all outside"),
    TheoremCase.disk(0.5, 0.25, -0.3 + 0.1j, 0.6j, label="disk, all inside"),
    TheoremCase.joukowski(ell, 0.3, -0.5j, 3, 1 + 2j, label="ellipse, (2,2,1,1)"),
    TheoremCase.joukowski(ell, 0.3 + 0.2j, 3j, -2.5, 0.5, label="ellipse, mixed"),
    TheoremCase.neumann(r, -0.5, 0.2, 1.2j, 0.3j, 1.5, label="annulus level"),
    TheoremCase.neumann(r, -1.5, 1.7, 2 + 2j, -1.6 + 0.1j, 0.5j, label="cylinder level"),
]

print(f"{'case':22} {'rho':14} {'lhs':>28} {'rhs':>28} {'defect':>9}")
for rep in verify_many(cases, workers=1):
    if rep.errors:
        print(f"{rep.label:22} error: {rep.errors[0]}")
        continue
    print(f"{rep.label:22} {str(rep.rho):14} {rep.lhs:28.12f} {rep.rhs:28.12f} {rep.max_defect:9.1e}")
