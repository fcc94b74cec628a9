"""Exponential transforms, elimination functions and quadrature data for multi-sheeted algebraic domains."""

__version__ = "0.1.0"

from .errors import (QdtkError, ValidationError, NumericalError, NoConvergence, NonConvergence, OnBoundary,
                     OnBranchCut, UnsupportedRegime, EmptyLocus, FactorUndefined)
from .cpoly import BiPoly, ComplexPoly, RootSet, roots_companion, roots_iterative, sylvester_resultant
from .sphere import INF, RationalMap, SymmetricPair, meromorphic_resultant, elimination_Q, elimination_extended
from .quad2d import QuadConfig, QuadratureResult, integrate, integrate_pullback
from .transforms import (Density, TransformPoint, cauchy, double_cauchy, extended_cauchy, extended_exponential,
                         disk_exponential_closed_form, cross_ratio_modulus)
from .schwarz import (counting_function, fiber_product, ellipse_schwarz, qalpha_branches, neumann_rho,
                      neumann_power)
from .neumann import (EllipseParams, joukowski, classify, levelcurve, factorize_reducible, stationary_levels,
                      check_quadrature)
from .verify import TheoremCase, VerificationReport, theorem_rhs, verify_theorem, verify_disk_closed_form
