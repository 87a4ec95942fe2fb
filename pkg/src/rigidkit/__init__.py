"""rigidkit: exact and numerical tools for rigidity computations.

Subpackages cover Novikov-field arithmetic, quantum-homology style
structure-constant algebras, decorated filtered complexes and their
spectral invariants, Robbin-Salamon/Conley-Zehnder indices of symplectic
paths, Delzant polytope analysis, and a model partial quasi-state on
moment polytopes.
"""

__version__ = "0.1.0"

from .novikov import (  # noqa: F401
    F2,
    QMODEL,
    LambdaElement,
    NovikovScalar,
    PeriodGroup,
    group_sum,
    lambda_valuation,
    parse_scalar,
    valuation,
)
