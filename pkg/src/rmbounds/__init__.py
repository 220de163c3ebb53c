"""Local conductor exponent bounds for modular abelian varieties with maximal real multiplication."""

from .arith import digits_base_p, is_prime, lambda_p, real_cyclotomic_degree, valuation
from .bounds import (
    BoundTriple,
    b0_bound,
    b0_gl2_bound,
    bk_bound,
    bk_prime_bound,
    forced_subfield_exponent,
    render_table,
)
from .cyclo import (
    Compositum,
    Determination,
    ExponentProfile,
    RealCyclotomicField,
    RmConstraintReport,
    analyze_profile,
    classify_local_type,
    enumerate_forbidden,
    genus2_rm_analysis,
    max_exponent_given,
)
from .lmfdb import (
    LevelQueryResult,
    LmfdbConfig,
    NewformOrbitRecord,
    OrbitDimCache,
    OrbitDimClient,
    SharpnessWitness,
)

__version__ = "0.1.0"

__all__ = [
    "BoundTriple",
    "Compositum",
    "Determination",
    "ExponentProfile",
    "LevelQueryResult",
    "LmfdbConfig",
    "NewformOrbitRecord",
    "OrbitDimCache",
    "OrbitDimClient",
    "RealCyclotomicField",
    "RmConstraintReport",
    "SharpnessWitness",
    "analyze_profile",
    "b0_bound",
    "b0_gl2_bound",
    "bk_bound",
    "bk_prime_bound",
    "classify_local_type",
    "digits_base_p",
    "enumerate_forbidden",
    "forced_subfield_exponent",
    "genus2_rm_analysis",
    "is_prime",
    "lambda_p",
    "max_exponent_given",
    "real_cyclotomic_degree",
    "render_table",
    "valuation",
    "__version__",
]
