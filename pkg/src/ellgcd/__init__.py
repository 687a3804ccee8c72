"""Exact GCD divisors of sections on elliptic surfaces over Q(t).

The public surface is re-exported here; the command line lives in
:mod:`ellgcd.cli`.
"""
__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BadFiber,
    DegenerateInput,
    DependentInputs,
    EllGcdError,
    IdenticallyZeroSection,
    NotEffective,
    NotOnCurve,
    ResourceCap,
    SchemaError,
    SectionPole,
    SingularModel,
)
from .polynomial import RationalPolynomial, poly_gcd, poly_lcm, squarefree_decompose, subresultant_gcd  # noqa: E402
from .ratfunc import RationalFunction  # noqa: E402
from .divisor import (  # noqa: E402
    INFINITY,
    DivisorP1,
    Place,
    common_basis,
    divisor_degree,
    divisor_max,
    divisor_min,
    divisor_of,
    weil_height_q,
)
from .surface import (  # noqa: E402
    IDENTITY,
    FFPoint,
    SurfaceModel,
    add,
    canonical_height_ff,
    division_poly,
    j_invariant,
    neg,
    new_surface,
    scalar_mul,
    sub,
    x_of_multiple_by_division_polys,
)
from .gcd_engine import (  # noqa: E402
    SectionPair,
    bounding_divisor,
    gcd_degree_table,
    gcd_of_points,
    locus_height_stats,
    multiplicity_bound_scan,
    relation_locus,
    stability_scan,
    zero_section_pullback,
)
from .specialization import (  # noqa: E402
    canonical_height_q,
    fiber_height_trace,
    relation_search,
    simultaneous_relation_scan,
    specialize_curve,
    specialize_point,
    torsion_order,
)
from .ar_baseline import ArConfig, ar_bound_scan, ar_gcd, multiplicative_dependence_check  # noqa: E402

__all__ = [name for name in dir() if not name.startswith("_")]
