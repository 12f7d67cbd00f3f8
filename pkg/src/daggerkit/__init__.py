"""daggerkit: exact arithmetic over complete discrete valuation rings.

Finite-truncation computations around dagger-style completions: valuations
and fraction-field arithmetic, Smith forms and lattices, truncated spectral
radii, overconvergent (twisted) monoid series with growth certificates, and
crossed products by affine actions.
"""

from .crossed import (AffineAction, BoundednessReport, CrossedElem, act,
                      crossed_certify, crossed_mul, shift_action,
                      uniform_boundedness_probe)
from .linalg import (Lattice, MatrixV, ModulePresentation, SNFResult,
                     cokernel_invariants, is_torsion_free, kernel_basis, snf)
from .monoid import (BicharacterCocycle, Cocycle, MonoidDescriptor,
                     MonoidElem, TableCocycle, TrivialCocycle, cocycle_check,
                     compose, length_ge1)
from .ring import (INFINITY, PrecisionExhausted, RingDescriptor, ScalarElem,
                   arith, div, val)
from .series import (CertificateEnvelope, DaggerSeries, GrowthCertificate,
                     add_scale, best_certificate, certify,
                     membership_filtration, mul, nc_torus, series_pow,
                     torus_monomial)
from .spectral import (MatrixAlgebraContext, ProbeReport, RadiusReport,
                       SeriesAlgebraContext, characteristic_polynomial,
                       gauge_exponent, lattice_from_elements,
                       lattice_product, lgb_closure, newton_polygon_rho,
                       pi_multiplicative, rho1_estimate, semi_dagger_probe,
                       star_scale)

__all__ = [
    "AffineAction", "BicharacterCocycle", "BoundednessReport",
    "CertificateEnvelope", "Cocycle", "CrossedElem", "DaggerSeries",
    "GrowthCertificate", "INFINITY", "Lattice", "MatrixAlgebraContext",
    "MatrixV", "ModulePresentation", "MonoidDescriptor", "MonoidElem",
    "PrecisionExhausted", "ProbeReport", "RadiusReport", "RingDescriptor",
    "SNFResult", "ScalarElem", "SeriesAlgebraContext", "TableCocycle",
    "TrivialCocycle", "act", "add_scale", "arith", "best_certificate",
    "certify", "characteristic_polynomial", "cocycle_check",
    "cokernel_invariants", "compose", "crossed_certify", "crossed_mul",
    "div", "gauge_exponent", "is_torsion_free", "kernel_basis",
    "lattice_from_elements", "lattice_product", "length_ge1", "lgb_closure",
    "membership_filtration", "mul", "nc_torus", "newton_polygon_rho",
    "pi_multiplicative", "rho1_estimate", "semi_dagger_probe", "series_pow",
    "shift_action", "snf", "star_scale", "torus_monomial",
    "uniform_boundedness_probe", "val",
]
