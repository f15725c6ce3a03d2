"""Exact symbolic calculus for twisted Jacobi structures on coordinate charts."""

from .chart import Chart
from .coeff import ExpCoeff, Polynomial
from .errors import (
    DegreeError,
    JkitError,
    ParseError,
    ResourceError,
    SingularityError,
    StructuralError,
    UnsupportedInputError,
    UsageError,
)
from .exterior import E1Section, ExtForm, ExtMultivector, Form, Multivector, wedge
from .calculus import d_01, de_rham, schouten
from .jacobi import (
    HomogeneousTwistedPoisson,
    TlcsStructure,
    TwistedJacobiStructure,
    check_homogeneous_twisted_poisson,
    check_tlcs,
    check_twisted_jacobi,
    poissonize,
)
from .report import VerificationReport

__all__ = [
    "Chart", "Polynomial", "ExpCoeff",
    "JkitError", "StructuralError", "DegreeError", "SingularityError",
    "UnsupportedInputError", "UsageError", "ResourceError", "ParseError",
    "Multivector", "Form", "ExtMultivector", "ExtForm", "E1Section", "wedge",
    "schouten", "de_rham", "d_01",
    "TwistedJacobiStructure", "TlcsStructure", "HomogeneousTwistedPoisson",
    "check_twisted_jacobi", "check_tlcs", "check_homogeneous_twisted_poisson", "poissonize",
    "VerificationReport",
]
__version__ = "0.1.0"
