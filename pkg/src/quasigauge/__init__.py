"""Gauge theory on cochain-twisted quasialgebras over Z_2^n."""

from .core import (
    AlgebraElement,
    DimensionError,
    GaussianRational,
    GroupVector,
    format_element,
    format_scalar,
    parse_scalar,
    scalar,
)
from .cochain import (
    Associator,
    Cochain,
    clifford_cochain,
    coboundary,
    fourier_cochain,
    is_cocycle,
    octonion_cochain,
    quaternion_cochain,
    trivial_cochain,
)
from .quasialg import SingularGaugeElement, TwistedAlgebra, bullet, invert, star_expand, star_operator
from .forms import DifferentialForm, d, format_form, tau, wedge
from .gauge import Connection, GaugeTransform, curvature, curvature_twisted, gauge_transform, gauge_transform_twisted

__version__ = "0.1.0"

__all__ = [
    "AlgebraElement",
    "Associator",
    "Cochain",
    "Connection",
    "DifferentialForm",
    "DimensionError",
    "GaugeTransform",
    "GaussianRational",
    "GroupVector",
    "SingularGaugeElement",
    "TwistedAlgebra",
    "bullet",
    "clifford_cochain",
    "coboundary",
    "curvature",
    "curvature_twisted",
    "d",
    "format_element",
    "format_form",
    "format_scalar",
    "fourier_cochain",
    "gauge_transform",
    "gauge_transform_twisted",
    "invert",
    "is_cocycle",
    "octonion_cochain",
    "parse_scalar",
    "quaternion_cochain",
    "scalar",
    "star_expand",
    "star_operator",
    "tau",
    "trivial_cochain",
    "wedge",
]
