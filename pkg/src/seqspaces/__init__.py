"""Generalized weighted mean difference sequence spaces on finite prefixes."""

__version__ = "0.1.0"

from .core import (
    LowerTable,
    Mode,
    ModeError,
    SeqPrefix,
    Tail,
    Triangle,
    TriangleError,
    apply,
    difference,
    identity,
    invert_oracle,
    parse_rational,
    product,
)
from .genmeans import (
    Kind,
    ParamError,
    ParamTriple,
    build_triangle,
    d_coeffs,
    forward,
    inverse_transform,
    preset,
    space_norm,
)
from .basis import Form, basis_vector, expand, reconstruct
from .verdict import Conclusion, ConditionReport, State, Verdict
from .duals import dual_derived, dual_membership, pairing_identity_check, st_battery
from .matclass import application_closed_forms, az_representation, classify, transform_tables

__all__ = [
    "LowerTable",
    "Mode",
    "ModeError",
    "SeqPrefix",
    "Tail",
    "Triangle",
    "TriangleError",
    "apply",
    "difference",
    "identity",
    "invert_oracle",
    "parse_rational",
    "product",
    "Kind",
    "ParamError",
    "ParamTriple",
    "build_triangle",
    "d_coeffs",
    "forward",
    "inverse_transform",
    "preset",
    "space_norm",
    "Form",
    "basis_vector",
    "expand",
    "reconstruct",
    "Conclusion",
    "ConditionReport",
    "State",
    "Verdict",
    "dual_derived",
    "dual_membership",
    "pairing_identity_check",
    "st_battery",
    "application_closed_forms",
    "az_representation",
    "classify",
    "transform_tables",
]
