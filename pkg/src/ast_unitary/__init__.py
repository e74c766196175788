"""Association schemes on triples from the unitary group U(3, q^2)."""

__version__ = "0.1.0"

from .closed_form import char2_vanishing_check, closed_form_tensor
from .field import FieldCtx, FieldElem, build_field, field_for_q
from .hermitian import enumerate_cone, hermitian_form
from .hypermatrix import adjacency, ternary_product, verify_structure_constants
from .scheme import IntersectionTensor, Scheme, build_scheme, oracle_tensor, scheme_for, verify_axioms
from .unitary import enumerate_group, witness_pair

__all__ = [
    "FieldCtx",
    "FieldElem",
    "IntersectionTensor",
    "Scheme",
    "adjacency",
    "build_field",
    "build_scheme",
    "char2_vanishing_check",
    "closed_form_tensor",
    "enumerate_cone",
    "enumerate_group",
    "field_for_q",
    "hermitian_form",
    "oracle_tensor",
    "scheme_for",
    "ternary_product",
    "verify_axioms",
    "verify_structure_constants",
    "witness_pair",
]
