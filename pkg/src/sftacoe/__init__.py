"""Shifts of finite type, their groupoids, Cuntz-Krieger algebras and orbit-equivalence invariants."""

from .sft import BiPoint, SftMatrix, System, edge_shift, parse_matrix, validate
from .zeta import zeta_rational, zeta_series

__all__ = ["BiPoint", "SftMatrix", "System", "edge_shift", "parse_matrix", "validate",
           "zeta_rational", "zeta_series"]
__version__ = "0.1.0"
