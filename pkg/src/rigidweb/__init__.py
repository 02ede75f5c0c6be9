"""Exact subspace lattices, general position, and rigidity certificates for webs."""

from rigidweb.kernel import BACKEND
from rigidweb.scalar import GaussianRational, parse_scalar
from rigidweb.linalg import LinearMap, Matrix, Subspace, SubspaceSystem, random_system
from rigidweb.expr import Expr, Meet, Sum, Var, evaluate, parse, to_text
from rigidweb.genpos import system_in_general_position
from rigidweb.rigidity import (
    Certificate,
    build_certificate,
    cert_hyperplanes,
    cert_lines,
    find_splitting,
    n_bound,
    search_certificate,
    verify_certificate,
    verify_certificate_generic,
)

__version__ = "0.1.0"
