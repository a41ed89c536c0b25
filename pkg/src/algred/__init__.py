"""Exact algebraic reduction and quantization of polynomial Hamiltonian systems."""

from .scalars import HBAR, I, Scalar
from .poly import Poly
from .parsing import parse_poly, parse_scalar
from .groebner import GroebnerBasis, groebner, normal_form
from .symplectic import PhaseSpace, hamiltonian_vector_field, poisson_bracket

__all__ = ["HBAR", "I", "Scalar", "Poly", "parse_poly", "parse_scalar", "GroebnerBasis", "groebner",
           "normal_form", "PhaseSpace", "hamiltonian_vector_field", "poisson_bracket"]
