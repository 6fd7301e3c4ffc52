"""Canonical bases of generalized Temperley-Lieb algebras."""

from .coxeter import CoxeterGraph, CoxeterGroup, GraphError, parse_graph
from .hecke_kl import HeckeAlgebra, kernel_analysis
from .ic_solver import ICContext, ICTable, is_ic_element, solve_ic, tl_context, verify_ic
from .laurent import LaurentPoly, subring_membership
from .tl_algebra import TLAlgebra

__version__ = "0.1.0"
