"""Exact operator calculus for the symplectic Dirac operator on the plane.

An exact-arithmetic (rational) engine for the Weyl algebra, polynomial
symplectic spinors, projective tractor calculus on flat R^2, first BGG
operators, the double-D operator and the higher symmetry algebra of the
symplectic Dirac operator, together with a verification harness that
re-derives every identity the library claims.
"""

from .poly import Poly, YPoly, Q, y_const, y_monomial, y_var
from .weyl import (G1, G2, WeylElem, fock_apply, gamma_lower, gamma_raise,
                   omega_lower, omega_upper, symmetrized_gamma_commutator,
                   weyl_mul)
from .spinor import SpinorField, W_MINUS_3_4, W_MINUS_9_4
from .diffop import (DiffOp, compose, dirac, kernel_basis, principal_symbol,
                     obstruction_order_check, right_divide)

__version__ = "0.1.0"
