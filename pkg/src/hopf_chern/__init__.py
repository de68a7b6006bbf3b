"""Exact computation of equivariant Chern cocycles for polynomial diffeomorphisms
of R^n, the Hopf algebra H_n and its relative Hopf cyclic complex."""

from .exact import LocalizedPoly, Poly, Q, parse, SingularPointError, NotInvertibleError
from .jets import (JetDiffeo, make_poly_diffeo, identity, compose, jacobian, prolong,
                   gamma_form, gamma_coeff, generic_diffeo, random_diffeo)
from .forms import BiForm, wedge, d, pullback, fiber_integrate

__version__ = "0.1.0"
