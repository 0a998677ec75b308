"""Exact harmonic analysis in mixed commuting/anticommuting variables.

Superpolynomial algebra with sign-correct multiplication and left
derivatives, the orthosymplectic operator family, spherical harmonics and
their eigencomponent decomposition, supersphere integration through three
independent exact routes, and the module structure of the harmonic spaces
(irreducibility, window submodules, branching).
"""

from .exactmath import (Echelon, GammaValue, HalfInt, RatMatrix, contains,
                        gamma, gamma_ratio, gen_binomial, nullspace, rank,
                        recip_gamma, rref, subspace_intersect, subspace_sum)
from .superalgebra import (ParseError, SuperPolynomial, VarSpec, poly_parse,
                           poly_print, standard_varspec)
from .operators import (LinearOp, Metric, casimir_form, euler, euler_bos,
                        euler_ferm, gl_generator, inner_product, laplacian,
                        laplace_beltrami, laplace_beltrami_bos,
                        laplace_beltrami_ferm, matrix_of, mult_op,
                        osp_generator, osp_generators, r_squared,
                        r_squared_poly, theta_squared_poly)
from .harmonic import (FischerObstruction, GradedSpace, HkComponent,
                       bosonic_harmonics, certified_harmonic_dimension,
                       decompose_hk, dim_hk_formula, dim_pk, fermionic_harmonics,
                       fischer, fischer_expand, fkpq, harmonic_projection,
                       harmonics, monomial_basis_pk, projector)
from .sphereint import (MeanResult, ScaledScalar, berezin_sphere_oracle,
                        bosonic_sphere_moment, darboux_residual,
                        fischer_route_integral, pizzetti, sphere_bilinear,
                        sphere_mean)
from .reptheory import (ModuleRealization, SubmoduleReport, branch_levels,
                        big_algebra_closure, check_irreducible, dim_Lk,
                        invariant_closure, is_window,
                        maximality_and_indecomposability, quotient_module,
                        realize_hk, window_submodule)

__version__ = "0.1.0"
