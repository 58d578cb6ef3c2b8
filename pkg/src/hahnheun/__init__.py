"""Exact construction and verification of the Heun operator of Hahn type."""

from .exactnum import format_rational, hyp3f2_terminating, parse_rational, pochhammer
from .gevp import RIIParams, build_L1, build_L2, build_U, pencil, rii_poly, verify_gevp
from .hahn import (HahnParams, Taus, build_bilinear_W, build_X, build_Y, hahn_poly,
                   hahn_recurrence, hahn_tridiag, verify_hahn_algebra, verify_two_diagonal)
from .heunhahn import (HeunParams, PochhammerBasis, build_heun_hahn, degree_raise_check,
                       pochhammer_tridiag, qes_truncate)
from .heunracah import (build_racah_triple, degeneration_check, differential_realization,
                        fit_heun_racah, fit_xw_relations, verify_racah_pairs)
from .polyops import DiffOp, Poly, RatFunc
from .shiftalg import GridMatrix, ShiftOp, anticommutator, commutator, to_grid_matrix

__version__ = "0.1.0"
