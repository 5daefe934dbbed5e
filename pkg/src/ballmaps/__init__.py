"""Positive maps and entanglement witnesses from balls of quantum states."""

from .ball import (SimplexBall, ball_contains, face_distance, in_simplex_psd, r_max,
                   tangency_point)
from .choi import (LAMBDA_CHOI, ChoiFamilyMap, choi_angle, classic_choi, eta, family_map,
                   lambda0, lambda_matrix, xi)
from .hermitian import (BlochVector, GellMannBasis, SpectralState, from_bloch, gellmann_basis,
                        hermitian, hs_inner, hs_norm, random_density, random_pure,
                        random_separable, to_bloch)
from .maps import (AffineMap, BallMap, apply, compose, extremal_affine, identity_affine, mu_max,
                   phi_mu, random_extremal_affine, random_orthogonal)
from .verify import (Certificate, Tolerances, ball_image_check, block_positivity, choi_matrix,
                     cp_check, positivity_scan)
from .witness import (Witness, coefficients, detect, from_map, maximally_entangled,
                      negativity_submatrix)

__version__ = "0.1.0"
