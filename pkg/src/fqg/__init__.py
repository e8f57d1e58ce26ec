"""Workbench for finite-dimensional Hopf C*-algebras (finite quantum groups).

Block-matrix algebra core, Hopf structure with axiom verification, dual
quantum groups with Fourier transform and convolution, automorphism
classification, multiplicative unitaries, and the bi-inner automorphism
machinery with its two cross-validating characterisations.
"""

__version__ = "0.1.0"

from .blockalg import (AlgebraElement, BlockAlgebra, DEFAULT_TOL, ToleranceConfig,
                       invert, is_positive, polar_symmetry, spectrum,
                       tensor_algebra, tensor_element)
from .groups import Group, by_name, cyclic, dihedral, symmetric
from .hopf import (AxiomReport, CentralProjection, HopfAlgebra, cocentre_basis,
                   compute_haar, counit_support, function_algebra, group_algebra,
                   ksymmetric_basis, verify_axioms)
from .duality import (DualHopfAlgebra, Functional, build_dual, jordan_decompose,
                      pullback)
from .morphisms import (AlgebraMap, classify_map, dual_sandwich,
                        induced_dual_action, inner_implementer,
                        per_block_jordan_decomposition, proposition_pipeline)
from .multunitary import (GnsSpace, MultiplicativeUnitary, build_gns,
                          build_multiplicative_unitary, commutation_test,
                          fixed_and_cofixed, pair_from_commutant,
                          path_in_commutant)
from .biinner import (BiInnerGroupModel, brute_force_biinner_consistency,
                      build_group_model, classify_biinner,
                      in_identity_component, sample_identity_component)
from .kacpaljutkin import build_kac_paljutkin
from .io import load_bundled_kac_paljutkin, load_hopf_file

__all__ = [n for n in dir() if not n.startswith("_")]
