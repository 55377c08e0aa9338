"""Dirac operators and their symmetry operators on Liouville surfaces.

The package constructs the Dirac operator on two-dimensional Riemannian
surfaces in Liouville form, builds first- and second-order symmetry
operators out of Killing vectors and valence-two Killing tensors, and
verifies every defining identity numerically through truncated
Taylor-jet arithmetic: the coefficient (determining) equations, the
Killing equations, the integrability condition for the scalar
coefficient, commutators with the Dirac operator, and the separable
solutions on surfaces of revolution.
"""

from .clifford import (
    CliffordElement,
    MatrixRepresentation,
    REPRESENTATIONS,
    cliff_anticommutator,
    cliff_commutator,
    cliff_decompose,
    cliff_mul,
    concrete_representation_check,
)
from .expr import ExprAst, eval_jet, eval_number, parse, to_string
from .geometry import (
    ExprProfile,
    FuncProfile,
    LiouvilleSurface,
    frame_at,
    killing_tensor_liouville,
    ricci_scalar,
    ricci_scalar_conformal_oracle,
)
from .jets import DEFAULT_ORDER, Jet2, JetError
from .killing import (
    IntegrabilityError,
    KillingResidualError,
    SpecialCaseParams,
    TrivialKillingTensorError,
    assemble_symmetry_data,
    integrability_condition_lhs,
    integrability_one_form,
    killing_tensor_residual,
    killing_vector_residual,
    solve_g,
    special_case_ricci_check,
    special_system_residual,
)
from .presets import PRESETS, get_preset, make_surface
from .separation import (
    SeparationScheme,
    a_solutions,
    assemble_and_verify,
    b_solutions,
    beta_catalog,
    dirac_matrix_form,
)
from .spinor_ops import (
    OperatorCoefficients,
    SpinorField,
    SymmetryData,
    build_coefficients,
    commutator_residual,
    compose_first_order,
    determining_equations_residuals,
    dirac_apply,
    symmetry_apply,
)

__version__ = "0.1.0"
