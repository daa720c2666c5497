"""Semi-Riemannian submersions of pseudo-hyperbolic spaces: models, O'Neill
tensors, Clifford-module structure and a sampled verifier."""

__version__ = "0.1.0"

from .clifford import (
    AlgebraClass,
    CliffordAction,
    CliffordSignature,
    action_from_submersion,
    classify,
    decompose,
    existence_obstruction,
    find_intertwiner,
    irreducible_dimension,
    volume_action,
)
from .division import Algebra, HyperNumber, conjugate, hermitian_form, multiply
from .indefinite import (
    AmbientVector,
    ScalarProduct,
    SymmetricForm,
    form_kernel_dimension,
    gram_schmidt,
    project_onto,
    scalar_product,
)
from .spaces import (
    BaseCurvatureModel,
    BaseKind,
    ComplexPseudoHyperbolicSpace,
    PseudoHyperbolicSpace,
    cayley_structures,
)
from .submersions import (
    ComplexHopf,
    ComplexToQuaternionic,
    OctonionicHopf,
    QuaternionicHopf,
    SplitFrame,
    SubmersionModel,
    ThetaCircle,
    a_tensor,
    a_tensor_adjoint,
    base_structures,
    differential,
    holonomy_transport,
    make_model,
    project,
    split_frame,
    t_tensor,
)
from .verify import CheckSpec, VerificationReport, default_suite, run_check, run_suite

__all__ = [
    "__version__",
    "Algebra",
    "AlgebraClass",
    "AmbientVector",
    "BaseCurvatureModel",
    "BaseKind",
    "CheckSpec",
    "CliffordAction",
    "CliffordSignature",
    "ComplexHopf",
    "ComplexPseudoHyperbolicSpace",
    "ComplexToQuaternionic",
    "HyperNumber",
    "OctonionicHopf",
    "PseudoHyperbolicSpace",
    "QuaternionicHopf",
    "ScalarProduct",
    "SplitFrame",
    "SubmersionModel",
    "SymmetricForm",
    "ThetaCircle",
    "VerificationReport",
    "a_tensor",
    "a_tensor_adjoint",
    "action_from_submersion",
    "base_structures",
    "cayley_structures",
    "classify",
    "conjugate",
    "decompose",
    "default_suite",
    "differential",
    "existence_obstruction",
    "find_intertwiner",
    "form_kernel_dimension",
    "gram_schmidt",
    "hermitian_form",
    "holonomy_transport",
    "irreducible_dimension",
    "make_model",
    "multiply",
    "project",
    "project_onto",
    "run_check",
    "run_suite",
    "scalar_product",
    "split_frame",
    "t_tensor",
    "volume_action",
]
