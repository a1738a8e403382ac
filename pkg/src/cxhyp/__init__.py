"""Isometries of complex hyperbolic space in the ball and Siegel domain models."""

from .ball import (
    BallForm,
    GeneratorData,
    IsometryMatrix,
    build_isometry,
    causal_class,
    form_A,
    is_member,
    lift_fb,
    mobius_apply,
)
from .centralizer import (
    CentralizerEvidence,
    commutator_norm,
    commutes,
    elliptic_centralizer_test,
    heisenberg_centralizer_test,
    hyperbolic_centralizer_test,
    shared_fixed_points,
)
from .classify import (
    ClassificationReport,
    DynamicalType,
    Kind,
    classify,
    decompose_elliptic,
    decompose_hyperbolic,
    fixed_points,
    subclass_classify,
    subclass_spectrum,
)
from .conjugacy import decide_conjugacy
from .document import IsometryDocument, load, parse
from .errors import CxHypError
from .forms import INFINITY, HermitianForm
from .heisenberg import HeisenbergTranslation, conjugacy_decide, isotropic, k_decompose
from .linalg import eig, spectral_groups
from .siegel import SiegelForm, SiegelStabilizerElement, cayley_point, iwasawa, to_ball, to_siegel
from .tolerances import Tolerances, scaled, tol
from .transport import PartialIsometry, boundary_transport, witt_extend

__version__ = "0.1.0"
