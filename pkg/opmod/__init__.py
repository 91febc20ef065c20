"""
opmod

モーメント汎関数から多変数直交多項式系（OPS）を構成し、
点質量（Uvarov）と 2 次の乗数（Christoffel）による変形を厳密に検証するライブラリ

使用例:
    from opmod import build_monic_ops, get_backend, UvarovSystem
    from opmod.families import ball_functional

    backend = get_backend("exact")
    ops = build_monic_ops(ball_functional(backend, 2, "1/2"), 4)
    system = UvarovSystem.create(ops, [(0, 0)], [1])
    print(system.modified_gram(2))
"""

from .backend import Backend, ExactBackend, FloatBackend, available_backends, get_backend
from .christoffel import (
    ConnectionCoeffs,
    QuadraticMultiplier,
    build_from_connection,
    christoffel_functional,
    connection,
    recover_multiplier,
    symmetry_equivalence,
    transport_three_term,
)
from .config import FunctionalSpecModel, RunConfig, create_run_config, load_spec, parse_spec
from .error_handlers import default_error_handler, error_handler, get_global_registry
from .exceptions import (
    ConfigurationError,
    DegreeCollapse,
    InadmissibleParameters,
    InconsistentSymmetry,
    InvalidModificationError,
    IrrationalMomentError,
    MassDegenerate,
    MissingMomentError,
    NoThreeTerm,
    NotQuasiDefinite,
    OPModError,
    SingularGram,
    SingularMomentMatrix,
    SpecFileError,
    UnknownExperimentError,
)
from .moments import MomentFunctional, table_functional
from .multiindex import enumerate_indices, shift_matrix
from .ops import OPSystem, build_monic_ops, three_term_residual
from .report import Report, Table
from .uvarov import UvarovSystem

__version__ = "0.1.0"

__all__ = [
    "Backend",
    "ExactBackend",
    "FloatBackend",
    "available_backends",
    "get_backend",
    "enumerate_indices",
    "shift_matrix",
    "MomentFunctional",
    "table_functional",
    "OPSystem",
    "build_monic_ops",
    "three_term_residual",
    "UvarovSystem",
    "QuadraticMultiplier",
    "ConnectionCoeffs",
    "christoffel_functional",
    "connection",
    "transport_three_term",
    "recover_multiplier",
    "build_from_connection",
    "symmetry_equivalence",
    "FunctionalSpecModel",
    "RunConfig",
    "create_run_config",
    "load_spec",
    "parse_spec",
    "Report",
    "Table",
    "error_handler",
    "default_error_handler",
    "get_global_registry",
    "OPModError",
    "SingularMomentMatrix",
    "SingularGram",
    "NotQuasiDefinite",
    "NoThreeTerm",
    "DegreeCollapse",
    "InconsistentSymmetry",
    "MassDegenerate",
    "InadmissibleParameters",
    "InvalidModificationError",
    "SpecFileError",
    "IrrationalMomentError",
    "MissingMomentError",
    "UnknownExperimentError",
    "ConfigurationError",
]
