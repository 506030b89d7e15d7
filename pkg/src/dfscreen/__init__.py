"""Decorrelated forward selection for high-dimensional variable screening."""

from .baselines import (
    RankedScreen,
    default_top_k,
    ebic_select,
    fr_path,
    holp_rank,
    sis_rank,
    wrh_rank,
)
from .estimators import DecorrelatedForwardScreener, ForwardRegressionScreener
from .exceptions import (
    CsvError,
    DataError,
    DegeneracyError,
    DFScreenError,
    NumericalError,
    ParameterError,
    ReplicationError,
)
from .linalg import (
    DecorrelationOperator,
    ForwardState,
    SymEig,
    apply_decorrelator,
    brute_force_drss,
    build_decorrelator,
    drss_candidates,
    forward_extend,
    forward_init,
    sym_eig,
)
from .links import (
    LinkSpec,
    TransformedResponse,
    inverse_link,
    link_name,
    parse_link,
    project_response,
    transform_response,
)
from .screening import (
    ScreeningPath,
    SelectionResult,
    TransformedProblem,
    build_problem,
    df_path,
    identity_problem,
    screen,
    tdf_select,
    tdf_threshold,
)
from .simgen import (
    Metrics,
    ScenarioConfig,
    derive_seed,
    evaluate,
    gen_ar1,
    gen_blockcs,
    gen_factor_toy,
    gen_response,
    run_experiment,
    select_features,
)
from .tuning import CvReport, cv_select_c, default_lambda
from .validation import standardize_columns

__version__ = "0.1.0"

__all__ = [
    "CsvError",
    "CvReport",
    "DataError",
    "DecorrelatedForwardScreener",
    "DecorrelationOperator",
    "DegeneracyError",
    "DFScreenError",
    "ForwardRegressionScreener",
    "ForwardState",
    "LinkSpec",
    "Metrics",
    "NumericalError",
    "ParameterError",
    "RankedScreen",
    "ReplicationError",
    "ScenarioConfig",
    "ScreeningPath",
    "SelectionResult",
    "SymEig",
    "TransformedProblem",
    "TransformedResponse",
    "apply_decorrelator",
    "brute_force_drss",
    "build_decorrelator",
    "build_problem",
    "cv_select_c",
    "default_lambda",
    "default_top_k",
    "derive_seed",
    "df_path",
    "drss_candidates",
    "ebic_select",
    "evaluate",
    "forward_extend",
    "forward_init",
    "fr_path",
    "gen_ar1",
    "gen_blockcs",
    "gen_factor_toy",
    "gen_response",
    "holp_rank",
    "identity_problem",
    "inverse_link",
    "link_name",
    "parse_link",
    "project_response",
    "run_experiment",
    "screen",
    "select_features",
    "sis_rank",
    "standardize_columns",
    "sym_eig",
    "tdf_select",
    "tdf_threshold",
    "transform_response",
    "wrh_rank",
]
