"""Polynomial Jost solutions and spectral analysis of matrix-valued
discrete Dirac systems with compactly supported perturbations."""

from .errors import (
    DegenerateRoot,
    DimensionMismatch,
    DiracJostError,
    DomainError,
    IllConditionedInterpolation,
    IndexOutOfDomain,
    MissingField,
    NewtonDivergence,
    NotHermitian,
    NullVectorNotFound,
    ParseError,
    SingularMatrix,
    TruncationTooSmall,
)
from .jost import (
    JostSeries,
    asymptotics_check,
    closed_form_T,
    compute_jost,
    eval_F,
    eval_G,
    eval_jost,
    jost_function,
    recurrence_residual,
    series_to_json,
)
from .oracle import (
    ComparisonReport,
    FiniteSection,
    build_finite_section,
    compare_spectra,
    oracle_eigs,
    perturbation_tail_norm,
)
from .profiles import (
    CoefficientProfile,
    ValidationReport,
    Violation,
    coefficient_at,
    dump_profile,
    free_profile,
    load_profile,
    profile_digest,
    validate,
)
from .spectrum import (
    BAND,
    BoundarySuspect,
    EigenvalueRecord,
    SearchResult,
    SpectralParameter,
    SpectralReport,
    det_polynomial,
    find_eigenvalues,
    lambda_of_t,
    multiplicity,
    simplicity_certificate,
    spectral_report,
    wronskian_identity_gap,
    z_of_t,
)

__version__ = "0.1.0"
