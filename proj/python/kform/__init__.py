"""Python bindings for the kform C++ library."""

from ._kform import (  # noqa: F401
    DomainError,
    KformError,
    ParseError,
    PreconditionError,
    ScenarioError,
    SpaceForm,
    det,
    generalized_eigenvalues,
    hermitian_eigen,
    jacobian,
    levi_form,
    metric,
    obstruction_probe,
    proportionality_test,
    pullback,
    ricci,
    run_scenario,
    run_suite,
    series_rank,
    signature,
    wedge_power_coeffs,
)
