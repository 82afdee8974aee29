"""Continuous-variable teleportation of Gaussian states as channel simulation."""

from .errors import (
    BoundaryError,
    CVTeleError,
    DimensionError,
    DomainError,
    PhysicalityError,
    QuadratureError,
)
from .gaussian_core import (
    GaussianState,
    TwoModeStandardForm,
    coherent_state,
    is_physical,
    log_negativity,
    mean_energy,
    mean_energy_with_displacement,
    partial_transpose_cm,
    standard_form_to_cm,
    symplectic_eigenvalues,
    symplectic_form,
    tmss,
)
from .channels import (
    ChannelClass,
    GaussianChannelGeneral,
    PhaseInsensitiveChannel,
    apply,
    choi_log_negativity,
    classify,
    is_cp_general,
    min_noise_for_entanglement,
    pi_is_cp,
    pi_is_entanglement_breaking,
)
from .teleportation import (
    OptimalResource,
    bk_output,
    heisenberg_oracle,
    induced_pi_channel,
    optimal_resource,
    optimal_resource_energy,
    tmss_squeezing_for_channel,
)
from .fidelity_opt import (
    ATTENUATOR_BRANCH,
    INTERIOR_BRANCH,
    OptimizationResult,
    ResourceDivergence,
    avg_fidelity,
    avg_fidelity_numeric,
    classical_benchmark,
    grid_maximize,
    optimal_fidelity,
    optimal_tau,
    q_function,
    tmss_fidelity,
    tmss_optimal_gain,
    unit_gain_limit,
)

__version__ = "0.1.0"

__all__ = [
    "ATTENUATOR_BRANCH",
    "BoundaryError",
    "CVTeleError",
    "ChannelClass",
    "DimensionError",
    "DomainError",
    "GaussianChannelGeneral",
    "GaussianState",
    "INTERIOR_BRANCH",
    "OptimalResource",
    "OptimizationResult",
    "PhaseInsensitiveChannel",
    "PhysicalityError",
    "QuadratureError",
    "ResourceDivergence",
    "TwoModeStandardForm",
    "apply",
    "avg_fidelity",
    "avg_fidelity_numeric",
    "bk_output",
    "choi_log_negativity",
    "classical_benchmark",
    "classify",
    "coherent_state",
    "grid_maximize",
    "heisenberg_oracle",
    "induced_pi_channel",
    "is_cp_general",
    "is_physical",
    "log_negativity",
    "mean_energy",
    "mean_energy_with_displacement",
    "min_noise_for_entanglement",
    "optimal_fidelity",
    "optimal_resource",
    "optimal_resource_energy",
    "optimal_tau",
    "partial_transpose_cm",
    "pi_is_cp",
    "pi_is_entanglement_breaking",
    "q_function",
    "standard_form_to_cm",
    "symplectic_eigenvalues",
    "symplectic_form",
    "tmss",
    "tmss_fidelity",
    "tmss_optimal_gain",
    "tmss_squeezing_for_channel",
    "unit_gain_limit",
]
